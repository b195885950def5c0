//! Alpha-composited colour overlays on top of a gray base image.

use image::DynamicImage;

use super::io::encode_png;
use super::{BinaryMask, GrayImage, Pixel, RasterError};

/// 8-bit RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn from_gray(base: &GrayImage) -> Self {
        Self {
            width: base.width(),
            height: base.height(),
            data: base.data().iter().map(|&v| [v, v, v]).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.data[y * self.width + x]
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }

    pub fn to_png_bytes(&self) -> Vec<u8> {
        let raw: Vec<u8> = self.data.iter().flatten().copied().collect();
        let buf = image::RgbImage::from_raw(self.width as u32, self.height as u32, raw)
            .expect("buffer length matches dimensions");
        encode_png(DynamicImage::ImageRgb8(buf))
    }

    pub fn save_png(&self, path: impl AsRef<std::path::Path>) -> Result<(), RasterError> {
        std::fs::write(path, self.to_png_bytes())?;
        Ok(())
    }

    fn blend(&mut self, p: Pixel, color: [u8; 3], alpha: f64) {
        let px = &mut self.data[p.y * self.width + p.x];
        for (c, &layer) in px.iter_mut().zip(&color) {
            let v = alpha * f64::from(layer) + (1.0 - alpha) * f64::from(*c);
            *c = (v + 0.5).floor().clamp(0.0, 255.0) as u8;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LayerPayload {
    Mask(BinaryMask),
    /// Ordered pixel trace; repeated pixels are painted once.
    Path(Vec<Pixel>),
    Points(Vec<Pixel>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlayLayer {
    pub payload: LayerPayload,
    pub color: [u8; 3],
    /// Clamped into `[0, 1]` when composited.
    pub opacity: f64,
}

impl OverlayLayer {
    pub fn mask(mask: BinaryMask, color: [u8; 3], opacity: f64) -> Self {
        Self {
            payload: LayerPayload::Mask(mask),
            color,
            opacity,
        }
    }

    pub fn path(pixels: Vec<Pixel>, color: [u8; 3], opacity: f64) -> Self {
        Self {
            payload: LayerPayload::Path(pixels),
            color,
            opacity,
        }
    }

    pub fn points(pixels: Vec<Pixel>, color: [u8; 3], opacity: f64) -> Self {
        Self {
            payload: LayerPayload::Points(pixels),
            color,
            opacity,
        }
    }
}

/// Render `base` as gray RGB and composite `layers` in order with
/// `out = round(a * layer + (1 - a) * below)` per channel.
pub fn render_overlay(base: &GrayImage, layers: &[OverlayLayer]) -> Result<RgbImage, RasterError> {
    let (w, h) = base.dimensions();
    let out_of_bounds = |x, y| RasterError::OutOfBounds {
        x,
        y,
        width: w,
        height: h,
    };
    // validate everything before painting anything
    for layer in layers {
        match &layer.payload {
            LayerPayload::Mask(m) => {
                if m.dimensions() != (w, h) {
                    return Err(out_of_bounds(m.width() - 1, m.height() - 1));
                }
            }
            LayerPayload::Path(ps) | LayerPayload::Points(ps) => {
                if let Some(p) = ps.iter().find(|p| !base.contains(**p)) {
                    return Err(out_of_bounds(p.x, p.y));
                }
            }
        }
    }

    let mut out = RgbImage::from_gray(base);
    for layer in layers {
        let alpha = layer.opacity.clamp(0.0, 1.0);
        match &layer.payload {
            LayerPayload::Mask(m) => {
                for p in m.pixels() {
                    out.blend(p, layer.color, alpha);
                }
            }
            LayerPayload::Path(ps) | LayerPayload::Points(ps) => {
                let mut painted = BinaryMask::empty(w, h).into_raw();
                for p in ps {
                    let i = p.y * w + p.x;
                    if !painted[i] {
                        painted[i] = true;
                        out.blend(*p, layer.color, alpha);
                    }
                }
            }
        }
    }
    Ok(out)
}
