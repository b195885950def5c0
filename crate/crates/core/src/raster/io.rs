//! PGM (P5) and PNG reading and writing.

use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use super::{BinaryMask, FloatImage, GrayImage, RasterError};

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

/// Anything that can be written as an 8-bit gray raster.
pub trait ToGray {
    fn to_gray_image(&self) -> GrayImage;
}

impl ToGray for GrayImage {
    fn to_gray_image(&self) -> GrayImage {
        self.clone()
    }
}

/// Two-level encoding, foreground 255.
impl ToGray for BinaryMask {
    fn to_gray_image(&self) -> GrayImage {
        self.to_gray()
    }
}

/// Min-max rescaled; constant images become all-zero.
impl ToGray for FloatImage {
    fn to_gray_image(&self) -> GrayImage {
        self.to_gray_rescaled()
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<GrayImage, RasterError> {
    let bytes = std::fs::read(path.as_ref())?;
    load_image_bytes(&bytes)
}

/// Decode an in-memory PGM or PNG. RGB PNGs are converted with
/// integer-rounded Rec. 601 luminance.
pub fn load_image_bytes(bytes: &[u8]) -> Result<GrayImage, RasterError> {
    if bytes.starts_with(b"P5") {
        return parse_pgm(bytes);
    }
    if bytes.len() >= 2 && bytes[0] == b'P' && (b'1'..=b'7').contains(&bytes[1]) {
        return Err(RasterError::UnsupportedFormat(format!(
            "netpbm variant P{} (only binary P5 graymaps are read)",
            bytes[1] as char
        )));
    }
    if bytes.starts_with(PNG_SIGNATURE) {
        return decode_png(bytes);
    }
    let known = [
        (&b"\xff\xd8\xff"[..], "JPEG"),
        (b"GIF8", "GIF"),
        (b"BM", "BMP"),
        (b"II*\0", "TIFF"),
        (b"MM\0*", "TIFF"),
        (b"DICM", "DICOM"),
    ];
    for (magic, name) in known {
        if bytes.starts_with(magic) {
            return Err(RasterError::UnsupportedFormat(name.into()));
        }
    }
    if bytes.len() > 132 && &bytes[128..132] == b"DICM" {
        return Err(RasterError::UnsupportedFormat("DICOM".into()));
    }
    Err(RasterError::CorruptFile(
        "not a PGM or PNG header".to_string(),
    ))
}

fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, RasterError> {
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(RasterError::CorruptFile("truncated PGM header".into()));
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| RasterError::CorruptFile("PGM header field overflow".into()))?;
    }
    // exactly one whitespace byte separates the header from the raster
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(RasterError::CorruptFile("malformed PGM header".into()));
    }
    pos += 1;
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(RasterError::ZeroDimension { width, height });
    }
    if maxval != 255 {
        return Err(RasterError::UnsupportedFormat(format!(
            "PGM maxval {maxval} (only 255 is supported)"
        )));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| RasterError::CorruptFile("PGM dimensions overflow".into()))?;
    let raster = bytes
        .get(pos..pos + n)
        .ok_or_else(|| RasterError::CorruptFile(format!("PGM raster shorter than {n} bytes")))?;
    GrayImage::new(width, height, raster.to_vec())
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage, RasterError> {
    let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| RasterError::CorruptFile(e.to_string()))?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if w == 0 || h == 0 {
        return Err(RasterError::ZeroDimension {
            width: w,
            height: h,
        });
    }
    match img {
        DynamicImage::ImageLuma8(buf) => GrayImage::new(w, h, buf.into_raw()),
        DynamicImage::ImageRgb8(buf) => {
            let data = buf
                .into_raw()
                .chunks_exact(3)
                .map(|c| luminance(c[0], c[1], c[2]))
                .collect();
            GrayImage::new(w, h, data)
        }
        other => Err(RasterError::UnsupportedFormat(format!(
            "PNG color type {:?}",
            other.color()
        ))),
    }
}

/// Rec. 601 luma, rounded half up: `(299 R + 587 G + 114 B + 500) / 1000`.
pub(crate) fn luminance(r: u8, g: u8, b: u8) -> u8 {
    ((299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b) + 500) / 1000) as u8
}

/// Write as PNG when the extension is `.png`, otherwise as binary PGM.
pub fn save_image(image: &impl ToGray, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let path = path.as_ref();
    let gray = image.to_gray_image();
    let is_png = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    let bytes = if is_png {
        to_png_bytes(&gray)
    } else {
        to_pgm_bytes(&gray)
    };
    std::fs::write(path, bytes)?;
    Ok(())
}

pub(crate) fn to_pgm_bytes(gray: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", gray.width(), gray.height()).into_bytes();
    out.extend_from_slice(gray.data());
    out
}

pub fn to_png_bytes(gray: &GrayImage) -> Vec<u8> {
    let buf = image::GrayImage::from_raw(
        gray.width() as u32,
        gray.height() as u32,
        gray.data().to_vec(),
    )
    .expect("buffer length matches dimensions");
    encode_png(DynamicImage::ImageLuma8(buf))
}

pub(crate) fn encode_png(img: DynamicImage) -> Vec<u8> {
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)
        .expect("PNG encoding into memory cannot fail");
    out.into_inner()
}
