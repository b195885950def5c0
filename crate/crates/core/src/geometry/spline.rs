use serde::Serialize;

use super::{GeometryError, PlanePoint};

/// Tridiagonal system `sub[i] * M[i-1] + diag[i] * M[i] + sup[i] * M[i+1] =
/// rhs[i]` for the interior second derivatives of a natural spline. Row `i`
/// belongs to knot `i + 1`; `sub[0]` and `sup[last]` are unused and zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    /// Assemble the `n - 2` equations for knots `t` and values `y`.
    pub fn natural(t: &[f64], y: &[f64]) -> Self {
        let n = t.len();
        let m = n.saturating_sub(2);
        let (mut sub, mut diag, mut sup, mut rhs) =
            (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for r in 0..m {
            let i = r + 1;
            let h0 = t[i] - t[i - 1];
            let h1 = t[i + 1] - t[i];
            if r > 0 {
                sub[r] = h0;
            }
            diag[r] = 2.0 * (h0 + h1);
            if r + 1 < m {
                sup[r] = h1;
            }
            rhs[r] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        }
        Self {
            sub,
            diag,
            sup,
            rhs,
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Dense row-major copy of the matrix.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let m = self.len();
        let mut a = vec![vec![0.0; m]; m];
        for r in 0..m {
            a[r][r] = self.diag[r];
            if r > 0 {
                a[r][r - 1] = self.sub[r];
            }
            if r + 1 < m {
                a[r][r + 1] = self.sup[r];
            }
        }
        a
    }

    /// Thomas algorithm. The natural-spline matrix is strictly diagonally
    /// dominant, so no pivoting is needed.
    pub fn solve(&self) -> Vec<f64> {
        let m = self.len();
        if m == 0 {
            return Vec::new();
        }
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = self.sup[0] / self.diag[0];
        d[0] = self.rhs[0] / self.diag[0];
        for r in 1..m {
            let denom = self.diag[r] - self.sub[r] * c[r - 1];
            c[r] = self.sup[r] / denom;
            d[r] = (self.rhs[r] - self.sub[r] * d[r - 1]) / denom;
        }
        let mut x = vec![0.0; m];
        x[m - 1] = d[m - 1];
        for r in (0..m - 1).rev() {
            x[r] = d[r] - c[r] * x[r + 1];
        }
        x
    }
}

/// Parametric natural cubic spline through a sequence of planar points,
/// parametrised by cumulative chord length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubicSpline {
    points: Vec<(f64, f64)>,
    knots: Vec<f64>,
    /// Second derivatives of x(t) and y(t) at every knot.
    mx: Vec<f64>,
    my: Vec<f64>,
}

pub fn fit_natural_spline<P: PlanePoint>(points: &[P]) -> Result<CubicSpline, GeometryError> {
    if points.len() < 2 {
        return Err(GeometryError::TooFewPoints(points.len()));
    }
    let points: Vec<(f64, f64)> = points.iter().map(|p| p.xy()).collect();
    let mut knots = Vec::with_capacity(points.len());
    knots.push(0.0);
    for (i, w) in points.windows(2).enumerate() {
        let d = (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1);
        if d == 0.0 {
            return Err(GeometryError::DuplicateConsecutivePoints(i));
        }
        knots.push(knots[i] + d);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let with_ends = |inner: Vec<f64>| {
        let mut m = Vec::with_capacity(inner.len() + 2);
        m.push(0.0);
        m.extend(inner);
        m.push(0.0);
        m
    };
    let mx = with_ends(TridiagonalSystem::natural(&knots, &xs).solve());
    let my = with_ends(TridiagonalSystem::natural(&knots, &ys).solve());
    Ok(CubicSpline {
        points,
        knots,
        mx,
        my,
    })
}

impl CubicSpline {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn second_derivatives(&self) -> (&[f64], &[f64]) {
        (&self.mx, &self.my)
    }

    pub fn segment_count(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    fn segment_of(&self, t: f64) -> usize {
        let i = self.knots.partition_point(|&k| k <= t);
        i.saturating_sub(1).min(self.segment_count() - 1)
    }

    /// Value, first and second derivative of segment `seg` at `t`. `t` may
    /// lie outside the segment, which gives the polynomial's extension.
    pub fn segment_derivatives(&self, seg: usize, t: f64) -> [(f64, f64); 3] {
        let (t0, t1) = (self.knots[seg], self.knots[seg + 1]);
        let h = t1 - t0;
        let (a, b) = (t1 - t, t - t0);
        let eval = |y0: f64, y1: f64, m0: f64, m1: f64| {
            let v = m0 * a * a * a / (6.0 * h)
                + m1 * b * b * b / (6.0 * h)
                + (y0 / h - m0 * h / 6.0) * a
                + (y1 / h - m1 * h / 6.0) * b;
            let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0)
                + (y1 / h - m1 * h / 6.0);
            let d2 = m0 * a / h + m1 * b / h;
            (v, d1, d2)
        };
        let (p0, p1) = (self.points[seg], self.points[seg + 1]);
        let x = eval(p0.0, p1.0, self.mx[seg], self.mx[seg + 1]);
        let y = eval(p0.1, p1.1, self.my[seg], self.my[seg + 1]);
        [(x.0, y.0), (x.1, y.1), (x.2, y.2)]
    }

    fn check(&self, t: f64) -> Result<(), GeometryError> {
        let (min, max) = self.parameter_range();
        if (min..=max).contains(&t) {
            Ok(())
        } else {
            Err(GeometryError::ParameterOutOfRange { t, min, max })
        }
    }

    /// Curve position at parameter `t`; exact at the knots.
    pub fn eval(&self, t: f64) -> Result<(f64, f64), GeometryError> {
        self.check(t)?;
        if let Ok(i) = self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            return Ok(self.points[i]);
        }
        Ok(self.segment_derivatives(self.segment_of(t), t)[0])
    }

    pub fn derivative(&self, t: f64) -> Result<(f64, f64), GeometryError> {
        self.check(t)?;
        Ok(self.segment_derivatives(self.segment_of(t), t)[1])
    }

    pub fn second_derivative(&self, t: f64) -> Result<(f64, f64), GeometryError> {
        self.check(t)?;
        Ok(self.segment_derivatives(self.segment_of(t), t)[2])
    }

    /// Points at parameter spacing `step` (plus the last knot).
    pub fn sample(&self, step: f64) -> Vec<(f64, f64)> {
        let (min, max) = self.parameter_range();
        let n = ((max - min) / step).floor() as usize;
        let mut out: Vec<(f64, f64)> = (0..=n)
            .map(|k| self.eval(min + k as f64 * step).expect("inside range"))
            .collect();
        if min + n as f64 * step < max {
            out.push(self.points[self.points.len() - 1]);
        }
        out
    }

    /// Length of the curve from dense sampling.
    pub fn length(&self, step: f64) -> f64 {
        super::path_length(&self.sample(step))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_give_a_line() {
        let s = fit_natural_spline(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        for p in s.sample(0.01) {
            assert!((p.0 - p.1).abs() < 1e-9);
        }
    }

    #[test]
    fn two_points_midpoint() {
        let s = fit_natural_spline(&[(0.0, 0.0), (2.0, 0.0)]).unwrap();
        let p = s.eval(1.0).unwrap();
        assert!((p.0 - 1.0).abs() < 1e-12 && p.1.abs() < 1e-12);
        assert_eq!(s.eval(0.0).unwrap(), (0.0, 0.0));
        assert_eq!(s.eval(2.0).unwrap(), (2.0, 0.0));
        assert!(matches!(
            s.eval(2.5),
            Err(GeometryError::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn errors() {
        assert_eq!(
            fit_natural_spline(&[(1.0, 1.0)]),
            Err(GeometryError::TooFewPoints(1))
        );
        assert_eq!(
            fit_natural_spline(&[(0.0, 0.0), (1.0, 1.0), (1.0, 1.0)]),
            Err(GeometryError::DuplicateConsecutivePoints(1))
        );
    }

    #[test]
    fn system_shape() {
        let t = [0.0, 1.0, 3.0, 4.0];
        let sys = TridiagonalSystem::natural(&t, &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(sys.len(), 2);
        assert_eq!(sys.to_dense(), vec![vec![6.0, 2.0], vec![2.0, 6.0]]);
    }
}
