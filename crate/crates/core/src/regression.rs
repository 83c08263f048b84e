//! Ordinary least squares on a straight line, used for every slope the
//! analyses report.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; 0 when the fit is exact or `n == 2`.
    pub slope_stderr: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Fits `y = intercept + slope * x`. Needs at least two distinct `x`.
pub fn fit_line<I>(points: I) -> Result<LinearFit>
where
    I: IntoIterator<Item = (f64, f64)> + Clone,
{
    let mut n = 0usize;
    let (mut sx, mut sy) = (0.0, 0.0);
    for (x, y) in points.clone() {
        n += 1;
        sx += x;
        sy += y;
    }
    if n < 2 {
        return Err(Error::insufficient("regression points", 2, n));
    }
    let nf = n as f64;
    let (mx, my) = (sx / nf, sy / nf);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in points.clone() {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= 0.0 {
        return Err(Error::Degenerate("all regression abscissae are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ssr = 0.0;
    for (x, y) in points {
        let r = y - (intercept + slope * x);
        ssr += r * r;
    }
    let slope_stderr = if n > 2 {
        libm::sqrt(ssr / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
        r_squared,
        n,
    })
}
