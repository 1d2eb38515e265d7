//! Least-squares line fits, used to measure growth exponents of entropy
//! scans on log-log axes.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("x and y lengths differ: {x_len} vs {y_len}")]
    LengthMismatch { x_len: usize, y_len: usize },
    #[error("need at least two points, got {n}")]
    TooFewPoints { n: usize },
    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },
    #[error("log-log fit requires positive samples; index {index} has ({x}, {y})")]
    NonPositive { index: usize, x: f64, y: f64 },
    #[error("all x values coincide; slope is undefined")]
    DegenerateX,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LineFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Ordinary least squares through centered sums (single pass after the
/// means, no normal-equation cancellation).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit, FitError> {
    if xs.len() != ys.len() {
        return Err(FitError::LengthMismatch {
            x_len: xs.len(),
            y_len: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(FitError::TooFewPoints { n: xs.len() });
    }
    for (index, (&x, &y)) in xs.iter().zip(ys.iter()).enumerate() {
        if !(x.is_finite() && y.is_finite()) {
            return Err(FitError::NonFinite { index });
        }
    }
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let dx = x - x_mean;
        sxx += dx * dx;
        sxy += dx * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(FitError::DegenerateX);
    }
    let slope = sxy / sxx;
    Ok(LineFit {
        slope,
        intercept: y_mean - slope * x_mean,
    })
}

/// Fits `y = e^intercept · x^slope` by linear regression of `log y` on
/// `log x`; the slope is the measured power-law exponent.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit, FitError> {
    if xs.len() != ys.len() {
        return Err(FitError::LengthMismatch {
            x_len: xs.len(),
            y_len: ys.len(),
        });
    }
    let mut log_xs = Vec::with_capacity(xs.len());
    let mut log_ys = Vec::with_capacity(ys.len());
    for (index, (&x, &y)) in xs.iter().zip(ys.iter()).enumerate() {
        if !(x > 0.0 && y > 0.0) {
            return Err(FitError::NonPositive { index, x, y });
        }
        log_xs.push(x.ln());
        log_ys.push(y.ln());
    }
    linear_fit(&log_xs, &log_ys)
}
