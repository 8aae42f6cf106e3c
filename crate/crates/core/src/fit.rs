//! Small least-squares helpers shared by the counting and spectral sides.

use crate::scalar::Real;

/// Ordinary least squares y = a + b x; returns (intercept, slope).
pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Option<(T, T)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = T::of(xs.len() as f64);
    let sx: T = xs.iter().copied().sum();
    let sy: T = ys.iter().copied().sum();
    let sxx: T = xs.iter().map(|&x| x * x).sum();
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == T::zero() {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Some((intercept, slope))
}

/// Log-log regression slope of (x, y) pairs; points with y = 0 are skipped.
pub fn log_log_slope<T: Real>(points: &[(T, T)]) -> Option<T> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &(x, y) in points {
        if x > T::zero() && y > T::zero() {
            xs.push(x.ln());
            ys.push(y.ln());
        }
    }
    linear_fit(&xs, &ys).map(|(_, slope)| slope)
}

/// Fitted density exponent from a family of multiplicity profiles.
#[derive(Debug, Clone, Copy)]
pub struct AlphaFit<T> {
    pub alpha: T,
    pub log_c: T,
    pub points: usize,
}
