use super::mat::DMat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Sign and log of the absolute value of a determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet<T> {
    /// -1, 0, or +1.
    pub sign: i8,
    /// ln|det|; meaningless when `sign == 0`.
    pub ln_abs: T,
}

impl<T: Real> LogDet<T> {
    pub fn value(&self) -> T {
        match self.sign {
            0 => T::zero(),
            s => T::of(s as f64) * self.ln_abs.exp(),
        }
    }
}

/// Log-determinant via LU with partial pivoting.
///
/// Working in log space keeps determinants of large directed-edge operators
/// representable; callers compare log magnitudes and signs.
pub fn lu_logdet<T: Real>(a: &DMat<T>) -> Result<LogDet<T>> {
    if !a.is_square() {
        return Err(Error::input("determinant needs a square matrix"));
    }
    let n = a.nrows();
    let mut a = a.clone();
    let mut sign = 1i8;
    let mut ln_abs = T::zero();
    for k in 0..n {
        let mut pivot = k;
        let mut best = a[(k, k)].abs();
        for i in (k + 1)..n {
            let v = a[(i, k)].abs();
            if v > best {
                best = v;
                pivot = i;
            }
        }
        if best == T::zero() {
            return Ok(LogDet {
                sign: 0,
                ln_abs: T::neg_infinity(),
            });
        }
        if pivot != k {
            for j in 0..n {
                let tmp = a[(pivot, j)];
                a[(pivot, j)] = a[(k, j)];
                a[(k, j)] = tmp;
            }
            sign = -sign;
        }
        let d = a[(k, k)];
        if d < T::zero() {
            sign = -sign;
        }
        ln_abs += d.abs().ln();
        for i in (k + 1)..n {
            let factor = a[(i, k)] / d;
            if factor == T::zero() {
                continue;
            }
            a[(i, k)] = factor;
            for j in (k + 1)..n {
                let s = a[(k, j)];
                a[(i, j)] -= factor * s;
            }
        }
    }
    Ok(LogDet { sign, ln_abs })
}
