use super::mat::DMat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// QR decomposition by Householder reflections.
///
/// Returns `(q, r_diag)` where `q` is orthogonal with `a = q r` and `r_diag`
/// holds the absolute values of the diagonal of `r` (the Iwasawa A-part; the
/// signs belong to the compact factor). Errors if a pivot falls below `tol`
/// (rank-deficient input).
pub fn qr_decompose<T: Real>(a: &DMat<T>, tol: T) -> Result<(DMat<T>, Vec<T>)> {
    if !a.is_square() {
        return Err(Error::input("QR here expects a square matrix"));
    }
    let n = a.nrows();
    let mut r = a.clone();
    let mut q = DMat::identity(n);
    for k in 0..n {
        let mut norm2 = T::zero();
        for i in k..n {
            norm2 += r[(i, k)] * r[(i, k)];
        }
        let norm = norm2.sqrt();
        if norm <= tol {
            return Err(Error::numerical("rank-deficient matrix in QR"));
        }
        let alpha = if r[(k, k)] >= T::zero() { -norm } else { norm };
        let mut v = vec![T::zero(); n];
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let mut vnorm2 = T::zero();
        for vi in v.iter().skip(k) {
            vnorm2 += *vi * *vi;
        }
        if vnorm2 > T::zero() {
            let two = T::one() + T::one();
            // r <- (I - 2vv^T/|v|^2) r
            for j in k..n {
                let mut dot = T::zero();
                for i in k..n {
                    dot += v[i] * r[(i, j)];
                }
                let coef = two * dot / vnorm2;
                for i in k..n {
                    let s = v[i];
                    r[(i, j)] -= coef * s;
                }
            }
            // q <- q (I - 2vv^T/|v|^2)
            for i in 0..n {
                let mut dot = T::zero();
                for j in k..n {
                    dot += q[(i, j)] * v[j];
                }
                let coef = two * dot / vnorm2;
                for j in k..n {
                    let s = v[j];
                    q[(i, j)] -= coef * s;
                }
            }
        }
        r[(k, k)] = alpha;
    }
    let diag = (0..n).map(|i| r[(i, i)].abs()).collect();
    Ok((q, diag))
}

/// Absolute values of the R diagonal only (no Q accumulation).
pub fn qr_r_diag<T: Real>(a: &DMat<T>, tol: T) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::input("QR here expects a square matrix"));
    }
    let n = a.nrows();
    let mut r = a.clone();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let mut norm2 = T::zero();
        for i in k..n {
            norm2 += r[(i, k)] * r[(i, k)];
        }
        let norm = norm2.sqrt();
        if norm <= tol {
            return Err(Error::numerical("rank-deficient matrix in QR"));
        }
        let alpha = if r[(k, k)] >= T::zero() { -norm } else { norm };
        let mut v = vec![T::zero(); n];
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let mut vnorm2 = T::zero();
        for vi in v.iter().skip(k) {
            vnorm2 += *vi * *vi;
        }
        if vnorm2 > T::zero() {
            let two = T::one() + T::one();
            for j in (k + 1)..n {
                let mut dot = T::zero();
                for i in k..n {
                    dot += v[i] * r[(i, j)];
                }
                let coef = two * dot / vnorm2;
                for i in k..n {
                    let s = v[i];
                    r[(i, j)] -= coef * s;
                }
            }
        }
        diag.push(alpha.abs());
    }
    Ok(diag)
}
