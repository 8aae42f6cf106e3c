use super::mat::DMat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues of a symmetric matrix, sorted ascending.
///
/// Householder reduction to tridiagonal form followed by implicit QL with
/// Wilkinson-style shifts. Eigenvalues only; no vectors are accumulated.
pub fn symmetric_eigenvalues<T: Real>(a: &DMat<T>) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::input("symmetric eigensolve needs a square matrix"));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(a);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(d)
}

/// Reduce a symmetric matrix to tridiagonal form; returns (diagonal, subdiagonal).
/// `e[i]` couples `d[i]` and `d[i+1]`; `e[n-1]` is unused and zero.
fn tridiagonalize<T: Real>(a: &DMat<T>) -> (Vec<T>, Vec<T>) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut e = vec![T::zero(); n];
    let two = T::one() + T::one();

    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the diagonal.
        let mut norm2 = T::zero();
        for i in (k + 1)..n {
            norm2 += a[(i, k)] * a[(i, k)];
        }
        let norm = norm2.sqrt();
        if norm == T::zero() {
            e[k] = T::zero();
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 >= T::zero() { -norm } else { norm };
        e[k] = alpha;
        // v = x - alpha*e1, then normalize to a unit vector u.
        let mut v = vec![T::zero(); n];
        for (i, vi) in v.iter_mut().enumerate().skip(k + 1) {
            *vi = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let mut vnorm2 = T::zero();
        for vi in v.iter().skip(k + 1) {
            vnorm2 += *vi * *vi;
        }
        if vnorm2 == T::zero() {
            continue;
        }
        let vnorm = vnorm2.sqrt();
        for vi in v.iter_mut().skip(k + 1) {
            *vi /= vnorm;
        }
        // Symmetric update of the trailing block: A <- A - u p^T - p u^T
        // with p = 2 A u - 2 (u^T A u) u.
        let mut p = vec![T::zero(); n];
        for i in (k + 1)..n {
            let mut s = T::zero();
            for j in (k + 1)..n {
                s += a[(i, j)] * v[j];
            }
            p[i] = two * s;
        }
        let mut utau = T::zero();
        for i in (k + 1)..n {
            utau += v[i] * p[i];
        }
        let half_tau = utau / two;
        for i in (k + 1)..n {
            p[i] -= two * half_tau * v[i];
        }
        for i in (k + 1)..n {
            for j in (k + 1)..=i {
                let delta = v[i] * p[j] + p[i] * v[j];
                let val = a[(i, j)] - delta;
                a[(i, j)] = val;
                a[(j, i)] = val;
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1, n - 2)];
    }
    let d: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
    let mut sub = vec![T::zero(); n];
    sub[..n - 1].copy_from_slice(&e[..n - 1]);
    (d, sub)
}

/// Implicit QL with shifts on a symmetric tridiagonal matrix (in place on `d`).
fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let eps = T::epsilon();
    let two = T::one() + T::one();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Look for a negligible subdiagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::numerical("QL iteration did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sign_r = if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + two * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
