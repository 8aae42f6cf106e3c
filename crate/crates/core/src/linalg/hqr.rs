use super::mat::DMat;
use crate::error::{Error, Result};
use crate::scalar::Real;
use num_complex::Complex;

/// All eigenvalues of a general real square matrix.
///
/// Reduction to upper Hessenberg form by stabilized elimination, then Francis
/// double-shift QR. Returns complex eigenvalues sorted by real part, then
/// imaginary part. Eigenvalues only.
pub fn eigenvalues<T: Real>(a: &DMat<T>) -> Result<Vec<Complex<T>>> {
    if !a.is_square() {
        return Err(Error::input("eigensolve needs a square matrix"));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Complex::new(a[(0, 0)], T::zero())]);
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    let mut vals = francis_qr(&mut h)?;
    vals.sort_by(|x, y| {
        (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .expect("finite eigenvalues")
    });
    Ok(vals)
}

/// Reduce to upper Hessenberg form by Gaussian elimination with pivoting.
fn hessenberg<T: Real>(a: &mut DMat<T>) {
    let n = a.nrows();
    for m in 1..n.saturating_sub(1) {
        let mut x = T::zero();
        let mut pivot = m;
        for j in m..n {
            if a[(j, m - 1)].abs() > x.abs() {
                x = a[(j, m - 1)];
                pivot = j;
            }
        }
        if pivot != m {
            for j in (m - 1)..n {
                let tmp = a[(pivot, j)];
                a[(pivot, j)] = a[(m, j)];
                a[(m, j)] = tmp;
            }
            for j in 0..n {
                let tmp = a[(j, pivot)];
                a[(j, pivot)] = a[(j, m)];
                a[(j, m)] = tmp;
            }
        }
        if x != T::zero() {
            for i in (m + 1)..n {
                let mut y = a[(i, m - 1)];
                if y != T::zero() {
                    y /= x;
                    for j in m..n {
                        let s = a[(m, j)];
                        a[(i, j)] -= y * s;
                    }
                    for j in 0..n {
                        let s = a[(j, i)];
                        a[(j, m)] += y * s;
                    }
                }
                a[(i, m - 1)] = T::zero();
            }
        }
    }
    // Clear anything below the subdiagonal left over from pivot swaps.
    for i in 2..n {
        for j in 0..(i - 1) {
            a[(i, j)] = T::zero();
        }
    }
}

#[inline]
fn sign_of<T: Real>(mag: T, sign: T) -> T {
    if sign >= T::zero() {
        mag.abs()
    } else {
        -mag.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn francis_qr<T: Real>(h: &mut DMat<T>) -> Result<Vec<Complex<T>>> {
    let n = h.nrows();
    let eps = T::epsilon();
    let half = T::of(0.5);
    let zero = T::zero();
    let mut wr = vec![zero; n];
    let mut wi = vec![zero; n];

    let mut anorm = zero;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[(i, j)].abs();
        }
    }
    if anorm == zero {
        return Ok(vec![Complex::new(zero, zero); n]);
    }

    let g = |h: &DMat<T>, i: isize, j: isize| h[(i as usize, j as usize)];

    let mut nn: isize = n as isize - 1;
    let mut t = zero;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // Locate a negligible subdiagonal entry; the active block is l..=nn.
            let mut l = nn;
            while l >= 1 {
                let mut s = g(h, l - 1, l - 1).abs() + g(h, l, l).abs();
                if s == zero {
                    s = anorm;
                }
                if g(h, l, l - 1).abs() <= eps * s {
                    h[(l as usize, (l - 1) as usize)] = zero;
                    break;
                }
                l -= 1;
            }
            let mut x = g(h, nn, nn);
            if l == nn {
                wr[nn as usize] = x + t;
                wi[nn as usize] = zero;
                nn -= 1;
                break;
            }
            let mut y = g(h, nn - 1, nn - 1);
            let mut w = g(h, nn, nn - 1) * g(h, nn - 1, nn);
            if l == nn - 1 {
                let p = half * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= zero {
                    let z = p + sign_of(z, p);
                    wr[(nn - 1) as usize] = x + z;
                    wr[nn as usize] = x + z;
                    if z != zero {
                        wr[nn as usize] = x - w / z;
                    }
                    wi[(nn - 1) as usize] = zero;
                    wi[nn as usize] = zero;
                } else {
                    wr[(nn - 1) as usize] = x + p;
                    wr[nn as usize] = x + p;
                    wi[(nn - 1) as usize] = -z;
                    wi[nn as usize] = z;
                }
                nn -= 2;
                break;
            }
            if its == 60 {
                return Err(Error::numerical("QR iteration did not converge"));
            }
            if its == 10 || its == 20 || its == 30 || its == 40 || its == 50 {
                // Exceptional shift.
                t += x;
                for i in 0..=nn {
                    let d = h[(i as usize, i as usize)];
                    h[(i as usize, i as usize)] = d - x;
                }
                let s = g(h, nn, nn - 1).abs() + g(h, nn - 1, nn - 2).abs();
                y = T::of(0.75) * s;
                x = y;
                w = T::of(-0.4375) * s * s;
            }
            its += 1;
            // Look for two consecutive small subdiagonal elements.
            let mut m = nn - 2;
            let mut p = zero;
            let mut q = zero;
            let mut r = zero;
            while m >= l {
                let z = g(h, m, m);
                let rr = x - z;
                let s = y - z;
                p = (rr * s - w) / g(h, m + 1, m) + g(h, m, m + 1);
                q = g(h, m + 1, m + 1) - z - rr - s;
                r = g(h, m + 2, m + 1);
                let scale = p.abs() + q.abs() + r.abs();
                p /= scale;
                q /= scale;
                r /= scale;
                if m == l {
                    break;
                }
                let u = g(h, m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (g(h, m - 1, m - 1).abs() + z.abs() + g(h, m + 1, m + 1).abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                h[(i as usize, (i - 2) as usize)] = zero;
                if i > m + 2 {
                    h[(i as usize, (i - 3) as usize)] = zero;
                }
            }
            // Double QR step on the active block.
            for k in m..=(nn - 1) {
                if k != m {
                    p = g(h, k, k - 1);
                    q = g(h, k + 1, k - 1);
                    r = if k != nn - 1 {
                        g(h, k + 2, k - 1)
                    } else {
                        zero
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != zero {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign_of((p * p + q * q + r * r).sqrt(), p);
                if s == zero {
                    continue;
                }
                if k == m {
                    if l != m {
                        let v = g(h, k, k - 1);
                        h[(k as usize, (k - 1) as usize)] = -v;
                    }
                } else {
                    h[(k as usize, (k - 1) as usize)] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nn {
                    let mut pp = g(h, k, j) + q * g(h, k + 1, j);
                    if k != nn - 1 {
                        pp += r * g(h, k + 2, j);
                        let v = g(h, k + 2, j) - pp * z;
                        h[((k + 2) as usize, j as usize)] = v;
                    }
                    let v1 = g(h, k + 1, j) - pp * y;
                    h[((k + 1) as usize, j as usize)] = v1;
                    let v0 = g(h, k, j) - pp * x;
                    h[(k as usize, j as usize)] = v0;
                }
                let mmin = if nn < k + 3 { nn } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = x * g(h, i, k) + y * g(h, i, k + 1);
                    if k != nn - 1 {
                        pp += z * g(h, i, k + 2);
                        let v = g(h, i, k + 2) - pp * r;
                        h[(i as usize, (k + 2) as usize)] = v;
                    }
                    let v1 = g(h, i, k + 1) - pp * q;
                    h[(i as usize, (k + 1) as usize)] = v1;
                    let v0 = g(h, i, k) - pp;
                    h[(i as usize, k as usize)] = v0;
                }
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex::new(re, im))
        .collect())
}
