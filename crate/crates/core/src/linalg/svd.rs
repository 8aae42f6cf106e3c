use super::mat::DMat;
use crate::scalar::Real;

/// Singular values by one-sided Jacobi, sorted descending.
///
/// Orthogonalizes column pairs until every off-diagonal Gram entry is below
/// `tol` relative to the column norms; the singular values are then the
/// column norms. Robust for the small, well-conditioned matrices this crate
/// feeds it (group elements of determinant one).
pub fn singular_values<T: Real>(a: &DMat<T>, tol: T) -> Vec<T> {
    let mut a = a.clone();
    let (m, n) = (a.nrows(), a.ncols());
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for i in 0..m {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / ((T::one() + T::one()) * gamma);
                let t = {
                    let s = if zeta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    s / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = a[(i, p)];
                    let y = a[(i, q)];
                    a[(i, p)] = c * x - s * y;
                    a[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sigma: Vec<T> = (0..n)
        .map(|j| {
            let mut s = T::zero();
            for i in 0..m {
                s += a[(i, j)] * a[(i, j)];
            }
            s.sqrt()
        })
        .collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    sigma
}
