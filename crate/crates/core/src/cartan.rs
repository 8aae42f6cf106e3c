//! Real-group geometry for SL_n(R): Cartan (singular value) and Iwasawa (QR)
//! decompositions, the length functions l and l-tilde, and Monte-Carlo
//! estimates of the Harish-Chandra functions Xi_p.
//!
//! The base of the length here is e (Archimedean convention); the tree and
//! graph modules use an integer branching factor instead.

use crate::error::{Error, Result};
use crate::linalg::{lu_logdet, qr_decompose, qr_r_diag, singular_values, DMat};
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SVD_TOL: f64 = 1e-12;

/// Modular-character exponent weights (n-1-2i) for i = 0..n-1.
fn weights<T: Real>(n: usize) -> Vec<T> {
    (0..n)
        .map(|i| T::of((n as f64) - 1.0 - 2.0 * i as f64))
        .collect()
}

/// Singular-value profile of a unimodular real matrix.
#[derive(Debug, Clone)]
pub struct CartanData<T> {
    pub n: usize,
    /// Singular values, descending; product 1 up to input accuracy.
    pub sigma: Vec<T>,
    /// Length l = sum (n-1-2i) ln sigma_i, in base-e log units.
    pub length: T,
    /// Log of the spectral norm, ln sigma_max.
    pub length_tilde: T,
}

/// Iwasawa A-coordinate: logs of the diagonal of the upper-triangular factor.
#[derive(Debug, Clone)]
pub struct IwasawaData<T> {
    pub n: usize,
    pub h: Vec<T>,
}

fn validate_input<T: Real>(g: &DMat<T>) -> Result<()> {
    if !g.is_square() || g.nrows() < 2 {
        return Err(Error::input("expected a square matrix of size >= 2"));
    }
    if !g.all_finite() {
        return Err(Error::input("matrix entries must be finite"));
    }
    let det = lu_logdet(g)?;
    let det_val = det.value();
    if (det_val - T::one()).abs() > T::of(1e-6) {
        return Err(Error::input(format!(
            "determinant {det_val} is not 1 within 1e-6"
        )));
    }
    Ok(())
}

/// Cartan data of a real matrix with determinant approximately 1.
pub fn cartan_decompose<T: Real>(g: &DMat<T>) -> Result<CartanData<T>> {
    validate_input(g)?;
    let sigma = singular_values(g, T::of(SVD_TOL));
    let w = weights::<T>(g.nrows());
    let mut length = T::zero();
    for (wi, si) in w.iter().zip(&sigma) {
        length += *wi * si.ln();
    }
    Ok(CartanData {
        n: g.nrows(),
        sigma: sigma.clone(),
        length,
        length_tilde: sigma[0].ln(),
    })
}

/// Length l(g); K-bi-invariant and symmetric under inversion.
pub fn length<T: Real>(g: &DMat<T>) -> Result<T> {
    Ok(cartan_decompose(g)?.length)
}

/// Length of the float image of an exact integer matrix.
pub fn length_of_int_matrix(g: &crate::matgroups::IntMatrix) -> Result<f64> {
    let rows = g.to_f64_rows();
    length(&DMat::from_rows(&rows)?)
}

#[derive(Debug, Clone, Copy)]
pub struct LengthComparison<T> {
    pub length: T,
    pub length_tilde: T,
    /// l / l_tilde, or None when l_tilde = 0.
    pub ratio: Option<T>,
}

/// Both length functions and their ratio.
pub fn length_compare<T: Real>(g: &DMat<T>) -> Result<LengthComparison<T>> {
    let c = cartan_decompose(g)?;
    let ratio = if c.length_tilde == T::zero() {
        None
    } else {
        Some(c.length / c.length_tilde)
    };
    Ok(LengthComparison {
        length: c.length,
        length_tilde: c.length_tilde,
        ratio,
    })
}

/// Checks l(g1 g2) <= l(g1) + l(g2) + 1e-6.
pub fn check_subadditivity<T: Real>(g1: &DMat<T>, g2: &DMat<T>) -> Result<bool> {
    let l1 = length(g1)?;
    let l2 = length(g2)?;
    let l12 = length(&g1.matmul(g2))?;
    Ok(l12 <= l1 + l2 + T::of(1e-6))
}

/// Iwasawa H-coordinate via QR: h_i = ln r_ii.
pub fn iwasawa_decompose<T: Real>(g: &DMat<T>) -> Result<IwasawaData<T>> {
    validate_input(g)?;
    let diag = qr_r_diag(g, T::of(SVD_TOL))?;
    Ok(IwasawaData {
        n: g.nrows(),
        h: diag.iter().map(|r| r.ln()).collect(),
    })
}

/// Monte-Carlo estimate of Xi_p(g) = int_K delta(gk)^(-1/p) dk.
#[derive(Debug, Clone, Copy)]
pub struct XiEstimate<T> {
    pub estimate: T,
    pub std_error: T,
    pub samples: u64,
}

/// Paper-grade envelope for Xi_p along a_t = diag(e^{t/2}, e^{-t/2}):
/// lower e^{-t/p}, upper 2(1+t)e^{-t/p} (constant calibrated once).
pub fn xi_bounds<T: Real>(t: T, p: T) -> (T, T) {
    let decay = (-t / p).exp();
    let two = T::of(2.0);
    (decay, two * (T::one() + t) * decay)
}

const CHUNK: u64 = 1 << 14;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn gaussian_pair<T: Real>(rng: &mut ChaCha8Rng) -> (T, T) {
    // Box-Muller; uniforms kept away from 0.
    let u1: f64 = loop {
        let u = rng.gen::<f64>();
        if u > 1e-300 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (T::of(r * theta.cos()), T::of(r * theta.sin()))
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the R
/// diagonal sign-fixed (the Q returned by our QR already has positive R diag).
fn haar_orthogonal<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> DMat<T> {
    loop {
        let mut g = DMat::zeros(n, n);
        let mut stash: Option<T> = None;
        for i in 0..n {
            for j in 0..n {
                let v = match stash.take() {
                    Some(v) => v,
                    None => {
                        let (a, b) = gaussian_pair(rng);
                        stash = Some(b);
                        a
                    }
                };
                g[(i, j)] = v;
            }
        }
        if let Ok((q, _)) = qr_decompose(&g, T::of(1e-300)) {
            return q;
        }
    }
}

/// Unbiased Monte-Carlo estimate of Xi_p(g), sampling k Haar-uniformly on
/// O(n) and reading delta(gk) off the Iwasawa A-part of gk.
///
/// The sample budget is split into fixed-size chunks with per-chunk seeds
/// derived from `seed`; chunk partial sums are reduced in chunk order, so the
/// result is bit-identical for a given seed regardless of thread count.
/// `p` may be infinity (the integrand is then identically 1).
pub fn xi_p_montecarlo<T: Real>(
    g: &DMat<T>,
    p: T,
    samples: u64,
    seed: u64,
) -> Result<XiEstimate<T>> {
    validate_input(g)?;
    if p.is_nan() || p < T::of(2.0) {
        return Err(Error::input("p must be >= 2 (or infinity)"));
    }
    if samples < 1000 {
        return Err(Error::input("need at least 1000 samples"));
    }
    let n = g.nrows();
    let w = weights::<T>(n);
    let inv_p = if p.is_infinite() {
        T::zero()
    } else {
        T::one() / p
    };
    let n_chunks = samples.div_ceil(CHUNK);
    let chunk_stats: Vec<(T, T)> = (0..n_chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(ci + 1)));
            let this_chunk = if ci == n_chunks - 1 {
                samples - ci * CHUNK
            } else {
                CHUNK
            };
            let mut sum = T::zero();
            let mut sum_sq = T::zero();
            for _ in 0..this_chunk {
                let k = haar_orthogonal::<T>(n, &mut rng);
                let gk = g.matmul(&k);
                let diag = qr_r_diag(&gk, T::of(1e-280)).expect("unimodular matrix");
                let mut log_delta = T::zero();
                for (wi, ri) in w.iter().zip(&diag) {
                    log_delta += *wi * ri.ln();
                }
                let x = (-inv_p * log_delta).exp();
                sum += x;
                sum_sq += x * x;
            }
            (sum, sum_sq)
        })
        .collect();
    let mut sum = T::zero();
    let mut sum_sq = T::zero();
    for (s, s2) in chunk_stats {
        sum += s;
        sum_sq += s2;
    }
    let count = T::of(samples as f64);
    let mean = sum / count;
    let var = ((sum_sq - sum * sum / count) / (count - T::one())).max(T::zero());
    Ok(XiEstimate {
        estimate: mean,
        std_error: (var / count).sqrt(),
        samples,
    })
}

/// diag(e^{t/2}, e^{-t/2}), the SL2 Cartan ray at length t.
pub fn sl2_diag<T: Real>(t: T) -> DMat<T> {
    let half = T::of(0.5);
    let mut m = DMat::zeros(2, 2);
    m[(0, 0)] = (t * half).exp();
    m[(1, 1)] = (-t * half).exp();
    m
}

/// Deterministic pseudo-random unimodular matrix: Gaussian entries,
/// renormalized to determinant one. Test and experiment helper.
pub fn random_unimodular<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> DMat<T> {
    loop {
        let mut m = DMat::zeros(n, n);
        let mut stash: Option<T> = None;
        for i in 0..n {
            for j in 0..n {
                let v = match stash.take() {
                    Some(v) => v,
                    None => {
                        let (a, b) = gaussian_pair(rng);
                        stash = Some(b);
                        a
                    }
                };
                m[(i, j)] = v;
            }
        }
        let det = match lu_logdet(&m) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if det.sign == 0 || !det.ln_abs.is_finite() {
            continue;
        }
        // Scale to |det| = 1, then fix the sign by swapping two rows if needed.
        let scale = (-det.ln_abs / T::of(n as f64)).exp();
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)] * scale;
                m[(i, j)] = v;
            }
        }
        if det.sign < 0 {
            for j in 0..n {
                let tmp = m[(0, j)];
                m[(0, j)] = m[(1, j)];
                m[(1, j)] = tmp;
            }
        }
        return m;
    }
}
