//! Finite-graph spectral side: adjacency and non-backtracking spectra, the
//! determinant identity linking them, multiplicity profiles M(p) with the
//! fitted density exponent, closed-walk trace checks, and the
//! non-backtracking certification of the tempered window.

use crate::error::{Error, Result};
use crate::fit;
use crate::graphs::Graph;
use crate::linalg::{eigenvalues, lu_logdet, symmetric_eigenvalues, DMat};
use crate::scalar::Real;
use crate::trees::eigen_to_p;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense-solver caps.
const ADJACENCY_CAP: usize = 5000;
const DIRECTED_EDGE_CAP: usize = 8000;

/// Adjacency eigenvalues with repetition, sorted descending.
#[derive(Debug, Clone)]
pub struct GraphSpectrum<T> {
    pub values: Vec<T>,
}

/// Non-backtracking (directed-edge) eigenvalues with repetition.
#[derive(Debug, Clone)]
pub struct NbSpectrum<T> {
    pub values: Vec<Complex<T>>,
}

fn adjacency_matrix<T: Real>(g: &Graph) -> DMat<T> {
    let n = g.vertex_count();
    let mut a = DMat::zeros(n, n);
    for v in 0..n as u32 {
        for &w in g.neighbors(v) {
            a[(v as usize, w as usize)] += T::one();
        }
    }
    a
}

/// All adjacency eigenvalues by dense symmetric eigensolve.
pub fn adjacency_spectrum<T: Real>(g: &Graph) -> Result<GraphSpectrum<T>> {
    if g.vertex_count() > ADJACENCY_CAP {
        return Err(Error::resource(format!(
            "adjacency eigensolve capped at {ADJACENCY_CAP} vertices"
        )));
    }
    let a = adjacency_matrix::<T>(g);
    let mut vals = symmetric_eigenvalues(&a)?;
    vals.reverse();
    Ok(GraphSpectrum { values: vals })
}

/// Directed-edge index: edges (v -> w) for every adjacency slot, together
/// with the reversal involution.
struct DirectedEdges {
    tail: Vec<u32>,
    head: Vec<u32>,
    reverse: Vec<u32>,
    /// outgoing directed-edge ids per vertex
    out: Vec<Vec<u32>>,
}

fn directed_edges(g: &Graph) -> Result<DirectedEdges> {
    if !g.is_simple() {
        return Err(Error::input(
            "non-backtracking operator here requires a simple graph",
        ));
    }
    let n = g.vertex_count();
    let mut tail = Vec::new();
    let mut head = Vec::new();
    let mut out = vec![Vec::new(); n];
    let mut id_of = std::collections::HashMap::new();
    for v in 0..n as u32 {
        for &w in g.neighbors(v) {
            let id = tail.len() as u32;
            tail.push(v);
            head.push(w);
            out[v as usize].push(id);
            id_of.insert((v, w), id);
        }
    }
    let reverse = (0..tail.len())
        .map(|e| id_of[&(head[e], tail[e])])
        .collect();
    Ok(DirectedEdges {
        tail,
        head,
        reverse,
        out,
    })
}

/// Dense non-backtracking operator B on directed edges:
/// (u -> v) maps to the sum over (v -> w), w != u.
pub fn nonbacktracking_matrix<T: Real>(g: &Graph) -> Result<DMat<T>> {
    let de = directed_edges(g)?;
    let m = de.tail.len();
    if m > DIRECTED_EDGE_CAP {
        return Err(Error::resource(format!(
            "directed-edge space capped at {DIRECTED_EDGE_CAP}"
        )));
    }
    let mut b = DMat::zeros(m, m);
    for e in 0..m {
        for &f in &de.out[de.head[e] as usize] {
            if f != de.reverse[e] {
                b[(e, f as usize)] = T::one();
            }
        }
    }
    Ok(b)
}

/// Non-backtracking spectrum through the quadratic dictionary: for each
/// adjacency eigenvalue the two roots of mu^2 - lambda mu + q = 0, plus
/// |E| - |V| copies each of +1 and -1. Exact for regular graphs; the dense
/// route below is the oracle on small graphs.
pub fn nonbacktracking_spectrum<T: Real>(g: &Graph) -> Result<NbSpectrum<T>> {
    let spec = adjacency_spectrum::<T>(g)?;
    nonbacktracking_from_adjacency(&spec, g)
}

/// Quadratic route given an existing adjacency spectrum.
pub fn nonbacktracking_from_adjacency<T: Real>(
    spec: &GraphSpectrum<T>,
    g: &Graph,
) -> Result<NbSpectrum<T>> {
    let q = T::of(g.q() as f64);
    let extra = g.edge_count() as i64 - g.vertex_count() as i64;
    if extra < 0 {
        return Err(Error::input(
            "graph must have at least as many edges as vertices",
        ));
    }
    let half = T::of(0.5);
    let mut values = Vec::with_capacity(2 * g.edge_count());
    for &lam in &spec.values {
        let disc = lam * lam - T::of(4.0) * q;
        if disc >= T::zero() {
            let root = disc.sqrt();
            values.push(Complex::new((lam + root) * half, T::zero()));
            values.push(Complex::new((lam - root) * half, T::zero()));
        } else {
            let imag = (-disc).sqrt() * half;
            values.push(Complex::new(lam * half, imag));
            values.push(Complex::new(lam * half, -imag));
        }
    }
    for _ in 0..extra {
        values.push(Complex::new(T::one(), T::zero()));
        values.push(Complex::new(-T::one(), T::zero()));
    }
    Ok(NbSpectrum { values })
}

/// Dense nonsymmetric eigensolve of B; the independent oracle for the
/// quadratic route.
pub fn nonbacktracking_spectrum_dense<T: Real>(g: &Graph) -> Result<NbSpectrum<T>> {
    let b = nonbacktracking_matrix::<T>(g)?;
    Ok(NbSpectrum {
        values: eigenvalues(&b)?,
    })
}

/// One evaluation point of the determinant identity
/// det(I - uB) = (1 - u^2)^{|E|-|V|} det(I - uA + q u^2 I),
/// compared in log space.
#[derive(Debug, Clone)]
pub struct IharaSample<T> {
    pub u: T,
    pub log_lhs: T,
    pub log_rhs: T,
    pub sign_lhs: i8,
    pub sign_rhs: i8,
    pub log_gap: T,
}

#[derive(Debug, Clone)]
pub struct IharaReport<T> {
    pub samples: Vec<IharaSample<T>>,
    pub max_log_gap: T,
}

/// Checks the determinant identity at `count` random u in (0, 1/q); both
/// sides go through independent LU decompositions (no eigensolves).
pub fn ihara_bass_check<T: Real>(g: &Graph, count: usize, seed: u64) -> Result<IharaReport<T>> {
    g.check_connected()?;
    let b = nonbacktracking_matrix::<T>(g)?;
    let a = adjacency_matrix::<T>(g);
    let n = g.vertex_count();
    let m2 = 2 * g.edge_count();
    let q = T::of(g.q() as f64);
    let exponent = T::of((g.edge_count() - n) as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(count);
    let mut max_gap = T::zero();
    for _ in 0..count {
        // u in (0.05, 0.95)/q, away from both endpoints
        let u = T::of(rng.gen_range(0.05..0.95)) / q;
        let mut lhs: DMat<T> = DMat::identity(m2);
        for i in 0..m2 {
            for j in 0..m2 {
                let v = lhs[(i, j)] - u * b[(i, j)];
                lhs[(i, j)] = v;
            }
        }
        let lhs_det = lu_logdet(&lhs)?;
        let mut rhs: DMat<T> = DMat::identity(n);
        for i in 0..n {
            for j in 0..n {
                let mut v = rhs[(i, j)] - u * a[(i, j)];
                if i == j {
                    v += q * u * u;
                }
                rhs[(i, j)] = v;
            }
        }
        let rhs_det = lu_logdet(&rhs)?;
        let log_rhs = rhs_det.ln_abs + exponent * (T::one() - u * u).ln();
        let gap: T = (lhs_det.ln_abs - log_rhs).abs();
        if gap > max_gap {
            max_gap = gap;
        }
        samples.push(IharaSample {
            u,
            log_lhs: lhs_det.ln_abs,
            log_rhs,
            sign_lhs: lhs_det.sign,
            sign_rhs: rhs_det.sign,
            log_gap: gap,
        });
    }
    Ok(IharaReport {
        samples,
        max_log_gap: max_gap,
    })
}

/// Multiplicity profile M(p) = #{nontrivial eigenvalues with p(lambda) >= p}.
#[derive(Debug, Clone)]
pub struct DensityProfile<T> {
    pub q: u64,
    pub n: usize,
    /// (p, M(p)) over the requested grid.
    pub samples: Vec<(T, usize)>,
}

/// Strips the trivial eigenvalue q+1 (and -(q-1)-1 when bipartite) and counts
/// the remaining spectrum through the eigenvalue-to-p dictionary.
pub fn density_profile<T: Real>(
    spectrum: &GraphSpectrum<T>,
    q: u64,
    p_grid: &[T],
) -> Result<DensityProfile<T>> {
    let k = T::of(q as f64) + T::one();
    let tol = T::of(1e-8);
    let mut values = spectrum.values.clone();
    values.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let n = values.len();
    if values.is_empty() || (values[0] - k).abs() > tol {
        return Err(Error::input(
            "spectrum has no trivial eigenvalue q+1; is the graph (q+1)-regular?",
        ));
    }
    values.remove(0);
    if let Some(last) = values.last().copied() {
        if (last + k).abs() <= tol {
            values.pop(); // bipartite companion
        }
    }
    let ps: Vec<T> = values
        .iter()
        .map(|&lam| eigen_to_p(lam, q))
        .collect::<Result<_>>()?;
    let eps = T::of(1e-12);
    let samples = p_grid
        .iter()
        .map(|&p| (p, ps.iter().filter(|&&pv| pv >= p - eps).count()))
        .collect();
    Ok(DensityProfile { q, n, samples })
}

/// M(p) recomputed from non-backtracking moduli via |mu| = q^{1-1/p};
/// the dictionary consistency partner of `density_profile`.
pub fn density_profile_nb<T: Real>(
    nb: &NbSpectrum<T>,
    q: u64,
    p_grid: &[T],
) -> Result<DensityProfile<T>> {
    let qf = T::of(q as f64);
    let tol = T::of(1e-8);
    let sqrt_q = qf.sqrt();
    let mut moduli: Vec<T> = nb.values.iter().map(|c| c.norm()).collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    // trivial pair: mu = q (from lambda = q+1) and its quadratic partner 1;
    // bipartite adds -q and -1 (moduli q and 1 again).
    if moduli.is_empty() || (moduli[0] - qf).abs() > tol {
        return Err(Error::input(
            "non-backtracking spectrum has no trivial mu = q",
        ));
    }
    moduli.remove(0);
    fn drop_one<T: Real>(moduli: &mut Vec<T>, target: T, tol: T) {
        if let Some(pos) = moduli.iter().position(|&m| (m - target).abs() <= tol) {
            moduli.remove(pos);
        }
    }
    drop_one(&mut moduli, T::one(), tol);
    if !moduli.is_empty() && (moduli[0] - qf).abs() <= tol {
        moduli.remove(0);
        drop_one(&mut moduli, T::one(), tol);
    }
    let n = nb.values.len();
    let ps: Vec<T> = moduli
        .iter()
        .map(|&m| {
            if m <= sqrt_q + tol {
                T::of(2.0)
            } else {
                T::one() / (T::one() - m.ln() / qf.ln())
            }
        })
        .collect();
    let eps = T::of(1e-12);
    let samples = p_grid
        .iter()
        .map(|&p| (p, ps.iter().filter(|&&pv| pv >= p - eps).count()))
        .collect();
    Ok(DensityProfile { q, n, samples })
}

/// Joint least-squares fit of ln M(p) = ln C + (1 - alpha(1 - 2/p)) ln n over
/// a family of profiles with growing n. Needs at least three distinct sizes.
pub fn fit_alpha<T: Real>(profiles: &[DensityProfile<T>]) -> Option<fit::AlphaFit<T>> {
    let mut sizes: Vec<usize> = profiles.iter().map(|p| p.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return None;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for prof in profiles {
        let ln_n = T::of(prof.n as f64).ln();
        for &(p, m) in &prof.samples {
            if m == 0 || p.is_infinite() {
                continue;
            }
            // ln M - ln n = ln C - alpha (1 - 2/p) ln n
            xs.push(-(T::one() - T::of(2.0) / p) * ln_n);
            ys.push(T::of(m as f64).ln() - ln_n);
        }
    }
    fit::linear_fit(&xs, &ys).map(|(intercept, slope)| fit::AlphaFit {
        alpha: slope,
        log_c: intercept,
        points: xs.len(),
    })
}

/// Tempered-window certificate: the adjacency test max |lambda| <= 2 sqrt(q)
/// and the non-backtracking test max |mu| <= sqrt(q), cross-checked.
#[derive(Debug, Clone)]
pub struct RamanujanReport<T> {
    pub q: u64,
    pub max_nontrivial_adjacency: T,
    pub adjacency_threshold: T,
    pub max_nontrivial_nb: T,
    pub nb_threshold: T,
    pub adjacency_ok: bool,
    pub nb_ok: bool,
    /// The two routes must agree.
    pub consistent: bool,
}

pub fn ramanujan_certificate<T: Real>(g: &Graph) -> Result<RamanujanReport<T>> {
    g.check_connected()?;
    let q = g.q() as u64;
    let qf = T::of(q as f64);
    let tol = T::of(1e-6);
    let spec = adjacency_spectrum::<T>(g)?;
    let bipartite = g.is_bipartite();
    let k = qf + T::one();
    let mut lam_max = T::zero();
    let mut skipped_top = false;
    let mut skipped_bottom = !bipartite;
    for &lam in &spec.values {
        if !skipped_top && (lam - k).abs() <= tol {
            skipped_top = true;
            continue;
        }
        if !skipped_bottom && (lam + k).abs() <= tol {
            skipped_bottom = true;
            continue;
        }
        if lam.abs() > lam_max {
            lam_max = lam.abs();
        }
    }
    // NB moduli via the quadratic with the same trivial eigenvalues dropped.
    let mut mu_max = T::zero();
    let half = T::of(0.5);
    let mut skipped_top2 = false;
    let mut skipped_bottom2 = !bipartite;
    for &lam in &spec.values {
        if !skipped_top2 && (lam - k).abs() <= tol {
            skipped_top2 = true;
            continue;
        }
        if !skipped_bottom2 && (lam + k).abs() <= tol {
            skipped_bottom2 = true;
            continue;
        }
        let disc = lam * lam - T::of(4.0) * qf;
        let modulus = if disc <= T::zero() {
            qf.sqrt()
        } else {
            (lam.abs() + disc.sqrt()) * half
        };
        if modulus > mu_max {
            mu_max = modulus;
        }
    }
    // +/-1 eigenvalues from the cycle space never exceed sqrt(q).
    if g.edge_count() > g.vertex_count() && mu_max < T::one() {
        mu_max = T::one();
    }
    let adjacency_threshold = T::of(2.0) * qf.sqrt() + tol;
    let nb_threshold = qf.sqrt() + tol;
    let adjacency_ok = lam_max <= adjacency_threshold;
    let nb_ok = mu_max <= nb_threshold;
    Ok(RamanujanReport {
        q,
        max_nontrivial_adjacency: lam_max,
        adjacency_threshold,
        max_nontrivial_nb: mu_max,
        nb_threshold,
        adjacency_ok,
        nb_ok,
        consistent: adjacency_ok == nb_ok,
    })
}

/// Spectral power sums against direct closed-walk counts.
#[derive(Debug, Clone)]
pub struct WalkTraceRow {
    pub k: u32,
    pub adjacency_walks: u64,
    pub adjacency_power_sum: f64,
    pub adjacency_rel_err: f64,
    pub nb_walks: u64,
    pub nb_power_sum: f64,
    pub nb_rel_err: f64,
}

#[derive(Debug, Clone)]
pub struct WalkTraceReport {
    pub rows: Vec<WalkTraceRow>,
    pub max_rel_err: f64,
}

fn rel_err(exact: f64, approx: f64) -> f64 {
    (approx - exact).abs() / exact.abs().max(1.0)
}

/// Closed-walk count tr A^k by integer dynamic programming from each source.
fn closed_walks(g: &Graph, k: u32) -> u64 {
    let n = g.vertex_count();
    let mut total = 0u64;
    let mut cur = vec![0u64; n];
    let mut next = vec![0u64; n];
    for src in 0..n as u32 {
        cur.iter_mut().for_each(|x| *x = 0);
        cur[src as usize] = 1;
        for _ in 0..k {
            next.iter_mut().for_each(|x| *x = 0);
            for v in 0..n as u32 {
                let c = cur[v as usize];
                if c == 0 {
                    continue;
                }
                for &w in g.neighbors(v) {
                    next[w as usize] += c;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        total += cur[src as usize];
    }
    total
}

/// Closed non-backtracking walk count tr B^k by DP on directed edges.
fn closed_nb_walks(de: &DirectedEdges, k: u32) -> u64 {
    let m = de.tail.len();
    let mut total = 0u64;
    let mut cur = vec![0u64; m];
    let mut next = vec![0u64; m];
    for src in 0..m {
        cur.iter_mut().for_each(|x| *x = 0);
        cur[src] = 1;
        for _ in 0..k {
            next.iter_mut().for_each(|x| *x = 0);
            for (e, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &f in &de.out[de.head[e] as usize] {
                    if f != de.reverse[e] {
                        next[f as usize] += c;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        total += cur[src];
    }
    total
}

/// Power sums of both spectra against exact walk counts for 1 <= k <= kmax.
pub fn walk_trace_check(g: &Graph, kmax: u32) -> Result<WalkTraceReport> {
    if g.vertex_count() > 2000 {
        return Err(Error::resource("walk-trace check capped at 2000 vertices"));
    }
    if kmax > 12 {
        return Err(Error::resource("walk length capped at 12"));
    }
    let spec = adjacency_spectrum::<f64>(g)?;
    let nb = nonbacktracking_from_adjacency(&spec, g)?;
    let de = directed_edges(g)?;
    let mut rows = Vec::new();
    let mut max_err = 0.0f64;
    for k in 1..=kmax {
        let walks = closed_walks(g, k);
        let power: f64 = spec.values.iter().map(|l| l.powi(k as i32)).sum();
        let nb_count = closed_nb_walks(&de, k);
        let nb_power_c: Complex<f64> = nb
            .values
            .iter()
            .map(|mu| mu.powu(k))
            .fold(Complex::new(0.0, 0.0), |a, b| a + b);
        let row = WalkTraceRow {
            k,
            adjacency_walks: walks,
            adjacency_power_sum: power,
            adjacency_rel_err: rel_err(walks as f64, power),
            nb_walks: nb_count,
            nb_power_sum: nb_power_c.re,
            nb_rel_err: rel_err(nb_count as f64, nb_power_c.re),
        };
        max_err = max_err.max(row.adjacency_rel_err).max(row.nb_rel_err);
        rows.push(row);
    }
    Ok(WalkTraceReport {
        rows,
        max_rel_err: max_err,
    })
}
