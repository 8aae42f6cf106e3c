//! Optimal-lifting experiments: how quickly the norm balls of SL2(Z) cover
//! the finite quotients under reduction, the empirical crossing exponents,
//! and almost-diameter concentration statistics on regular graphs.

use crate::counting::{count_bruteforce, for_each_sl2_ball};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::matgroups::{enumerate_quotient, QuotientSpace, SubgroupSpec, DEFAULT_COSET_CAP};
use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct CoverageRow {
    pub t: i64,
    /// #{gamma in SL2(Z): ||gamma||_inf <= t} (or in the annulus t/2 < ||.|| <= t)
    pub ball_size: u64,
    pub covered: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone)]
pub struct CoverageCurve {
    pub spec: SubgroupSpec,
    pub index: usize,
    pub annulus: bool,
    pub rows: Vec<CoverageRow>,
}

/// Dense lookup from packed SL2 mod-N entries to coset ids.
fn dense_coset_table(quotient: &QuotientSpace) -> Vec<u32> {
    let n = quotient.spec().level as u64;
    let mut table = vec![u32::MAX; (n * n * n * n) as usize];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            for c in 0..n as u32 {
                for d in 0..n as u32 {
                    let det = ((a as u64 * d as u64 % n) + n - (b as u64 * c as u64 % n)) % n;
                    if det != 1 % n {
                        continue;
                    }
                    let m = crate::matgroups::ModMatrix::new(2, n as u32, vec![a, b, c, d])
                        .expect("det checked");
                    let idx = ((a as u64 * n + b as u64) * n + c as u64) * n + d as u64;
                    table[idx as usize] = quotient.coset_of_mod(&m);
                }
            }
        }
    }
    table
}

/// For every coset, the smallest T at which some ball element reduces into
/// it, plus the ball-size histogram by norm. One enumeration serves the
/// whole curve.
fn coverage_data(spec: &SubgroupSpec, t_max: i64) -> Result<(QuotientSpace, Vec<i64>, Vec<u64>)> {
    if spec.ambient != crate::matgroups::Ambient::Sl2 {
        return Err(Error::input("coverage curves are implemented for SL2 only"));
    }
    if spec.level > 64 {
        return Err(Error::resource(
            "coverage lookup table is dense in level^4; capped at level 64",
        ));
    }
    let quotient = enumerate_quotient(spec, DEFAULT_COSET_CAP)?;
    let table = dense_coset_table(&quotient);
    let n = spec.level as i64;
    let mut min_t: Vec<i64> = vec![i64::MAX; quotient.index()];
    let mut norm_hist: Vec<u64> = vec![0; t_max as usize + 1];
    for_each_sl2_ball(t_max, |m| {
        let norm = m.iter().map(|x| x.abs()).max().unwrap();
        norm_hist[norm as usize] += 1;
        let idx = (((m[0].rem_euclid(n) * n + m[1].rem_euclid(n)) * n + m[2].rem_euclid(n)) * n
            + m[3].rem_euclid(n)) as usize;
        let coset = table[idx] as usize;
        if norm < min_t[coset] {
            min_t[coset] = norm;
        }
    });
    Ok((quotient, min_t, norm_hist))
}

/// Coverage of the quotient by reductions of the norm ball, per grid point.
///
/// With `annulus`, each row counts only elements with t/2 < norm <= t, the
/// norm-shell refinement of the ball statistic.
pub fn coverage_curve(spec: &SubgroupSpec, t_grid: &[i64], annulus: bool) -> Result<CoverageCurve> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| t < 0) {
        return Err(Error::input("t grid must be nonempty and nonnegative"));
    }
    let mut grid = t_grid.to_vec();
    grid.sort_unstable();
    let t_max = *grid.last().unwrap();
    if t_max > 100_000 {
        return Err(Error::resource("coverage enumeration capped at T = 100000"));
    }
    let (quotient, min_t, norm_hist) = coverage_data(spec, t_max)?;
    let index = quotient.index();
    let rows = grid
        .iter()
        .map(|&t| {
            let lo = if annulus { t / 2 } else { -1 };
            let ball_size: u64 = norm_hist[..=(t as usize)]
                .iter()
                .enumerate()
                .filter(|(norm, _)| *norm as i64 > lo)
                .map(|(_, &c)| c)
                .sum();
            let covered = min_t
                .iter()
                .filter(|&&m| m <= t && (!annulus || m > lo))
                .count() as u64;
            CoverageRow {
                t,
                ball_size,
                covered,
                fraction: covered as f64 / index as f64,
            }
        })
        .collect();
    Ok(CoverageCurve {
        spec: *spec,
        index,
        annulus,
        rows,
    })
}

/// Coverage fraction of the ball reduced from an arbitrary starting coset:
/// marks the cosets of rep(c0) * gamma. Transitivity makes this independent
/// of c0; exposed for the translation-invariance check.
pub fn coverage_fraction_from_coset(spec: &SubgroupSpec, t: i64, start_coset: u32) -> Result<f64> {
    let quotient = enumerate_quotient(spec, DEFAULT_COSET_CAP)?;
    if start_coset as usize >= quotient.index() {
        return Err(Error::input("coset id out of range"));
    }
    let n = spec.level;
    let start = quotient.representative(start_coset).clone();
    let mut hit = vec![false; quotient.index()];
    for_each_sl2_ball(t, |m| {
        let g = crate::matgroups::IntMatrix::from_i64(2, &m).expect("det 1");
        let translated = start.mul(&g.reduce_mod(n));
        hit[quotient.coset_of_mod(&translated) as usize] = true;
    });
    Ok(hit.iter().filter(|&&h| h).count() as f64 / quotient.index() as f64)
}

#[derive(Debug, Clone, Copy)]
pub struct ExponentResult {
    /// kappa with T_cross ~ index^{kappa/2}.
    pub kappa: f64,
    /// Grid-resolution half-width on kappa.
    pub error: f64,
    pub reached: bool,
    pub t_cross: f64,
}

/// Crossing exponent: where the coverage curve first reaches fraction `f`,
/// interpolated linearly in log T between bracketing grid points.
pub fn lifting_exponent(curve: &CoverageCurve, f: f64) -> ExponentResult {
    let ln_index = (curve.index as f64).ln();
    let mut prev: Option<&CoverageRow> = None;
    for row in &curve.rows {
        if row.fraction >= f {
            let (ln_t, err) = match prev {
                None => ((row.t.max(1) as f64).ln(), 0.0),
                Some(p) => {
                    let lt0 = (p.t.max(1) as f64).ln();
                    let lt1 = (row.t.max(1) as f64).ln();
                    if row.fraction > p.fraction {
                        let w = (f - p.fraction) / (row.fraction - p.fraction);
                        (lt0 + w * (lt1 - lt0), (lt1 - lt0) / 2.0)
                    } else {
                        (lt1, (lt1 - lt0) / 2.0)
                    }
                }
            };
            return ExponentResult {
                kappa: 2.0 * ln_t / ln_index,
                error: 2.0 * err / ln_index,
                reached: true,
                t_cross: ln_t.exp(),
            };
        }
        prev = Some(row);
    }
    ExponentResult {
        kappa: f64::NAN,
        error: f64::NAN,
        reached: false,
        t_cross: f64::NAN,
    }
}

/// Consistency hook: ball sizes from the coverage pass must equal the
/// brute-force count for the full group.
pub fn ball_size_check(t: i64) -> Result<(u64, u64)> {
    let spec = SubgroupSpec::principal(crate::matgroups::Ambient::Sl2, 1)?;
    let brute = count_bruteforce(&spec, t, None)?.count;
    let curve = coverage_curve(&spec, &[t], false)?;
    Ok((curve.rows[0].ball_size, brute))
}

#[derive(Debug, Clone)]
pub struct SampleInfo {
    pub sources: usize,
    pub seed: u64,
}

/// Pairwise-distance statistics over ordered pairs of distinct vertices.
#[derive(Debug, Clone)]
pub struct DistanceStats {
    /// `histogram[d]` = number of ordered pairs at distance d (d >= 1)
    pub histogram: Vec<u64>,
    pub mean: f64,
    /// (epsilon, fraction of pairs within (1+epsilon) log_q n); empty for q < 2.
    pub within: Vec<(f64, f64)>,
    pub vertex_count: usize,
    pub degree: usize,
    /// Set when sources were sampled rather than exhaustive.
    pub sampled: Option<SampleInfo>,
}

const EXACT_SOURCE_CAP: usize = 5000;
const SAMPLED_SOURCES: usize = 1024;
const VERTEX_CAP: usize = 100_000;
const EPS_GRID: [f64; 3] = [0.1, 0.25, 0.5];

/// BFS distance histogram over all (or sampled) sources, the mean distance,
/// and the fraction of pairs within (1+eps) log_q n for the fixed eps grid.
pub fn almost_diameter(g: &Graph, seed: u64) -> Result<DistanceStats> {
    if g.vertex_count() > VERTEX_CAP {
        return Err(Error::resource(format!(
            "almost-diameter capped at {VERTEX_CAP} vertices"
        )));
    }
    g.check_connected()?;
    let n = g.vertex_count();
    let sources: Vec<u32> = if n <= EXACT_SOURCE_CAP {
        (0..n as u32).collect()
    } else {
        let mut all: Vec<u32> = (0..n as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        all.shuffle(&mut rng);
        all.truncate(SAMPLED_SOURCES);
        all
    };
    let sampled = if n <= EXACT_SOURCE_CAP {
        None
    } else {
        Some(SampleInfo {
            sources: sources.len(),
            seed,
        })
    };
    let mut histogram: Vec<u64> = Vec::new();
    let mut total_pairs = 0u64;
    let mut total_dist = 0u128;
    for &src in &sources {
        let dist = g.bfs_distances(src);
        for (v, &d) in dist.iter().enumerate() {
            if v as u32 == src {
                continue;
            }
            if d as usize >= histogram.len() {
                histogram.resize(d as usize + 1, 0);
            }
            histogram[d as usize] += 1;
            total_pairs += 1;
            total_dist += d as u128;
        }
    }
    let mean = total_dist as f64 / total_pairs as f64;
    let q = g.degree().saturating_sub(1);
    let within = if q >= 2 {
        let log_q_n = (n as f64).ln() / (q as f64).ln();
        EPS_GRID
            .iter()
            .map(|&eps| {
                let threshold = (1.0 + eps) * log_q_n;
                let close: u64 = histogram
                    .iter()
                    .enumerate()
                    .filter(|(d, _)| (*d as f64) < threshold)
                    .map(|(_, &c)| c)
                    .sum();
                (eps, close as f64 / total_pairs as f64)
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(DistanceStats {
        histogram,
        mean,
        within,
        vertex_count: n,
        degree: g.degree(),
        sampled,
    })
}
