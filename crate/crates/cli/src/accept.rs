//! The acceptance suite: ten checks covering the counting oracles, the
//! growth exponent, the fixed-point identity, tree convolution geometry, the
//! Ramanujan certification, the determinant identity, density-profile
//! consistency, lifting S-curves, the Harish-Chandra bracket, and walk
//! traces. Each check runs at its stated scale and reports one line.

use crate::report::CriterionReport;
use latspec_core::cartan::{sl2_diag, xi_bounds, xi_p_montecarlo};
use latspec_core::counting::{
    count_bruteforce, count_divisor_fast, radius_profile, LengthKind, ProfileMethod,
};
use latspec_core::fit::log_log_slope;
use latspec_core::graphs::{
    build_cayley_sl2, build_lps, complete, cycle, petersen, random_regular, GeneratorFamily, Graph,
};
use latspec_core::lifting::{coverage_curve, lifting_exponent};
use latspec_core::matgroups::{Ambient, SubgroupKind, SubgroupSpec};
use latspec_core::spectral::{
    adjacency_spectrum, density_profile, density_profile_nb, ihara_bass_check,
    nonbacktracking_from_adjacency, ramanujan_certificate, walk_trace_check,
};
use latspec_core::trees::{tree_convolution, tree_convolution_bfs};
use std::time::Instant;

/// Convolution-decay constant measured over q in {2,3,4}, r <= 10
/// (max ratio 2.998 at q=2, d=0) and frozen with headroom.
pub const CONVOLUTION_CONSTANT: f64 = 3.5;

/// Crossing exponents kappa(0.99) measured once on the exact coverage
/// curves; the criterion checks the band, these pin the values.
const KAPPA_PILOT: [(u32, f64); 4] = [(5, 0.8520), (7, 0.8292), (11, 0.8331), (13, 0.8783)];

const ACCEPT_SEED: u64 = 20260808;

fn finish(id: u32, name: &str, t0: Instant, result: Result<String, String>) -> CriterionReport {
    let (pass, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport {
        id,
        name: name.to_string(),
        pass,
        detail,
        wall_ms: t0.elapsed().as_millis(),
    }
}

fn principal2(level: u32) -> SubgroupSpec {
    SubgroupSpec::new(Ambient::Sl2, SubgroupKind::Principal, level).unwrap()
}

pub fn c1_counting_oracle(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let ts: &[i64] = if quick { &[10, 50] } else { &[10, 50, 200] };
    let mut cases = 0;
    let result = (|| {
        for level in 1..=8u32 {
            for &t in ts {
                let brute = count_bruteforce(&principal2(level), t, None)
                    .map_err(|e| e.to_string())?
                    .count;
                let fast = count_divisor_fast(level, t)
                    .map_err(|e| e.to_string())?
                    .count;
                if brute != fast {
                    return Err(format!("N={level} T={t}: brute {brute} != fast {fast}"));
                }
                cases += 1;
            }
        }
        Ok(format!("fast == brute on {cases} (N,T) pairs"))
    })();
    finish(1, "counting-oracle-equivalence", t0, result)
}

/// As stated this criterion cannot pass: the exact count crosses over from
/// the unipotent-dominated regime (~4T/N) to the equidistribution regime
/// (~(96/pi^2) T^2/N^3), so ANY one-exponent fit over [N, N^3] lands near
/// 1.5-1.7 even though the upper-envelope content of the growth claim holds
/// (sup of count/T^{1.25} stays a small constant over the range). The check
/// runs the stated regression and reports the failure, with the envelope
/// constant included for context. See the repository notes.
pub fn c2_growth_exponent(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let result = (|| {
        let mut details = Vec::new();
        let mut failures = Vec::new();
        for &level in &[11u32, 13, 17] {
            let t_max = ((level as i64).pow(3)).min(if quick { 2000 } else { 5000 });
            let t_min = level as i64;
            let points = 10usize;
            let mut grid: Vec<i64> = (0..points)
                .map(|i| {
                    let f = (t_max as f64 / t_min as f64).powf(i as f64 / (points - 1) as f64);
                    (t_min as f64 * f).round() as i64
                })
                .collect();
            grid.dedup();
            let mut samples = Vec::new();
            for &t in &grid {
                let c = count_bruteforce(&principal2(level), t, None)
                    .map_err(|e| e.to_string())?
                    .count;
                samples.push((t as f64, c as f64));
            }
            let slope =
                log_log_slope(&samples).ok_or_else(|| "degenerate regression".to_string())?;
            let envelope = samples
                .iter()
                .map(|&(t, c)| c / t.powf(1.25))
                .fold(f64::MIN, f64::max);
            details.push(format!(
                "N={level}: slope {slope:.3}, sup count/T^1.25 = {envelope:.2}"
            ));
            if slope > 1.25 {
                failures.push(format!("N={level}: log-log slope {slope:.4} > 1.25"));
            }
        }
        if failures.is_empty() {
            Ok(format!("{} (all slopes <= 1.25)", details.join("; ")))
        } else {
            Err(format!(
                "{} -- the two-regime count makes the stated regression bound unattainable; {}",
                failures.join("; "),
                details.join("; ")
            ))
        }
    })();
    finish(2, "growth-exponent", t0, result)
}

pub fn c3_fixed_point_identity(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let d_max = if quick { 6 } else { 8 };
    let result = (|| {
        for level in [5u32, 7] {
            let spec = SubgroupSpec::new(Ambient::Sl2, SubgroupKind::Gamma0, level).unwrap();
            let grid: Vec<f64> = (1..=d_max).map(|d| d as f64).collect();
            let direct = radius_profile(
                &spec,
                &grid,
                LengthKind::Cartan,
                ProfileMethod::DirectConjugation,
            )
            .map_err(|e| e.to_string())?;
            let fixed = radius_profile(
                &spec,
                &grid,
                LengthKind::Cartan,
                ProfileMethod::FixedPointSum,
            )
            .map_err(|e| e.to_string())?;
            for (a, b) in direct.rows.iter().zip(&fixed.rows) {
                if a.total != b.total {
                    return Err(format!(
                        "Gamma0({level}) d0={}: direct {} != fixed-point {}",
                        a.d0, a.total, b.total
                    ));
                }
            }
        }
        Ok(format!(
            "conjugator-averaged == fixed-point-summed exactly for Gamma0(5), Gamma0(7), d0 <= {d_max}"
        ))
    })();
    finish(3, "fixed-point-identity", t0, result)
}

pub fn c4_tree_convolution(quick: bool) -> CriterionReport {
    c4_tree_convolution_with(&tree_convolution, quick)
}

/// Inner body with an injectable closed form, so a deliberately broken
/// convolution can be shown to trip this criterion.
pub fn c4_tree_convolution_with(
    conv: &dyn Fn(u64, u32, u32, u32) -> u128,
    quick: bool,
) -> CriterionReport {
    let t0 = Instant::now();
    let r_oracle = if quick { 5 } else { 8 };
    let r_decay = if quick { 6 } else { 10 };
    let result = (|| {
        for q in [2u64, 3] {
            for r1 in 0..=r_oracle {
                for r2 in 0..=r_oracle {
                    for d in 0..=(r1 + r2) {
                        let closed = conv(q, r1, r2, d);
                        let bfs = tree_convolution_bfs(q, r1, r2, d).map_err(|e| e.to_string())?;
                        if closed != bfs {
                            return Err(format!(
                                "convolution mismatch at q={q} r1={r1} r2={r2} d={d}: closed {closed} != bfs {bfs}"
                            ));
                        }
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for q in [2u64, 3, 4] {
            for r in 1..=r_decay {
                for d in 0..=(2 * r) {
                    let ratio = conv(q, r, r, d) as f64 / (q as f64).powf((2 * r - d) as f64 / 2.0);
                    worst = worst.max(ratio);
                    if ratio > CONVOLUTION_CONSTANT {
                        return Err(format!(
                            "convolution decay ratio {ratio:.4} at q={q} r={r} d={d} exceeds {CONVOLUTION_CONSTANT}"
                        ));
                    }
                }
            }
        }
        Ok(format!(
            "closed form == BFS for q in {{2,3}}, radii <= {r_oracle}; max decay ratio {worst:.4} <= {CONVOLUTION_CONSTANT}"
        ))
    })();
    finish(4, "tree-convolution", t0, result)
}

pub fn c5_ramanujan_certification(_quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let result = (|| {
        let g = build_lps(5, 13, false).map_err(|e| e.to_string())?;
        if g.vertex_count() != 1092 {
            return Err(format!(
                "expected 1092 vertices, built {}",
                g.vertex_count()
            ));
        }
        let rep = ramanujan_certificate::<f64>(&g).map_err(|e| e.to_string())?;
        if !rep.adjacency_ok {
            return Err(format!(
                "max nontrivial |lambda| = {:.9} > 2 sqrt(5) + 1e-6",
                rep.max_nontrivial_adjacency
            ));
        }
        if !rep.nb_ok {
            return Err(format!(
                "max nontrivial |mu| = {:.9} > sqrt(5) + 1e-6",
                rep.max_nontrivial_nb
            ));
        }
        if !rep.consistent {
            return Err("adjacency and non-backtracking certificates disagree".into());
        }
        Ok(format!(
            "lps(5,13): n=1092, max |lambda| {:.6} <= {:.6}, max |mu| {:.6} <= {:.6}",
            rep.max_nontrivial_adjacency,
            rep.adjacency_threshold,
            rep.max_nontrivial_nb,
            rep.nb_threshold
        ))
    })();
    finish(5, "ramanujan-certification", t0, result)
}

fn ihara_family(quick: bool) -> Vec<Graph> {
    let mut graphs = vec![petersen(), complete(4).unwrap(), cycle(10).unwrap()];
    if !quick {
        graphs.push(build_cayley_sl2(7, GeneratorFamily::Elementary).unwrap());
        graphs.push(random_regular(200, 6, ACCEPT_SEED).unwrap());
    } else {
        graphs.push(build_cayley_sl2(3, GeneratorFamily::Elementary).unwrap());
        graphs.push(random_regular(40, 4, ACCEPT_SEED).unwrap());
    }
    graphs
}

pub fn c6_ihara_bass(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let result = (|| {
        let mut worst: f64 = 0.0;
        for g in ihara_family(quick) {
            let rep = ihara_bass_check::<f64>(&g, 10, ACCEPT_SEED).map_err(|e| e.to_string())?;
            for s in &rep.samples {
                if s.sign_lhs != s.sign_rhs {
                    return Err(format!(
                        "{}: determinant signs differ at u={}",
                        g.provenance, s.u
                    ));
                }
            }
            if rep.max_log_gap > 1e-8 {
                return Err(format!(
                    "{}: relative determinant gap {} > 1e-8",
                    g.provenance, rep.max_log_gap
                ));
            }
            worst = worst.max(rep.max_log_gap);
        }
        Ok(format!(
            "det(I-uB) == (1-u^2)^(E-V) det(I-uA+qu^2) on 5 graphs x 10 u, worst gap {worst:.2e}"
        ))
    })();
    finish(6, "ihara-bass-identity", t0, result)
}

pub fn c7_density_profile_consistency(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let grid = [2.1f64, 2.3, 2.5, 3.0, 4.0, 6.0, 10.0];
    let result = (|| {
        let mut graphs = ihara_family(quick);
        if !quick {
            graphs.push(build_lps(5, 13, false).map_err(|e| e.to_string())?);
        }
        for g in graphs {
            let spec = adjacency_spectrum::<f64>(&g).map_err(|e| e.to_string())?;
            let prof = density_profile(&spec, g.q() as u64, &grid).map_err(|e| e.to_string())?;
            let nb = nonbacktracking_from_adjacency(&spec, &g).map_err(|e| e.to_string())?;
            let prof_nb =
                density_profile_nb(&nb, g.q() as u64, &grid).map_err(|e| e.to_string())?;
            let mut prev = usize::MAX;
            for (&(p, m), &(_, m2)) in prof.samples.iter().zip(&prof_nb.samples) {
                if m != m2 {
                    return Err(format!(
                        "{}: M({p}) = {m} from adjacency but {m2} from non-backtracking",
                        g.provenance
                    ));
                }
                if m > prev {
                    return Err(format!("{}: M(p) increased at p={p}", g.provenance));
                }
                prev = m;
            }
            if matches!(g.provenance, latspec_core::graphs::Provenance::Lps { .. }) {
                if let Some(&(p, m)) = prof.samples.iter().find(|&&(_, m)| m != 0) {
                    return Err(format!("lps profile not empty: M({p}) = {m}"));
                }
            }
        }
        Ok(
            "M(p) matches through the dictionary, nonincreasing, and vanishes above 2 on lps(5,13)"
                .into(),
        )
    })();
    finish(7, "density-profile-consistency", t0, result)
}

pub fn c8_lifting_curves(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let result = (|| {
        let mut kappas = Vec::new();
        let levels: &[u32] = if quick { &[5, 7] } else { &[5, 7, 11, 13] };
        for &level in levels {
            let grid: Vec<i64> = (1..=64).collect();
            let curve =
                coverage_curve(&principal2(level), &grid, false).map_err(|e| e.to_string())?;
            let mut prev = 0.0;
            for row in &curve.rows {
                if row.fraction < prev {
                    return Err(format!("N={level}: coverage not monotone at T={}", row.t));
                }
                prev = row.fraction;
            }
            if prev < 1.0 {
                return Err(format!("N={level}: coverage does not reach 1.0 by T=64"));
            }
            let k = lifting_exponent(&curve, 0.99);
            if !k.reached {
                return Err(format!("N={level}: 0.99 crossing not reached"));
            }
            if let Some(&(_, pilot)) = KAPPA_PILOT.iter().find(|&&(n, _)| n == level) {
                if (k.kappa - pilot).abs() > 1e-3 {
                    return Err(format!(
                        "N={level}: kappa(0.99) = {:.4} drifted from the recorded {pilot:.4}",
                        k.kappa
                    ));
                }
            }
            kappas.push(k.kappa);
        }
        let max = kappas.iter().cloned().fold(f64::MIN, f64::max);
        let min = kappas.iter().cloned().fold(f64::MAX, f64::min);
        if max - min > 0.6 {
            return Err(format!(
                "kappa band width {:.3} > 0.6: {kappas:?}",
                max - min
            ));
        }
        Ok(format!(
            "monotone, saturating curves; kappa(0.99) in [{min:.3}, {max:.3}] (band {:.3} <= 0.6)",
            max - min
        ))
    })();
    finish(8, "optimal-lifting-curves", t0, result)
}

pub fn c9_xi_bracket(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let samples: u64 = if quick { 100_000 } else { 1_000_000 };
    let result = (|| {
        for t in 1..=10u32 {
            let tf = t as f64;
            let est = xi_p_montecarlo(&sl2_diag::<f64>(tf), 2.0, samples, ACCEPT_SEED)
                .map_err(|e| e.to_string())?;
            let (lo, hi) = xi_bounds(tf, 2.0);
            if est.estimate < lo - 3.0 * est.std_error {
                return Err(format!(
                    "t={t}: estimate {} below e^(-t/2) - 3 SE = {}",
                    est.estimate,
                    lo - 3.0 * est.std_error
                ));
            }
            if est.estimate > hi + 3.0 * est.std_error {
                return Err(format!(
                    "t={t}: estimate {} above 2(1+t)e^(-t/2) + 3 SE = {}",
                    est.estimate,
                    hi + 3.0 * est.std_error
                ));
            }
        }
        // seed reproducibility at one point
        let a = xi_p_montecarlo(&sl2_diag::<f64>(5.0), 2.0, samples, ACCEPT_SEED)
            .map_err(|e| e.to_string())?;
        let b = xi_p_montecarlo(&sl2_diag::<f64>(5.0), 2.0, samples, ACCEPT_SEED)
            .map_err(|e| e.to_string())?;
        if a.estimate.to_bits() != b.estimate.to_bits() {
            return Err("same seed did not reproduce bit-identical estimates".into());
        }
        Ok(format!(
            "Xi_2(a_t) within [e^(-t/2)-3SE, 2(1+t)e^(-t/2)+3SE] for t=1..10 at {samples} samples; bit-reproducible"
        ))
    })();
    finish(9, "harish-chandra-bracket", t0, result)
}

pub fn c10_walk_traces(quick: bool) -> CriterionReport {
    let t0 = Instant::now();
    let result = (|| {
        let mut graphs = vec![petersen(), complete(4).unwrap(), cycle(10).unwrap()];
        graphs.push(random_regular(if quick { 60 } else { 200 }, 6, ACCEPT_SEED).unwrap());
        let mut worst: f64 = 0.0;
        for g in graphs {
            let rep = walk_trace_check(&g, 8).map_err(|e| e.to_string())?;
            if rep.max_rel_err >= 1e-6 {
                return Err(format!(
                    "{}: spectral power sums off by {:.2e}",
                    g.provenance, rep.max_rel_err
                ));
            }
            worst = worst.max(rep.max_rel_err);
        }
        Ok(format!(
            "power sums == DP walk counts (adjacency and non-backtracking), k <= 8, worst rel err {worst:.2e}"
        ))
    })();
    finish(10, "walk-trace-identity", t0, result)
}

pub fn run_all(quick: bool) -> Vec<CriterionReport> {
    vec![
        c1_counting_oracle(quick),
        c2_growth_exponent(quick),
        c3_fixed_point_identity(quick),
        c4_tree_convolution(quick),
        c5_ramanujan_certification(quick),
        c6_ihara_bass(quick),
        c7_density_profile_consistency(quick),
        c8_lifting_curves(quick),
        c9_xi_bracket(quick),
        c10_walk_traces(quick),
    ]
}
