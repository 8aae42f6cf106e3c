use latspec_core::graphs::{build_lps, complete, cycle, petersen};
use latspec_core::lifting::*;
use latspec_core::matgroups::{Ambient, SubgroupKind, SubgroupSpec};

fn principal(level: u32) -> SubgroupSpec {
    SubgroupSpec::new(Ambient::Sl2, SubgroupKind::Principal, level).unwrap()
}

#[test]
fn coverage_at_t1_matches_direct_enumeration() {
    // Independent oracle: enumerate the det-1 matrices with entries in
    // {-1,0,1} and count distinct reductions mod 5.
    let mut mats = Vec::new();
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                for d in -1i64..=1 {
                    if a * d - b * c == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    // direct count: 6 matrices with a = 0, 7 each for a = +/-1
    assert_eq!(mats.len(), 20);
    let mut residues: Vec<Vec<u32>> = mats
        .iter()
        .map(|m| {
            m.iter()
                .map(|&x| x.rem_euclid(5) as u32)
                .collect::<Vec<u32>>()
        })
        .collect();
    residues.sort();
    residues.dedup();
    let expected = residues.len() as f64 / 120.0;

    let curve = coverage_curve(&principal(5), &[1], false).unwrap();
    assert_eq!(curve.rows[0].fraction, expected);
    assert_eq!(curve.rows[0].ball_size, 20);
}

#[test]
fn coverage_monotone_and_saturates() {
    for level in [5u32, 7] {
        let grid: Vec<i64> = (1..=60).collect();
        let curve = coverage_curve(&principal(level), &grid, false).unwrap();
        let mut prev = 0.0;
        for row in &curve.rows {
            assert!(row.fraction >= prev);
            assert!(row.fraction <= 1.0);
            prev = row.fraction;
        }
        assert_eq!(
            prev, 1.0,
            "full residue coverage not reached at level {level}"
        );
    }
}

#[test]
fn ball_sizes_match_counting_module() {
    for t in [1i64, 5, 20] {
        let (from_curve, brute) = ball_size_check(t).unwrap();
        assert_eq!(from_curve, brute);
    }
}

#[test]
fn coverage_independent_of_starting_coset() {
    use rand::{Rng, SeedableRng};
    let spec = principal(5);
    let base = coverage_curve(&spec, &[3], false).unwrap().rows[0].fraction;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let coset = rng.gen_range(0..120u32);
        let translated = coverage_fraction_from_coset(&spec, 3, coset).unwrap();
        assert_eq!(base, translated, "coset {coset}");
    }
}

#[test]
fn annulus_refinement_is_consistent() {
    let spec = principal(5);
    let grid: Vec<i64> = (1..=20).collect();
    let ball = coverage_curve(&spec, &grid, false).unwrap();
    let ann = coverage_curve(&spec, &grid, true).unwrap();
    for (b, a) in ball.rows.iter().zip(&ann.rows) {
        assert!(a.ball_size <= b.ball_size);
        assert!(a.covered <= b.covered);
    }
}

#[test]
fn exponent_crossings() {
    let spec = principal(7);
    let grid: Vec<i64> = (1..=80).collect();
    let curve = coverage_curve(&spec, &grid, false).unwrap();
    // kappa at tiny target: the identity coset is hit at T = 1
    let tiny = lifting_exponent(&curve, 0.5 / curve.index as f64);
    assert!(tiny.reached);
    assert!(tiny.kappa.abs() < 1e-9);
    // kappa monotone in the target fraction
    let k50 = lifting_exponent(&curve, 0.5);
    let k99 = lifting_exponent(&curve, 0.99);
    assert!(k50.reached && k99.reached);
    assert!(k99.kappa >= k50.kappa);
    // unreached targets are reported, not invented
    let short = coverage_curve(&spec, &[1, 2], false).unwrap();
    assert!(!lifting_exponent(&short, 0.999).reached);
}

#[test]
fn exponent_band_for_small_levels() {
    let mut kappas = Vec::new();
    for level in [5u32, 7, 11, 13] {
        let grid: Vec<i64> = (1..=120).collect();
        let curve = coverage_curve(&principal(level), &grid, false).unwrap();
        let k = lifting_exponent(&curve, 0.99);
        assert!(k.reached);
        assert!(k.kappa > 0.8 && k.kappa < 1.4, "level {level}: {}", k.kappa);
        kappas.push(k.kappa);
    }
    let max = kappas.iter().cloned().fold(f64::MIN, f64::max);
    let min = kappas.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max - min <= 0.6, "kappa band too wide: {kappas:?}");
}

#[test]
fn cycle_distance_statistics() {
    let g = cycle(10).unwrap();
    let stats = almost_diameter(&g, 0).unwrap();
    // mean over ordered distinct pairs: 10 * 25 / 90
    assert!((stats.mean - 250.0 / 90.0).abs() < 1e-12);
    assert!(stats.within.is_empty(), "q = 1 has no log_q scale");
    assert!(stats.sampled.is_none());
    let total: u64 = stats.histogram.iter().sum();
    assert_eq!(total, 90);
}

#[test]
fn complete_graph_distances_all_one() {
    let stats = almost_diameter(&complete(5).unwrap(), 0).unwrap();
    assert_eq!(stats.mean, 1.0);
    assert_eq!(stats.histogram.len(), 2);
    assert_eq!(stats.histogram[1], 20);
}

#[test]
fn histogram_is_pair_symmetric() {
    // exact all-pairs BFS counts each unordered pair twice
    let stats = almost_diameter(&petersen(), 0).unwrap();
    for &c in &stats.histogram {
        assert_eq!(c % 2, 0);
    }
}

#[test]
fn disconnected_input_is_an_error() {
    let g = latspec_core::graphs::from_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
    assert!(almost_diameter(&g, 0).is_err());
}

#[test]
fn sampled_sources_above_the_exact_cap() {
    let g = latspec_core::graphs::random_regular(6000, 4, 3).unwrap();
    let stats = almost_diameter(&g, 41).unwrap();
    let info = stats.sampled.expect("6000 vertices must sample sources");
    assert_eq!(info.seed, 41);
    let total: u64 = stats.histogram.iter().sum();
    assert_eq!(total, info.sources as u64 * (g.vertex_count() as u64 - 1));
    // same seed, same sample
    let again = almost_diameter(&g, 41).unwrap();
    assert_eq!(stats.histogram, again.histogram);
}

#[test]
fn lps_distances_concentrate() {
    // Ramanujan concentration near log_q n = 4.35: the measured fractions
    // are 0.9796 within (1+1/4) log_q n and 1.0 within (1+1/2) log_q n.
    let g = build_lps(5, 13, false).unwrap();
    let stats = almost_diameter(&g, 0).unwrap();
    let (eps, frac) = stats.within[1];
    assert_eq!(eps, 0.25);
    assert!(frac >= 0.97, "within fraction {frac}");
    let (eps, frac) = stats.within[2];
    assert_eq!(eps, 0.5);
    assert!(frac >= 0.999, "within fraction {frac}");
    // the mean sits just below log_q n + 1
    assert!((stats.mean - 4.217).abs() < 0.01);
}
