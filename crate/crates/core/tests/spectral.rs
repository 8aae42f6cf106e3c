use latspec_core::graphs::*;
use latspec_core::spectral::*;
use num_complex::Complex;

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b}");
}

/// Multiset comparison by greedy nearest matching.
fn assert_same_multiset(a: &[Complex<f64>], b: &[Complex<f64>], tol: f64, ctx: &str) {
    assert_eq!(a.len(), b.len(), "{ctx}: length");
    let mut used = vec![false; b.len()];
    for x in a {
        let best = (0..b.len())
            .filter(|&i| !used[i])
            .min_by(|&i, &j| (x - b[i]).norm().partial_cmp(&(x - b[j]).norm()).unwrap())
            .unwrap();
        assert!(
            (x - b[best]).norm() < tol,
            "{ctx}: {x} unmatched (closest {})",
            b[best]
        );
        used[best] = true;
    }
}

#[test]
fn small_spectra_known() {
    let spec = adjacency_spectrum::<f64>(&cycle(4).unwrap()).unwrap();
    let expect = [2.0, 0.0, 0.0, -2.0];
    for (a, b) in spec.values.iter().zip(expect) {
        assert_close(*a, b, 1e-10);
    }
    let spec = adjacency_spectrum::<f64>(&complete(4).unwrap()).unwrap();
    let expect = [3.0, -1.0, -1.0, -1.0];
    for (a, b) in spec.values.iter().zip(expect) {
        assert_close(*a, b, 1e-10);
    }
}

#[test]
fn petersen_spectrum() {
    // {3, 1^5, (-2)^4}
    let spec = adjacency_spectrum::<f64>(&petersen()).unwrap();
    assert_close(spec.values[0], 3.0, 1e-10);
    for i in 1..6 {
        assert_close(spec.values[i], 1.0, 1e-10);
    }
    for i in 6..10 {
        assert_close(spec.values[i], -2.0, 1e-10);
    }
}

#[test]
fn cayley_graphs_have_spectral_gap() {
    // dense eigensolve where it is cheap; for larger p the BFS connectivity
    // test in graphs.rs is the same statement (lambda_2 < k iff connected)
    for p in [3u32, 5, 7, 11] {
        let g = build_cayley_sl2(p, GeneratorFamily::Elementary).unwrap();
        let spec = adjacency_spectrum::<f64>(&g).unwrap();
        assert_close(spec.values[0], 4.0, 1e-8);
        assert!(spec.values[1] < 4.0 - 1e-6, "no gap at p={p}");
    }
}

#[test]
fn cycle_nonbacktracking_all_unit_modulus() {
    for n in [4usize, 5, 10] {
        let g = cycle(n).unwrap();
        for nb in [
            nonbacktracking_spectrum::<f64>(&g).unwrap(),
            nonbacktracking_spectrum_dense::<f64>(&g).unwrap(),
        ] {
            assert_eq!(nb.values.len(), 2 * n);
            for mu in &nb.values {
                assert_close(mu.norm(), 1.0, 1e-8);
            }
        }
    }
}

#[test]
fn quadratic_route_matches_dense_oracle() {
    let graphs = vec![
        petersen(),
        complete(4).unwrap(),
        cycle(10).unwrap(),
        build_cayley_sl2(3, GeneratorFamily::Elementary).unwrap(),
        random_regular(20, 4, 7).unwrap(),
    ];
    for g in graphs {
        let quad = nonbacktracking_spectrum::<f64>(&g).unwrap().values;
        let dense = nonbacktracking_spectrum_dense::<f64>(&g).unwrap().values;
        assert_same_multiset(&quad, &dense, 1e-6, &format!("{}", g.provenance));
    }
}

#[test]
fn nonbacktracking_requires_simple_graph() {
    let multi = from_edge_list("0 1\n0 1\n").unwrap();
    assert!(!multi.is_simple());
    assert!(nonbacktracking_spectrum_dense::<f64>(&multi).is_err());
}

#[test]
fn ihara_bass_identity_small_graphs() {
    for g in [
        petersen(),
        complete(4).unwrap(),
        cycle(10).unwrap(),
        build_cayley_sl2(5, GeneratorFamily::Elementary).unwrap(),
        random_regular(50, 4, 3).unwrap(),
    ] {
        let rep = ihara_bass_check::<f64>(&g, 10, 11).unwrap();
        assert!(
            rep.max_log_gap < 1e-8,
            "{}: gap {}",
            g.provenance,
            rep.max_log_gap
        );
        for s in &rep.samples {
            assert_eq!(s.sign_lhs, s.sign_rhs);
        }
    }
}

/// Prism over C_n: 3-regular, and for large n the side eigenvalue
/// 2cos(2 pi/n) + 1 crosses 2 sqrt(2).
fn circular_ladder(n: usize) -> latspec_core::graphs::Graph {
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("{} {}\n", i, (i + 1) % n));
        text.push_str(&format!("{} {}\n", n + i, n + (i + 1) % n));
        text.push_str(&format!("{} {}\n", i, n + i));
    }
    from_edge_list(&text).unwrap()
}

#[test]
fn ramanujan_certificates_consistent() {
    for (g, expect_ok) in [
        (petersen(), true),
        (complete(4).unwrap(), true),
        (cycle(10).unwrap(), true),
        // 1 + sqrt(5) = 3.236 < 2 sqrt(3): Ramanujan at this size
        (
            build_cayley_sl2(5, GeneratorFamily::Elementary).unwrap(),
            true,
        ),
        // 2cos(2 pi/24) + 1 = 2.966 > 2 sqrt(2): not Ramanujan
        (circular_ladder(24), false),
    ] {
        let rep = ramanujan_certificate::<f64>(&g).unwrap();
        assert!(rep.consistent, "{}: {rep:?}", g.provenance);
        assert_eq!(rep.adjacency_ok, expect_ok, "{}: {rep:?}", g.provenance);
    }
}

#[test]
fn density_profile_ramanujan_graphs_empty_above_two() {
    let grid = [2.1f64, 2.5, 3.0, 5.0, 10.0];
    for g in [petersen(), complete(4).unwrap()] {
        let spec = adjacency_spectrum::<f64>(&g).unwrap();
        let prof = density_profile(&spec, g.q() as u64, &grid).unwrap();
        for &(_, m) in &prof.samples {
            assert_eq!(m, 0, "{}", g.provenance);
        }
    }
}

#[test]
fn density_profile_routes_agree_and_monotone() {
    let grid = [2.1f64, 2.3, 2.5, 3.0, 4.0, 6.0, 10.0];
    for g in [
        petersen(),
        cycle(10).unwrap(),
        build_cayley_sl2(5, GeneratorFamily::Elementary).unwrap(),
        build_cayley_sl2(7, GeneratorFamily::Elementary).unwrap(),
        random_regular(60, 4, 5).unwrap(),
    ] {
        let spec = adjacency_spectrum::<f64>(&g).unwrap();
        let prof = density_profile(&spec, g.q() as u64, &grid).unwrap();
        let nb = nonbacktracking_from_adjacency(&spec, &g).unwrap();
        let prof_nb = density_profile_nb(&nb, g.q() as u64, &grid).unwrap();
        let mut prev = usize::MAX;
        for (&(p, m), &(p2, m2)) in prof.samples.iter().zip(&prof_nb.samples) {
            assert_eq!(p, p2);
            assert_eq!(m, m2, "{} at p={p}", g.provenance);
            assert!(m <= prev, "M(p) must be nonincreasing");
            prev = m;
        }
    }
}

#[test]
fn density_profile_wants_regular_input() {
    let spec = GraphSpectrum {
        values: vec![2.5, 0.0, -1.0],
    };
    assert!(density_profile(&spec, 2, &[2.5]).is_err());
}

#[test]
fn random_regular_profiles_are_nearly_ramanujan() {
    // 6-regular random graphs: M(2.5) stays small across seeds
    let grid = [2.5f64];
    for seed in 0..5u64 {
        let g = random_regular(1000, 6, seed).unwrap();
        let spec = adjacency_spectrum::<f64>(&g).unwrap();
        let prof = density_profile(&spec, 5, &grid).unwrap();
        assert!(prof.samples[0].1 <= 10, "seed {seed}: {:?}", prof.samples);
    }
}

#[test]
fn alpha_fit_needs_three_sizes() {
    let grid = [2.1f64, 2.3, 2.5, 3.0, 4.0];
    let profiles: Vec<_> = [5u32, 7, 11]
        .iter()
        .map(|&p| {
            let g = build_cayley_sl2(p, GeneratorFamily::Elementary).unwrap();
            let spec = adjacency_spectrum::<f64>(&g).unwrap();
            density_profile(&spec, g.q() as u64, &grid).unwrap()
        })
        .collect();
    let fit = fit_alpha(&profiles).unwrap();
    assert!(fit.alpha.is_finite());
    assert!(fit.points > 0);
    assert!(fit_alpha(&profiles[..2]).is_none());
}

#[test]
fn adjacency_spectrum_is_traceless() {
    for g in [
        petersen(),
        cycle(9).unwrap(),
        random_regular(40, 4, 2).unwrap(),
    ] {
        let spec = adjacency_spectrum::<f64>(&g).unwrap();
        let sum: f64 = spec.values.iter().sum();
        assert!(
            sum.abs() < 1e-6 * g.vertex_count() as f64,
            "{}",
            g.provenance
        );
        // top of the spectrum is the degree
        assert!((spec.values[0] - g.degree() as f64).abs() < 1e-8);
    }
}

#[test]
fn ihara_pairing_detects_p_sensitively() {
    // for every nontrivial |lambda| > 2 sqrt(q), the larger quadratic root
    // has modulus exactly q^{1 - 1/p(lambda)}
    let g = circular_ladder(24);
    let q = g.q() as f64;
    let spec = adjacency_spectrum::<f64>(&g).unwrap();
    let mut checked = 0;
    for &lam in spec.values.iter().skip(1) {
        if lam.abs() <= 2.0 * q.sqrt() || (lam - (q + 1.0)).abs() < 1e-8 {
            continue;
        }
        let p = latspec_core::trees::eigen_to_p(lam, g.q() as u64).unwrap();
        let mu = (lam.abs() + (lam * lam - 4.0 * q).sqrt()) / 2.0;
        assert!((mu - q.powf(1.0 - 1.0 / p)).abs() < 1e-9, "lambda {lam}");
        checked += 1;
    }
    assert!(checked > 0, "ladder should have non-tempered eigenvalues");
}

#[test]
fn walk_traces_match_power_sums() {
    for g in [petersen(), complete(4).unwrap(), cycle(10).unwrap()] {
        let rep = walk_trace_check(&g, 8).unwrap();
        assert!(rep.max_rel_err < 1e-6, "{}: {rep:?}", g.provenance);
    }
    // K4 closed triangles: tr A^3 = 27 + 3(-1)^3 = 24
    let rep = walk_trace_check(&complete(4).unwrap(), 3).unwrap();
    assert_eq!(rep.rows[2].adjacency_walks, 24);
    // triangle-free graphs have no closed 3-walks of either kind
    let rep = walk_trace_check(&petersen(), 3).unwrap();
    assert_eq!(rep.rows[2].adjacency_walks, 0);
    assert_eq!(rep.rows[2].nb_walks, 0);
    assert!(rep.rows[2].adjacency_power_sum.abs() < 1e-8);
}
