use latspec_core::graphs::*;

#[test]
fn named_graphs_shapes() {
    let c10 = cycle(10).unwrap();
    assert_eq!(c10.vertex_count(), 10);
    assert_eq!(c10.degree(), 2);
    assert!(c10.is_simple());
    assert!(c10.is_bipartite());
    let c9 = cycle(9).unwrap();
    assert!(!c9.is_bipartite());
    let k5 = complete(5).unwrap();
    assert_eq!(k5.degree(), 4);
    assert_eq!(k5.edge_count(), 10);
    let p = petersen();
    assert_eq!(p.vertex_count(), 10);
    assert_eq!(p.degree(), 3);
    assert!(p.is_simple());
    assert!(!p.is_bipartite());
}

#[test]
fn adjacency_is_symmetric() {
    for g in [
        petersen(),
        cycle(7).unwrap(),
        build_cayley_sl2(5, GeneratorFamily::Elementary).unwrap(),
        build_lps(5, 13, false).unwrap(),
    ] {
        for v in 0..g.vertex_count() as u32 {
            for &w in g.neighbors(v) {
                let back = g.neighbors(w).iter().filter(|&&x| x == v).count();
                let forth = g.neighbors(v).iter().filter(|&&x| x == w).count();
                assert_eq!(back, forth);
            }
        }
    }
}

#[test]
fn quaternion_generator_count() {
    // p + 1 solutions with a odd positive, b,c,d even
    assert_eq!(quaternion_generators(5).len(), 6);
    assert_eq!(quaternion_generators(13).len(), 14);
    assert_eq!(quaternion_generators(17).len(), 18);
}

#[test]
fn lps_5_13_construction() {
    let g = build_lps(5, 13, false).unwrap();
    assert_eq!(g.vertex_count(), 1092); // |PSL2(F_13)| = 13*168/2
    assert_eq!(g.degree(), 6);
    assert!(g.is_simple());
    assert!(!g.is_bipartite());
    g.check_connected().unwrap();
}

#[test]
fn lps_residue_case_is_classical_cayley() {
    // 17 = 4 mod 13 is a square mod 13: plain PSL2 Cayley graph, 18-regular
    let g = build_lps(17, 13, false).unwrap();
    assert_eq!(g.vertex_count(), 1092);
    assert_eq!(g.degree(), 18);
    assert!(!g.is_bipartite());
    // and the bipartite variant is refused
    assert_eq!(build_lps(17, 13, true).unwrap_err().exit_code(), 2);
}

#[test]
fn lps_nonresidue_bipartite_variant() {
    // legendre(5|17) = -1: the classical object is bipartite on PGL2(F_17),
    // the folded variant lives on PSL2(F_17)
    let g = build_lps(5, 17, true).unwrap();
    assert_eq!(g.vertex_count(), 17 * (17 * 17 - 1)); // |PGL2(F_17)|
    assert_eq!(g.degree(), 6);
    assert!(g.is_bipartite());
    let folded = build_lps(5, 17, false).unwrap();
    assert_eq!(folded.vertex_count(), 17 * (17 * 17 - 1) / 2);
    assert!(!folded.is_bipartite());
}

#[test]
fn lps_rejects_bad_parameters() {
    assert!(build_lps(5, 5, false).is_err());
    assert!(build_lps(3, 13, false).is_err()); // 3 != 1 mod 4
    assert!(build_lps(13, 5, false).is_err()); // q too small
    assert!(build_lps(6, 13, false).is_err()); // not prime
}

#[test]
fn cayley_sl2_orders_and_connectivity() {
    let g = build_cayley_sl2(3, GeneratorFamily::Elementary).unwrap();
    assert_eq!(g.vertex_count(), 24); // |SL2(F_3)|
    assert_eq!(g.degree(), 4);
    for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let g = build_cayley_sl2(p, GeneratorFamily::Elementary).unwrap();
        assert_eq!(
            g.vertex_count() as u64,
            p as u64 * (p as u64 * p as u64 - 1)
        );
        g.check_connected().unwrap();
    }
}

#[test]
fn random_regular_contract() {
    let g = random_regular(10, 3, 12345).unwrap();
    assert_eq!(g.edge_count(), 15);
    assert!(g.is_simple());
    let hist = g.degree_histogram();
    assert_eq!(hist.get(&3), Some(&10));
    // determinism
    let h = random_regular(10, 3, 12345).unwrap();
    assert_eq!(g.to_edge_list(), h.to_edge_list());
    let other = random_regular(10, 3, 54321).unwrap();
    assert_ne!(g.to_edge_list(), other.to_edge_list());
    // parity and degree guards
    assert!(random_regular(9, 3, 0).is_err());
    assert!(random_regular(4, 5, 0).is_err());
}

#[test]
fn edge_list_round_trip() {
    let g = petersen();
    let text = g.to_edge_list();
    let h = from_edge_list(&text).unwrap();
    assert_eq!(h.vertex_count(), 10);
    assert_eq!(h.degree(), 3);
    assert_eq!(h.to_edge_list(), text);
}

#[test]
fn edge_list_rejects_irregular() {
    assert!(from_edge_list("0 1\n1 2\n").is_err());
    assert!(from_edge_list("").is_err());
    assert!(from_edge_list("0 x\n").is_err());
}

#[test]
fn bfs_distances_on_cycle() {
    let g = cycle(10).unwrap();
    let d = g.bfs_distances(0);
    assert_eq!(d[5], 5);
    assert_eq!(d[9], 1);
    let sum: u32 = d.iter().sum();
    assert_eq!(sum, 25);
}

#[test]
fn disconnected_is_reported_with_a_pair() {
    let g = from_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
    let err = g.check_connected().unwrap_err();
    let msg = format!("{err}");
    assert!(msg.contains("0") && msg.contains("3"), "{msg}");
}
