//! Regular-graph builders and BFS utilities: the quaternion Cayley graphs on
//! PSL2/PGL2 over a prime field, SL2(F_p) Cayley test graphs, seeded random
//! regular graphs from the configuration model, small named graphs, and an
//! edge-list file format (one "u v" pair per line, 0-indexed).

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Lps { p: u32, q: u32, bipartite: bool },
    CayleySl2 { p: u32, family: GeneratorFamily },
    RandomRegular { n: usize, k: usize, seed: u64 },
    EdgeList,
    Named(String),
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Lps { p, q, bipartite } => {
                write!(
                    f,
                    "lps({p},{q}){}",
                    if *bipartite { " bipartite" } else { "" }
                )
            }
            Provenance::CayleySl2 { p, family } => write!(f, "cayley_sl2({p},{family:?})"),
            Provenance::RandomRegular { n, k, seed } => {
                write!(f, "random_regular({n},{k},seed={seed})")
            }
            Provenance::EdgeList => write!(f, "edge-list"),
            Provenance::Named(s) => write!(f, "{s}"),
        }
    }
}

/// A finite k-regular undirected graph. Regularity is enforced at
/// construction; `simple` records whether loops or parallel edges occur.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    degree: usize,
    adj: Vec<Vec<u32>>,
    simple: bool,
    pub provenance: Provenance,
}

impl Graph {
    fn from_adj(adj: Vec<Vec<u32>>, provenance: Provenance) -> Result<Graph> {
        let n = adj.len();
        if n == 0 {
            return Err(Error::input("empty graph"));
        }
        let degree = adj[0].len();
        if adj.iter().any(|l| l.len() != degree) {
            return Err(Error::input("graph is not regular"));
        }
        let mut simple = true;
        for (v, list) in adj.iter().enumerate() {
            let mut seen = list.clone();
            seen.sort_unstable();
            if list.iter().any(|&w| w as usize == v) || seen.windows(2).any(|w| w[0] == w[1]) {
                simple = false;
            }
        }
        Ok(Graph {
            n,
            degree,
            adj,
            simple,
            provenance,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Branching factor q = degree - 1.
    pub fn q(&self) -> usize {
        self.degree - 1
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.degree / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn bfs_distances(&self, src: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Ok(()) if connected, otherwise an error naming a separated pair.
    pub fn check_connected(&self) -> Result<()> {
        let dist = self.bfs_distances(0);
        match dist.iter().position(|&d| d == u32::MAX) {
            None => Ok(()),
            Some(v) => Err(Error::input(format!(
                "graph is disconnected: no path between vertices 0 and {v}"
            ))),
        }
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![2u8; self.n];
        for start in 0..self.n as u32 {
            if color[start as usize] != 2 {
                continue;
            }
            color[start as usize] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if color[w as usize] == 2 {
                        color[w as usize] = 1 - color[v as usize];
                        queue.push_back(w);
                    } else if color[w as usize] == color[v as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Degree histogram, mostly for sanity checks.
    pub fn degree_histogram(&self) -> HashMap<usize, usize> {
        let mut h = HashMap::new();
        for list in &self.adj {
            *h.entry(list.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for v in 0..self.n as u32 {
            for &w in self.neighbors(v) {
                if v <= w {
                    out.push_str(&format!("{v} {w}\n"));
                }
            }
        }
        out
    }
}

/// Cycle graph C_n (2-regular).
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::input("cycle needs n >= 3"));
    }
    let adj = (0..n)
        .map(|v| vec![((v + 1) % n) as u32, ((v + n - 1) % n) as u32])
        .collect();
    Graph::from_adj(adj, Provenance::Named(format!("C{n}")))
}

/// Complete graph K_n.
pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::input("complete graph needs n >= 2"));
    }
    let adj = (0..n)
        .map(|v| (0..n).filter(|&w| w != v).map(|w| w as u32).collect())
        .collect();
    Graph::from_adj(adj, Provenance::Named(format!("K{n}")))
}

/// The Petersen graph: Kneser graph K(5,2), 3-regular on 10 vertices.
pub fn petersen() -> Graph {
    let pairs: Vec<(u8, u8)> = (0..5u8)
        .flat_map(|a| ((a + 1)..5).map(move |b| (a, b)))
        .collect();
    let adj: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(c, d))| a != c && a != d && b != c && b != d)
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect();
    Graph::from_adj(adj, Provenance::Named("petersen".into())).expect("3-regular")
}

/// Parse the edge-list format: one "u v" pair per line, 0-indexed,
/// undirected; '#' starts a comment. The graph must come out regular.
pub fn from_edge_list(text: &str) -> Result<Graph> {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut max_v = 0u32;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |s: Option<&str>| -> Result<u32> {
            s.ok_or_else(|| Error::input(format!("line {}: expected 'u v'", lineno + 1)))?
                .parse()
                .map_err(|_| Error::input(format!("line {}: bad vertex id", lineno + 1)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        max_v = max_v.max(u).max(v);
        edges.push((u, v));
    }
    if edges.is_empty() {
        return Err(Error::input("no edges in file"));
    }
    let n = max_v as usize + 1;
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    Graph::from_adj(adj, Provenance::EdgeList)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn legendre(a: u32, p: u32) -> i32 {
    // Euler's criterion
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = pow_mod(a as u64, (p as u64 - 1) / 2, p as u64);
    if e == 1 {
        1
    } else {
        -1
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn sqrt_mod(a: u32, p: u32) -> Option<u32> {
    (0..p).find(|&x| (x as u64 * x as u64) % p as u64 == a as u64 % p as u64)
}

/// The p+1 integer quaternion solutions of a^2+b^2+c^2+d^2 = p with a odd
/// positive and b, c, d even (p = 1 mod 4).
pub fn quaternion_generators(p: u32) -> Vec<[i32; 4]> {
    let bound = (p as f64).sqrt() as i32 + 1;
    let mut out = Vec::new();
    for a in (1..=bound).step_by(2) {
        for b in (-bound..=bound).filter(|x| x % 2 == 0) {
            for c in (-bound..=bound).filter(|x| x % 2 == 0) {
                for d in (-bound..=bound).filter(|x| x % 2 == 0) {
                    if a * a + b * b + c * c + d * d == p as i32 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

type ProjMat = [u32; 4];

/// Canonical representative of +/-M in SL2(F_q): first nonzero entry lies in
/// [1, (q-1)/2].
fn psl2_canon(m: ProjMat, q: u32) -> ProjMat {
    let half = (q - 1) / 2;
    for &x in &m {
        if x != 0 {
            if x <= half {
                return m;
            }
            return [
                (q - m[0]) % q,
                (q - m[1]) % q,
                (q - m[2]) % q,
                (q - m[3]) % q,
            ];
        }
    }
    m
}

/// Canonical representative modulo all scalars (PGL2): scale so the first
/// nonzero entry is 1.
fn pgl2_canon(m: ProjMat, q: u32) -> ProjMat {
    let first = m.iter().copied().find(|&x| x != 0).expect("nonzero matrix");
    let inv = pow_mod(first as u64, q as u64 - 2, q as u64) as u32;
    [
        (m[0] as u64 * inv as u64 % q as u64) as u32,
        (m[1] as u64 * inv as u64 % q as u64) as u32,
        (m[2] as u64 * inv as u64 % q as u64) as u32,
        (m[3] as u64 * inv as u64 % q as u64) as u32,
    ]
}

fn mat_mul_mod(a: ProjMat, b: ProjMat, q: u32) -> ProjMat {
    let q = q as u64;
    let m = |x: u64| (x % q) as u32;
    [
        m(a[0] as u64 * b[0] as u64 + a[1] as u64 * b[2] as u64),
        m(a[0] as u64 * b[1] as u64 + a[1] as u64 * b[3] as u64),
        m(a[2] as u64 * b[0] as u64 + a[3] as u64 * b[2] as u64),
        m(a[2] as u64 * b[1] as u64 + a[3] as u64 * b[3] as u64),
    ]
}

/// The quaternion (p+1)-regular graph over F_q on q(q^2-1)/2 vertices.
///
/// Generators are the images of the p+1 quaternion solutions under
/// a + bi, c + di / -c + di, a - bi with i^2 = -1 mod q. When p is a square
/// mod q they rescale to determinant 1 and give the classical non-bipartite
/// Cayley graph on PSL2(F_q). When p is a non-residue, the classical object
/// is the bipartite Cayley graph on PGL2(F_q) (take `bipartite = true`);
/// with `bipartite = false` the bipartite graph is folded by its canonical
/// part-swapping involution (left multiplication by a fixed involution
/// outside PSL2), which lands back on PSL2(F_q), stays (p+1)-regular, keeps
/// the trivial eigenvalue p+1, discards -(p+1), and inherits the nontrivial
/// spectrum bound 2 sqrt(p) from the cover.
pub fn build_lps(p: u32, q: u32, bipartite: bool) -> Result<Graph> {
    if !is_prime(p) || !is_prime(q) {
        return Err(Error::input("p and q must be prime"));
    }
    if p % 4 != 1 || q % 4 != 1 {
        return Err(Error::input("p and q must be 1 mod 4"));
    }
    if p == q {
        return Err(Error::input("p and q must be distinct"));
    }
    if (q as u64) * (q as u64) <= 4 * p as u64 {
        return Err(Error::input("need q > 2 sqrt(p)"));
    }
    let residue = legendre(p, q) == 1;
    if residue && bipartite {
        return Err(Error::input(
            "p is a square mod q: the quaternion graph on PSL2 is not bipartite",
        ));
    }
    let i_unit = sqrt_mod(q - 1, q).expect("q = 1 mod 4 has sqrt(-1)");
    let qm = q as u64;
    let wrap = |x: i64| x.rem_euclid(q as i64) as u64;
    let mut gens: Vec<ProjMat> = Vec::new();
    for [a, b, c, d] in quaternion_generators(p) {
        let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
        let m: ProjMat = [
            ((wrap(a) + wrap(b) * i_unit as u64) % qm) as u32,
            ((wrap(c) + wrap(d) * i_unit as u64) % qm) as u32,
            ((wrap(-c) + wrap(d) * i_unit as u64) % qm) as u32,
            ((wrap(a) + wrap(-b) * i_unit as u64) % qm) as u32,
        ];
        gens.push(m);
    }
    if gens.len() != p as usize + 1 {
        return Err(Error::numerical(format!(
            "expected p+1 quaternion generators, found {}",
            gens.len()
        )));
    }

    let scale = |m: ProjMat, factor: u32| -> ProjMat {
        [
            (m[0] as u64 * factor as u64 % qm) as u32,
            (m[1] as u64 * factor as u64 % qm) as u32,
            (m[2] as u64 * factor as u64 % qm) as u32,
            (m[3] as u64 * factor as u64 % qm) as u32,
        ]
    };
    let det_of = |m: ProjMat| -> u32 {
        (((m[0] as u64 * m[3] as u64 % qm) + qm - (m[1] as u64 * m[2] as u64 % qm)) % qm) as u32
    };
    // Rescale a square-determinant matrix to determinant 1 and fold +/-.
    let to_psl2 = move |m: ProjMat| -> ProjMat {
        let d = det_of(m);
        let r = sqrt_mod(d, q).expect("square determinant class");
        let rinv = pow_mod(r as u64, qm - 2, qm) as u32;
        psl2_canon(scale(m, rinv), q)
    };

    if residue {
        gens = gens.iter().map(|&m| to_psl2(m)).collect();
    } else if bipartite {
        gens = gens.iter().map(|&m| pgl2_canon(m, q)).collect();
    }

    // Part-swapping involution for the folded non-residue case: any traceless
    // matrix squares to a scalar; pick the least non-square nu for the det.
    let nu = (2..q)
        .find(|&x| legendre(x, q) == -1)
        .expect("non-square exists");
    let g0: ProjMat = [0, 1, nu, 0];
    let neighbor = move |v: ProjMat, s: ProjMat| -> ProjMat {
        if residue {
            psl2_canon(mat_mul_mod(v, s, q), q)
        } else if bipartite {
            pgl2_canon(mat_mul_mod(v, s, q), q)
        } else {
            // v in PSL2, det(v s) is a non-square class; g0 (v s) is square
            // class again and represents the swapped-part orbit.
            to_psl2(mat_mul_mod(g0, mat_mul_mod(v, s, q), q))
        }
    };

    // Vertex set: PSL2(F_q) (det 1 mod +/-) or, for the bipartite variant,
    // PGL2(F_q) (all of GL2 mod scalars).
    let mut index: HashMap<ProjMat, u32> = HashMap::new();
    let mut verts: Vec<ProjMat> = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let det = det_of([a, b, c, d]);
                    let keep = if bipartite { det != 0 } else { det == 1 };
                    if !keep {
                        continue;
                    }
                    let key = if bipartite {
                        pgl2_canon([a, b, c, d], q)
                    } else {
                        psl2_canon([a, b, c, d], q)
                    };
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(key) {
                        e.insert(verts.len() as u32);
                        verts.push(key);
                    }
                }
            }
        }
    }

    let adj: Vec<Vec<u32>> = verts
        .iter()
        .map(|&v| {
            gens.iter()
                .map(|&s| {
                    let w = neighbor(v, s);
                    *index.get(&w).expect("group closed under generators")
                })
                .collect()
        })
        .collect();
    let g = Graph::from_adj(
        adj,
        Provenance::Lps {
            p,
            q,
            bipartite: !residue && bipartite,
        },
    )?;
    g.check_connected()?;
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// Shears `[[1,±1],[0,1]]`, `[[1,0],[±1,1]]`; 4-regular.
    Elementary,
    /// Shears with offset 2; 4-regular, still generating for p > 2.
    Shear2,
}

impl std::fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneratorFamily::Elementary => write!(f, "elementary"),
            GeneratorFamily::Shear2 => write!(f, "shear2"),
        }
    }
}

/// Cayley graph of SL2(F_p) with a symmetric shear generating set.
/// A spectral-gap test family that is not Ramanujan in general.
pub fn build_cayley_sl2(p: u32, family: GeneratorFamily) -> Result<Graph> {
    if !is_prime(p) || p < 3 {
        return Err(Error::input("p must be an odd prime"));
    }
    let t = match family {
        GeneratorFamily::Elementary => 1u32,
        GeneratorFamily::Shear2 => 2u32,
    };
    let gens: Vec<ProjMat> = vec![
        [1, t, 0, 1],
        [1, p - t, 0, 1],
        [1, 0, t, 1],
        [1, 0, p - t, 1],
    ];
    let mut index: HashMap<ProjMat, u32> = HashMap::new();
    let mut verts: Vec<ProjMat> = Vec::new();
    let pm = p as u64;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = ((a as u64 * d as u64 % pm) + pm - (b as u64 * c as u64 % pm)) % pm;
                    if det != 1 {
                        continue;
                    }
                    let m = [a, b, c, d];
                    index.insert(m, verts.len() as u32);
                    verts.push(m);
                }
            }
        }
    }
    let adj: Vec<Vec<u32>> = verts
        .iter()
        .map(|&v| {
            gens.iter()
                .map(|&s| *index.get(&mat_mul_mod(v, s, p)).expect("closed"))
                .collect()
        })
        .collect();
    let g = Graph::from_adj(adj, Provenance::CayleySl2 { p, family })?;
    g.check_connected().map_err(|_| {
        Error::input(format!(
            "generator family {family} does not generate SL2(F_{p})"
        ))
    })?;
    Ok(g)
}

/// Configuration-model k-regular simple graph, conditioned on simplicity by
/// retrying stub pairs (restarting the pairing when it wedges);
/// deterministic for a given seed.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if !(n * k).is_multiple_of(2) {
        return Err(Error::input("n*k must be even"));
    }
    if k >= n {
        return Err(Error::input("need n > k"));
    }
    if k == 0 {
        return Err(Error::input("degree must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const MAX_ATTEMPTS: usize = 500;
    'attempt: for _ in 0..MAX_ATTEMPTS {
        let mut stubs: Vec<u32> = (0..n as u32)
            .flat_map(|v| std::iter::repeat_n(v, k))
            .collect();
        stubs.shuffle(&mut rng);
        let mut adj: Vec<Vec<u32>> = vec![Vec::with_capacity(k); n];
        let mut stuck = 0usize;
        while !stubs.is_empty() {
            if stuck > 200 {
                continue 'attempt;
            }
            let i = rng.gen_range(0..stubs.len());
            let u = stubs.swap_remove(i);
            let j = rng.gen_range(0..stubs.len());
            let v = stubs.swap_remove(j);
            if u == v || adj[u as usize].contains(&v) {
                stubs.push(u);
                stubs.push(v);
                stuck += 1;
                continue;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
            stuck = 0;
        }
        return Graph::from_adj(adj, Provenance::RandomRegular { n, k, seed });
    }
    Err(Error::resource(format!(
        "configuration model failed after {MAX_ATTEMPTS} restarts for n={n}, k={k}"
    )))
}
