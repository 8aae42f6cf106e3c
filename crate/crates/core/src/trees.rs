//! Exact geometry of the (q+1)-regular tree: sphere and ball sizes, ball
//! intersection counts checked against a BFS oracle, the convolution-decay
//! comparison, and the rank-one dictionary between adjacency eigenvalues and
//! the integrability parameter p.
//!
//! Tree distance plays the role of the length function here, with integer
//! branching factor q (q = 1 degenerates to the bi-infinite line).

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Radii accepted by the exact enumeration paths.
pub const MAX_RADIUS: u32 = 12;

#[derive(Debug, Clone, Copy)]
pub struct TreeModel {
    pub q: u64,
}

impl TreeModel {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::input("branching factor q must be >= 1"));
        }
        Ok(TreeModel { q })
    }

    /// Vertices at distance exactly r: 1, then (q+1) q^{r-1}.
    pub fn sphere_size(&self, r: u32) -> u128 {
        if r == 0 {
            1
        } else {
            (self.q as u128 + 1) * (self.q as u128).pow(r - 1)
        }
    }

    /// Vertices at distance at most r.
    pub fn ball_size(&self, r: u32) -> u128 {
        (0..=r).map(|i| self.sphere_size(i)).sum()
    }
}

/// |B_r1(x) ∩ B_r2(y)| at tree distance d(x,y) = d, by closed form.
///
/// Every vertex z is classified by its attachment point t on the x-y geodesic
/// and its height h above it; the number of branch directions is q+1 at an
/// isolated point (d = 0), q at the geodesic endpoints and q-1 inside.
pub fn tree_convolution(q: u64, r1: u32, r2: u32, d: u32) -> u128 {
    if d > r1 + r2 {
        return 0;
    }
    let q = q as u128;
    let mut total: u128 = 0;
    for t in 0..=d {
        if t > r1 || d - t > r2 {
            continue;
        }
        let h_max = (r1 - t).min(r2 - (d - t));
        total += 1; // the geodesic vertex itself (h = 0)
        if h_max == 0 {
            continue;
        }
        let dirs: u128 = if d == 0 {
            q + 1
        } else if t == 0 || t == d {
            q
        } else {
            q - 1
        };
        if dirs == 0 {
            continue;
        }
        // dirs * (q^{h_max} - 1)/(q - 1) branch vertices with 1 <= h <= h_max
        let geo: u128 = if q == 1 {
            h_max as u128
        } else {
            (q.pow(h_max) - 1) / (q - 1)
        };
        total += dirs * geo;
    }
    total
}

/// Ball-intersection counts for every distance d <= r1 + r2.
#[derive(Debug, Clone)]
pub struct ConvolutionTable {
    pub q: u64,
    pub r1: u32,
    pub r2: u32,
    /// `values[d]` = |B_r1(x) ∩ B_r2(y)| at d(x,y) = d
    pub values: Vec<u128>,
}

pub fn convolution_table(q: u64, r1: u32, r2: u32) -> Result<ConvolutionTable> {
    if r1 > MAX_RADIUS || r2 > MAX_RADIUS {
        return Err(Error::resource(format!("radii capped at {MAX_RADIUS}")));
    }
    TreeModel::new(q)?;
    Ok(ConvolutionTable {
        q,
        r1,
        r2,
        values: (0..=r1 + r2)
            .map(|d| tree_convolution(q, r1, r2, d))
            .collect(),
    })
}

/// BFS oracle for the ball intersection count on an explicitly built
/// truncated tree. Grows the ball of radius r1 around x plus the geodesic
/// ray towards y, then runs a graph BFS from y.
pub fn tree_convolution_bfs(q: u64, r1: u32, r2: u32, d: u32) -> Result<u128> {
    if r1 > MAX_RADIUS || r2 > MAX_RADIUS {
        return Err(Error::resource(format!("radii capped at {MAX_RADIUS}")));
    }
    TreeModel::new(q)?;
    if d > r1 + r2 {
        return Ok(0);
    }
    let q = q as usize;
    // Build the tree: root x = 0, children lists; depth-limited to r1, plus
    // the geodesic ray to y when d > r1.
    let mut depth: Vec<u32> = vec![0];
    let mut adj: Vec<Vec<u32>> = vec![Vec::new()];
    let mut ray: Vec<u32> = vec![0]; // vertex ids along the x->y geodesic
    let mut frontier: Vec<u32> = vec![0];
    for level in 1..=r1 {
        let mut next = Vec::new();
        for &v in &frontier {
            // root gets q+1 children, inner vertices q (one edge goes up)
            let n_children = if v == 0 { q + 1 } else { q };
            for _ in 0..n_children {
                let id = adj.len() as u32;
                adj.push(Vec::new());
                depth.push(level);
                adj[v as usize].push(id);
                adj[id as usize].push(v);
                next.push(id);
            }
        }
        // extend the marked ray through the first child of the last ray vertex
        if (level as usize) < ray.len() + 1 && ray.len() as u32 == level {
            let last = *ray.last().unwrap() as usize;
            if let Some(&child) = adj[last].iter().find(|&&c| depth[c as usize] == level) {
                ray.push(child);
            }
        }
        frontier = next;
    }
    // If y is beyond the ball, append bare ray vertices.
    while (ray.len() as u32) <= d {
        let last = *ray.last().unwrap();
        let id = adj.len() as u32;
        adj.push(Vec::new());
        depth.push(depth[last as usize] + 1);
        adj[last as usize].push(id);
        adj[id as usize].push(last);
        ray.push(id);
    }
    let y = ray[d as usize];
    // BFS from y over the explicit graph.
    let mut dist = vec![u32::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[y as usize] = 0;
    queue.push_back(y);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v as usize] {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut count: u128 = 0;
    for v in 0..adj.len() {
        if depth[v] <= r1 && dist[v] != u32::MAX && dist[v] <= r2 {
            count += 1;
        }
    }
    Ok(count)
}

/// Decay comparison for the self-convolution: the ratio of the ball overlap
/// count at distance d against q^{(2r-d)/2}.
#[derive(Debug, Clone)]
pub struct ConvolutionReport {
    pub q: u64,
    pub r: u32,
    pub max_ratio: f64,
    pub worst_d: u32,
    pub slack: f64,
    pub within_slack: bool,
    /// q = 1 is the known degenerate case: the overlap grows linearly while
    /// the reference stays bounded.
    pub degenerate: bool,
}

/// Verifies tree_convolution(q,r,r,d) <= slack * q^{(2r-d)/2} over d <= 2r.
pub fn check_convolution_lemma(q: u64, r: u32, slack: f64) -> Result<ConvolutionReport> {
    if r > MAX_RADIUS {
        return Err(Error::resource(format!("radius capped at {MAX_RADIUS}")));
    }
    TreeModel::new(q)?;
    let mut max_ratio = 0.0f64;
    let mut worst_d = 0;
    for d in 0..=2 * r {
        let count = tree_convolution(q, r, r, d) as f64;
        let bound = (q as f64).powf((2 * r - d) as f64 / 2.0);
        let ratio = count / bound;
        if ratio > max_ratio {
            max_ratio = ratio;
            worst_d = d;
        }
    }
    let degenerate = q == 1;
    Ok(ConvolutionReport {
        q,
        r,
        max_ratio,
        worst_d,
        slack,
        within_slack: degenerate || max_ratio <= slack,
        degenerate,
    })
}

/// Adjacency eigenvalue of the p-boundary: q^{1/p} + q^{1-1/p}.
/// Strictly increasing in p on [2, ∞]; p = 2 gives 2 sqrt(q), p = ∞ gives q+1.
pub fn p_to_eigen<T: Real>(p: T, q: u64) -> Result<T> {
    let two = T::of(2.0);
    if p.is_nan() || p < two {
        return Err(Error::input("p must be >= 2"));
    }
    let qf = T::of(q as f64);
    if p.is_infinite() {
        return Ok(qf + T::one());
    }
    let inv = T::one() / p;
    Ok(qf.powf(inv) + qf.powf(T::one() - inv))
}

/// Inverse dictionary: the least p with |lambda| <= q^{1/p} + q^{1-1/p}.
/// Tempered range |lambda| <= 2 sqrt(q) maps to 2; |lambda| = q+1 maps to ∞.
pub fn eigen_to_p<T: Real>(lambda: T, q: u64) -> Result<T> {
    let qf = T::of(q as f64);
    let al = lambda.abs();
    let two = T::of(2.0);
    if al > qf + T::one() + T::of(1e-9) {
        return Err(Error::input(format!(
            "|lambda| = {al} exceeds the operator norm q+1"
        )));
    }
    let al = al.min(qf + T::one());
    if al <= two * qf.sqrt() {
        return Ok(two);
    }
    if al == qf + T::one() {
        return Ok(T::infinity());
    }
    // x = larger root of x^2 - |lambda| x + q = 0, i.e. x = q^{1-1/p}
    let disc = (al * al - T::of(4.0) * qf).sqrt();
    let x = (al + disc) / two;
    let p = T::one() / (T::one() - x.ln() / qf.ln());
    Ok(p)
}

/// Spherical function value at tree distance d for the parameter p:
/// phi(0) = 1, (q+1) phi(1) = lambda(p), and
/// lambda phi(d) = q phi(d+1) + phi(d-1) for d >= 1.
pub fn xi_tree<T: Real>(d: u32, p: T, q: u64) -> Result<T> {
    Ok(*xi_tree_sequence(d, p, q)?.last().expect("nonempty"))
}

/// The values phi(0..=d) of the spherical function.
pub fn xi_tree_sequence<T: Real>(d: u32, p: T, q: u64) -> Result<Vec<T>> {
    TreeModel::new(q)?;
    let lambda = p_to_eigen(p, q)?;
    let qf = T::of(q as f64);
    let mut phi = Vec::with_capacity(d as usize + 1);
    phi.push(T::one());
    if d >= 1 {
        phi.push(lambda / (qf + T::one()));
    }
    for k in 1..d as usize {
        let next = (lambda * phi[k] - phi[k - 1]) / qf;
        phi.push(next);
    }
    Ok(phi)
}

/// Max residual of the defining recursion over the computed sequence;
/// self-consistency check.
pub fn xi_tree_residual<T: Real>(d: u32, p: T, q: u64) -> Result<T> {
    let phi = xi_tree_sequence(d, p, q)?;
    let lambda = p_to_eigen(p, q)?;
    let qf = T::of(q as f64);
    let mut worst = ((qf + T::one()) * *phi.get(1).unwrap_or(&T::zero()) - lambda).abs();
    if d == 0 {
        worst = T::zero();
    }
    for k in 1..d as usize {
        let r = (lambda * phi[k] - qf * phi[k + 1] - phi[k - 1]).abs();
        if r > worst {
            worst = r;
        }
    }
    Ok(worst)
}
