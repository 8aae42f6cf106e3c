//! Exact arithmetic for SL_n(Z) and SL_n(Z/N), congruence-subgroup membership,
//! and enumeration of the finite quotients with their right action.
//!
//! Integer matrices are overflow-checked 64-bit and promote to big integers
//! transparently; results demote back when they fit, so equality and hashing
//! see one canonical representation.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// Ambient group: SL2 or SL3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Sl2,
    Sl3,
}

impl Ambient {
    pub fn dimension(self) -> usize {
        match self {
            Ambient::Sl2 => 2,
            Ambient::Sl3 => 3,
        }
    }
}

impl std::fmt::Display for Ambient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ambient::Sl2 => write!(f, "SL2"),
            Ambient::Sl3 => write!(f, "SL3"),
        }
    }
}

/// Congruence pattern.
///
/// `Principal`: g = I mod N. `Gamma0`: bottom row = (0,..,0,*) mod N.
/// `Gamma2` (SL3 only): all entries below the diagonal = 0 mod N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    Principal,
    Gamma0,
    Gamma2,
}

impl std::fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubgroupKind::Principal => write!(f, "principal"),
            SubgroupKind::Gamma0 => write!(f, "gamma0"),
            SubgroupKind::Gamma2 => write!(f, "gamma2"),
        }
    }
}

/// A congruence subgroup of SL_n(Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    pub ambient: Ambient,
    pub kind: SubgroupKind,
    pub level: u32,
}

impl SubgroupSpec {
    pub fn new(ambient: Ambient, kind: SubgroupKind, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::input("level must be >= 1"));
        }
        if kind == SubgroupKind::Gamma2 && ambient != Ambient::Sl3 {
            return Err(Error::input("Gamma2 is only defined for SL3"));
        }
        Ok(SubgroupSpec {
            ambient,
            kind,
            level,
        })
    }

    pub fn principal(ambient: Ambient, level: u32) -> Result<Self> {
        Self::new(ambient, SubgroupKind::Principal, level)
    }

    pub fn dimension(&self) -> usize {
        self.ambient.dimension()
    }

    /// Principal(1) is the full group.
    pub fn is_full_group(&self) -> bool {
        self.level == 1
    }
}

impl std::fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}({})", self.ambient, self.kind, self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Entries {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// Exact unimodular integer matrix (determinant exactly 1), dimension 2 or 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Entries,
}

fn det_bigint(n: usize, e: &[BigInt]) -> BigInt {
    match n {
        2 => &e[0] * &e[3] - &e[1] * &e[2],
        3 => {
            let m = |i: usize, j: usize| &e[3 * i + j];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => unreachable!("dimension checked at construction"),
    }
}

fn demote(big: Vec<BigInt>) -> Entries {
    if big.iter().all(|x| x.to_i64().is_some()) {
        Entries::Small(big.iter().map(|x| x.to_i64().unwrap()).collect())
    } else {
        Entries::Big(big)
    }
}

impl IntMatrix {
    pub fn from_i64(n: usize, entries: &[i64]) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::input("IntMatrix dimension must be 2 or 3"));
        }
        if entries.len() != n * n {
            return Err(Error::input("entry count does not match dimension"));
        }
        let m = IntMatrix {
            n,
            entries: Entries::Small(entries.to_vec()),
        };
        if !m.det_is_one() {
            return Err(Error::input("determinant must be exactly 1"));
        }
        Ok(m)
    }

    pub fn from_bigint(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(Error::input("IntMatrix dimension must be 2 or 3"));
        }
        if entries.len() != n * n {
            return Err(Error::input("entry count does not match dimension"));
        }
        let m = IntMatrix {
            n,
            entries: demote(entries),
        };
        if !m.det_is_one() {
            return Err(Error::input("determinant must be exactly 1"));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![0i64; n * n];
        for i in 0..n {
            e[n * i + i] = 1;
        }
        IntMatrix {
            n,
            entries: Entries::Small(e),
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> BigInt {
        match &self.entries {
            Entries::Small(e) => BigInt::from(e[self.n * i + j]),
            Entries::Big(e) => e[self.n * i + j].clone(),
        }
    }

    /// Entry as i64 if it fits.
    pub fn entry_i64(&self, i: usize, j: usize) -> Option<i64> {
        match &self.entries {
            Entries::Small(e) => Some(e[self.n * i + j]),
            Entries::Big(e) => e[self.n * i + j].to_i64(),
        }
    }

    pub fn entries_i64(&self) -> Option<Vec<i64>> {
        match &self.entries {
            Entries::Small(e) => Some(e.clone()),
            Entries::Big(e) => e.iter().map(|x| x.to_i64()).collect(),
        }
    }

    /// Max absolute entry if it fits u64.
    pub fn norm_inf(&self) -> Option<u64> {
        match &self.entries {
            Entries::Small(e) => Some(e.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)),
            Entries::Big(e) => e
                .iter()
                .map(|x| x.abs().to_u64())
                .collect::<Option<Vec<_>>>()
                .map(|v| v.into_iter().max().unwrap_or(0)),
        }
    }

    fn to_big(&self) -> Vec<BigInt> {
        match &self.entries {
            Entries::Small(e) => e.iter().map(|&x| BigInt::from(x)).collect(),
            Entries::Big(e) => e.clone(),
        }
    }

    fn det_is_one(&self) -> bool {
        det_bigint(self.n, &self.to_big()).is_one()
    }

    /// Matrix product; exact, with automatic promotion past 64 bits.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        if let (Entries::Small(a), Entries::Small(b)) = (&self.entries, &other.entries) {
            let mut out = vec![0i64; n * n];
            let mut ok = true;
            'outer: for i in 0..n {
                for j in 0..n {
                    let mut acc: i64 = 0;
                    for k in 0..n {
                        match a[n * i + k]
                            .checked_mul(b[n * k + j])
                            .and_then(|p| acc.checked_add(p))
                        {
                            Some(v) => acc = v,
                            None => {
                                ok = false;
                                break 'outer;
                            }
                        }
                    }
                    out[n * i + j] = acc;
                }
            }
            if ok {
                return IntMatrix {
                    n,
                    entries: Entries::Small(out),
                };
            }
        }
        let a = self.to_big();
        let b = other.to_big();
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for k in 0..n {
                    acc += &a[n * i + k] * &b[n * k + j];
                }
                out[n * i + j] = acc;
            }
        }
        IntMatrix {
            n,
            entries: demote(out),
        }
    }

    /// Exact inverse via the adjugate (determinant is 1).
    pub fn inverse(&self) -> IntMatrix {
        let n = self.n;
        let e = self.to_big();
        let adj: Vec<BigInt> = match n {
            2 => vec![e[3].clone(), -&e[1], -&e[2], e[0].clone()],
            3 => {
                let m = |i: usize, j: usize| &e[3 * i + j];
                let cof = |i: usize, j: usize| {
                    let (r0, r1) = match i {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let (c0, c1) = match j {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
                    if (i + j).is_multiple_of(2) {
                        minor
                    } else {
                        -minor
                    }
                };
                // adjugate = transpose of the cofactor matrix
                let mut out = vec![BigInt::zero(); 9];
                for i in 0..3 {
                    for j in 0..3 {
                        out[3 * i + j] = cof(j, i);
                    }
                }
                out
            }
            _ => unreachable!(),
        };
        IntMatrix {
            n,
            entries: demote(adj),
        }
    }

    /// Entrywise reduction mod N.
    pub fn reduce_mod(&self, modulus: u32) -> ModMatrix {
        let n = self.n;
        let m = BigInt::from(modulus);
        let entries: Vec<u32> = match &self.entries {
            Entries::Small(e) => e
                .iter()
                .map(|&x| (x.rem_euclid(modulus as i64)) as u32)
                .collect(),
            Entries::Big(e) => e
                .iter()
                .map(|x| x.mod_floor(&m).to_u32().expect("residue fits u32"))
                .collect(),
        };
        ModMatrix {
            n,
            modulus,
            entries,
        }
    }

    /// Float image of the matrix (exact for entries below 2^53).
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match &self.entries {
                        Entries::Small(e) => e[self.n * i + j] as f64,
                        Entries::Big(e) => e[self.n * i + j].to_f64().unwrap_or(f64::NAN),
                    })
                    .collect()
            })
            .collect()
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
                cells.join(",")
            })
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

/// Matrix over Z/N with determinant = 1 mod N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    modulus: u32,
    entries: Vec<u32>,
}

impl ModMatrix {
    pub fn new(n: usize, modulus: u32, entries: Vec<u32>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::input("modulus must be >= 1"));
        }
        if entries.len() != n * n {
            return Err(Error::input("entry count does not match dimension"));
        }
        if entries.iter().any(|&x| x >= modulus) {
            return Err(Error::input("entries must be reduced residues"));
        }
        let m = ModMatrix {
            n,
            modulus,
            entries,
        };
        if m.det_mod() != 1 % modulus {
            return Err(Error::input("determinant must be 1 mod N"));
        }
        Ok(m)
    }

    pub fn identity(n: usize, modulus: u32) -> Self {
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            e[n * i + i] = 1 % modulus;
        }
        ModMatrix {
            n,
            modulus,
            entries: e,
        }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[self.n * i + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.modulus)
    }

    pub fn det_mod(&self) -> u32 {
        let n = self.n;
        let md = self.modulus as i128;
        let e = |i: usize, j: usize| self.entries[n * i + j] as i128;
        let d: i128 = match n {
            2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
            3 => {
                e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                    - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                    + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
            }
            _ => unreachable!(),
        };
        d.rem_euclid(md) as u32
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.n, other.n);
        assert_eq!(self.modulus, other.modulus);
        let n = self.n;
        let md = self.modulus as u64;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u64 = 0;
                for k in 0..n {
                    acc = (acc + self.entries[n * i + k] as u64 * other.entries[n * k + j] as u64)
                        % md;
                }
                out[n * i + j] = acc as u32;
            }
        }
        ModMatrix {
            n,
            modulus: self.modulus,
            entries: out,
        }
    }

    /// Inverse via the adjugate; valid because det = 1 mod N.
    pub fn inverse(&self) -> ModMatrix {
        let n = self.n;
        let md = self.modulus as i128;
        let e = |i: usize, j: usize| self.entries[n * i + j] as i128;
        let reduce = |x: i128| x.rem_euclid(md) as u32;
        let entries: Vec<u32> = match n {
            2 => vec![
                reduce(e(1, 1)),
                reduce(-e(0, 1)),
                reduce(-e(1, 0)),
                reduce(e(0, 0)),
            ],
            3 => {
                let cof = |i: usize, j: usize| -> i128 {
                    let (r0, r1) = match i {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let (c0, c1) = match j {
                        0 => (1, 2),
                        1 => (0, 2),
                        _ => (0, 1),
                    };
                    let minor = e(r0, c0) * e(r1, c1) - e(r0, c1) * e(r1, c0);
                    if (i + j).is_multiple_of(2) {
                        minor
                    } else {
                        -minor
                    }
                };
                let mut out = vec![0u32; 9];
                for i in 0..3 {
                    for j in 0..3 {
                        out[3 * i + j] = reduce(cof(j, i));
                    }
                }
                out
            }
            _ => unreachable!(),
        };
        ModMatrix {
            n,
            modulus: self.modulus,
            entries,
        }
    }
}

impl std::fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
                cells.join(",")
            })
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

/// Standard generators, closed under inverses.
///
/// SL2(Z): S = `[[0,-1],[1,0]]`, T = `[[1,1],[0,1]]` and their inverses.
/// SL3(Z): the twelve elementary matrices e_ij(+/-1).
pub fn standard_generators(ambient: Ambient) -> Vec<(String, IntMatrix)> {
    match ambient {
        Ambient::Sl2 => {
            let s = IntMatrix::from_i64(2, &[0, -1, 1, 0]).unwrap();
            let t = IntMatrix::from_i64(2, &[1, 1, 0, 1]).unwrap();
            let si = s.inverse();
            let ti = t.inverse();
            vec![
                ("S".to_string(), s),
                ("T".to_string(), t),
                ("Sinv".to_string(), si),
                ("Tinv".to_string(), ti),
            ]
        }
        Ambient::Sl3 => {
            let mut gens = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    for &sgn in &[1i64, -1] {
                        let mut e = vec![0i64; 9];
                        e[0] = 1;
                        e[4] = 1;
                        e[8] = 1;
                        e[3 * i + j] = sgn;
                        let label =
                            format!("E{}{}{}", i + 1, j + 1, if sgn > 0 { "+" } else { "-" });
                        gens.push((label, IntMatrix::from_i64(3, &e).unwrap()));
                    }
                }
            }
            gens
        }
    }
}

/// Congruence membership test against the subgroup's pattern mod N.
pub fn subgroup_contains(spec: &SubgroupSpec, g: &IntMatrix) -> Result<bool> {
    if g.dimension() != spec.dimension() {
        return Err(Error::input(format!(
            "dimension mismatch: {} vs matrix of size {}",
            spec,
            g.dimension()
        )));
    }
    let m = g.reduce_mod(spec.level);
    Ok(mod_matrix_in_pattern(spec, &m))
}

/// Same membership test on an already-reduced matrix.
pub fn mod_matrix_in_pattern(spec: &SubgroupSpec, m: &ModMatrix) -> bool {
    let n = spec.dimension();
    debug_assert_eq!(m.dimension(), n);
    debug_assert_eq!(m.modulus(), spec.level);
    match spec.kind {
        SubgroupKind::Principal => m.is_identity(),
        SubgroupKind::Gamma0 => (0..n - 1).all(|j| m.entry(n - 1, j) == 0),
        SubgroupKind::Gamma2 => m.entry(1, 0) == 0 && m.entry(2, 0) == 0 && m.entry(2, 1) == 0,
    }
}

/// Entrywise reduction; group homomorphism onto SL_n(Z/N).
pub fn reduce_mod(g: &IntMatrix, modulus: u32) -> Result<ModMatrix> {
    if modulus == 0 {
        return Err(Error::input("modulus must be >= 1"));
    }
    Ok(g.reduce_mod(modulus))
}

fn units_mod(n: u32) -> Vec<u32> {
    (1..n.max(2))
        .filter(|&u| gcd_u32(u, n) == 1)
        .collect::<Vec<_>>()
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least unit multiple of `v` mod N in lexicographic order.
fn canonical_projective(v: &[u32], modulus: u32, units: &[u32]) -> Vec<u32> {
    if modulus == 1 {
        return v.to_vec();
    }
    let mut best: Option<Vec<u32>> = None;
    for &u in units {
        let w: Vec<u32> = v
            .iter()
            .map(|&x| ((x as u64 * u as u64) % modulus as u64) as u32)
            .collect();
        if best.as_ref().is_none_or(|b| w < *b) {
            best = Some(w);
        }
    }
    best.unwrap()
}

/// Canonical tag identifying the coset Gamma_N * m.
///
/// Principal: the reduction itself (the coset has a single mod-N image).
/// Gamma0: the bottom row as a canonical projective point.
/// Gamma2: canonical bottom row, then the middle row canonicalized modulo
/// unit scaling and bottom-row shifts.
fn coset_tag(spec: &SubgroupSpec, m: &ModMatrix, units: &[u32]) -> Vec<u32> {
    let n = spec.dimension();
    let md = spec.level;
    match spec.kind {
        SubgroupKind::Principal => m.entries().to_vec(),
        SubgroupKind::Gamma0 => {
            let bottom: Vec<u32> = (0..n).map(|j| m.entry(n - 1, j)).collect();
            canonical_projective(&bottom, md, units)
        }
        SubgroupKind::Gamma2 => {
            let bottom: Vec<u32> = (0..3).map(|j| m.entry(2, j)).collect();
            let r3 = canonical_projective(&bottom, md, units);
            if md == 1 {
                let mut tag = r3;
                tag.extend((0..3).map(|j| m.entry(1, j)));
                return tag;
            }
            let r2: Vec<u32> = (0..3).map(|j| m.entry(1, j)).collect();
            let mut best: Option<Vec<u32>> = None;
            for &u in units {
                for t in 0..md {
                    let w: Vec<u32> = (0..3)
                        .map(|j| {
                            ((r2[j] as u64 * u as u64 + r3[j] as u64 * t as u64) % md as u64) as u32
                        })
                        .collect();
                    if best.as_ref().is_none_or(|b| w < *b) {
                        best = Some(w);
                    }
                }
            }
            let mut tag = r3;
            tag.extend(best.unwrap());
            tag
        }
    }
}

/// The enumerated finite quotient Gamma_N \ Gamma_1 with the right action
/// pi_N(gamma): coset of m maps to the coset of m*gamma^{-1}.
#[derive(Debug, Clone)]
pub struct QuotientSpace {
    spec: SubgroupSpec,
    reps: Vec<ModMatrix>,
    tag_to_id: HashMap<Vec<u32>, u32>,
    /// action[g][c] = image of coset c under pi_N of generator g
    action: Vec<Vec<u32>>,
    gens: Vec<(String, IntMatrix)>,
    units: Vec<u32>,
}

/// Default cap on the number of cosets enumerated.
pub const DEFAULT_COSET_CAP: usize = 10_000_000;

/// Enumerate the coset space by breadth-first search over the standard
/// generators, acting by pi_N. Coset ids are renumbered so that tags are in
/// ascending lexicographic order, making tables independent of search order.
pub fn enumerate_quotient(spec: &SubgroupSpec, cap: usize) -> Result<QuotientSpace> {
    let n = spec.dimension();
    let md = spec.level;
    let units = units_mod(md);
    let gens = standard_generators(spec.ambient);
    let gen_inv_mod: Vec<ModMatrix> = gens
        .iter()
        .map(|(_, g)| g.inverse().reduce_mod(md))
        .collect();

    let start = ModMatrix::identity(n, md);
    let mut reps: Vec<ModMatrix> = vec![start.clone()];
    let mut tag_to_id: HashMap<Vec<u32>, u32> = HashMap::new();
    tag_to_id.insert(coset_tag(spec, &start, &units), 0);
    let mut frontier = vec![0u32];
    while let Some(c) = frontier.pop() {
        let rep = reps[c as usize].clone();
        for ginv in &gen_inv_mod {
            let image = rep.mul(ginv);
            let tag = coset_tag(spec, &image, &units);
            if let std::collections::hash_map::Entry::Vacant(e) = tag_to_id.entry(tag) {
                if reps.len() >= cap {
                    return Err(Error::resource(format!(
                        "coset enumeration for {spec} exceeded cap {cap}"
                    )));
                }
                let id = reps.len() as u32;
                e.insert(id);
                reps.push(image);
                frontier.push(id);
            }
        }
    }

    // Renumber cosets by ascending tag.
    let mut order: Vec<u32> = (0..reps.len() as u32).collect();
    let old_tags: Vec<Vec<u32>> = reps.iter().map(|m| coset_tag(spec, m, &units)).collect();
    order.sort_by(|&a, &b| old_tags[a as usize].cmp(&old_tags[b as usize]));
    let mut new_id = vec![0u32; reps.len()];
    for (new, &old) in order.iter().enumerate() {
        new_id[old as usize] = new as u32;
    }
    let mut sorted_reps = vec![ModMatrix::identity(n, md); reps.len()];
    let mut sorted_tags = vec![Vec::new(); reps.len()];
    for (old, rep) in reps.into_iter().enumerate() {
        sorted_reps[new_id[old] as usize] = rep;
        sorted_tags[new_id[old] as usize] = old_tags[old].clone();
    }
    let tag_to_id: HashMap<Vec<u32>, u32> = sorted_tags
        .iter()
        .cloned()
        .zip(0..sorted_tags.len() as u32)
        .collect();

    let mut action = Vec::with_capacity(gens.len());
    for ginv in &gen_inv_mod {
        let mut perm = Vec::with_capacity(sorted_reps.len());
        for rep in &sorted_reps {
            let tag = coset_tag(spec, &rep.mul(ginv), &units);
            perm.push(*tag_to_id.get(&tag).expect("closed under generators"));
        }
        action.push(perm);
    }

    Ok(QuotientSpace {
        spec: *spec,
        reps: sorted_reps,
        tag_to_id,
        action,
        gens,
        units,
    })
}

impl QuotientSpace {
    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    pub fn representative(&self, coset: u32) -> &ModMatrix {
        &self.reps[coset as usize]
    }

    pub fn generators(&self) -> &[(String, IntMatrix)] {
        &self.gens
    }

    pub fn action_table(&self) -> &[Vec<u32>] {
        &self.action
    }

    /// Coset id of an already-reduced matrix.
    pub fn coset_of_mod(&self, m: &ModMatrix) -> u32 {
        let tag = coset_tag(&self.spec, m, &self.units);
        *self.tag_to_id.get(&tag).expect("surjective reduction")
    }

    pub fn coset_of(&self, g: &IntMatrix) -> Result<u32> {
        if g.dimension() != self.spec.dimension() {
            return Err(Error::input("dimension mismatch"));
        }
        Ok(self.coset_of_mod(&g.reduce_mod(self.spec.level)))
    }

    /// The permutation pi_N(gamma) on coset ids.
    pub fn permutation_of(&self, gamma: &IntMatrix) -> Result<Vec<u32>> {
        if gamma.dimension() != self.spec.dimension() {
            return Err(Error::input("dimension mismatch"));
        }
        let ginv = gamma.reduce_mod(self.spec.level).inverse();
        Ok(self
            .reps
            .iter()
            .map(|rep| self.coset_of_mod(&rep.mul(&ginv)))
            .collect())
    }

    /// Rows (coset_id, generator_id, image_coset_id) for CSV export.
    pub fn table_rows(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.action.iter().enumerate().flat_map(|(g, perm)| {
            perm.iter()
                .enumerate()
                .map(move |(c, &img)| (c as u32, g as u32, img))
        })
    }

    /// Small-entry integer lifts of every coset representative, found by
    /// searching matrices in order of max-entry size (capped at level^2).
    pub fn minimal_lifts(&self) -> Result<Vec<IntMatrix>> {
        let n = self.spec.dimension();
        let cap = (self.spec.level as i64).pow(2).max(2);
        let mut lifts: Vec<Option<IntMatrix>> = vec![None; self.index()];
        let mut found = 0usize;
        if n == 2 {
            'search: for bound in 0..=cap {
                crate::counting::for_each_sl2_shell(bound, |m| {
                    let g = IntMatrix::from_i64(2, &m).expect("det 1 by construction");
                    let c = self.coset_of(&g).expect("dimension 2") as usize;
                    if lifts[c].is_none() {
                        lifts[c] = Some(g);
                        found += 1;
                    }
                });
                if found == self.index() {
                    break 'search;
                }
            }
        } else {
            'search3: for bound in 0..=cap {
                let mut done = false;
                crate::counting::for_each_sl3_ball(bound, |m| {
                    if done {
                        return;
                    }
                    let g = IntMatrix::from_i64(3, &m).expect("det 1 by construction");
                    let c = self.coset_of(&g).expect("dimension 3") as usize;
                    if lifts[c].is_none() {
                        lifts[c] = Some(g);
                        found += 1;
                        if found == self.index() {
                            done = true;
                        }
                    }
                });
                if found == self.index() {
                    break 'search3;
                }
            }
        }
        if found != self.index() {
            return Err(Error::resource(format!(
                "no lift with entries <= {cap} for some coset of {}",
                self.spec
            )));
        }
        Ok(lifts.into_iter().map(|x| x.unwrap()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_groups() {
        assert_eq!(units_mod(1), vec![1]);
        assert_eq!(units_mod(6), vec![1, 5]);
        assert_eq!(units_mod(7).len(), 6);
    }

    #[test]
    fn projective_canonicalization() {
        let units = units_mod(5);
        // [2:4] ~ [1:2] by scaling with 3
        assert_eq!(canonical_projective(&[2, 4], 5, &units), vec![1, 2]);
        assert_eq!(canonical_projective(&[0, 3], 5, &units), vec![0, 1]);
        // composite modulus: (2,3) mod 6 has no unit entry but still a least multiple
        let units6 = units_mod(6);
        assert_eq!(canonical_projective(&[2, 3], 6, &units6), vec![2, 3]);
        assert_eq!(canonical_projective(&[4, 3], 6, &units6), vec![2, 3]);
    }

    #[test]
    fn gamma0_tags_identify_cosets() {
        let spec = SubgroupSpec::new(Ambient::Sl2, SubgroupKind::Gamma0, 5).unwrap();
        let units = units_mod(5);
        // two matrices in the same Gamma0(5)-coset: bottom rows projectively equal
        let m1 = ModMatrix::new(2, 5, vec![1, 0, 1, 1]).unwrap();
        let m2 = ModMatrix::new(2, 5, vec![3, 0, 2, 2]).unwrap();
        assert_eq!(coset_tag(&spec, &m1, &units), coset_tag(&spec, &m2, &units));
        let m3 = ModMatrix::new(2, 5, vec![1, 0, 2, 1]).unwrap();
        assert_ne!(coset_tag(&spec, &m1, &units), coset_tag(&spec, &m3, &units));
    }
}
