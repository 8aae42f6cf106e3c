//! Lattice-point counting in congruence subgroups of SL2(Z) and SL3(Z):
//! the entry-bound brute-force oracle, the divisor-based fast counter for
//! principal levels, conjugation fixed-point counts on finite quotients, and
//! averaged injective-radius profiles computed by two independent routes.

use crate::cartan;
use crate::error::{Error, Result};
use crate::matgroups::{subgroup_contains, IntMatrix, QuotientSpace, SubgroupKind, SubgroupSpec};
use rayon::prelude::*;

/// Work cap for brute-force loops (approximate iteration count).
const WORK_CAP: u128 = 40_000_000_000;
/// Cap for the divisor-based counter; bounds the prime-factor sieve.
const FAST_T_CAP: i64 = 5_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    /// Max absolute entry bound.
    Norm(i64),
    /// Length bound in base-e log units.
    Length(f64),
}

/// An exact ball count in a congruence subgroup.
#[derive(Debug, Clone)]
pub struct BallCount {
    pub spec: SubgroupSpec,
    pub bound: BoundKind,
    pub conjugator: Option<IntMatrix>,
    pub count: u64,
}

/// Arithmetic progression within [lo, hi]: values = residue (mod step).
#[derive(Debug, Clone, Copy)]
struct Prog {
    residue: i64,
    step: i64,
}

impl Prog {
    fn free() -> Self {
        Prog {
            residue: 0,
            step: 1,
        }
    }
    fn of(residue: i64, step: i64) -> Self {
        Prog {
            residue: residue.rem_euclid(step),
            step,
        }
    }
    fn contains(&self, x: i64) -> bool {
        (x - self.residue).rem_euclid(self.step) == 0
    }
    fn first_at_least(&self, lo: i64) -> i64 {
        lo + (self.residue - lo).rem_euclid(self.step)
    }
    fn count_in(&self, lo: i64, hi: i64) -> u64 {
        let first = self.first_at_least(lo);
        if first > hi {
            0
        } else {
            ((hi - first) / self.step + 1) as u64
        }
    }
    fn iter_in(&self, lo: i64, hi: i64) -> impl Iterator<Item = i64> {
        let first = self.first_at_least(lo);
        let step = self.step;
        (0..)
            .map(move |k| first + k * step)
            .take_while(move |&x| x <= hi)
    }
}

/// Entry progressions for the SL2 congruence patterns, entries (a,b,c,d).
fn sl2_progs(spec: &SubgroupSpec) -> [Prog; 4] {
    let n = spec.level as i64;
    match spec.kind {
        SubgroupKind::Principal => [
            Prog::of(1, n),
            Prog::of(0, n),
            Prog::of(0, n),
            Prog::of(1, n),
        ],
        SubgroupKind::Gamma0 => [Prog::free(), Prog::free(), Prog::of(0, n), Prog::free()],
        SubgroupKind::Gamma2 => unreachable!("Gamma2 is SL3-only"),
    }
}

/// Entry progressions for SL3 patterns, row-major entries.
fn sl3_progs(spec: &SubgroupSpec) -> [Prog; 9] {
    let n = spec.level as i64;
    let f = Prog::free;
    match spec.kind {
        SubgroupKind::Principal => [
            Prog::of(1, n),
            Prog::of(0, n),
            Prog::of(0, n),
            Prog::of(0, n),
            Prog::of(1, n),
            Prog::of(0, n),
            Prog::of(0, n),
            Prog::of(0, n),
            Prog::of(1, n),
        ],
        SubgroupKind::Gamma0 => [
            f(),
            f(),
            f(),
            f(),
            f(),
            f(),
            Prog::of(0, n),
            Prog::of(0, n),
            f(),
        ],
        SubgroupKind::Gamma2 => [
            f(),
            f(),
            f(),
            Prog::of(0, n),
            f(),
            f(),
            Prog::of(0, n),
            Prog::of(0, n),
            f(),
        ],
    }
}

/// Visits every `[a,b,c,d]` with det 1 and all |entries| <= t.
pub fn for_each_sl2_ball(t: i64, mut f: impl FnMut([i64; 4])) {
    let free = [Prog::free(); 4];
    sl2_enumerate(&free, t, &mut f);
}

/// Visits every det-1 matrix with max |entry| exactly `shell`.
pub fn for_each_sl2_shell(shell: i64, mut f: impl FnMut([i64; 4])) {
    for_each_sl2_ball(shell, |m| {
        if m.iter().map(|x| x.abs()).max().unwrap() == shell {
            f(m);
        }
    });
}

fn sl2_enumerate(progs: &[Prog; 4], t: i64, f: &mut impl FnMut([i64; 4])) {
    let [pa, pb, pc, pd] = *progs;
    for a in pa.iter_in(-t, t) {
        if a == 0 {
            // bc = -1
            for (b, c) in [(1i64, -1i64), (-1, 1)] {
                if !(pb.contains(b) && pc.contains(c)) {
                    continue;
                }
                if b.abs() > t || c.abs() > t {
                    continue;
                }
                for d in pd.iter_in(-t, t) {
                    f([0, b, c, d]);
                }
            }
            continue;
        }
        for b in pb.iter_in(-t, t) {
            for c in pc.iter_in(-t, t) {
                let num = 1 + b * c;
                if num % a != 0 {
                    continue;
                }
                let d = num / a;
                if d.abs() <= t && pd.contains(d) {
                    f([a, b, c, d]);
                }
            }
        }
    }
}

fn sl2_count_parallel(progs: &[Prog; 4], t: i64) -> u64 {
    let [pa, pb, pc, pd] = *progs;
    let a_values: Vec<i64> = pa.iter_in(-t, t).collect();
    a_values
        .par_iter()
        .map(|&a| {
            let mut local = 0u64;
            if a == 0 {
                for (b, c) in [(1i64, -1i64), (-1, 1)] {
                    if pb.contains(b) && pc.contains(c) && b.abs() <= t && c.abs() <= t {
                        local += pd.count_in(-t, t);
                    }
                }
                return local;
            }
            for b in pb.iter_in(-t, t) {
                for c in pc.iter_in(-t, t) {
                    let num = 1 + b * c;
                    if num % a == 0 {
                        let d = num / a;
                        if d.abs() <= t && pd.contains(d) {
                            local += 1;
                        }
                    }
                }
            }
            local
        })
        .sum()
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), if a >= 0 { 1 } else { -1 }, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Number of (u,v) with A*u + B*v = m, u in [ulo,uhi], v in [vlo,vhi].
fn count_linear_solutions(
    a: i128,
    b: i128,
    m: i128,
    ulo: i128,
    uhi: i128,
    vlo: i128,
    vhi: i128,
) -> u64 {
    if ulo > uhi || vlo > vhi {
        return 0;
    }
    if a == 0 && b == 0 {
        return if m == 0 {
            ((uhi - ulo + 1) * (vhi - vlo + 1)) as u64
        } else {
            0
        };
    }
    if a == 0 {
        if m % b != 0 {
            return 0;
        }
        let v = m / b;
        return if (vlo..=vhi).contains(&v) {
            (uhi - ulo + 1) as u64
        } else {
            0
        };
    }
    if b == 0 {
        if m % a != 0 {
            return 0;
        }
        let u = m / a;
        return if (ulo..=uhi).contains(&u) {
            (vhi - vlo + 1) as u64
        } else {
            0
        };
    }
    let (g, x0, y0) = extended_gcd(a, b);
    if m % g != 0 {
        return 0;
    }
    let scale = m / g;
    let u0 = x0 * scale;
    let v0 = y0 * scale;
    // u = u0 + (b/g) k, v = v0 - (a/g) k
    let bu = b / g;
    let av = a / g;
    let range_for = |lo: i128, hi: i128, base: i128, coef: i128| -> Option<(i128, i128)> {
        // base + coef*k in [lo,hi]
        if coef > 0 {
            Some((div_ceil(lo - base, coef), div_floor(hi - base, coef)))
        } else {
            Some((div_ceil(hi - base, coef), div_floor(lo - base, coef)))
        }
    };
    let (k1lo, k1hi) = range_for(ulo, uhi, u0, bu).unwrap();
    let (k2lo, k2hi) = range_for(vlo, vhi, v0, -av).unwrap();
    let lo = k1lo.max(k2lo);
    let hi = k1hi.min(k2hi);
    if lo > hi {
        0
    } else {
        (hi - lo + 1) as u64
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Counts bottom rows r3 in the box with given progressions solving
/// c . r3 = 1. Returns the exact number of integer solutions.
fn sl3_bottom_row_count(c: [i64; 3], progs: &[Prog; 3], t: i64) -> u64 {
    let mut total = 0u64;
    for x in progs[0].iter_in(-t, t) {
        let m = 1i128 - c[0] as i128 * x as i128;
        // c1*y + c2*z = m over progressions
        let (py, pz) = (progs[1], progs[2]);
        let a = c[1] as i128 * py.step as i128;
        let b = c[2] as i128 * pz.step as i128;
        let m2 = m - c[1] as i128 * py.residue as i128 - c[2] as i128 * pz.residue as i128;
        let ulo = div_ceil(-t as i128 - py.residue as i128, py.step as i128);
        let uhi = div_floor(t as i128 - py.residue as i128, py.step as i128);
        let vlo = div_ceil(-t as i128 - pz.residue as i128, pz.step as i128);
        let vhi = div_floor(t as i128 - pz.residue as i128, pz.step as i128);
        total += count_linear_solutions(a, b, m2, ulo, uhi, vlo, vhi);
    }
    total
}

fn cross(r1: [i64; 3], r2: [i64; 3]) -> [i64; 3] {
    [
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    ]
}

fn sl3_count_parallel(progs: &[Prog; 9], t: i64) -> u64 {
    let r1_list: Vec<[i64; 3]> = iter_rows(&[progs[0], progs[1], progs[2]], t);
    let bottom = [progs[6], progs[7], progs[8]];
    r1_list
        .par_iter()
        .map(|&r1| {
            let mut local = 0u64;
            for b0 in progs[3].iter_in(-t, t) {
                for b1 in progs[4].iter_in(-t, t) {
                    for b2 in progs[5].iter_in(-t, t) {
                        let r2 = [b0, b1, b2];
                        let c = cross(r1, r2);
                        if c == [0, 0, 0] {
                            continue;
                        }
                        local += sl3_bottom_row_count(c, &bottom, t);
                    }
                }
            }
            local
        })
        .sum()
}

fn iter_rows(progs: &[Prog; 3], t: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for x in progs[0].iter_in(-t, t) {
        for y in progs[1].iter_in(-t, t) {
            for z in progs[2].iter_in(-t, t) {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Visits every det-1 3x3 integer matrix with all |entries| <= t.
/// Bottom rows are solved from the determinant equation, not enumerated.
pub fn for_each_sl3_ball(t: i64, mut f: impl FnMut([i64; 9])) {
    let free3 = [Prog::free(); 3];
    for r1 in iter_rows(&free3, t) {
        for b0 in -t..=t {
            for b1 in -t..=t {
                for b2 in -t..=t {
                    let r2 = [b0, b1, b2];
                    let c = cross(r1, r2);
                    if c == [0, 0, 0] {
                        continue;
                    }
                    // enumerate solutions of c . r3 = 1 explicitly
                    for x in -t..=t {
                        let m = 1i128 - c[0] as i128 * x as i128;
                        let (a, b) = (c[1] as i128, c[2] as i128);
                        if a == 0 && b == 0 {
                            if m == 0 {
                                for y in -t..=t {
                                    for z in -t..=t {
                                        f([r1[0], r1[1], r1[2], b0, b1, b2, x, y, z]);
                                    }
                                }
                            }
                            continue;
                        }
                        if a == 0 {
                            if m % b == 0 {
                                let z = m / b;
                                if z.unsigned_abs() <= t as u128 {
                                    for y in -t..=t {
                                        f([r1[0], r1[1], r1[2], b0, b1, b2, x, y, z as i64]);
                                    }
                                }
                            }
                            continue;
                        }
                        for y in -t..=t {
                            let rem = m - a * y as i128;
                            if b == 0 {
                                if rem == 0 {
                                    for z in -t..=t {
                                        f([r1[0], r1[1], r1[2], b0, b1, b2, x, y, z]);
                                    }
                                }
                                continue;
                            }
                            if rem % b == 0 {
                                let z = rem / b;
                                if z.unsigned_abs() <= t as u128 {
                                    f([r1[0], r1[1], r1[2], b0, b1, b2, x, y, z as i64]);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn sl2_work(progs: &[Prog; 4], t: i64) -> u128 {
    let counts: Vec<u128> = progs.iter().map(|p| p.count_in(-t, t) as u128).collect();
    counts[0] * counts[1] * counts[2]
}

fn sl3_work(progs: &[Prog; 9], t: i64) -> u128 {
    let c: Vec<u128> = progs.iter().map(|p| p.count_in(-t, t) as u128).collect();
    c[0] * c[1] * c[2] * c[3] * c[4] * c[5] * c[6]
}

/// Exact count of gamma in the subgroup with all entries of y^-1 gamma y
/// bounded by `t` in absolute value (y = identity when absent).
///
/// Without a conjugator the congruence pattern is built into the loop
/// strides, so the work scales like (2T/N)^3 for SL2. With a conjugator the
/// full box is enumerated and membership of y delta y^-1 is tested per
/// candidate.
pub fn count_bruteforce(
    spec: &SubgroupSpec,
    t: i64,
    conjugator: Option<&IntMatrix>,
) -> Result<BallCount> {
    if t < 0 {
        return Err(Error::input("entry bound must be >= 0"));
    }
    if let Some(y) = conjugator {
        if y.dimension() != spec.dimension() {
            return Err(Error::input("conjugator dimension mismatch"));
        }
    }
    let count = match (spec.ambient.dimension(), conjugator) {
        (2, None) => {
            let progs = sl2_progs(spec);
            if sl2_work(&progs, t) > WORK_CAP {
                return Err(Error::resource(format!(
                    "brute-force bound {t} too large for {spec}"
                )));
            }
            sl2_count_parallel(&progs, t)
        }
        (2, Some(y)) => {
            let free = [Prog::free(); 4];
            if sl2_work(&free, t) > WORK_CAP {
                return Err(Error::resource(format!(
                    "brute-force bound {t} too large for conjugated count"
                )));
            }
            let yinv = y.inverse();
            let mut count = 0u64;
            for_each_sl2_ball(t, |m| {
                let delta = IntMatrix::from_i64(2, &m).expect("det 1");
                let conj = y.mul(&delta).mul(&yinv);
                if subgroup_contains(spec, &conj).expect("dimension 2") {
                    count += 1;
                }
            });
            count
        }
        (3, None) => {
            let progs = sl3_progs(spec);
            if sl3_work(&progs, t) > WORK_CAP {
                return Err(Error::resource(format!(
                    "brute-force bound {t} too large for {spec}"
                )));
            }
            sl3_count_parallel(&progs, t)
        }
        (3, Some(y)) => {
            let free = [Prog::free(); 9];
            if sl3_work(&free, t) > WORK_CAP {
                return Err(Error::resource(format!(
                    "brute-force bound {t} too large for conjugated count"
                )));
            }
            let yinv = y.inverse();
            let mut count = 0u64;
            for_each_sl3_ball(t, |m| {
                let delta = IntMatrix::from_i64(3, &m).expect("det 1");
                let conj = y.mul(&delta).mul(&yinv);
                if subgroup_contains(spec, &conj).expect("dimension 3") {
                    count += 1;
                }
            });
            count
        }
        _ => unreachable!(),
    };
    Ok(BallCount {
        spec: *spec,
        bound: BoundKind::Norm(t),
        conjugator: conjugator.cloned(),
        count,
    })
}

fn spf_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            let mut j = i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Positive divisors of n (n >= 1) from a smallest-prime-factor table.
fn divisors(mut n: u64, spf: &[u32]) -> Vec<u64> {
    let mut divs = vec![1u64];
    while n > 1 {
        let p = spf[n as usize] as u64;
        let mut mult = 0;
        while n.is_multiple_of(p) {
            n /= p;
            mult += 1;
        }
        let prev = divs.clone();
        let mut pk = 1u64;
        for _ in 0..mult {
            pk *= p;
            divs.extend(prev.iter().map(|d| d * pk));
        }
    }
    divs
}

/// Fast exact count for principal congruence subgroups of SL2(Z).
///
/// Pairs (a, d) are restricted by a = 1 mod N and a + d = 2 mod N^2
/// (forced by -(a-1)(d-1) + bc = a + d - 2 with bc = 0 mod N^2), then
/// (b, c) are read off divisor pairs of ad - 1. Agrees with
/// `count_bruteforce` on `Principal(N)` exactly.
pub fn count_divisor_fast(level: u32, t: i64) -> Result<BallCount> {
    if level == 0 {
        return Err(Error::input("level must be >= 1"));
    }
    if t < 0 {
        return Err(Error::input("entry bound must be >= 0"));
    }
    if t > FAST_T_CAP {
        return Err(Error::resource(format!(
            "fast counter capped at T = {FAST_T_CAP} (needs a T^2 sieve)"
        )));
    }
    let spec = SubgroupSpec::principal(crate::matgroups::Ambient::Sl2, level)?;
    let n = level as i64;
    let n2 = n.checked_mul(n).expect("level^2 fits");
    let spf = spf_sieve((t * t + 1).max(1) as usize);
    let fl = t / n; // |b/N|, |c/N| <= fl
    let pa = Prog::of(1, n);
    let a_values: Vec<i64> = pa.iter_in(-t, t).collect();
    let count: u64 = a_values
        .par_iter()
        .map(|&a| {
            let mut local = 0u64;
            let pd = Prog::of(2 - a, n2);
            for d in pd.iter_in(-t, t) {
                let k = a * d - 1;
                if k == 0 {
                    // bc = 0: either b = 0 or c = 0, both multiples of N.
                    local += 2 * (2 * fl as u64 + 1) - 1;
                    continue;
                }
                debug_assert_eq!(k.rem_euclid(n2), 0);
                let k2 = k / n2;
                if fl == 0 {
                    continue;
                }
                for e in divisors(k2.unsigned_abs(), &spf) {
                    let other = k2.unsigned_abs() / e;
                    if e <= fl as u64 && other <= fl as u64 {
                        local += 2; // (b', c') = (e, k2/e) and (-e, -k2/e)
                    }
                }
            }
            local
        })
        .sum();
    Ok(BallCount {
        spec,
        bound: BoundKind::Norm(t),
        conjugator: None,
        count,
    })
}

/// Number of fixed points of pi_N(gamma) on the quotient: the cosets y with
/// y gamma y^-1 in Gamma_N.
pub fn fixed_point_count(quotient: &QuotientSpace, gamma: &IntMatrix) -> Result<u64> {
    let perm = quotient.permutation_of(gamma)?;
    Ok(perm
        .iter()
        .enumerate()
        .filter(|(i, &img)| *i as u32 == img)
        .count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthKind {
    /// l from the Cartan module on the float image.
    Cartan,
    /// 2 ln ||gamma||_inf, the log-norm proxy.
    LogNormProxy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMethod {
    /// Average of N(Gamma_N, d0, y) over minimal coset lifts y.
    DirectConjugation,
    /// Sum of fixed-point counts over elements of length <= d0.
    FixedPointSum,
}

#[derive(Debug, Clone)]
pub struct RadiusProfileRow {
    pub d0: f64,
    /// Exact total over cosets (before dividing by the index).
    pub total: u64,
    pub average: f64,
    /// Reference growth e^{d0/2}.
    pub reference: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct RadiusProfile {
    pub spec: SubgroupSpec,
    pub index: usize,
    pub method: ProfileMethod,
    pub rows: Vec<RadiusProfileRow>,
}

fn length_of_entries(n: usize, entries: &[i64], kind: LengthKind) -> f64 {
    match kind {
        LengthKind::Cartan => {
            let g = IntMatrix::from_i64(n, entries).expect("det 1");
            cartan::length_of_int_matrix(&g).expect("finite entries")
        }
        LengthKind::LogNormProxy => {
            let m = entries.iter().map(|x| x.abs()).max().unwrap().max(1);
            2.0 * (m as f64).ln()
        }
    }
}

/// Every det-1 matrix with l <= d0_max together with its length, where the
/// entry box comes from |entries| <= sigma_max <= e^{l/2}.
fn ball_with_lengths(n: usize, d0_max: f64, kind: LengthKind) -> Result<Vec<(Vec<i64>, f64)>> {
    let t = (d0_max / 2.0).exp().ceil() as i64;
    let mut out = Vec::new();
    if n == 2 {
        if sl2_work(&[Prog::free(); 4], t) > WORK_CAP {
            return Err(Error::resource(format!("length bound {d0_max} too large")));
        }
        for_each_sl2_ball(t, |m| {
            let l = length_of_entries(2, &m, kind);
            if l <= d0_max {
                out.push((m.to_vec(), l));
            }
        });
    } else {
        if sl3_work(&[Prog::free(); 9], t) > WORK_CAP {
            return Err(Error::resource(format!("length bound {d0_max} too large")));
        }
        for_each_sl3_ball(t, |m| {
            let l = length_of_entries(3, &m, kind);
            if l <= d0_max {
                out.push((m.to_vec(), l));
            }
        });
    }
    Ok(out)
}

/// Averaged lattice-point profile over the d0 grid.
///
/// Both methods histogram the same enumerated elements with the same length
/// values, so their totals agree exactly whenever the conjugation-membership
/// test and the quotient permutation describe the same action.
pub fn radius_profile(
    spec: &SubgroupSpec,
    d0_grid: &[f64],
    kind: LengthKind,
    method: ProfileMethod,
) -> Result<RadiusProfile> {
    if d0_grid.is_empty() {
        return Err(Error::input("empty d0 grid"));
    }
    let mut grid = d0_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let d0_max = *grid.last().unwrap();
    let quotient = crate::matgroups::enumerate_quotient(spec, crate::matgroups::DEFAULT_COSET_CAP)?;
    let n = spec.dimension();
    let elements = ball_with_lengths(n, d0_max, kind)?;

    // bucket[i] = total count with grid[i-1] < l <= grid[i]
    let mut bucket = vec![0u64; grid.len()];
    let bucket_of = |l: f64| grid.iter().position(|&d| l <= d);

    match method {
        ProfileMethod::DirectConjugation => {
            let lifts = quotient.minimal_lifts()?;
            let lift_invs: Vec<IntMatrix> = lifts.iter().map(|y| y.inverse()).collect();
            for (entries, l) in &elements {
                let Some(b) = bucket_of(*l) else { continue };
                let delta = IntMatrix::from_i64(n, entries).expect("det 1");
                for (y, yinv) in lifts.iter().zip(&lift_invs) {
                    let conj = y.mul(&delta).mul(yinv);
                    if subgroup_contains(spec, &conj)? {
                        bucket[b] += 1;
                    }
                }
            }
        }
        ProfileMethod::FixedPointSum => {
            for (entries, l) in &elements {
                let Some(b) = bucket_of(*l) else { continue };
                let delta = IntMatrix::from_i64(n, entries).expect("det 1");
                bucket[b] += fixed_point_count(&quotient, &delta)?;
            }
        }
    }

    let index = quotient.index();
    let mut rows = Vec::with_capacity(grid.len());
    let mut running = 0u64;
    for (i, &d0) in grid.iter().enumerate() {
        running += bucket[i];
        let average = running as f64 / index as f64;
        let reference = (d0 / 2.0).exp();
        rows.push(RadiusProfileRow {
            d0,
            total: running,
            average,
            reference,
            ratio: average / reference,
        });
    }
    Ok(RadiusProfile {
        spec: *spec,
        index,
        method,
        rows,
    })
}

/// Exact size of the unipotent upper-triangular family
/// { I + strictly-upper entries = 0 mod N, |entries| <= T }.
pub fn sl_n_lower_bound(n: u32, level: u32, t: i64) -> Result<u64> {
    if !(n == 2 || n == 3) {
        return Err(Error::input("n must be 2 or 3"));
    }
    if level == 0 || t < 0 {
        return Err(Error::input("level >= 1 and T >= 0 required"));
    }
    let per_entry = 2 * (t / level as i64) as u64 + 1;
    let positions = n * (n - 1) / 2;
    Ok(per_entry.pow(positions))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn progressions() {
        let p = Prog::of(1, 5);
        assert!(p.contains(6) && p.contains(-4) && !p.contains(0));
        assert_eq!(p.first_at_least(-7), -4);
        assert_eq!(p.count_in(-10, 10), 4); // -9, -4, 1, 6
        assert_eq!(p.iter_in(-10, 10).collect::<Vec<_>>(), vec![-9, -4, 1, 6]);
        assert_eq!(Prog::free().count_in(-3, 3), 7);
    }

    #[test]
    fn linear_solution_counts_match_enumeration() {
        let brute = |a: i128, b: i128, m: i128, ur: (i128, i128), vr: (i128, i128)| -> u64 {
            let mut n = 0;
            for u in ur.0..=ur.1 {
                for v in vr.0..=vr.1 {
                    if a * u + b * v == m {
                        n += 1;
                    }
                }
            }
            n
        };
        let cases = [
            (3, 5, 1),
            (4, 6, 2),
            (4, 6, 3),
            (0, 7, 14),
            (7, 0, -21),
            (0, 0, 0),
            (0, 0, 1),
            (-3, 9, 6),
            (2, -2, 4),
        ];
        for (a, b, m) in cases {
            for range in [(-9i128, 9i128), (-4, 11), (0, 0)] {
                assert_eq!(
                    count_linear_solutions(a, b, m, range.0, range.1, -7, 8),
                    brute(a, b, m, range, (-7, 8)),
                    "a={a} b={b} m={m} range={range:?}"
                );
            }
        }
    }

    #[test]
    fn floor_and_ceil_division() {
        assert_eq!(div_floor(7, 2), 3);
        assert_eq!(div_floor(-7, 2), -4);
        assert_eq!(div_ceil(7, 2), 4);
        assert_eq!(div_ceil(-7, 2), -3);
        assert_eq!(div_floor(7, -2), -4);
    }

    #[test]
    fn divisor_lists() {
        let spf = spf_sieve(100);
        let mut d = divisors(60, &spf);
        d.sort_unstable();
        assert_eq!(d, vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
        assert_eq!(divisors(1, &spf), vec![1]);
        let mut d97 = divisors(97, &spf);
        d97.sort_unstable();
        assert_eq!(d97, vec![1, 97]);
    }
}
