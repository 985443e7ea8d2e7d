//! Generalized Pell machinery: continued fractions, fundamental units,
//! solution-class representatives, recurrence orbits, modular periodicity
//! and the power-of-k sieve that bounds which orbit elements have y equal
//! to a power of k.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Result, RnError};

/// x^2 - D*y^2 = N with D >= 2 nonsquare, N != 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellProblem {
    pub d: BigInt,
    pub n: BigInt,
}

impl PellProblem {
    pub fn new(d: BigInt, n: BigInt) -> Result<PellProblem> {
        if d < BigInt::from(2) || arith::is_square(&d).is_some() {
            return Err(RnError::Domain(format!("D = {d} must be >= 2 and nonsquare")));
        }
        if n.is_zero() {
            return Err(RnError::Domain("N must be nonzero".into()));
        }
        Ok(PellProblem { d, n })
    }
}

/// Minimal positive (u, v) with u^2 - D*v^2 = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellUnit {
    pub d: BigInt,
    pub u: BigInt,
    pub v: BigInt,
}

/// Orbit-minimal representative of one solution class. The class's solutions
/// with y > 0 are covered by the forward orbits of (x0, y0) and its
/// conjugate branch under (x, y) -> (u*x + D*v*y, v*x + u*y); x signs are
/// folded via |x|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellClass {
    pub problem: PellProblem,
    pub x0: BigInt,
    pub y0: BigInt,
    pub unit: PellUnit,
}

impl PellClass {
    /// Start points of the one or two forward branches. The conjugate
    /// branch's forward orbit reaches y > 0 only when its value
    /// s*(x0 - y0*sqrt(D)) is positive, and sign(x0 - y0*sqrt(D)) = sign(N),
    /// so the representative of the +/- pair is chosen by the sign of N.
    pub fn branch_starts(&self) -> Vec<(BigInt, BigInt)> {
        conjugate_branches(&self.problem.n, &self.x0, &self.y0)
    }
}

/// The one or two forward-branch start points of a class representative
/// (x0, y0) of x^2 - D y^2 = N: the rep itself, plus the conjugate picked
/// by the sign of N so that its forward orbit reaches y > 0.
pub(crate) fn conjugate_branches(n: &BigInt, x0: &BigInt, y0: &BigInt) -> Vec<(BigInt, BigInt)> {
    if x0.is_zero() || y0.is_zero() {
        vec![(x0.clone(), y0.clone())]
    } else if n.is_positive() {
        vec![(x0.clone(), y0.clone()), (x0.clone(), -y0)]
    } else {
        vec![(x0.clone(), y0.clone()), (-x0, y0.clone())]
    }
}

/// Purely periodic residue table of y_n mod m along one orbit branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitModulus {
    pub m: u64,
    pub period: u64,
    pub y_residues: Vec<u64>,
}

/// Canonical continued fraction expansion of sqrt(D): (a0, period).
pub fn cf_sqrt(d: &BigInt) -> Result<(BigInt, Vec<BigInt>)> {
    if arith::is_square(d).is_some() || d < &BigInt::from(2) {
        return Err(RnError::Domain(format!("cf_sqrt: {d} is a square or < 2")));
    }
    let a0 = d.sqrt();
    let mut m = BigInt::zero();
    let mut den = BigInt::one();
    let mut a = a0.clone();
    let mut period = Vec::new();
    loop {
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        period.push(a.clone());
        if den.is_one() {
            // the period closes exactly when a = 2*a0
            debug_assert_eq!(a, &a0 * 2);
            return Ok((a0, period));
        }
    }
}

/// Minimal (u, v) with u^2 - D*v^2 = 1, via convergents of sqrt(D).
pub fn pell_fundamental(d: &BigInt) -> Result<PellUnit> {
    if arith::is_square(d).is_some() || d < &BigInt::from(2) {
        return Err(RnError::Domain(format!("pell_fundamental: {d} square or < 2")));
    }
    let a0 = d.sqrt();
    let (mut m, mut den, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (a0.clone(), BigInt::one());
    loop {
        if &p1 * &p1 - d * &q1 * &q1 == BigInt::one() {
            return Ok(PellUnit {
                d: d.clone(),
                u: p1,
                v: q1,
            });
        }
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
}

/// The y-scan bound for class representatives: sqrt(|N|(u+1)/(2D)),
/// rounded up with margin.
pub fn class_rep_bound(pr: &PellProblem, unit: &PellUnit) -> BigInt {
    let num: BigInt = pr.n.abs() * (&unit.u + BigInt::one());
    let quot: BigInt = num / (&pr.d * BigInt::from(2));
    quot.sqrt() + BigInt::from(2)
}

/// Complete, duplicate-free set of orbit-minimal class representatives.
/// Brute scan of y in [0, bound], both signs of x folded into x0 >= 0.
pub fn pell_class_reps(pr: &PellProblem) -> Result<Vec<PellClass>> {
    let unit = pell_fundamental(&pr.d)?;
    let bound = class_rep_bound(pr, &unit);
    let mut reps = Vec::new();
    let mut y = BigInt::zero();
    while y <= bound {
        let val = &pr.d * &y * &y + &pr.n;
        if let Some(x) = arith::is_square(&val) {
            // minimal iff the inverse unit step does not shrink |y|
            let y_back = (&unit.u * &y - &unit.v * &x).abs();
            if y_back >= y {
                reps.push(PellClass {
                    problem: pr.clone(),
                    x0: x,
                    y0: y.clone(),
                    unit: unit.clone(),
                });
            }
        }
        y += 1;
    }
    Ok(reps)
}

/// One forward unit step.
pub(crate) fn orbit_step(d: &BigInt, unit: &PellUnit, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    (
        &unit.u * x + d * &unit.v * y,
        &unit.v * x + &unit.u * y,
    )
}

fn orbit_mod_from(
    d: &BigInt,
    unit: &PellUnit,
    start: (&BigInt, &BigInt),
    m: u64,
) -> OrbitModulus {
    let mb = BigInt::from(m);
    let um = unit.u.mod_floor(&mb).to_u64().unwrap();
    let vm = unit.v.mod_floor(&mb).to_u64().unwrap();
    let dvm = arith::mulmod(d.mod_floor(&mb).to_u64().unwrap(), vm, m);
    let x0 = start.0.mod_floor(&mb).to_u64().unwrap();
    let y0 = start.1.mod_floor(&mb).to_u64().unwrap();
    let mut residues = Vec::new();
    let (mut x, mut y) = (x0, y0);
    loop {
        residues.push(y);
        let nx = (arith::mulmod(um, x, m) + arith::mulmod(dvm, y, m)) % m;
        let ny = (arith::mulmod(vm, x, m) + arith::mulmod(um, y, m)) % m;
        x = nx;
        y = ny;
        if x == x0 && y == y0 {
            break;
        }
    }
    OrbitModulus {
        m,
        period: residues.len() as u64,
        y_residues: residues,
    }
}

/// Exact period and residue table of y_n mod m along the (x0, y0) branch.
/// The orbit map has determinant 1, so the table is purely periodic from
/// index 0.
pub fn orbit_mod(cl: &PellClass, m: u64) -> OrbitModulus {
    orbit_mod_from(&cl.problem.d, &cl.unit, (&cl.x0, &cl.y0), m)
}

/// First `count` orbit elements of the (x0, y0) branch by exact iteration.
pub fn orbit_unfold(cl: &PellClass, count: usize) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::with_capacity(count);
    let (mut x, mut y) = (cl.x0.clone(), cl.y0.clone());
    for _ in 0..count {
        out.push((x.clone(), y.clone()));
        let (nx, ny) = orbit_step(&cl.problem.d, &cl.unit, &x, &y);
        x = nx;
        y = ny;
    }
    out
}

/// One Pell problem of the sieve: x^2 - (A k^r) y^2 = B with y = k^m,
/// covering the exponents n = 2m + r of the original equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveProblem {
    pub problem: PellProblem,
    pub residue: u8,
    pub unit: PellUnit,
    pub classes: Vec<(BigInt, BigInt)>,
    pub class_scan_bound: BigInt,
}

/// A modular exclusion: along branch `branch` of class `class_idx`, no
/// orbit index congruent to `index_residue` mod `period` (period of y mod
/// k^j) can have y congruent to an admissible power of k mod `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub problem_idx: usize,
    pub class_idx: usize,
    pub branch: u8,
    pub index_residue: u64,
    pub period: u64,
    pub modulus: u64,
}

/// An orbit element that survived the filters and was checked directly:
/// y = k^m exactly, giving the solution exponent n = 2m + residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivingIndex {
    pub problem_idx: usize,
    pub class_idx: usize,
    pub branch: u8,
    pub orbit_index: u64,
    pub x: BigInt,
    pub y: BigInt,
    pub m: u64,
    pub n: u64,
}

/// Machine-checkable evidence that the resulting_n_set is the complete
/// solution set of the original equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSieveCertificate {
    pub k: u64,
    pub j_used: u32,
    pub j_max: u32,
    pub direct_check_bound: u32,
    pub problems: Vec<SieveProblem>,
    pub exclusions: Vec<Exclusion>,
    pub surviving_indices: Vec<SurvivingIndex>,
    pub resulting_n_set: Vec<u64>,
}

/// Sieve outcome: failure is a value, not an error.
#[derive(Debug, Clone)]
pub enum SieveOutcome {
    Certified(PowerSieveCertificate),
    /// Inconclusive within the given caps; the message names the first
    /// unexcludable index class.
    Inconclusive(String),
}

pub const DEFAULT_J_MAX: u32 = 12;
pub const DEFAULT_DIRECT_CHECK_BOUND: u32 = 64;
pub const AUX_MODULUS_CAP: u64 = 10_000;

const ORBIT_ITERATION_CAP: usize = 100_000;

/// Candidate auxiliary moduli: primes and prime powers <= cap, coprime to
/// k, ordered by the size of the admissible power-residue set (small
/// multiplicative order of k first).
fn aux_modulus_candidates(k: u64, j: u32, cap: u64) -> Vec<(u64, BTreeSet<u64>)> {
    let primes = arith::primes_upto(cap);
    let mut mods: Vec<u64> = Vec::new();
    for &p in &primes {
        let mut q = p;
        while q <= cap {
            mods.push(q);
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
    }
    mods.sort_unstable();
    let mut out: Vec<(u64, BTreeSet<u64>)> = Vec::new();
    for m in mods {
        if m < 3 || m.gcd(&k) != 1 {
            continue;
        }
        out.push((m, admissible_power_residues(k, j, m)));
    }
    out.sort_by_key(|(m, adm)| (adm.len(), *m));
    out
}

/// {k^m mod modulus : m >= j}.
fn admissible_power_residues(k: u64, j: u32, modulus: u64) -> BTreeSet<u64> {
    let (tail, cycle) = arith::power_residue_cycle(k, modulus);
    let mut adm: BTreeSet<u64> = cycle.into_iter().collect();
    if (j as usize) < tail.len() {
        adm.extend(tail[j as usize..].iter().copied());
    }
    adm
}

/// Attempts to prove that the complete solution set of the underlying
/// equation is `resulting_n_set`. Each problem (D = A*k^r, N = B) covers
/// n = 2m + r; the sieve bounds which orbit elements can have y = k^m.
pub fn power_sieve(
    pr_list: &[(PellProblem, u8)],
    k: u64,
    j_max: u32,
    aux_moduli: Option<&[u64]>,
    direct_check_bound: u32,
) -> Result<SieveOutcome> {
    if direct_check_bound < j_max {
        return Err(RnError::Domain(
            "direct_check_bound must be >= j_max".into(),
        ));
    }

    // assemble problems, classes and the direct scan once
    let mut problems = Vec::new();
    let mut all_branches: Vec<(usize, usize, u8, BigInt, BigInt)> = Vec::new();
    for (idx, (pr, r)) in pr_list.iter().enumerate() {
        let classes = pell_class_reps(pr)?;
        let unit = pell_fundamental(&pr.d)?;
        let bound = class_rep_bound(pr, &unit);
        let mut starts = Vec::new();
        for (ci, cl) in classes.iter().enumerate() {
            for (bi, (x, y)) in cl.branch_starts().into_iter().enumerate() {
                all_branches.push((idx, ci, bi as u8, x, y));
            }
            starts.push((cl.x0.clone(), cl.y0.clone()));
        }
        problems.push(SieveProblem {
            problem: pr.clone(),
            residue: *r,
            unit,
            classes: starts,
            class_scan_bound: bound,
        });
    }

    let direct_bound = BigInt::from(k).pow(direct_check_bound);
    let mut surviving: Vec<SurvivingIndex> = Vec::new();
    for (pi, ci, br, x0, y0) in &all_branches {
        let sp = &problems[*pi];
        let (mut x, mut y) = (x0.clone(), y0.clone());
        let mut idx = 0u64;
        loop {
            if y.is_positive() && y > direct_bound {
                break;
            }
            if y.is_positive() {
                if let Some(t) = arith::is_power_of(&y, k) {
                    surviving.push(SurvivingIndex {
                        problem_idx: *pi,
                        class_idx: *ci,
                        branch: *br,
                        orbit_index: idx,
                        x: x.abs(),
                        y: y.clone(),
                        m: t,
                        n: 2 * t + sp.residue as u64,
                    });
                }
            }
            let (nx, ny) = orbit_step(&sp.problem.d, &sp.unit, &x, &y);
            x = nx;
            y = ny;
            idx += 1;
            if idx as usize > ORBIT_ITERATION_CAP {
                return Err(RnError::Resource("orbit iteration cap exceeded".into()));
            }
        }
    }
    let max_survivor_m = surviving.iter().map(|s| s.m).max();

    // escalate the k-adic depth until every "y = 0 mod k^j" index class
    // is excluded by some auxiliary modulus
    'depth: for j in 1..=j_max {
        if let Some(mm) = max_survivor_m {
            if mm >= j as u64 {
                continue; // a genuine solution still lives in the zero class
            }
        }
        let kj = match BigInt::from(k).pow(j).to_u64() {
            Some(v) if v <= 1 << 22 => v,
            _ => break,
        };
        let aux: Vec<(u64, BTreeSet<u64>)> = match aux_moduli {
            Some(ms) => ms
                .iter()
                .map(|&m| (m, admissible_power_residues(k, j, m)))
                .collect(),
            None => aux_modulus_candidates(k, j, AUX_MODULUS_CAP),
        };
        let mut exclusions = Vec::new();
        for (pi, ci, br, x0, y0) in &all_branches {
            let sp = &problems[*pi];
            let om = orbit_mod_from(&sp.problem.d, &sp.unit, (x0, y0), kj);
            for (z, _) in om
                .y_residues
                .iter()
                .enumerate()
                .filter(|(_, &yv)| yv == 0)
            {
                let mut excluded = false;
                for (m_i, adm) in &aux {
                    let om_i = orbit_mod_from(&sp.problem.d, &sp.unit, (x0, y0), *m_i);
                    let l = om.period.lcm(&om_i.period);
                    let mut clean = true;
                    let mut c = z as u64;
                    while c < l {
                        if adm.contains(&om_i.y_residues[(c % om_i.period) as usize]) {
                            clean = false;
                            break;
                        }
                        c += om.period;
                    }
                    if clean {
                        exclusions.push(Exclusion {
                            problem_idx: *pi,
                            class_idx: *ci,
                            branch: *br,
                            index_residue: z as u64,
                            period: om.period,
                            modulus: *m_i,
                        });
                        excluded = true;
                        break;
                    }
                }
                if !excluded {
                    continue 'depth;
                }
            }
        }
        // success at depth j
        let mut n_set: Vec<u64> = surviving.iter().map(|s| s.n).collect();
        n_set.sort_unstable();
        n_set.dedup();
        return Ok(SieveOutcome::Certified(PowerSieveCertificate {
            k,
            j_used: j,
            j_max,
            direct_check_bound,
            problems,
            exclusions,
            surviving_indices: surviving,
            resulting_n_set: n_set,
        }));
    }
    Ok(SieveOutcome::Inconclusive(format!(
        "no depth j <= {j_max} excludes every zero-residue index class"
    )))
}
