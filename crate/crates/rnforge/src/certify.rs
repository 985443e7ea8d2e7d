//! Composite completeness certificates: prove, not just enumerate, that an
//! equation's solution set is complete, using elementary techniques —
//! direct range check, k-adic reduction, modular nonexistence,
//! even-exponent factorization, odd-exponent modular obstruction, and the
//! generalized-Pell power sieve. Certificates are re-checked by an
//! independent verifier that shares only the arith/model primitives with
//! the prover.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Result, RnError};
use crate::model::{enumerate_solutions, Completeness, Equation, Solution, SolutionSet};
use crate::pell::{self, PellProblem, PowerSieveCertificate, SieveOutcome};

pub const DEFAULT_MODULUS_SCAN_CAP: u64 = 10_000;
pub const DEFAULT_OBSTRUCTION_SCAN_CAP: u64 = 10_000;

/// One k-adic reduction x = k^s X: pulls k^{2s} out of B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub s: u32,
    pub residual_equation: Equation,
    /// All n < this (in the pre-reduction equation) are covered directly.
    pub low_range_checked: u64,
}

/// Modulus m and threshold n0 with A*k^n + B a quadratic non-residue mod m
/// for every n >= n0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularCertificate {
    pub modulus: u64,
    pub n0: u64,
    pub checked_residue_classes: Vec<u64>,
}

/// Complete even-exponent solve of x^2 = k^{2m} + B by divisor splittings
/// of |B|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCertificate {
    pub b: BigInt,
    pub factor_pairs: Vec<(BigInt, BigInt)>,
    /// Recovered (m, x) with x^2 - k^{2m} = B.
    pub admissible: Vec<(u64, BigInt)>,
}

/// One link of a certificate chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertStep {
    Reduction(ReductionStep),
    /// Terminal: rules out all n >= n0 of the current residual equation.
    Modular(ModularCertificate),
    /// Terminal for even n with A = 1: the complete even-exponent list.
    FactorEven(FactorizationCertificate),
    /// Terminal for odd n with A = 1: x^2 - k*(k^m)^2 = B impossible mod m.
    OddObstruction(ModularCertificate),
    /// Terminal: the Pell power sieve covers all n at once.
    PellSieve(PowerSieveCertificate),
}

/// A self-contained completeness proof for one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessCertificate {
    pub equation: Equation,
    /// All n <= direct_range of `equation` checked by enumeration.
    pub direct_range: u64,
    pub steps: Vec<CertStep>,
    pub final_solution_set: SolutionSet,
}

/// Prover strategy elements, applied in caller order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    KadicReduction,
    Modular,
    FactorEven,
    PellSieve,
}

impl std::str::FromStr for Strategy {
    type Err = RnError;
    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "kadic_reduction" => Ok(Strategy::KadicReduction),
            "modular" => Ok(Strategy::Modular),
            "factor_even" => Ok(Strategy::FactorEven),
            "pell_sieve" => Ok(Strategy::PellSieve),
            other => Err(RnError::Domain(format!("unknown strategy '{other}'"))),
        }
    }
}

pub const DEFAULT_STRATEGY: [Strategy; 4] = [
    Strategy::KadicReduction,
    Strategy::Modular,
    Strategy::FactorEven,
    Strategy::PellSieve,
];

/// Certification result: failure to certify is a value, not an error.
#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certified(CompletenessCertificate),
    /// No strategy element closed the proof; the bounded enumeration is
    /// returned honestly labeled.
    Bounded(SolutionSet),
}

/// Maximal s >= 1 with k^{2s} | B, if any; the residual equation has
/// B / k^{2s} and the same A, k. Solutions (x, n) with n >= 2s of the
/// original correspond to (x / k^s, n - 2s) of the residual.
pub fn reduce_kadic(eq: &Equation) -> Option<ReductionStep> {
    let k2 = BigInt::from(eq.k()) * eq.k();
    let mut s = 0u32;
    let mut b = eq.b().clone();
    loop {
        let (q, r) = b.div_rem(&k2);
        if !r.is_zero() {
            break;
        }
        s += 1;
        b = q;
    }
    if s == 0 {
        return None;
    }
    let residual = Equation::new(eq.a().clone(), eq.k(), b).expect("residual is valid");
    Some(ReductionStep {
        s,
        residual_equation: residual,
        low_range_checked: 2 * s as u64,
    })
}

/// Certificate iff every residue of A*k^n + B mod m over n >= n0 avoids
/// the squares mod m, checked exhaustively over the power-residue cycle.
pub fn modular_nonexistence(eq: &Equation, m: u64, n0: u64) -> Result<Option<ModularCertificate>> {
    if m < 2 {
        return Err(RnError::Domain("modulus must be >= 2".into()));
    }
    let squares = arith::square_residues(m)?;
    let mb = BigInt::from(m);
    let am = eq.a().mod_floor(&mb).to_u64().unwrap();
    let bm = eq.b().mod_floor(&mb).to_u64().unwrap();
    let (tail, cycle) = arith::power_residue_cycle(eq.k(), m);
    let mut checked = BTreeSet::new();
    let mut push = |kn: u64| -> bool {
        let v = (arith::mulmod(am, kn, m) + bm) % m;
        checked.insert(v);
        !squares[v as usize]
    };
    for (n, &kn) in tail.iter().enumerate() {
        if (n as u64) >= n0 && !push(kn) {
            return Ok(None);
        }
    }
    // the cycle covers all n >= tail length; n0 beyond that still hits
    // every cycle value, so checking the full cycle is exhaustive and safe
    for &kn in &cycle {
        if !push(kn) {
            return Ok(None);
        }
    }
    Ok(Some(ModularCertificate {
        modulus: m,
        n0,
        checked_residue_classes: checked.into_iter().collect(),
    }))
}

/// Smallest modulus m <= m_max admitting a [`modular_nonexistence`]
/// certificate at threshold n0.
pub fn find_modular_certificate(
    eq: &Equation,
    n0: u64,
    m_max: u64,
) -> Result<Option<ModularCertificate>> {
    for m in 2..=m_max {
        if let Some(cert) = modular_nonexistence(eq, m, n0)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Complete list of (m >= 0, x >= 0) with x^2 - k^{2m} = B, from divisor
/// splittings d*e = |B| with d <= e and e -+ d = 2*k^m.
pub fn even_exponent_factor_solve(k: u64, b: &BigInt) -> Result<FactorizationCertificate> {
    if b.is_zero() {
        return Err(RnError::Domain("B must be nonzero".into()));
    }
    let abs_b = b.abs();
    let f = arith::factorize(&abs_b)?;
    let mut ds: Vec<BigInt> = arith::divisors(&f)
        .into_iter()
        .filter(|d| d * d <= abs_b)
        .collect();
    ds.sort();
    let mut pairs = Vec::new();
    let mut admissible = Vec::new();
    for d in ds {
        let e = &abs_b / &d;
        // B > 0: x - k^m = d, x + k^m = e; B < 0: k^m - x = d, k^m + x = e
        let (two_km, two_x) = if b.is_positive() {
            (&e - &d, &e + &d)
        } else {
            (&e + &d, &e - &d)
        };
        if two_km.is_even() && two_x.is_even() {
            let km: BigInt = two_km / 2;
            if let Some(m) = arith::is_power_of(&km, k) {
                admissible.push((m, two_x / 2));
            }
        }
        pairs.push((d, e));
    }
    admissible.sort();
    Ok(FactorizationCertificate {
        b: b.clone(),
        factor_pairs: pairs,
        admissible,
    })
}

/// Certificate iff x^2 - k*b'^2 = B is impossible mod m for every residue
/// b' that is a power of k mod m (covers all odd exponents n = 2t + 1 via
/// y = k^t). Exhaustive residue check.
pub fn odd_exponent_obstruction(k: u64, b: &BigInt, m: u64) -> Result<Option<ModularCertificate>> {
    if m < 2 {
        return Err(RnError::Domain("modulus must be >= 2".into()));
    }
    let squares = arith::square_residues(m)?;
    let mb = BigInt::from(m);
    let bm = b.mod_floor(&mb).to_u64().unwrap();
    let km = k % m;
    let (tail, cycle) = arith::power_residue_cycle(k, m);
    let mut powers: BTreeSet<u64> = cycle.into_iter().collect();
    powers.extend(tail);
    for &p in &powers {
        let rhs = (arith::mulmod(km, arith::mulmod(p, p, m), m) + bm) % m;
        if squares[rhs as usize] {
            return Ok(None);
        }
    }
    Ok(Some(ModularCertificate {
        modulus: m,
        n0: 0,
        checked_residue_classes: powers.into_iter().collect(),
    }))
}

fn transport(sol: (BigInt, u64), k: u64, s_total: u32) -> Solution {
    Solution {
        x: sol.0 * BigInt::from(k).pow(s_total),
        n: sol.1 + 2 * s_total as u64,
    }
}

/// Builds a completeness certificate for `eq` by trying the strategy
/// elements in order: reductions shrink the equation, the first
/// applicable terminal technique closes the proof. On failure returns the
/// bounded enumeration.
pub fn certify_equation(
    eq: &Equation,
    n_direct: u64,
    strategy: &[Strategy],
) -> Result<CertifyOutcome> {
    let direct = enumerate_solutions(eq, n_direct, Some(&crate::model::DEFAULT_SIEVE_MODULI));
    let mut found: BTreeSet<(u64, BigInt)> = direct
        .solutions
        .iter()
        .map(|s| (s.n, s.x.clone()))
        .collect();

    let mut steps: Vec<CertStep> = Vec::new();
    let mut cur = eq.clone();
    let mut covered: i64 = n_direct as i64; // residual n <= covered already scanned
    let mut s_total: u32 = 0;
    let mut closed = false;
    let mut label = String::new();

    for strat in strategy {
        match strat {
            Strategy::KadicReduction => {
                if let Some(step) = reduce_kadic(&cur) {
                    if covered < step.low_range_checked as i64 - 1 {
                        return Err(RnError::Domain(format!(
                            "n_direct {n_direct} too small for reduction depth s={}",
                            step.s
                        )));
                    }
                    cur = step.residual_equation.clone();
                    covered -= step.low_range_checked as i64;
                    s_total += step.s;
                    steps.push(CertStep::Reduction(step));
                }
            }
            Strategy::Modular => {
                let n0 = covered.max(-1) as u64 + 1;
                if let Some(cert) = find_modular_certificate(&cur, n0, DEFAULT_MODULUS_SCAN_CAP)? {
                    // close the gap [0, n0) of the residual directly
                    let scan = enumerate_solutions(&cur, n0.saturating_sub(1), None);
                    for s in scan.solutions {
                        found.insert(transport((s.x, s.n), eq.k(), s_total).into_pair());
                    }
                    label = format!("modular mod {} from n0={}", cert.modulus, cert.n0);
                    steps.push(CertStep::Modular(cert));
                    closed = true;
                    break;
                }
            }
            Strategy::FactorEven => {
                if !cur.a().is_one() {
                    continue;
                }
                let fc = even_exponent_factor_solve(cur.k(), cur.b())?;
                let mut odd_cert = None;
                for m in 3..=DEFAULT_OBSTRUCTION_SCAN_CAP {
                    if let Some(c) = odd_exponent_obstruction(cur.k(), cur.b(), m)? {
                        odd_cert = Some(c);
                        break;
                    }
                }
                let Some(odd_cert) = odd_cert else { continue };
                for (m, x) in &fc.admissible {
                    found.insert(transport((x.clone(), 2 * m), eq.k(), s_total).into_pair());
                }
                label = format!(
                    "even-exponent factorization + odd obstruction mod {}",
                    odd_cert.modulus
                );
                steps.push(CertStep::FactorEven(fc));
                steps.push(CertStep::OddObstruction(odd_cert));
                closed = true;
                break;
            }
            Strategy::PellSieve => {
                let mut problems = Vec::new();
                let mut ok = true;
                for r in 0..2u8 {
                    let d = cur.a() * BigInt::from(cur.k()).pow(r as u32);
                    match PellProblem::new(d, cur.b().clone()) {
                        Ok(p) => problems.push((p, r)),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                match pell::power_sieve(
                    &problems,
                    cur.k(),
                    pell::DEFAULT_J_MAX,
                    None,
                    pell::DEFAULT_DIRECT_CHECK_BOUND,
                )? {
                    SieveOutcome::Certified(cert) => {
                        for s in &cert.surviving_indices {
                            found.insert(transport((s.x.clone(), s.n), eq.k(), s_total).into_pair());
                        }
                        label = format!("pell power sieve, depth j={}", cert.j_used);
                        steps.push(CertStep::PellSieve(cert));
                        closed = true;
                        break;
                    }
                    SieveOutcome::Inconclusive(_) => continue,
                }
            }
        }
    }

    if !closed {
        return Ok(CertifyOutcome::Bounded(direct));
    }
    let solutions = found
        .into_iter()
        .map(|(n, x)| Solution { x, n })
        .collect::<Vec<_>>();
    let mut solutions = solutions;
    solutions.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.x.cmp(&b.x)));
    Ok(CertifyOutcome::Certified(CompletenessCertificate {
        equation: eq.clone(),
        direct_range: n_direct,
        steps,
        final_solution_set: SolutionSet {
            equation: eq.clone(),
            solutions,
            completeness: Completeness::Certified(label),
        },
    }))
}

trait IntoPair {
    fn into_pair(self) -> (u64, BigInt);
}
impl IntoPair for Solution {
    fn into_pair(self) -> (u64, BigInt) {
        (self.n, self.x)
    }
}

// ---------------------------------------------------------------------------
// Independent verifier. Shares only arith/model primitives with the prover:
// every step below is re-derived from the raw equation by its own loops.
// ---------------------------------------------------------------------------

/// Re-derives every step of `cert` from the raw equation and checks that
/// the steps cover all n beyond the direct range and that the final set is
/// exactly the union of what the steps permit. Malformed certificates are
/// a format error; mathematical failure returns Ok(false).
pub fn verify_certificate(cert: &CompletenessCertificate) -> Result<bool> {
    let eq = &cert.equation;
    let k = eq.k();
    let kb = BigInt::from(k);

    // 1. direct range, recomputed by plain evaluation
    let mut expected: BTreeSet<(u64, BigInt)> = BTreeSet::new();
    let scan_to = if eq.a().is_negative() {
        match crate::model::auto_bound(eq)? {
            b if b < 0 => None, // |A| > B: no n admits a square at all
            b => Some(cert.direct_range.min(b as u64)),
        }
    } else {
        Some(cert.direct_range)
    };
    if let Some(hi) = scan_to {
        for n in 0..=hi {
            let v = eq.value_at(n);
            if let Some(x) = arith::is_square(&v) {
                expected.insert((n, x));
            }
        }
    }

    // 2. walk the chain
    let mut cur = eq.clone();
    let mut covered: i64 = cert.direct_range as i64;
    let mut s_total: u32 = 0;
    let mut closed = false;
    let mut even_covered = false;
    for step in &cert.steps {
        if closed {
            return Err(RnError::Format("steps after a terminal step".into()));
        }
        match step {
            CertStep::Reduction(r) => {
                if r.s == 0 {
                    return Err(RnError::Format("reduction with s = 0".into()));
                }
                let k2s = kb.pow(2 * r.s);
                if !(cur.b() % &k2s).is_zero() {
                    return Ok(false); // k^{2s} does not divide B
                }
                let residual_b = cur.b() / &k2s;
                if r.residual_equation.a() != cur.a()
                    || r.residual_equation.k() != k
                    || r.residual_equation.b() != &residual_b
                {
                    return Ok(false);
                }
                if r.low_range_checked != 2 * r.s as u64 || covered < r.low_range_checked as i64 - 1
                {
                    return Ok(false); // transport gap not covered directly
                }
                cur = r.residual_equation.clone();
                covered -= r.low_range_checked as i64;
                s_total += r.s;
            }
            CertStep::Modular(mc) => {
                if !verify_modular(&cur, mc)? {
                    return Ok(false);
                }
                if (mc.n0 as i64) > covered + 1 {
                    return Ok(false); // gap between direct range and n0
                }
                // residual solutions below n0 transport into the final set
                for n in 0..mc.n0 {
                    let v = cur.value_at(n);
                    if let Some(x) = arith::is_square(&v) {
                        expected.insert((n + 2 * s_total as u64, x * kb.pow(s_total)));
                    }
                }
                closed = true;
            }
            CertStep::FactorEven(fc) => {
                // must be followed by an odd-exponent obstruction
                if !cur.a().is_one() || fc.b != *cur.b() || fc.b.is_zero() {
                    return Ok(false);
                }
                // independent even-branch recomputation: brute-force m
                // while (k^m - x)(k^m + x) = -B can still balance
                let abs_b = fc.b.abs();
                let mut m = 0u64;
                let mut km = BigInt::one();
                let mut brute: Vec<(u64, BigInt)> = Vec::new();
                loop {
                    let v = &km * &km + &fc.b;
                    if v.is_positive() || v.is_zero() {
                        if let Some(x) = arith::is_square(&v) {
                            brute.push((m, x));
                        }
                    }
                    // for B > 0: x > k^m forces 2k^m + 1 <= B; for B < 0:
                    // k^{2m} <= |B| + x^2 with x < k^m gives k^m <= |B|
                    if (fc.b.is_positive() && &km * 2 > abs_b) || (fc.b.is_negative() && km > abs_b)
                    {
                        break;
                    }
                    m += 1;
                    km *= &kb;
                }
                if brute != fc.admissible {
                    return Ok(false);
                }
                for (m, x) in &brute {
                    expected.insert((2 * m + 2 * s_total as u64, x * kb.pow(s_total)));
                }
                even_covered = true;
            }
            CertStep::OddObstruction(mc) => {
                let m = mc.modulus;
                if m < 2 {
                    return Err(RnError::Format("obstruction modulus < 2".into()));
                }
                if !even_covered {
                    return Err(RnError::Format(
                        "odd obstruction without a preceding even-exponent step".into(),
                    ));
                }
                if !cur.a().is_one() {
                    return Ok(false);
                }
                let squares = arith::square_residues(m)?;
                let mb = BigInt::from(m);
                let bm = cur.b().mod_floor(&mb).to_u64().unwrap();
                // walk k^t mod m far enough to reach its cycle twice
                let mut seen = BTreeSet::new();
                let mut p = 1u64 % m;
                for _ in 0..(2 * m + 4) {
                    seen.insert(p);
                    p = arith::mulmod(p, k % m, m);
                }
                for b_res in seen {
                    let rhs =
                        (arith::mulmod(k % m, arith::mulmod(b_res, b_res, m), m) + bm) % m;
                    if squares[rhs as usize] {
                        return Ok(false);
                    }
                }
                closed = true;
            }
            CertStep::PellSieve(ps) => {
                if !verify_pell_sieve(&cur, ps)? {
                    return Ok(false);
                }
                for s in &ps.surviving_indices {
                    expected.insert((s.n + 2 * s_total as u64, &s.x * kb.pow(s_total)));
                }
                closed = true;
            }
        }
    }
    if !closed {
        return Err(RnError::Format("certificate chain has no terminal step".into()));
    }

    // 3. the claimed final set must match the re-derivation exactly
    let claimed: BTreeSet<(u64, BigInt)> = cert
        .final_solution_set
        .solutions
        .iter()
        .map(|s| (s.n, s.x.clone()))
        .collect();
    if claimed.len() != cert.final_solution_set.solutions.len() {
        return Err(RnError::Format("duplicate solutions in final set".into()));
    }
    if claimed != expected {
        return Ok(false);
    }
    for (n, x) in &claimed {
        if x * x != eq.value_at(*n) {
            return Ok(false);
        }
    }
    Ok(matches!(
        cert.final_solution_set.completeness,
        Completeness::Certified(_)
    ))
}

fn verify_modular(eq: &Equation, mc: &ModularCertificate) -> Result<bool> {
    let m = mc.modulus;
    if m < 2 {
        return Err(RnError::Format("modulus < 2".into()));
    }
    let squares = arith::square_residues(m)?;
    let mb = BigInt::from(m);
    let am = eq.a().mod_floor(&mb).to_u64().unwrap();
    let bm = eq.b().mod_floor(&mb).to_u64().unwrap();
    // direct evaluation of A*k^n + B mod m for n in [n0, n0 + 4m + 8]:
    // the power-residue sequence mod m is eventually periodic with
    // pre-period + period <= m, so this window is exhaustive
    let mut kn = 1u64 % m;
    for _ in 0..mc.n0 {
        kn = arith::mulmod(kn, eq.k() % m, m);
    }
    for _ in 0..(4 * m + 8) {
        let v = (arith::mulmod(am, kn, m) + bm) % m;
        if squares[v as usize] {
            return Ok(false);
        }
        kn = arith::mulmod(kn, eq.k() % m, m);
    }
    Ok(true)
}

/// Independent re-check of a power-sieve certificate against the equation
/// x^2 = A*k^n + B: problems well-formed, units valid, class lists
/// complete up to the stated scan bound, every zero class at depth j
/// excluded, and the direct scan reproduced.
fn verify_pell_sieve(eq: &Equation, ps: &PowerSieveCertificate) -> Result<bool> {
    if ps.k != eq.k() || ps.direct_check_bound < ps.j_used {
        return Ok(false);
    }
    let kb = BigInt::from(ps.k);
    if ps.problems.len() != 2 {
        return Ok(false);
    }
    for (r, sp) in ps.problems.iter().enumerate() {
        if sp.residue as usize != r {
            return Ok(false);
        }
        let d = eq.a() * kb.pow(r as u32);
        if sp.problem.d != d || sp.problem.n != *eq.b() {
            return Ok(false);
        }
        if arith::is_square(&d).is_some() || d < BigInt::from(2) {
            return Err(RnError::Format("sieve problem with square or tiny D".into()));
        }
        // unit: a genuine positive solution of u^2 - D v^2 = 1
        let (u, v) = (&sp.unit.u, &sp.unit.v);
        if sp.unit.d != d || !u.is_positive() || !v.is_positive() || u * u - &d * v * v != BigInt::one()
        {
            return Ok(false);
        }
        // class list: re-scan y in [0, bound] and demand exact agreement
        // with the orbit-minimality criterion
        let min_bound: BigInt = {
            let num: BigInt = eq.b().abs() * (u + BigInt::one());
            let quot: BigInt = num / (&d * BigInt::from(2));
            quot.sqrt()
        };
        if sp.class_scan_bound < min_bound {
            return Ok(false);
        }
        let mut rescan = Vec::new();
        let mut y = BigInt::zero();
        while y <= sp.class_scan_bound {
            let val = &d * &y * &y + eq.b();
            if let Some(x) = arith::is_square(&val) {
                if (u * &y - v * &x).abs() >= y {
                    rescan.push((x, y.clone()));
                }
            }
            y += 1;
        }
        if rescan != sp.classes.iter().map(|(x, y)| (x.clone(), y.clone())).collect::<Vec<_>>() {
            return Ok(false);
        }
    }

    // zero-class coverage at depth j_used, and exclusion validity
    let kj = kb.pow(ps.j_used).to_u64().ok_or_else(|| {
        RnError::Format("k^j exceeds the verifier's modulus width".into())
    })?;
    let mut needed: BTreeSet<(usize, usize, u8, u64)> = BTreeSet::new();
    for (pi, sp) in ps.problems.iter().enumerate() {
        for (ci, (x0, y0)) in sp.classes.iter().enumerate() {
            let branches = crate::pell::conjugate_branches(&sp.problem.n, x0, y0);
            for (bi, (x, y)) in branches.iter().enumerate() {
                let ym = orbit_y_residues(&sp.problem.d, (&sp.unit.u, &sp.unit.v), (x, y), kj);
                for (z, &r) in ym.iter().enumerate() {
                    if r == 0 {
                        needed.insert((pi, ci, bi as u8, z as u64));
                    }
                }
            }
        }
    }
    for ex in &ps.exclusions {
        let sp = ps
            .problems
            .get(ex.problem_idx)
            .ok_or_else(|| RnError::Format("exclusion points past problem list".into()))?;
        let (x0, y0) = sp
            .classes
            .get(ex.class_idx)
            .ok_or_else(|| RnError::Format("exclusion points past class list".into()))?;
        let branches = crate::pell::conjugate_branches(&sp.problem.n, x0, y0);
        let start = branches
            .get(ex.branch as usize)
            .cloned()
            .ok_or_else(|| RnError::Format("bad branch index".into()))?;
        if ex.modulus % ps.k == 0 || ex.modulus < 3 {
            return Ok(false); // auxiliary modulus must be coprime to k
        }
        let ykj = orbit_y_residues(&sp.problem.d, (&sp.unit.u, &sp.unit.v), (&start.0, &start.1), kj);
        if ex.period != ykj.len() as u64 || ex.index_residue >= ex.period {
            return Ok(false);
        }
        let ym = orbit_y_residues(
            &sp.problem.d,
            (&sp.unit.u, &sp.unit.v),
            (&start.0, &start.1),
            ex.modulus,
        );
        // admissible residues {k^t mod m : t >= j_used}
        let mm = ex.modulus;
        let mut adm = BTreeSet::new();
        let mut p = 1u64 % mm;
        for t in 0..(2 * mm + 4) {
            if t >= ps.j_used as u64 {
                adm.insert(p);
            }
            p = arith::mulmod(p, ps.k % mm, mm);
        }
        let l = ex.period.lcm(&(ym.len() as u64));
        let mut c = ex.index_residue;
        while c < l {
            if adm.contains(&ym[(c % ym.len() as u64) as usize]) {
                return Ok(false); // the modulus does not exclude this class
            }
            c += ex.period;
        }
        needed.remove(&(ex.problem_idx, ex.class_idx, ex.branch, ex.index_residue));
    }
    // survivors may legitimately live in a zero class only below j_used
    let max_survivor_m = ps.surviving_indices.iter().map(|s| s.m).max();
    if let Some(mm) = max_survivor_m {
        if mm >= ps.j_used as u64 {
            return Ok(false);
        }
    }
    if !needed.is_empty() {
        return Ok(false); // uncovered zero class: sieve incomplete
    }

    // direct scan reproduced independently
    let bound = kb.pow(ps.direct_check_bound);
    let mut hits: BTreeSet<(u64, BigInt)> = BTreeSet::new();
    for sp in &ps.problems {
        for (x0, y0) in &sp.classes {
            let branches = crate::pell::conjugate_branches(&sp.problem.n, x0, y0);
            for (mut x, mut y) in branches {
                let mut guard = 0usize;
                loop {
                    if y.is_positive() && y > bound {
                        break;
                    }
                    if y.is_positive() {
                        if let Some(t) = arith::is_power_of(&y, ps.k) {
                            hits.insert((2 * t + sp.residue as u64, x.abs()));
                        }
                    }
                    let nx = &sp.unit.u * &x + &sp.problem.d * &sp.unit.v * &y;
                    let ny = &sp.unit.v * &x + &sp.unit.u * &y;
                    x = nx;
                    y = ny;
                    guard += 1;
                    if guard > 100_000 {
                        return Err(RnError::Format("direct re-scan diverged".into()));
                    }
                }
            }
        }
    }
    let claimed: BTreeSet<(u64, BigInt)> = ps
        .surviving_indices
        .iter()
        .map(|s| (s.n, s.x.clone()))
        .collect();
    if hits != claimed {
        return Ok(false);
    }
    // each survivor's (x, y, m, n) internally consistent with the equation
    for s in &ps.surviving_indices {
        let sp = &ps.problems[s.problem_idx];
        if &s.x * &s.x - &sp.problem.d * &s.y * &s.y != sp.problem.n
            || s.y != kb.pow(s.m as u32)
            || s.n != 2 * s.m + sp.residue as u64
        {
            return Ok(false);
        }
    }
    let mut nset: Vec<u64> = claimed.iter().map(|(n, _)| *n).collect();
    nset.sort_unstable();
    nset.dedup();
    if nset != ps.resulting_n_set {
        return Ok(false);
    }
    Ok(true)
}

/// Residue table of y along the orbit (x, y) -> (u x + D v y, v x + u y)
/// mod m, computed with plain modular iteration until the start state
/// recurs.
fn orbit_y_residues(
    d: &BigInt,
    unit: (&BigInt, &BigInt),
    start: (&BigInt, &BigInt),
    m: u64,
) -> Vec<u64> {
    let mb = BigInt::from(m);
    let um = unit.0.mod_floor(&mb).to_u64().unwrap();
    let vm = unit.1.mod_floor(&mb).to_u64().unwrap();
    let dvm = arith::mulmod(d.mod_floor(&mb).to_u64().unwrap(), vm, m);
    let x0 = start.0.mod_floor(&mb).to_u64().unwrap();
    let y0 = start.1.mod_floor(&mb).to_u64().unwrap();
    let (mut x, mut y) = (x0, y0);
    let mut out = Vec::new();
    loop {
        out.push(y);
        let nx = (arith::mulmod(um, x, m) + arith::mulmod(dvm, y, m)) % m;
        let ny = (arith::mulmod(vm, x, m) + arith::mulmod(um, y, m)) % m;
        x = nx;
        y = ny;
        if x == x0 && y == y0 {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(a: i64, k: u64, b: i64) -> Equation {
        Equation::new(BigInt::from(a), k, BigInt::from(b)).unwrap()
    }

    #[test]
    fn reduce_kadic_examples() {
        let r = reduce_kadic(&eq(57, 2, 117440512)).unwrap();
        assert_eq!(r.s, 12);
        assert_eq!(r.residual_equation, eq(57, 2, 7));
        assert_eq!(r.low_range_checked, 24);

        let r = reduce_kadic(&eq(165, 2, 26404)).unwrap();
        assert_eq!((r.s, r.residual_equation.clone()), (1, eq(165, 2, 6601)));

        assert!(reduce_kadic(&eq(1, 2, -7)).is_none());
    }

    #[test]
    fn modular_nonexistence_examples() {
        let c = modular_nonexistence(&eq(228, 2, 7), 4, 0).unwrap().unwrap();
        assert_eq!(c.modulus, 4);
        assert_eq!(c.checked_residue_classes, vec![3]);

        assert!(modular_nonexistence(&eq(165, 2, 26404), 4, 0).unwrap().is_none());
    }

    #[test]
    fn find_modular_examples() {
        let c = find_modular_certificate(&eq(228, 2, 7), 0, 100).unwrap().unwrap();
        assert_eq!(c.modulus, 4);
        assert!(find_modular_certificate(&eq(7, 2, 57), 0, 2000).unwrap().is_none());
        assert!(find_modular_certificate(&eq(3, 2, 1), 1, 2000).unwrap().is_none());
    }

    #[test]
    fn factor_even_examples() {
        let fc = even_exponent_factor_solve(12, &BigInt::from(25029865)).unwrap();
        let got: Vec<(u64, i64)> = fc
            .admissible
            .iter()
            .map(|(m, x)| (*m, x.to_i64().unwrap()))
            .collect();
        assert_eq!(got, vec![(1, 5003), (3, 5293), (4, 21331)]);

        let fc = even_exponent_factor_solve(2, &BigInt::from(-7)).unwrap();
        let got: Vec<(u64, i64)> = fc
            .admissible
            .iter()
            .map(|(m, x)| (*m, x.to_i64().unwrap()))
            .collect();
        assert_eq!(got, vec![(2, 3)]);
    }

    #[test]
    fn factor_even_matches_enumeration() {
        for (k, b) in [(10u64, 9i64), (2, 9), (3, 40), (5, -24), (7, 48)] {
            let fc = even_exponent_factor_solve(k, &BigInt::from(b)).unwrap();
            let eqn = eq(1, k, b);
            let brute = enumerate_solutions(&eqn, 40, None);
            let even: Vec<(u64, BigInt)> = brute
                .solutions
                .iter()
                .filter(|s| s.n % 2 == 0)
                .map(|s| (s.n / 2, s.x.clone()))
                .collect();
            let got: Vec<(u64, BigInt)> =
                fc.admissible.iter().map(|(m, x)| (*m, x.clone())).collect();
            assert_eq!(got, even, "k={k} B={b}");
        }
    }

    #[test]
    fn odd_obstruction_examples() {
        let c = odd_exponent_obstruction(12, &BigInt::from(25029865), 5).unwrap();
        assert!(c.is_some());
        assert!(odd_exponent_obstruction(2, &BigInt::from(-7), 5).unwrap().is_none());
    }

    #[test]
    fn certify_57_equation() {
        let e = eq(57, 2, 117440512);
        let out = certify_equation(&e, 26, &[Strategy::KadicReduction, Strategy::Modular]).unwrap();
        let CertifyOutcome::Certified(cert) = out else {
            panic!("certification failed")
        };
        assert_eq!(cert.final_solution_set.n_values(), vec![0, 14, 16, 20, 24, 25]);
        let xs: Vec<i64> = cert
            .final_solution_set
            .x_values()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(xs, vec![10837, 10880, 11008, 13312, 32768, 45056]);
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn certify_12n_equation() {
        let e = eq(1, 12, 25029865);
        let out = certify_equation(&e, 10, &[Strategy::FactorEven]).unwrap();
        let CertifyOutcome::Certified(cert) = out else {
            panic!("certification failed")
        };
        assert_eq!(cert.final_solution_set.n_values(), vec![2, 6, 8]);
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn certify_165_equation_via_sieve() {
        let e = eq(165, 2, 26404);
        let out = certify_equation(&e, 20, &[Strategy::PellSieve]).unwrap();
        let CertifyOutcome::Certified(cert) = out else {
            panic!("certification failed")
        };
        assert_eq!(cert.final_solution_set.n_values(), vec![0, 5, 7, 8, 10, 12]);
        assert!(verify_certificate(&cert).unwrap());
    }

    #[test]
    fn certify_failure_is_bounded() {
        // 2^n - 7: no elementary technique in this toolkit closes it
        let e = eq(1, 2, -7);
        let out = certify_equation(&e, 40, &[Strategy::KadicReduction, Strategy::Modular]).unwrap();
        let CertifyOutcome::Bounded(set) = out else {
            panic!("must not certify 2^n - 7 with these strategies")
        };
        assert_eq!(set.n_values(), vec![3, 4, 5, 7, 15]);
    }

    #[test]
    fn tamper_rejection() {
        let e = eq(57, 2, 117440512);
        let out = certify_equation(&e, 26, &[Strategy::KadicReduction, Strategy::Modular]).unwrap();
        let CertifyOutcome::Certified(cert) = out else { panic!() };

        let mut t = cert.clone();
        t.final_solution_set.solutions.pop();
        assert!(!verify_certificate(&t).unwrap());

        let mut t = cert.clone();
        for step in &mut t.steps {
            if let CertStep::Modular(mc) = step {
                mc.modulus = 3;
            }
        }
        assert!(!verify_certificate(&t).unwrap());

        let mut t = cert.clone();
        t.final_solution_set.solutions[0].x += 1;
        assert!(!verify_certificate(&t).unwrap());
    }
}
