//! Divisor-method search: generate (A, B) pairs with two seeded solutions
//! from factorizations x2^2 - x1^2 = A(k^p - 1), extend by bounded
//! enumeration, rank by solution count. Variants for A = k^q and A < 0.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{self, Factorization};
use crate::error::{Result, RnError};
use crate::model::{self, Equation, SolutionSet, DEFAULT_SIEVE_MODULI};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchMode {
    /// A > 0, seeds at n = 0 and n = p.
    General,
    /// A = k^q: the equation x^2 = k^n + B with seeds at n = q and n = p.
    UnitA {
        q_range: (u32, u32),
        /// keep only hits with gcd(B, k) = 1
        coprime_filter: bool,
    },
    /// A < 0 (A_range holds |A|), seeds at n = p and n = q for p < q.
    NegativeA,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub k: u64,
    pub p_range: (u32, u32),
    pub a_range: (u64, u64),
    pub n_max: u64,
    pub min_solutions: usize,
    pub require_sqfree_gcd: bool,
    pub mode: SearchMode,
    pub workers: usize,
    pub checkpoint_path: Option<PathBuf>,
    /// Use the alternative B = x1^2 - A*k^p formula (experimental; the
    /// default B = x1^2 - A is the one that reproduces the known results).
    pub b_formula_kp: bool,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(RnError::Domain("k must be >= 2".into()));
        }
        if self.p_range.0 > self.p_range.1 || self.p_range.0 < 1 {
            return Err(RnError::Domain("empty or invalid p_range".into()));
        }
        if self.a_range.0 > self.a_range.1 || self.a_range.0 < 1 {
            return Err(RnError::Domain("empty or invalid A_range".into()));
        }
        if self.n_max < self.p_range.1 as u64 {
            return Err(RnError::Domain("n_max must be >= max(p_range)".into()));
        }
        if self.min_solutions < 2 {
            return Err(RnError::Domain("min_solutions must be >= 2".into()));
        }
        if self.workers < 1 {
            return Err(RnError::Domain("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// A divisor-method hit before extension: two guaranteed solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub a: BigInt,
    pub k: u64,
    pub p: u32,
    pub d: BigInt,
    pub x1: BigInt,
    pub x2: BigInt,
    pub b: BigInt,
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub equation: Equation,
    pub solutions: SolutionSet,
    pub source: Candidate,
}

impl SearchHit {
    /// Ordering: solution count descending, then A ascending, then |B|.
    pub fn rank_key(&self) -> (Reverse<usize>, BigInt, BigInt, BigInt) {
        (
            Reverse(self.solutions.solutions.len()),
            self.equation.a().clone(),
            self.equation.b().abs(),
            self.equation.b().clone(),
        )
    }
}

fn factorize_kp_minus_1(k: u64, p: u32) -> Factorization {
    let v = BigInt::from(k).pow(p) - 1;
    arith::factorize(&v).expect("k^p - 1 >= 1")
}

/// One candidate per divisor d of K = A(k^p - 1) with d <= sqrt(K) and
/// K/d = d (mod 2): x1 = (K/d - d)/2, x2 = (K/d + d)/2, B = x1^2 - A.
/// Candidates with B = 0 are dropped; x1 = 0 is kept.
pub fn candidates_for(a: &BigInt, k: u64, p: u32) -> Vec<Candidate> {
    candidates_inner(a, k, p, false)
}

fn candidates_inner(a: &BigInt, k: u64, p: u32, b_formula_kp: bool) -> Vec<Candidate> {
    debug_assert!(a.is_positive());
    let fk = factorize_kp_minus_1(k, p);
    let fa = arith::factorize(a).expect("A >= 1");
    let f = fa.merge(&fk);
    let kcap = &f.value; // K = A(k^p - 1)
    let root = kcap.sqrt();
    let mut out = Vec::new();
    for d in arith::divisors(&f) {
        if d > root {
            continue;
        }
        let q = kcap / &d;
        if (&q - &d).is_odd() {
            continue; // x1 would be non-integral
        }
        let x1 = (&q - &d) / 2;
        let x2 = (&q + &d) / 2;
        let b: BigInt = if b_formula_kp {
            &x1 * &x1 - a * BigInt::from(k).pow(p)
        } else {
            &x1 * &x1 - a
        };
        if b.is_zero() {
            continue;
        }
        out.push(Candidate {
            a: a.clone(),
            k,
            p,
            d,
            x1,
            x2,
            b,
        });
    }
    out
}

/// Negative-A candidates for the seed pair (p, q), p < q:
/// x2^2 = B - |A|k^p, x1^2 = B - |A|k^q, so
/// x2^2 - x1^2 = K = |A| k^p (k^(q-p) - 1).
fn candidates_negative(a_abs: &BigInt, k: u64, p: u32, q: u32) -> Vec<Candidate> {
    debug_assert!(p < q);
    let kcap = a_abs * BigInt::from(k).pow(p) * (BigInt::from(k).pow(q - p) - 1);
    let f = arith::factorize(&kcap).expect("K >= 1");
    let root = kcap.sqrt();
    let mut out = Vec::new();
    for d in arith::divisors(&f) {
        if d > root {
            continue;
        }
        let quo = &kcap / &d;
        if (&quo - &d).is_odd() {
            continue;
        }
        let x1 = (&quo - &d) / 2;
        let x2 = (&quo + &d) / 2;
        let b = &x2 * &x2 + a_abs * BigInt::from(k).pow(p);
        out.push(Candidate {
            a: -a_abs.clone(),
            k,
            p: q, // the larger seed exponent; x1 is its root
            d,
            x1,
            x2,
            b,
        });
    }
    out
}

/// Runs the configured search. Output is deduplicated on the normalized
/// (A, k, B) triple and deterministically ordered regardless of worker
/// count.
pub fn run_search(cfg: &SearchConfig) -> Result<Vec<SearchHit>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| RnError::Resource(e.to_string()))?;

    let stripes: Vec<u64> = match &cfg.mode {
        SearchMode::UnitA { q_range, .. } => (q_range.0..=q_range.1).map(u64::from).collect(),
        _ => (cfg.a_range.0..=cfg.a_range.1).collect(),
    };

    let done = read_checkpoint(cfg)?;
    let todo: Vec<u64> = stripes.iter().copied().filter(|s| !done.contains(s)).collect();

    let per_stripe: Vec<(u64, Vec<SearchHit>)> = pool.install(|| {
        todo.par_iter()
            .map(|&stripe| (stripe, search_stripe(cfg, stripe)))
            .collect()
    });

    // single ordered merger: dedup on normalized triple, then rank
    let mut by_eq: BTreeMap<(BigInt, u64, BigInt), SearchHit> = BTreeMap::new();
    let mut ordered = per_stripe;
    ordered.sort_by_key(|(s, _)| *s);
    if let Some(path) = &cfg.checkpoint_path {
        let mut file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)?;
        for (stripe, hits) in &ordered {
            for hit in hits {
                let rec = crate::app::jsonl::hit_record(hit);
                writeln!(file, "{rec}")?;
            }
            writeln!(file, "A_done={stripe}")?;
        }
        file.flush()?;
    }
    for (_, hits) in ordered {
        for hit in hits {
            let key = (
                hit.equation.a().clone(),
                hit.equation.k(),
                hit.equation.b().clone(),
            );
            by_eq.entry(key).or_insert(hit);
        }
    }
    let mut hits: Vec<SearchHit> = by_eq.into_values().collect();
    hits.sort_by_key(|h| h.rank_key());
    Ok(hits)
}

fn read_checkpoint(cfg: &SearchConfig) -> Result<BTreeSet<u64>> {
    let mut done = BTreeSet::new();
    if let Some(path) = &cfg.checkpoint_path {
        if path.exists() {
            for line in std::fs::read_to_string(path)?.lines() {
                if let Some(a) = line.strip_prefix("A_done=") {
                    if let Ok(v) = a.parse() {
                        done.insert(v);
                    }
                }
            }
        }
    }
    Ok(done)
}

/// All hits for one stripe (one A value, or one q value in unit_A mode).
fn search_stripe(cfg: &SearchConfig, stripe: u64) -> Vec<SearchHit> {
    let mut cands: Vec<Candidate> = Vec::new();
    match &cfg.mode {
        SearchMode::General => {
            let a = BigInt::from(stripe);
            for p in cfg.p_range.0..=cfg.p_range.1 {
                cands.extend(candidates_inner(&a, cfg.k, p, cfg.b_formula_kp));
            }
        }
        SearchMode::UnitA { .. } => {
            let q = stripe as u32;
            let a = BigInt::from(cfg.k).pow(q);
            for p in cfg.p_range.0..=cfg.p_range.1 {
                if p <= q {
                    continue;
                }
                // K = k^q (k^(p-q) - 1); seeds land at n = q and n = p
                cands.extend(
                    candidates_inner(&a, cfg.k, p - q, cfg.b_formula_kp)
                        .into_iter()
                        .map(|mut c| {
                            c.p = p;
                            c
                        }),
                );
            }
        }
        SearchMode::NegativeA => {
            let a_abs = BigInt::from(stripe);
            for p in 0..=cfg.p_range.1 {
                for q in cfg.p_range.0.max(p + 1)..=cfg.p_range.1 {
                    cands.extend(candidates_negative(&a_abs, cfg.k, p, q));
                }
            }
        }
    }

    let mut seen: BTreeSet<(BigInt, u64, BigInt)> = BTreeSet::new();
    let mut hits = Vec::new();
    for cand in cands {
        if let Some(hit) = extend_candidate(cfg, cand) {
            let key = (
                hit.equation.a().clone(),
                hit.equation.k(),
                hit.equation.b().clone(),
            );
            if seen.insert(key) {
                hits.push(hit);
            }
        }
    }
    hits
}

/// Builds the equation for a candidate, normalizes, applies filters and
/// enumerates; `None` when below min_solutions or filtered out.
fn extend_candidate(cfg: &SearchConfig, cand: Candidate) -> Option<SearchHit> {
    let (raw_a, b) = match &cfg.mode {
        // unit_A hits are re-expressed as x^2 = k^n + B
        SearchMode::UnitA { coprime_filter, .. } => {
            let kb = BigInt::from(cfg.k);
            if *coprime_filter && !cand.b.gcd(&kb).is_one() {
                return None;
            }
            if (&cand.b % (&kb * &kb)).is_zero() {
                return None; // B = 0 (mod k^2) excluded by construction goal
            }
            (num_traits::One::one(), cand.b.clone())
        }
        _ => (cand.a.clone(), cand.b.clone()),
    };
    if b.is_zero() || raw_a == BigInt::zero() {
        return None;
    }
    let eq = Equation::new(raw_a, cfg.k, b).ok()?;
    let (normalized, scale) = model::normalize(&eq);
    if cfg.require_sqfree_gcd && !scale.is_one() {
        return None;
    }
    let eq = normalized;
    if !quick_count_reaches(&eq, cfg.n_max, cfg.min_solutions) {
        return None;
    }
    let solutions = model::enumerate_solutions(&eq, cfg.n_max, Some(&DEFAULT_SIEVE_MODULI));
    if solutions.solutions.len() < cfg.min_solutions {
        return None;
    }
    Some(SearchHit {
        equation: eq,
        solutions,
        source: cand,
    })
}

/// Fast i128 solution counter used to reject candidates before the exact
/// BigInt enumeration; falls back to "maybe" (true) when values overflow.
fn quick_count_reaches(eq: &Equation, n_max: u64, min: usize) -> bool {
    use num_traits::ToPrimitive;
    let a = match eq.a().to_i128() {
        Some(v) => v,
        None => return true,
    };
    let b = match eq.b().to_i128() {
        Some(v) => v,
        None => return true,
    };
    let k = eq.k() as i128;
    // overflow guard: |a| * k^n_max + |b| must stay well inside i128
    let bits = 128 - a.abs().leading_zeros() as u64 + n_max * (64 - (k as u64).leading_zeros() as u64);
    if bits > 120 || b.abs() > i128::MAX / 4 {
        return true;
    }
    let mut t = a;
    let mut count = 0usize;
    for _ in 0..=n_max {
        let v = t + b;
        if v >= 0 && is_square_u128(v as u128) {
            count += 1;
            if count >= min {
                return true;
            }
        }
        if a < 0 && t + b < 0 && t < b.saturating_neg() {
            // |A| k^n already exceeds B; no further n admissible
            if t + b < 0 && -t > b {
                break;
            }
        }
        t *= k;
    }
    count >= min
}

fn is_square_u128(v: u128) -> bool {
    const MASK: u64 = {
        let mut m = 0u64;
        let mut i = 0u64;
        while i < 64 {
            m |= 1 << ((i * i) % 64);
            i += 1;
        }
        m
    };
    if MASK & (1 << (v as u64 & 63)) == 0 {
        return false;
    }
    let r = u128_isqrt(v);
    r * r == v
}

pub(crate) fn u128_isqrt(v: u128) -> u128 {
    if v == 0 {
        return 0;
    }
    let mut r = (v as f64).sqrt() as u128;
    // fix the float estimate
    while r > 0 && r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}
