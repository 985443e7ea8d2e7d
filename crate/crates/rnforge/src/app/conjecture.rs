//! Conjecture harnesses: box scans for the Lebesgue-Nagell-Ramanujan
//! conjectures (x^2 = y^n + B) and the census of solution counts for the
//! negative-A conjectures. Reports say "no counterexample in box", never
//! "confirmed".

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Result, RnError};
use crate::model::{enumerate_solutions, Equation, SolutionSet};

/// All (x, y, n) with x^2 = y^n + B, n >= 3, 2 <= y <= y_max, y^n <=
/// value_cap, sorted by (n, y).
pub fn conjecture_yn(b: &BigInt, y_max: u64, value_cap: &BigInt) -> Result<Vec<(BigInt, u64, u64)>> {
    if y_max < 2 {
        return Err(RnError::Domain("y_max must be >= 2".into()));
    }
    let mut out = Vec::new();
    for y in 2..=y_max {
        let yb = BigInt::from(y);
        let mut v = &yb * &yb * &yb;
        let mut n = 3u64;
        while &v <= value_cap {
            let t = &v + b;
            if t.is_positive() || t.is_zero() {
                if let Some(x) = crate::arith::is_square(&t) {
                    if x.is_positive() {
                        out.push((x, y, n));
                    }
                }
            }
            v *= &yb;
            n += 1;
        }
    }
    out.sort_by(|a, b| (a.2, a.1).cmp(&(b.2, b.1)));
    Ok(out)
}

/// Census result over a box of equations x^2 + |A|*k^n = B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    /// solution count -> number of (k, A, B) triples attaining it
    pub histogram: BTreeMap<usize, u64>,
    pub max_count: usize,
    /// the equations attaining max_count, with their solutions
    pub extremal: Vec<SolutionSet>,
    /// equations exceeding the conjectured bound, with full solutions
    pub counterexamples: Vec<SolutionSet>,
    pub conjectured_bound: usize,
}

/// Scans x^2 = A*k^n + B over A in [-a_max, -1], B in [1, b_max], k in
/// k_set, counting solutions under the natural bound n <=
/// log_k(B/|A|) (further capped by n_max). The conjectured bound is 3 for
/// the |A| = 1 census and 4 in general.
pub fn census_max_solutions(
    k_set: &[u64],
    a_max: u64,
    b_max: u64,
    n_max: u64,
    conjectured_bound: usize,
) -> Result<CensusReport> {
    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    let mut max_count = 0usize;
    let mut extremal_keys: Vec<(u64, u64, u64)> = Vec::new();
    let mut counter_keys: Vec<(u64, u64, u64)> = Vec::new();
    for &k in k_set {
        if k < 2 {
            return Err(RnError::Domain("k must be >= 2".into()));
        }
        for a in 1..=a_max {
            for b in 1..=b_max {
                let count = count_solutions_i128(a, k, b, n_max);
                *histogram.entry(count).or_insert(0) += 1;
                if count > max_count {
                    max_count = count;
                    extremal_keys.clear();
                }
                if count == max_count && count > 0 && extremal_keys.len() < 32 {
                    extremal_keys.push((k, a, b));
                }
                if count > conjectured_bound {
                    counter_keys.push((k, a, b));
                }
            }
        }
    }
    let full = |&(k, a, b): &(u64, u64, u64)| -> SolutionSet {
        let eq = Equation::new(-BigInt::from(a), k, BigInt::from(b)).expect("box entries valid");
        enumerate_solutions(&eq, n_max, None)
    };
    Ok(CensusReport {
        histogram,
        max_count,
        extremal: extremal_keys.iter().map(full).collect(),
        counterexamples: counter_keys.iter().map(full).collect(),
        conjectured_bound,
    })
}

/// Fast path: counts n with b - a*k^n a perfect square, exact in i128
/// (the box keeps every value far below the i128 range).
fn count_solutions_i128(a: u64, k: u64, b: u64, n_max: u64) -> usize {
    let (a, k, b) = (a as i128, k as i128, b as i128);
    let mut term = a;
    let mut count = 0usize;
    let mut n = 0u64;
    while term <= b && n <= n_max {
        let v = b - term;
        let r = integer_sqrt_i128(v);
        if r * r == v {
            count += 1;
        }
        term *= k;
        n += 1;
    }
    count
}

fn integer_sqrt_i128(v: i128) -> i128 {
    if v < 2 {
        return v.max(0);
    }
    let mut r = (v as f64).sqrt() as i128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Cross-check helper used by tests: the i128 fast path must agree with
/// exact BigInt enumeration.
pub fn count_solutions_exact(a: u64, k: u64, b: u64, n_max: u64) -> usize {
    let eq = Equation::new(-BigInt::from(a), k, BigInt::from(b)).expect("valid");
    enumerate_solutions(&eq, n_max, None).solutions.len()
}

pub const CONJ_VALUE_CAP: u64 = 100_000_000_000_000; // 10^14
pub const CONJ_Y_MAX: u64 = 5_000;

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn conjecture_31_box() {
        let got = conjecture_yn(
            &BigInt::from(2185),
            CONJ_Y_MAX,
            &BigInt::from(CONJ_VALUE_CAP),
        )
        .unwrap();
        let triples: Vec<(u64, u64, u64)> = got
            .iter()
            .map(|(x, y, n)| (x.to_u64().unwrap(), *y, *n))
            .collect();
        assert_eq!(
            triples,
            vec![
                (49, 6, 3),
                (221, 36, 3),
                (248, 39, 3),
                (1949, 156, 3),
                (59, 6, 4),
                (221, 6, 6)
            ]
        );
    }

    #[test]
    fn conjecture_trivial_box() {
        let got = conjecture_yn(&BigInt::from(1), 3, &BigInt::from(1000)).unwrap();
        assert!(got.contains(&(BigInt::from(3), 2, 3)));
    }

    #[test]
    fn census_small_box() {
        let rep = census_max_solutions(&[2, 3], 1, 500, 64, 3).unwrap();
        assert!(rep.max_count <= 3);
        assert!(rep.counterexamples.is_empty());
        let total: u64 = rep.histogram.values().sum();
        assert_eq!(total, 2 * 500);
        assert!(!rep.extremal.is_empty());
    }

    #[test]
    fn census_fast_path_matches_exact() {
        for k in [2u64, 3, 6] {
            for a in [1u64, 5, 17] {
                for b in [1u64, 9, 100, 329, 3641] {
                    assert_eq!(
                        count_solutions_i128(a, k, b, 64),
                        count_solutions_exact(a, k, b, 64),
                        "k={k} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn census_empty_box() {
        let rep = census_max_solutions(&[2], 0, 100, 64, 3).unwrap();
        assert!(rep.histogram.is_empty());
        assert_eq!(rep.max_count, 0);
    }
}
