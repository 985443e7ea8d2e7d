//! Reproduction harness: re-derives the published numbers from scratch
//! (enumeration, certification, curve-table extraction, family
//! verification) and diffs against the stored expected values.

use num_bigint::BigInt;

use crate::app::curves;
use crate::certify::{certify_equation, CertifyOutcome, Strategy};
use crate::error::{Result, RnError};
use crate::families;
use crate::model::{enumerate_solutions, Equation};

/// Outcome of one reproduction target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproduceReport {
    pub target: String,
    pub passed: bool,
    /// human-readable mismatches; empty iff passed
    pub diffs: Vec<String>,
    /// per-item confirmations
    pub details: Vec<String>,
}

pub const TARGETS: [&str; 8] = [
    "thm2.2",
    "thm2.3",
    "thm2.5",
    "thm3.2",
    "table13",
    "tables1-12",
    "remark-1088",
    "stiller",
];

/// The five-solution theorem's nine k >= 3 equations with their n-sets.
pub const THM25_ROWS: [(i64, u64, i64, [u64; 5]); 9] = [
    (28, 3, 2997, [0, 2, 5, 6, 10]),
    (70, 3, 414, [0, 3, 4, 5, 8]),
    (130, 3, 5550606, [0, 6, 11, 15, 16]),
    (148, 3, 41877, [0, 5, 6, 9, 17]),
    (8740, 3, 57402189, [0, 4, 9, 15, 29]),
    (6, 5, 11875, [0, 4, 5, 6, 9]),
    (14, 5, 6875, [0, 2, 4, 5, 6]),
    (248, 6, 23161, [0, 1, 3, 4, 5]),
    (1513, 6, 19379701008, [0, 7, 9, 10, 12]),
];

/// The negative-A table: k, B, expected n-set.
pub const TABLE13_ROWS: [(u64, i128, &[u64]); 14] = [
    (6, 8865, &[3, 4, 5]),
    (6, 48177, &[3, 5, 6]),
    (6, 2538945, &[4, 7, 8]),
    (6, 334401777, &[7, 9, 10]),
    (6, 1410808185, &[7, 10, 11]),
    (12, 448206057, &[5, 7, 8]),
    (14, 166113185, &[4, 6, 7]),
    (18, 4598905354020657, &[7, 9, 12]),
    (21, 5340742, &[1, 3, 5]),
    (22, 61234181657, &[5, 7, 8]),
    (30, 739595025, &[3, 5, 6]),
    (34, 170442204313460705, &[8, 10, 11]),
    (40, 109475600, &[3, 4, 5]),
    (40, 17264710025, &[3, 5, 6]),
];

fn eq(a: i128, k: u64, b: i128) -> Equation {
    Equation::new(BigInt::from(a), k, BigInt::from(b)).expect("static equation data is valid")
}

fn check_n_set(
    diffs: &mut Vec<String>,
    details: &mut Vec<String>,
    label: &str,
    got: &[u64],
    expect: &[u64],
) {
    if got == expect {
        details.push(format!("{label}: n-set {expect:?} confirmed"));
    } else {
        diffs.push(format!("{label}: expected n in {expect:?}, derived {got:?}"));
    }
}

/// Re-derives one documented target and diffs against expectations.
pub fn reproduce(target: &str) -> Result<ReproduceReport> {
    let mut diffs = Vec::new();
    let mut details = Vec::new();
    match target {
        "thm2.2" => {
            for variant in [1u8, 2] {
                for m in 1..=10u32 {
                    let inst = families::family_k2_five(variant, m)?;
                    let reports = families::verify_family_range(std::slice::from_ref(&inst), None);
                    let rep = &reports[0];
                    if !rep.promised_ok {
                        diffs.push(format!("variant {variant}, m={m}: promised solution failed"));
                    }
                    let extra_ns: Vec<u64> = rep.extras.iter().map(|s| s.n).collect();
                    let expected_extras: Vec<u64> =
                        if variant == 1 && m == 1 { vec![4] } else { vec![] };
                    if extra_ns != expected_extras {
                        diffs.push(format!(
                            "variant {variant}, m={m}: unexpected extras {extra_ns:?}"
                        ));
                    } else {
                        details.push(format!("variant {variant}, m={m}: verified"));
                    }
                }
            }
        }
        "thm2.3" => {
            let out = certify_equation(
                &eq(57, 2, 117440512),
                26,
                &[Strategy::KadicReduction, Strategy::Modular],
            )?;
            match out {
                CertifyOutcome::Certified(cert) => check_n_set(
                    &mut diffs,
                    &mut details,
                    "57*2^n + 117440512 (certified)",
                    &cert.final_solution_set.n_values(),
                    &[0, 14, 16, 20, 24, 25],
                ),
                CertifyOutcome::Bounded(_) => {
                    diffs.push("57-equation: certification failed".into())
                }
            }
            let recs = curves::builtin_curve_tables()?;
            let t1: Vec<_> = recs.into_iter().filter(|r| r.table_id == 1).collect();
            let set = curves::extract_equation_solutions(&t1, &BigInt::from(165), 2, 3)?;
            check_n_set(
                &mut diffs,
                &mut details,
                "165*2^n + 26404 (curve tables)",
                &set.n_values(),
                &[0, 5, 7, 8, 10, 12],
            );
        }
        "thm2.5" => {
            let recs = curves::builtin_curve_tables()?;
            for (idx, (a, k, b, ns)) in THM25_ROWS.iter().enumerate() {
                let e = eq(*a as i128, *k, *b as i128);
                let set = enumerate_solutions(&e, 200, Some(&crate::model::DEFAULT_SIEVE_MODULI));
                check_n_set(
                    &mut diffs,
                    &mut details,
                    &format!("{a}*{k}^n + {b} (enumeration)"),
                    &set.n_values(),
                    ns,
                );
                // the published route: integral points on tables 2-10
                let table_id = (idx + 2) as u32;
                let grouped: Vec<_> = recs.iter().filter(|r| r.table_id == table_id).cloned().collect();
                let degree = if grouped.iter().any(|r| r.kind == curves::CurveKind::Quartic) {
                    4
                } else {
                    3
                };
                let set = curves::extract_equation_solutions(&grouped, &BigInt::from(*a), *k, degree)?;
                check_n_set(
                    &mut diffs,
                    &mut details,
                    &format!("{a}*{k}^n + {b} (curve tables)"),
                    &set.n_values(),
                    ns,
                );
            }
        }
        "thm3.2" => {
            let rows: [(u64, i128, &[u64]); 3] = [
                (6, 2185, &[3, 4, 6]),
                (6, 274837012705, &[4, 12, 13]),
                (12, 25029865, &[2, 6, 8]),
            ];
            for (k, b, ns) in rows {
                let e = eq(1, k, b);
                let set = enumerate_solutions(&e, 200, Some(&crate::model::DEFAULT_SIEVE_MODULI));
                check_n_set(
                    &mut diffs,
                    &mut details,
                    &format!("{k}^n + {b}"),
                    &set.n_values(),
                    ns,
                );
            }
            // the elementary certificate for the 12^n equation
            match certify_equation(&eq(1, 12, 25029865), 10, &[Strategy::FactorEven])? {
                CertifyOutcome::Certified(cert) => check_n_set(
                    &mut diffs,
                    &mut details,
                    "12^n + 25029865 (certified)",
                    &cert.final_solution_set.n_values(),
                    &[2, 6, 8],
                ),
                CertifyOutcome::Bounded(_) => {
                    diffs.push("12^n equation: certification failed".into())
                }
            }
        }
        "table13" => {
            for (k, b, ns) in TABLE13_ROWS {
                let e = eq(-1, k, b);
                let bound = crate::model::auto_bound(&e)?;
                let set = enumerate_solutions(&e, bound.max(0) as u64, None);
                // the table lists n with B - k^n square and n >= 1... the
                // rows themselves include every solution, n = 0 included
                check_n_set(
                    &mut diffs,
                    &mut details,
                    &format!("k={k}, B={b}"),
                    &set
                        .n_values()
                        .into_iter()
                        .filter(|n| *n > 0)
                        .collect::<Vec<_>>(),
                    ns,
                );
            }
        }
        "tables1-12" => {
            let recs = curves::builtin_curve_tables()?;
            details.push(format!("{} integral points verified on their curves", recs.len()));
            for rec in &recs {
                if !rec.verifies() {
                    diffs.push(format!(
                        "table {}, a={}: point (Y={}, x={}) fails",
                        rec.table_id, rec.a, rec.y, rec.x
                    ));
                }
            }
        }
        "remark-1088" => {
            let set = enumerate_solutions(&eq(1, 2, 1088), 1000, Some(&crate::model::DEFAULT_SIEVE_MODULI));
            let pairs: Vec<(u64, u64)> = set
                .solutions
                .iter()
                .map(|s| (u64::try_from(&s.x).unwrap(), s.n))
                .collect();
            let expect = [(33u64, 0u64), (40, 9), (56, 11), (72, 12), (184, 15)];
            if pairs == expect {
                details.push("2^n + 1088: five solutions confirmed".into());
            } else {
                diffs.push(format!("2^n + 1088: derived {pairs:?}, expected {expect:?}"));
            }
        }
        "stiller" => {
            let set = enumerate_solutions(&eq(15, 2, -119), 100, Some(&crate::model::DEFAULT_SIEVE_MODULI));
            if set.solutions.len() == 6 {
                details.push(format!(
                    "15*2^n - 119: exactly six solutions, n in {:?}",
                    set.n_values()
                ));
            } else {
                diffs.push(format!(
                    "15*2^n - 119: expected 6 solutions, derived {}",
                    set.solutions.len()
                ));
            }
            check_n_set(
                &mut diffs,
                &mut details,
                "15*2^n - 119 n-set",
                &set.n_values(),
                &[3, 4, 5, 6, 8, 15],
            );
            let set = enumerate_solutions(&eq(35, 2, -391), 100, Some(&crate::model::DEFAULT_SIEVE_MODULI));
            if set.solutions.len() == 5 {
                details.push(format!(
                    "35*2^n - 391: exactly five solutions, n in {:?}",
                    set.n_values()
                ));
            } else {
                diffs.push(format!(
                    "35*2^n - 391: expected 5 solutions, derived {}",
                    set.solutions.len()
                ));
            }
            check_n_set(
                &mut diffs,
                &mut details,
                "35*2^n - 391 n-set",
                &set.n_values(),
                &[4, 5, 6, 11, 14],
            );
        }
        other => return Err(RnError::UnknownTarget(other.to_string())),
    }
    Ok(ReproduceReport {
        target: target.to_string(),
        passed: diffs.is_empty(),
        diffs,
        details,
    })
}
