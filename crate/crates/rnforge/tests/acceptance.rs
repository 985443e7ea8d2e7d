//! Acceptance suite: one test per top-level acceptance criterion, each
//! printing a single pass/fail line (visible with `--nocapture`; a
//! failure also fails the test in the usual way).

use num_bigint::BigInt;

use rnforge::app::{conjecture, curves, reproduce};
use rnforge::certify::{
    certify_equation, verify_certificate, CertStep, CertifyOutcome, Strategy,
};
use rnforge::families;
use rnforge::model::{
    auto_bound, enumerate_solutions, normalize, Equation, DEFAULT_SIEVE_MODULI,
};
use rnforge::pell::{
    orbit_unfold, pell_class_reps, pell_fundamental, power_sieve, PellProblem, SieveOutcome,
    DEFAULT_DIRECT_CHECK_BOUND, DEFAULT_J_MAX,
};
use rnforge::search::{candidates_for, run_search, SearchConfig, SearchMode};

fn bi(v: i128) -> BigInt {
    BigInt::from(v)
}

fn eq(a: i128, k: u64, b: i128) -> Equation {
    Equation::new(bi(a), k, bi(b)).expect("valid test equation")
}

fn report(num: u32, name: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("criterion {num} ({name}): pass"),
        Err(e) => {
            println!("criterion {num} ({name}): FAIL - {e}");
            panic!("criterion {num} ({name}) failed: {e}");
        }
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(label: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{label}: got {got:?}, expected {want:?}"))
    }
}

#[test]
fn criterion_01_ramanujan_nagell_golden() {
    report(1, "Ramanujan-Nagell golden enumeration", (|| {
        let set = enumerate_solutions(&eq(1, 2, -7), 1000, Some(&DEFAULT_SIEVE_MODULI));
        let pairs: Vec<(i128, u64)> = set
            .solutions
            .iter()
            .map(|s| (i128::try_from(&s.x).unwrap(), s.n))
            .collect();
        expect_eq(
            "2^n - 7",
            pairs,
            vec![(1, 3), (3, 4), (5, 5), (11, 7), (181, 15)],
        )
    })());
}

#[test]
fn criterion_02_six_solution_certificate() {
    report(2, "six-solution certificate for 57*2^n + 117440512", (|| {
        let out = certify_equation(
            &eq(57, 2, 117440512),
            26,
            &[Strategy::KadicReduction, Strategy::Modular],
        )
        .map_err(|e| e.to_string())?;
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            CertifyOutcome::Bounded(_) => return Err("certification did not close".into()),
        };
        expect_eq(
            "n-set",
            cert.final_solution_set.n_values(),
            vec![0, 14, 16, 20, 24, 25],
        )?;
        let xs: Vec<i128> = cert
            .final_solution_set
            .x_values()
            .iter()
            .map(|x| i128::try_from(x).unwrap())
            .collect();
        expect_eq("x-values", xs, vec![10837, 10880, 11008, 13312, 32768, 45056])?;
        if !verify_certificate(&cert).map_err(|e| e.to_string())? {
            return Err("independent verifier rejected the certificate".into());
        }
        Ok(())
    })());
}

#[test]
fn criterion_03_pell_pipeline() {
    report(3, "Pell units, class representatives, power sieve", (|| {
        let u165 = pell_fundamental(&bi(165)).map_err(|e| e.to_string())?;
        expect_eq("unit(165)", (u165.u.clone(), u165.v.clone()), (bi(1079), bi(84)))?;
        let u330 = pell_fundamental(&bi(330)).map_err(|e| e.to_string())?;
        expect_eq("unit(330)", (u330.u.clone(), u330.v.clone()), (bi(109), bi(6)))?;

        let v1 = PellProblem::new(bi(165), bi(26404)).map_err(|e| e.to_string())?;
        let reps1 = pell_class_reps(&v1).map_err(|e| e.to_string())?;
        let ys1: Vec<i128> = reps1.iter().map(|c| i128::try_from(&c.y0).unwrap()).collect();
        // the published list has 82 in place of 88; 82 satisfies no
        // x^2 - 165*82^2 = 26404, so the audited value 88 is asserted
        expect_eq(
            "V1 class y-values",
            ys1,
            vec![1, 3, 13, 16, 27, 32, 64, 75, 88, 103, 201, 235],
        )?;
        let v2 = PellProblem::new(bi(330), bi(26404)).map_err(|e| e.to_string())?;
        let reps2 = pell_class_reps(&v2).map_err(|e| e.to_string())?;
        let ys2: Vec<i128> = reps2.iter().map(|c| i128::try_from(&c.y0).unwrap()).collect();
        expect_eq("V2 class y-values", ys2, vec![4, 8, 20, 60])?;

        let outcome = power_sieve(
            &[(v1, 0), (v2, 1)],
            2,
            DEFAULT_J_MAX,
            None,
            DEFAULT_DIRECT_CHECK_BOUND,
        )
        .map_err(|e| e.to_string())?;
        match outcome {
            SieveOutcome::Certified(cert) => {
                expect_eq("sieved n-set", cert.resulting_n_set, vec![0, 5, 7, 8, 10, 12])
            }
            SieveOutcome::Inconclusive(msg) => {
                // documented fallback: the failure is reported and the set
                // is confirmed by bounded enumeration instead
                println!("power sieve inconclusive within default caps: {msg}");
                println!("rigorous-certificate goal unmet for 165*2^n + 26404; falling back");
                let set = enumerate_solutions(&eq(165, 2, 26404), 10_000, Some(&DEFAULT_SIEVE_MODULI));
                expect_eq("fallback n-set", set.n_values(), vec![0, 5, 7, 8, 10, 12])
            }
        }
    })());
}

#[test]
fn criterion_04_search_rediscovery() {
    report(4, "divisor-method search rediscovery (k=2 desk box)", (|| {
        let cfg = SearchConfig {
            k: 2,
            p_range: (1, 30),
            a_range: (1, 2000),
            n_max: 60,
            min_solutions: 5,
            require_sqfree_gcd: false,
            mode: SearchMode::General,
            workers: 4,
            checkpoint_path: None,
            b_formula_kp: false,
        };
        let hits = run_search(&cfg).map_err(|e| e.to_string())?;

        // nothing in the box beats six solutions, and the six-solution
        // equations normalize to the two known records
        let max_count = hits.iter().map(|h| h.solutions.solutions.len()).max().unwrap_or(0);
        expect_eq("maximal solution count", max_count, 6)?;
        let mut six: Vec<(BigInt, BigInt)> = hits
            .iter()
            .filter(|h| h.solutions.solutions.len() >= 6)
            .map(|h| {
                let (n, _) = normalize(&h.equation);
                (n.a().clone(), n.b().clone())
            })
            .collect();
        six.sort();
        six.dedup();
        // (120, -119) is the exponent-shifted image of Stiller's
        // six-solution equation 15*2^n - 119
        expect_eq(
            "six-solution equations (normalized)",
            six,
            vec![
                (bi(57), bi(117440512)),
                (bi(120), bi(-119)),
                (bi(165), bi(26404)),
            ],
        )?;
        let record = hits
            .iter()
            .find(|h| h.equation.a() == &bi(165) && h.equation.b() == &bi(26404))
            .ok_or("(165, 26404) not rediscovered")?;
        expect_eq("(165, 26404) n-set", record.solutions.n_values(), vec![0, 5, 7, 8, 10, 12])?;

        // min_solutions = 5 also rediscovers the five-solution family
        // instances whose exponent-shifted images fall inside the box
        for variant in [1u8, 2] {
            for m in 1..=10u32 {
                let inst = families::family_k2_five(variant, m).map_err(|e| e.to_string())?;
                let n_min = inst.promised_solutions.iter().map(|s| s.n).min().unwrap();
                let shifted_a = inst.equation.a() * bi(2).pow(n_min as u32);
                if shifted_a > bi(2000) {
                    continue;
                }
                let shifted =
                    Equation::new(shifted_a.clone(), 2, inst.equation.b().clone()).unwrap();
                let set = enumerate_solutions(&shifted, 60, Some(&DEFAULT_SIEVE_MODULI));
                let ns = set.n_values();
                let seedable = ns.contains(&0)
                    && ns.iter().any(|&n| (1..=30).contains(&n))
                    && ns.len() >= 5;
                if !seedable {
                    continue;
                }
                let (want, _) = normalize(&shifted);
                if !hits.iter().any(|h| normalize(&h.equation).0 == want) {
                    return Err(format!(
                        "family image A={shifted_a}, B={} (variant {variant}, m={m}) missing",
                        inst.equation.b()
                    ));
                }
            }
        }
        Ok(())
    })());
}

#[test]
fn criterion_05_five_solution_equations() {
    report(5, "nine five-solution equations, bounded completeness", (|| {
        for (a, k, b, ns) in reproduce::THM25_ROWS {
            let e = eq(a as i128, k, b as i128);
            let set = enumerate_solutions(&e, 200, Some(&DEFAULT_SIEVE_MODULI));
            expect_eq(&format!("{a}*{k}^n + {b}"), set.n_values(), ns.to_vec())?;
        }
        Ok(())
    })());
}

#[test]
fn criterion_06_curve_table_audit() {
    report(6, "curve-table audit and solution extraction", (|| {
        let recs = curves::builtin_curve_tables().map_err(|e| e.to_string())?;
        for rec in &recs {
            if !rec.verifies() {
                return Err(format!(
                    "table {}, a={}: point (Y={}, x={}) off its curve",
                    rec.table_id, rec.a, rec.y, rec.x
                ));
            }
        }

        // second six-solution equation from table 1
        let t1: Vec<_> = recs.iter().filter(|r| r.table_id == 1).cloned().collect();
        let set = curves::extract_equation_solutions(&t1, &bi(165), 2, 3)
            .map_err(|e| e.to_string())?;
        expect_eq("165*2^n + 26404", set.n_values(), vec![0, 5, 7, 8, 10, 12])?;

        // the nine five-solution equations from tables 2-10
        for (idx, (a, k, _b, ns)) in reproduce::THM25_ROWS.iter().enumerate() {
            let table_id = (idx + 2) as u32;
            let grouped: Vec<_> = recs.iter().filter(|r| r.table_id == table_id).cloned().collect();
            let degree = if grouped.iter().any(|r| r.kind == curves::CurveKind::Quartic) {
                4
            } else {
                3
            };
            let set = curves::extract_equation_solutions(&grouped, &bi(*a as i128), *k, degree)
                .map_err(|e| e.to_string())?;
            expect_eq(&format!("table {table_id} ({a}*{k}^n)"), set.n_values(), ns.to_vec())?;
        }

        // first unit-A three-solution equation from table 11
        let t11: Vec<_> = recs.iter().filter(|r| r.table_id == 11).cloned().collect();
        let set = curves::extract_equation_solutions(&t11, &bi(1), 6, 3)
            .map_err(|e| e.to_string())?;
        expect_eq("6^n + 2185", set.n_values(), vec![3, 4, 6])
    })());
}

#[test]
fn criterion_07_elementary_12n_certificate() {
    report(7, "elementary certificate for 12^n + 25029865", (|| {
        let out = certify_equation(&eq(1, 12, 25029865), 10, &[Strategy::FactorEven])
            .map_err(|e| e.to_string())?;
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            CertifyOutcome::Bounded(_) => return Err("certification did not close".into()),
        };
        expect_eq("n-set", cert.final_solution_set.n_values(), vec![2, 6, 8])?;
        let has_factor_even = cert
            .steps
            .iter()
            .any(|s| matches!(s, CertStep::FactorEven(_)));
        let obstruction_modulus = cert.steps.iter().find_map(|s| match s {
            CertStep::OddObstruction(m) => Some(m.modulus),
            _ => None,
        });
        if !has_factor_even {
            return Err("no even-exponent factorization step".into());
        }
        expect_eq("odd-exponent obstruction modulus", obstruction_modulus, Some(5))?;
        if !verify_certificate(&cert).map_err(|e| e.to_string())? {
            return Err("independent verifier rejected the certificate".into());
        }
        Ok(())
    })());
}

#[test]
fn criterion_08_family_sweeps() {
    report(8, "parametric family sweeps", (|| {
        // k = 2 five-solution families, both variants
        for variant in [1u8, 2] {
            for m in 1..=40u32 {
                let inst = families::family_k2_five(variant, m).map_err(|e| e.to_string())?;
                let rep = &families::verify_family_range(std::slice::from_ref(&inst), None)[0];
                if !rep.promised_ok {
                    return Err(format!("k2-five variant {variant}, m={m}: promise broken"));
                }
                let extra_ns: Vec<u64> = rep.extras.iter().map(|s| s.n).collect();
                let expected: Vec<u64> = if variant == 1 && m == 1 { vec![4] } else { vec![] };
                if extra_ns != expected {
                    return Err(format!(
                        "k2-five variant {variant}, m={m}: extras {extra_ns:?}, expected {expected:?}"
                    ));
                }
            }
        }

        // three-solution family for k = 4t^2 + eps
        for t in 1..=5u32 {
            for eps in [1i8, -1] {
                for m in 1..=10u32 {
                    let inst = match families::family_beukers(t, eps, m) {
                        Ok(i) => i,
                        // eps = -1 with even m fails the divisibility
                        // precondition by design
                        Err(_) if eps == -1 && m % 2 == 0 => continue,
                        Err(e) => return Err(e.to_string()),
                    };
                    let rep = &families::verify_family_range(std::slice::from_ref(&inst), None)[0];
                    if !rep.promised_ok {
                        return Err(format!("beukers t={t}, eps={eps}, m={m}: promise broken"));
                    }
                }
            }
        }

        // three-solution family for even k = 2t
        for t in 1..=5u32 {
            for m in 1..=10u32 {
                let inst = match families::family_even_k(t, m) {
                    Ok(i) => i,
                    Err(_) => continue, // B divisible by k^2: out of scope
                };
                let rep = &families::verify_family_range(std::slice::from_ref(&inst), None)[0];
                if !rep.promised_ok {
                    return Err(format!("even-k t={t}, m={m}: promise broken"));
                }
            }
        }

        // four-solution construction on 50 pseudorandom (p, q, r) triples
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move |modulus: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % modulus
        };
        let ks = [2u64, 3, 5, 7];
        let mut done = 0;
        while done < 50 {
            let k = ks[next(4) as usize];
            let p = 1 + next(5) as u32;
            let q = p + 1 + next(5) as u32;
            let r = q + 1 + next(5) as u32;
            let inst = families::construct_four(k, p, q, r).map_err(|e| e.to_string())?;
            let rep = &families::verify_family_range(std::slice::from_ref(&inst), None)[0];
            if !rep.promised_ok {
                return Err(format!("construct_four k={k}, p={p}, q={q}, r={r}: promise broken"));
            }
            done += 1;
        }
        Ok(())
    })());
}

#[test]
fn criterion_09_polynomial_identity() {
    report(9, "polynomial identity and t=1 specialization", (|| {
        for m in 1..=20u32 {
            // the constructor itself checks x_i^2 + k^{n_i} = H_m
            // coefficient-exactly over Q[t] and errors on any mismatch
            let (h, sols) = families::family_neg_poly(m).map_err(|e| e.to_string())?;
            expect_eq(
                &format!("m={m} exponents"),
                sols.iter().map(|(_, n)| *n).collect::<Vec<_>>(),
                vec![0, (m + 2) as u64, (2 * m + 2) as u64],
            )?;

            // t = 1: k = 2 and H_m(1) = 2^{2(m+1)} + 1
            let one = num_rational::BigRational::from_integer(bi(1));
            let h1 = h.eval(&one);
            if !h1.is_integer() {
                return Err(format!("m={m}: H_m(1) not integral"));
            }
            let b = h1.to_integer();
            expect_eq(&format!("m={m} H_m(1)"), b.clone(), bi(2).pow(2 * (m + 1)) + 1)?;
            let e = Equation::new(bi(-1), 2, b).map_err(|e| e.to_string())?;
            let set = enumerate_solutions(&e, 200, None);
            expect_eq(&format!("m={m} solution count"), set.solutions.len(), 3)?;
        }
        Ok(())
    })());
}

#[test]
fn criterion_10_negative_a_table() {
    report(10, "fourteen-row negative-A table", (|| {
        for (k, b, ns) in reproduce::TABLE13_ROWS {
            let e = Equation::new(bi(-1), k, bi(b)).map_err(|e| e.to_string())?;
            let bound = auto_bound(&e).map_err(|e| e.to_string())?;
            let set = enumerate_solutions(&e, bound.max(0) as u64, None);
            let got: Vec<u64> = set.n_values().into_iter().filter(|n| *n > 0).collect();
            expect_eq(&format!("k={k}, B={b}"), got, ns.to_vec())?;
        }
        Ok(())
    })());
}

#[test]
fn criterion_11_conjecture_boxes() {
    report(11, "conjecture boxes and solution-count census", (|| {
        let triples = conjecture::conjecture_yn(
            &bi(2185),
            conjecture::CONJ_Y_MAX,
            &BigInt::from(conjecture::CONJ_VALUE_CAP),
        )
        .map_err(|e| e.to_string())?;
        let flat: Vec<(i128, u64, u64)> = triples
            .iter()
            .map(|(x, y, n)| (i128::try_from(x).unwrap(), *y, *n))
            .collect();
        expect_eq(
            "x^2 = y^n + 2185 box",
            flat,
            vec![
                (49, 6, 3),
                (221, 36, 3),
                (248, 39, 3),
                (1949, 156, 3),
                (59, 6, 4),
                (221, 6, 6),
            ],
        )?;

        // x^2 + k^n = B box: at most three solutions
        let unit = conjecture::census_max_solutions(&[2, 3, 5], 1, 5000, 64, 3)
            .map_err(|e| e.to_string())?;
        if unit.max_count > 3 || !unit.counterexamples.is_empty() {
            return Err(format!(
                "x^2 + k^n = B box: max count {} with {} counterexamples",
                unit.max_count,
                unit.counterexamples.len()
            ));
        }

        // x^2 + A*k^n = B box: at most four solutions
        let gen = conjecture::census_max_solutions(&[2, 3, 5], 50, 5000, 64, 4)
            .map_err(|e| e.to_string())?;
        if gen.max_count > 4 || !gen.counterexamples.is_empty() {
            return Err(format!(
                "x^2 + A*k^n = B box: max count {} with {} counterexamples",
                gen.max_count,
                gen.counterexamples.len()
            ));
        }
        Ok(())
    })());
}

#[test]
fn criterion_12_property_suites() {
    report(12, "property-suite smoke checks", (|| {
        // divisor method vs. brute force over a deterministic grid
        for a in 1..=25i128 {
            for k in [2u64, 3, 5] {
                for p in 1..=4u32 {
                    let kcap = a * ((k as i128).pow(p) - 1);
                    let mut brute: Vec<(i128, i128)> = Vec::new();
                    let mut d = 1i128;
                    while d * d <= kcap {
                        if kcap % d == 0 {
                            let q = kcap / d;
                            let x1 = (q - d) / 2;
                            // candidates with B = x1^2 - A = 0 are skipped
                            // by construction: the equation degenerates
                            if (q - d) % 2 == 0 && x1 * x1 != a {
                                brute.push((x1, (q + d) / 2));
                            }
                        }
                        d += 1;
                    }
                    brute.sort();
                    let mut got: Vec<(i128, i128)> = candidates_for(&bi(a), k, p)
                        .iter()
                        .map(|c| {
                            (
                                i128::try_from(&c.x1).unwrap(),
                                i128::try_from(&c.x2).unwrap(),
                            )
                        })
                        .collect();
                    got.sort();
                    expect_eq(&format!("A={a}, k={k}, p={p}"), got, brute)?;
                }
            }
        }

        // sieve moduli never change the enumerated set
        for (a, k, b) in [
            (1i128, 2u64, -7i128),
            (165, 2, 26404),
            (57, 2, 117440512),
            (-1, 6, 8865),
            (15, 2, -119),
            (7, 3, 1234),
        ] {
            let e = eq(a, k, b);
            let with = enumerate_solutions(&e, 120, Some(&DEFAULT_SIEVE_MODULI));
            let without = enumerate_solutions(&e, 120, None);
            expect_eq(
                &format!("sieve soundness A={a}, k={k}, B={b}"),
                with.n_values(),
                without.n_values(),
            )?;
        }

        // tampered certificates are rejected
        let out = certify_equation(
            &eq(57, 2, 117440512),
            26,
            &[Strategy::KadicReduction, Strategy::Modular],
        )
        .map_err(|e| e.to_string())?;
        let cert = match out {
            CertifyOutcome::Certified(c) => c,
            CertifyOutcome::Bounded(_) => return Err("certification did not close".into()),
        };
        let mut dropped = cert.clone();
        dropped.final_solution_set.solutions.pop();
        if verify_certificate(&dropped).unwrap_or(false) {
            return Err("verifier accepted a certificate missing a solution".into());
        }
        let mut shifted = cert.clone();
        shifted.final_solution_set.solutions[0].x += 1;
        if verify_certificate(&shifted).unwrap_or(false) {
            return Err("verifier accepted a certificate with a corrupted x".into());
        }

        // orbit elements conserve x^2 - D*y^2 = N
        for (d, n) in [(165i128, 26404i128), (330, 26404), (6, -5), (13, 27)] {
            let pr = PellProblem::new(bi(d), bi(n)).map_err(|e| e.to_string())?;
            for cl in pell_class_reps(&pr).map_err(|e| e.to_string())? {
                for (x, y) in orbit_unfold(&cl, 8) {
                    let lhs = &x * &x - bi(d) * &y * &y;
                    if lhs != bi(n) {
                        return Err(format!(
                            "orbit of D={d}, N={n} leaves the conic at ({x}, {y})"
                        ));
                    }
                }
            }
        }
        Ok(())
    })());
}
