//! JSONL record schemas. Every integer is encoded as a decimal string so
//! that records survive consumers with 64-bit assumptions; records
//! round-trip byte-identically through parse -> serialize.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::certify::{
    CertStep, CompletenessCertificate, FactorizationCertificate, ModularCertificate,
    ReductionStep,
};
use crate::error::{Result, RnError};
use crate::model::{Completeness, Equation, Solution, SolutionSet};
use crate::pell::{
    Exclusion, PellProblem, PellUnit, PowerSieveCertificate, SieveProblem, SurvivingIndex,
};
use crate::search::SearchHit;

fn s<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

fn equation_value(eq: &Equation) -> Value {
    json!({ "A": s(eq.a()), "k": s(eq.k()), "B": s(eq.b()) })
}

fn completeness_value(c: &Completeness) -> Value {
    match c {
        Completeness::Bounded(n) => json!({ "bounded": s(n) }),
        Completeness::Certified(label) => json!({ "certified": label }),
    }
}

/// {type:"solution", A, k, B, x, n}.
pub fn solution_record(eq: &Equation, sol: &Solution) -> Value {
    json!({
        "type": "solution",
        "A": s(eq.a()), "k": s(eq.k()), "B": s(eq.b()),
        "x": s(&sol.x), "n": s(sol.n),
    })
}

/// {type:"hit", equation, solutions[], completeness}.
pub fn hit_record(hit: &SearchHit) -> Value {
    json!({
        "type": "hit",
        "equation": equation_value(&hit.equation),
        "solutions": hit.solutions.solutions.iter()
            .map(|sol| json!({ "x": s(&sol.x), "n": s(sol.n) }))
            .collect::<Vec<_>>(),
        "completeness": completeness_value(&hit.solutions.completeness),
    })
}

/// {type:"report", target, status, diffs[]}.
pub fn report_record(target: &str, status: &str, diffs: &[String]) -> Value {
    json!({ "type": "report", "target": target, "status": status, "diffs": diffs })
}

fn step_value(step: &CertStep) -> Value {
    match step {
        CertStep::Reduction(r) => json!({
            "step": "reduction",
            "s": s(r.s),
            "residual": equation_value(&r.residual_equation),
            "low_range_checked": s(r.low_range_checked),
        }),
        CertStep::Modular(mc) => modular_value("modular", mc),
        CertStep::OddObstruction(mc) => modular_value("odd_obstruction", mc),
        CertStep::FactorEven(fc) => json!({
            "step": "factor_even",
            "B": s(&fc.b),
            "factor_pairs": fc.factor_pairs.iter()
                .map(|(d, e)| json!([s(d), s(e)])).collect::<Vec<_>>(),
            "admissible": fc.admissible.iter()
                .map(|(m, x)| json!([s(m), s(x)])).collect::<Vec<_>>(),
        }),
        CertStep::PellSieve(ps) => json!({
            "step": "pell_sieve",
            "k": s(ps.k),
            "j_used": s(ps.j_used),
            "j_max": s(ps.j_max),
            "direct_check_bound": s(ps.direct_check_bound),
            "problems": ps.problems.iter().map(|sp| json!({
                "D": s(&sp.problem.d),
                "N": s(&sp.problem.n),
                "residue": s(sp.residue),
                "unit": [s(&sp.unit.u), s(&sp.unit.v)],
                "classes": sp.classes.iter()
                    .map(|(x, y)| json!([s(x), s(y)])).collect::<Vec<_>>(),
                "class_scan_bound": s(&sp.class_scan_bound),
            })).collect::<Vec<_>>(),
            "exclusions": ps.exclusions.iter().map(|e| json!({
                "problem": s(e.problem_idx),
                "class": s(e.class_idx),
                "branch": s(e.branch),
                "index_residue": s(e.index_residue),
                "period": s(e.period),
                "modulus": s(e.modulus),
            })).collect::<Vec<_>>(),
            "surviving": ps.surviving_indices.iter().map(|v| json!({
                "problem": s(v.problem_idx),
                "class": s(v.class_idx),
                "branch": s(v.branch),
                "orbit_index": s(v.orbit_index),
                "x": s(&v.x), "y": s(&v.y), "m": s(v.m), "n": s(v.n),
            })).collect::<Vec<_>>(),
            "resulting_n_set": ps.resulting_n_set.iter().map(s).collect::<Vec<_>>(),
        }),
    }
}

/// {type:"certificate", equation, direct_range, steps[], final[], completeness}.
pub fn certificate_record(cert: &CompletenessCertificate) -> Value {
    json!({
        "type": "certificate",
        "equation": equation_value(&cert.equation),
        "direct_range": s(cert.direct_range),
        "steps": cert.steps.iter().map(step_value).collect::<Vec<_>>(),
        "final": cert.final_solution_set.solutions.iter()
            .map(|sol| json!({ "x": s(&sol.x), "n": s(sol.n) }))
            .collect::<Vec<_>>(),
        "completeness": completeness_value(&cert.final_solution_set.completeness),
    })
}

fn modular_value(kind: &str, mc: &ModularCertificate) -> Value {
    json!({
        "step": kind,
        "modulus": s(mc.modulus),
        "n0": s(mc.n0),
        "checked_residue_classes": mc.checked_residue_classes.iter().map(s).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| RnError::Format(format!("{what}: expected object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| RnError::Format(format!("missing field '{key}'")))
}

fn parse_bigint(v: &Value, what: &str) -> Result<BigInt> {
    let txt = v
        .as_str()
        .ok_or_else(|| RnError::Format(format!("{what}: expected decimal string")))?;
    txt.parse::<BigInt>()
        .map_err(|_| RnError::Format(format!("{what}: bad integer '{txt}'")))
}

fn parse_u64(v: &Value, what: &str) -> Result<u64> {
    let txt = v
        .as_str()
        .ok_or_else(|| RnError::Format(format!("{what}: expected decimal string")))?;
    txt.parse::<u64>()
        .map_err(|_| RnError::Format(format!("{what}: bad integer '{txt}'")))
}

fn parse_equation(v: &Value) -> Result<Equation> {
    let m = obj(v, "equation")?;
    Equation::new(
        parse_bigint(field(m, "A")?, "A")?,
        parse_u64(field(m, "k")?, "k")?,
        parse_bigint(field(m, "B")?, "B")?,
    )
}

fn parse_solutions(v: &Value) -> Result<Vec<Solution>> {
    let arr = v
        .as_array()
        .ok_or_else(|| RnError::Format("solutions: expected array".into()))?;
    arr.iter()
        .map(|sv| {
            let m = obj(sv, "solution")?;
            Ok(Solution {
                x: parse_bigint(field(m, "x")?, "x")?,
                n: parse_u64(field(m, "n")?, "n")?,
            })
        })
        .collect()
}

fn parse_completeness(v: &Value) -> Result<Completeness> {
    let m = obj(v, "completeness")?;
    if let Some(b) = m.get("bounded") {
        return Ok(Completeness::Bounded(parse_u64(b, "bounded")?));
    }
    if let Some(c) = m.get("certified") {
        let label = c
            .as_str()
            .ok_or_else(|| RnError::Format("certified: expected string".into()))?;
        return Ok(Completeness::Certified(label.to_string()));
    }
    Err(RnError::Format("completeness: unknown variant".into()))
}

fn parse_modular(m: &Map<String, Value>) -> Result<ModularCertificate> {
    let classes = field(m, "checked_residue_classes")?
        .as_array()
        .ok_or_else(|| RnError::Format("checked_residue_classes: expected array".into()))?
        .iter()
        .map(|v| parse_u64(v, "residue class"))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModularCertificate {
        modulus: parse_u64(field(m, "modulus")?, "modulus")?,
        n0: parse_u64(field(m, "n0")?, "n0")?,
        checked_residue_classes: classes,
    })
}

fn parse_step(v: &Value) -> Result<CertStep> {
    let m = obj(v, "step")?;
    let kind = field(m, "step")?
        .as_str()
        .ok_or_else(|| RnError::Format("step: expected string tag".into()))?;
    match kind {
        "reduction" => Ok(CertStep::Reduction(ReductionStep {
            s: parse_u64(field(m, "s")?, "s")? as u32,
            residual_equation: parse_equation(field(m, "residual")?)?,
            low_range_checked: parse_u64(field(m, "low_range_checked")?, "low_range_checked")?,
        })),
        "modular" => Ok(CertStep::Modular(parse_modular(m)?)),
        "odd_obstruction" => Ok(CertStep::OddObstruction(parse_modular(m)?)),
        "factor_even" => {
            let pair = |v: &Value, what: &str| -> Result<(BigInt, BigInt)> {
                let a = v
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| RnError::Format(format!("{what}: expected pair")))?;
                Ok((parse_bigint(&a[0], what)?, parse_bigint(&a[1], what)?))
            };
            let pairs = field(m, "factor_pairs")?
                .as_array()
                .ok_or_else(|| RnError::Format("factor_pairs: expected array".into()))?
                .iter()
                .map(|v| pair(v, "factor pair"))
                .collect::<Result<Vec<_>>>()?;
            let adm = field(m, "admissible")?
                .as_array()
                .ok_or_else(|| RnError::Format("admissible: expected array".into()))?
                .iter()
                .map(|v| {
                    let (mm, x) = pair(v, "admissible pair")?;
                    let mm = mm
                        .try_into()
                        .map_err(|_| RnError::Format("admissible exponent out of range".into()))?;
                    Ok((mm, x))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CertStep::FactorEven(FactorizationCertificate {
                b: parse_bigint(field(m, "B")?, "B")?,
                factor_pairs: pairs,
                admissible: adm,
            }))
        }
        "pell_sieve" => {
            let problems = field(m, "problems")?
                .as_array()
                .ok_or_else(|| RnError::Format("problems: expected array".into()))?
                .iter()
                .map(|pv| {
                    let p = obj(pv, "problem")?;
                    let unit = field(p, "unit")?
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .ok_or_else(|| RnError::Format("unit: expected pair".into()))?;
                    let d = parse_bigint(field(p, "D")?, "D")?;
                    let classes = field(p, "classes")?
                        .as_array()
                        .ok_or_else(|| RnError::Format("classes: expected array".into()))?
                        .iter()
                        .map(|cv| {
                            let a = cv
                                .as_array()
                                .filter(|a| a.len() == 2)
                                .ok_or_else(|| RnError::Format("class: expected pair".into()))?;
                            Ok((parse_bigint(&a[0], "class x")?, parse_bigint(&a[1], "class y")?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(SieveProblem {
                        problem: PellProblem::new(d.clone(), parse_bigint(field(p, "N")?, "N")?)?,
                        residue: parse_u64(field(p, "residue")?, "residue")? as u8,
                        unit: PellUnit {
                            d,
                            u: parse_bigint(&unit[0], "unit u")?,
                            v: parse_bigint(&unit[1], "unit v")?,
                        },
                        classes,
                        class_scan_bound: parse_bigint(
                            field(p, "class_scan_bound")?,
                            "class_scan_bound",
                        )?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let exclusions = field(m, "exclusions")?
                .as_array()
                .ok_or_else(|| RnError::Format("exclusions: expected array".into()))?
                .iter()
                .map(|ev| {
                    let e = obj(ev, "exclusion")?;
                    Ok(Exclusion {
                        problem_idx: parse_u64(field(e, "problem")?, "problem")? as usize,
                        class_idx: parse_u64(field(e, "class")?, "class")? as usize,
                        branch: parse_u64(field(e, "branch")?, "branch")? as u8,
                        index_residue: parse_u64(field(e, "index_residue")?, "index_residue")?,
                        period: parse_u64(field(e, "period")?, "period")?,
                        modulus: parse_u64(field(e, "modulus")?, "modulus")?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let surviving = field(m, "surviving")?
                .as_array()
                .ok_or_else(|| RnError::Format("surviving: expected array".into()))?
                .iter()
                .map(|sv| {
                    let v = obj(sv, "surviving")?;
                    Ok(SurvivingIndex {
                        problem_idx: parse_u64(field(v, "problem")?, "problem")? as usize,
                        class_idx: parse_u64(field(v, "class")?, "class")? as usize,
                        branch: parse_u64(field(v, "branch")?, "branch")? as u8,
                        orbit_index: parse_u64(field(v, "orbit_index")?, "orbit_index")?,
                        x: parse_bigint(field(v, "x")?, "x")?,
                        y: parse_bigint(field(v, "y")?, "y")?,
                        m: parse_u64(field(v, "m")?, "m")?,
                        n: parse_u64(field(v, "n")?, "n")?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let n_set = field(m, "resulting_n_set")?
                .as_array()
                .ok_or_else(|| RnError::Format("resulting_n_set: expected array".into()))?
                .iter()
                .map(|v| parse_u64(v, "n"))
                .collect::<Result<Vec<_>>>()?;
            Ok(CertStep::PellSieve(PowerSieveCertificate {
                k: parse_u64(field(m, "k")?, "k")?,
                j_used: parse_u64(field(m, "j_used")?, "j_used")? as u32,
                j_max: parse_u64(field(m, "j_max")?, "j_max")? as u32,
                direct_check_bound: parse_u64(field(m, "direct_check_bound")?, "bound")? as u32,
                problems,
                exclusions,
                surviving_indices: surviving,
                resulting_n_set: n_set,
            }))
        }
        other => Err(RnError::Format(format!("unknown step kind '{other}'"))),
    }
}

/// Parses a {type:"certificate"} record back into a certificate.
pub fn parse_certificate(v: &Value) -> Result<CompletenessCertificate> {
    let m = obj(v, "certificate")?;
    if field(m, "type")?.as_str() != Some("certificate") {
        return Err(RnError::Format("record is not a certificate".into()));
    }
    let equation = parse_equation(field(m, "equation")?)?;
    let steps = field(m, "steps")?
        .as_array()
        .ok_or_else(|| RnError::Format("steps: expected array".into()))?
        .iter()
        .map(parse_step)
        .collect::<Result<Vec<_>>>()?;
    let solutions = parse_solutions(field(m, "final")?)?;
    let completeness = parse_completeness(field(m, "completeness")?)?;
    Ok(CompletenessCertificate {
        equation: equation.clone(),
        direct_range: parse_u64(field(m, "direct_range")?, "direct_range")?,
        steps,
        final_solution_set: SolutionSet {
            equation,
            solutions,
            completeness,
        },
    })
}

/// Parses a {type:"solution"} record.
pub fn parse_solution_record(v: &Value) -> Result<(Equation, Solution)> {
    let m = obj(v, "solution record")?;
    if field(m, "type")?.as_str() != Some("solution") {
        return Err(RnError::Format("record is not a solution".into()));
    }
    let eq = Equation::new(
        parse_bigint(field(m, "A")?, "A")?,
        parse_u64(field(m, "k")?, "k")?,
        parse_bigint(field(m, "B")?, "B")?,
    )?;
    Ok((
        eq,
        Solution {
            x: parse_bigint(field(m, "x")?, "x")?,
            n: parse_u64(field(m, "n")?, "n")?,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_equation, CertifyOutcome, Strategy};

    #[test]
    fn solution_round_trip() {
        let eq = Equation::new(BigInt::from(1), 2, BigInt::from(-7)).unwrap();
        let sol = Solution {
            x: BigInt::from(181),
            n: 15,
        };
        let rec = solution_record(&eq, &sol);
        let line = rec.to_string();
        let back: Value = serde_json::from_str(&line).unwrap();
        assert_eq!(back.to_string(), line);
        let (eq2, sol2) = parse_solution_record(&back).unwrap();
        assert_eq!((eq2, sol2), (eq, sol));
    }

    #[test]
    fn certificate_round_trip_all_step_kinds() {
        for (eq, strat) in [
            (
                Equation::new(BigInt::from(57), 2, BigInt::from(117440512)).unwrap(),
                vec![Strategy::KadicReduction, Strategy::Modular],
            ),
            (
                Equation::new(BigInt::from(1), 12, BigInt::from(25029865)).unwrap(),
                vec![Strategy::FactorEven],
            ),
            (
                Equation::new(BigInt::from(165), 2, BigInt::from(26404)).unwrap(),
                vec![Strategy::PellSieve],
            ),
        ] {
            let CertifyOutcome::Certified(cert) = certify_equation(&eq, 26, &strat).unwrap()
            else {
                panic!("certification failed for {eq}")
            };
            let rec = certificate_record(&cert);
            let line = rec.to_string();
            let back: Value = serde_json::from_str(&line).unwrap();
            assert_eq!(back.to_string(), line, "byte-identical round trip");
            let cert2 = parse_certificate(&back).unwrap();
            assert_eq!(cert2, cert);
            assert!(crate::certify::verify_certificate(&cert2).unwrap());
        }
    }

    #[test]
    fn malformed_certificate_is_format_error() {
        let v: Value = serde_json::json!({"type": "certificate", "steps": []});
        assert!(matches!(parse_certificate(&v), Err(RnError::Format(_))));
    }
}
