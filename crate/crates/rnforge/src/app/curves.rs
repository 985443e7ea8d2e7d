//! Curve-table ingestion: the integral points of the auxiliary Mordell
//! (cubic) and quartic curves ship as a checked-in CSV, are verified on
//! load, and are folded back into solution sets of the original
//! exponential equations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::{Result, RnError};
use crate::model::{Completeness, Equation, Solution, SolutionSet};

/// Curve shape: cubic x^2 = Y^3 + C*a^2, or quartic x^2 = a*Y^4 + C.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Cubic,
    Quartic,
}

/// One integral point of one auxiliary curve (x >= 0; the +- fold).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePointRecord {
    pub table_id: u32,
    pub kind: CurveKind,
    pub a: BigInt,
    pub c: BigInt,
    pub y: BigInt,
    pub x: BigInt,
}

impl CurvePointRecord {
    /// Exact check of the point on its curve.
    pub fn verifies(&self) -> bool {
        let x2 = &self.x * &self.x;
        match self.kind {
            CurveKind::Cubic => x2 == &self.y * &self.y * &self.y + &self.c * &self.a * &self.a,
            CurveKind::Quartic => {
                let y2 = &self.y * &self.y;
                x2 == &self.a * &y2 * &y2 + &self.c
            }
        }
    }
}

/// The transcription of the published integral-point tables.
pub const EMBEDDED_TABLES_CSV: &str = include_str!("../../data/curve_tables.csv");

/// Parses and verifies a curve-table CSV (header `table_id,kind,a,C,Y,x`).
pub fn parse_curve_tables(text: &str) -> Result<Vec<CurvePointRecord>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || (lineno == 1 && line.starts_with("table_id")) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(RnError::Parse {
                line: lineno,
                msg: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let parse_int = |s: &str, what: &str| -> Result<BigInt> {
            s.parse::<BigInt>().map_err(|_| RnError::Parse {
                line: lineno,
                msg: format!("bad {what} '{s}'"),
            })
        };
        let kind = match fields[1] {
            "cubic" => CurveKind::Cubic,
            "quartic" => CurveKind::Quartic,
            other => {
                return Err(RnError::Parse {
                    line: lineno,
                    msg: format!("unknown curve kind '{other}'"),
                })
            }
        };
        let rec = CurvePointRecord {
            table_id: fields[0].parse().map_err(|_| RnError::Parse {
                line: lineno,
                msg: format!("bad table_id '{}'", fields[0]),
            })?,
            kind,
            a: parse_int(fields[2], "a")?,
            c: parse_int(fields[3], "C")?,
            y: parse_int(fields[4], "Y")?,
            x: parse_int(fields[5], "x")?,
        };
        if rec.x.is_negative() {
            return Err(RnError::Parse {
                line: lineno,
                msg: "x must be non-negative (signs are folded)".into(),
            });
        }
        if !rec.verifies() {
            return Err(RnError::Data(format!(
                "line {lineno}: point (Y={}, x={}) fails its curve (table {}, a={})",
                rec.y, rec.x, rec.table_id, rec.a
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

/// Reads and verifies a curve-table CSV file.
pub fn ingest_curve_tables(path: &std::path::Path) -> Result<Vec<CurvePointRecord>> {
    parse_curve_tables(&std::fs::read_to_string(path)?)
}

/// The verified embedded tables.
pub fn builtin_curve_tables() -> Result<Vec<CurvePointRecord>> {
    parse_curve_tables(EMBEDDED_TABLES_CSV)
}

/// Folds curve points back into solutions of x^2 = A*k^n + B. Records are
/// grouped by multiplier a_i = A*k^i for i < degree; cubic points with
/// Y = a_i*k^m give n = 3m+i and x_eq = x/a_i, quartic points with
/// Y = k^m give n = 4m+i and x_eq = x.
pub fn extract_equation_solutions(
    records: &[CurvePointRecord],
    a: &BigInt,
    k: u64,
    degree: u8,
) -> Result<SolutionSet> {
    if !(degree == 3 || degree == 4) {
        return Err(RnError::Domain("degree must be 3 or 4".into()));
    }
    let mut b: Option<BigInt> = None;
    let mut solutions = Vec::new();
    for rec in records {
        // recover i from the record's multiplier
        let (q, r) = rec.a.div_rem(a);
        if !r.is_zero() {
            continue;
        }
        let Some(i) = arith::is_power_of(&q, k) else {
            continue;
        };
        if i >= degree as u64 {
            continue;
        }
        let rec_b = match rec.kind {
            CurveKind::Cubic => rec.c.clone(),
            CurveKind::Quartic => rec.c.clone(),
        };
        match &b {
            None => b = Some(rec_b),
            Some(prev) if *prev == rec_b => {}
            Some(prev) => {
                return Err(RnError::Data(format!(
                    "inconsistent B across grouped records: {prev} vs {rec_b}"
                )))
            }
        }
        if rec.y.is_negative() || rec.y.is_zero() {
            continue;
        }
        match rec.kind {
            CurveKind::Cubic => {
                // Y = a_i * k^m
                let (yq, yr) = rec.y.div_rem(&rec.a);
                if !yr.is_zero() {
                    continue;
                }
                let Some(m) = arith::is_power_of(&yq, k) else {
                    continue;
                };
                let (xq, xr) = rec.x.div_rem(&rec.a);
                if !xr.is_zero() {
                    return Err(RnError::Data(format!(
                        "cubic point x = {} not divisible by a = {}",
                        rec.x, rec.a
                    )));
                }
                solutions.push(Solution {
                    x: xq,
                    n: 3 * m + i,
                });
            }
            CurveKind::Quartic => {
                let Some(m) = arith::is_power_of(&rec.y, k) else {
                    continue;
                };
                solutions.push(Solution {
                    x: rec.x.clone(),
                    n: 4 * m + i,
                });
            }
        }
    }
    let b = b.ok_or_else(|| RnError::Data("no records matched the multiplier group".into()))?;
    let equation = Equation::new(a.clone(), k, b)?;
    for s in &solutions {
        if !crate::model::verify_solution(&equation, &s.x, s.n) {
            return Err(RnError::Data(format!(
                "extracted solution (x={}, n={}) fails on {equation}",
                s.x, s.n
            )));
        }
    }
    solutions.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.x.cmp(&b.x)));
    solutions.dedup();
    Ok(SolutionSet {
        equation,
        solutions,
        completeness: Completeness::Certified("integral-point table extraction".into()),
    })
}
