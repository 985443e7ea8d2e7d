//! Constructors and verifiers for the parametric families: the
//! four-solution construction from elementary symmetric polynomials, the
//! two five-solution k=2 families, the Beukers k = 4t^2 + eps family, the
//! even-k three-solution family, the negative-A polynomial identity over
//! Q[t], and the negative-A conjecture families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Result, RnError};
use crate::model::{enumerate_solutions, verify_solution, Equation, Solution};

/// Dense polynomial over Q with exact rational coefficients;
/// coefficients[i] is the degree-i coefficient, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coefficients: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coefficients: Vec<BigRational>) -> RationalPoly {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        RationalPoly { coefficients }
    }

    pub fn zero() -> RationalPoly {
        RationalPoly {
            coefficients: vec![],
        }
    }

    pub fn constant(c: BigRational) -> RationalPoly {
        RationalPoly::new(vec![c])
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> RationalPoly {
        RationalPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree of the zero polynomial is None.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn add(&self, other: &RationalPoly) -> RationalPoly {
        let n = self.coefficients.len().max(other.coefficients.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coefficients.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coefficients.iter().enumerate() {
            out[i] += c;
        }
        RationalPoly::new(out)
    }

    pub fn neg(&self) -> RationalPoly {
        RationalPoly::new(self.coefficients.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &RationalPoly) -> RationalPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalPoly) -> RationalPoly {
        if self.is_zero() || other.is_zero() {
            return RationalPoly::zero();
        }
        let mut out =
            vec![BigRational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> RationalPoly {
        RationalPoly::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> RationalPoly {
        let mut out = RationalPoly::constant(BigRational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Division with remainder: self = q*g + r with deg r < deg g.
    pub fn div_rem(&self, g: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        if g.is_zero() {
            return Err(RnError::Domain("polynomial division by zero".into()));
        }
        let mut r = self.coefficients.clone();
        let dg = g.coefficients.len() - 1;
        let lead = g.coefficients.last().unwrap();
        if r.len() <= dg {
            return Ok((RationalPoly::zero(), RationalPoly::new(r)));
        }
        let mut q = vec![BigRational::zero(); r.len() - dg];
        for i in (dg..r.len()).rev() {
            let c = &r[i] / lead;
            if c.is_zero() {
                continue;
            }
            q[i - dg] = c.clone();
            for (j, gc) in g.coefficients.iter().enumerate() {
                let idx = i - dg + j;
                let delta = gc * &c;
                r[idx] -= delta;
            }
        }
        Ok((RationalPoly::new(q), RationalPoly::new(r)))
    }

    /// Exact division; remainder must vanish.
    pub fn div_exact(&self, g: &RationalPoly) -> Result<RationalPoly> {
        let (q, r) = self.div_rem(g)?;
        if !r.is_zero() {
            return Err(RnError::Domain("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// A concrete equation produced by a named family, with its promised
/// solutions verified exactly on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInstance {
    pub family_id: String,
    pub parameters: Vec<(String, i64)>,
    pub equation: Equation,
    pub promised_solutions: Vec<Solution>,
    /// True when distinct defining formulas collapse onto one solution
    /// (e.g. the m=1 coincidence in the first k=2 five-solution family).
    pub degenerate: bool,
}

fn checked_instance(
    family_id: &str,
    parameters: Vec<(String, i64)>,
    equation: Equation,
    mut promised: Vec<Solution>,
) -> Result<FamilyInstance> {
    for s in &promised {
        if !verify_solution(&equation, &s.x, s.n) {
            return Err(RnError::Domain(format!(
                "{family_id}: promised solution (x={}, n={}) fails on {equation}",
                s.x, s.n
            )));
        }
    }
    promised.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.x.cmp(&b.x)));
    let before = promised.len();
    promised.dedup();
    Ok(FamilyInstance {
        family_id: family_id.to_string(),
        parameters,
        equation,
        promised_solutions: promised.clone(),
        degenerate: promised.len() < before,
    })
}

/// Four guaranteed solutions at n in {0, p, q, r} from the elementary
/// symmetric polynomials of (1, k^p, k^q, k^r):
/// A = 8(s1^3 - 4 s2 s1 + 8 s3), B = s1^4 - 8 s2 s1^2 + 16 s2^2 - 64 s4.
pub fn construct_four(k: u64, p: u32, q: u32, r: u32) -> Result<FamilyInstance> {
    if k < 2 || !(0 < p && p < q && q < r) {
        return Err(RnError::Domain("require k >= 2 and 0 < p < q < r".into()));
    }
    let kb = BigInt::from(k);
    let vals = [BigInt::one(), kb.pow(p), kb.pow(q), kb.pow(r)];
    let s1: BigInt = vals.iter().sum();
    let mut s2 = BigInt::zero();
    let mut s3 = BigInt::zero();
    for i in 0..4 {
        for j in (i + 1)..4 {
            s2 += &vals[i] * &vals[j];
            for l in (j + 1)..4 {
                s3 += &vals[i] * &vals[j] * &vals[l];
            }
        }
    }
    let s4: BigInt = vals.iter().product();
    let (c4, c8, c16, c64) = (
        BigInt::from(4),
        BigInt::from(8),
        BigInt::from(16),
        BigInt::from(64),
    );
    let a: BigInt = &c8 * (&s1 * &s1 * &s1 - &c4 * &s2 * &s1 + &c8 * &s3);
    let b: BigInt = &s1 * &s1 * &s1 * &s1 - &c8 * &s2 * &s1 * &s1 + &c16 * &s2 * &s2 - &c64 * &s4;
    let equation = Equation::new(a.clone(), k, b.clone())?;
    let mut promised = Vec::new();
    for n in [0u32, p, q, r] {
        let v = &a * kb.pow(n) + &b;
        let x = arith::is_square(&v).ok_or_else(|| {
            RnError::Domain(format!("construct_four: F(k^{n}) = {v} is not a square"))
        })?;
        promised.push(Solution { x, n: n as u64 });
    }
    checked_instance(
        "construct_four",
        vec![
            ("k".into(), k as i64),
            ("p".into(), p as i64),
            ("q".into(), q as i64),
            ("r".into(), r as i64),
        ],
        equation,
        promised,
    )
}

/// The two k=2 families with at least five solutions (variant 1 or 2).
pub fn family_k2_five(variant: u8, m: u32) -> Result<FamilyInstance> {
    if m < 1 {
        return Err(RnError::Domain("m must be >= 1".into()));
    }
    let two = BigInt::from(2);
    let p2 = |e: u32| two.pow(e);
    match variant {
        1 => {
            let a = p2(3 * m) + 1;
            let b = BigInt::one() - p2(3 * m + 3);
            let equation = Equation::new(a, 2, b)?;
            let promised = vec![
                Solution { x: BigInt::from(3), n: 3 },
                Solution {
                    x: p2(2 * m + 1) - p2(m + 1) - 1,
                    n: (m + 2) as u64,
                },
                Solution {
                    x: p2(3 * m + 1) - 1,
                    n: (3 * m + 2) as u64,
                },
                Solution {
                    x: p2(3 * m + 2) + 1,
                    n: (3 * m + 4) as u64,
                },
                Solution {
                    x: p2(6 * m + 3) + p2(3 * m + 2) - 1,
                    n: (9 * m + 6) as u64,
                },
            ];
            checked_instance(
                "family_k2_five_v1",
                vec![("variant".into(), 1), ("m".into(), m as i64)],
                equation,
                promised,
            )
        }
        2 => {
            let a = (p2(6 * m) - 1) / 9;
            let b = (p2(6 * m + 3) + 1) / 9;
            let equation = Equation::new(a, 2, b)?;
            let promised = vec![
                Solution { x: p2(3 * m), n: 0 },
                Solution {
                    x: (p2(4 * m + 1) + p2(2 * m + 1) - 1) / 3,
                    n: (2 * m + 2) as u64,
                },
                Solution {
                    x: (p2(6 * m + 1) + 1) / 3,
                    n: (6 * m + 2) as u64,
                },
                Solution {
                    x: (p2(6 * m + 2) - 1) / 3,
                    n: (6 * m + 4) as u64,
                },
                Solution {
                    x: (p2(12 * m + 3) - p2(6 * m + 2) - 1) / 3,
                    n: (18 * m + 6) as u64,
                },
            ];
            checked_instance(
                "family_k2_five_v2",
                vec![("variant".into(), 2), ("m".into(), m as i64)],
                equation,
                promised,
            )
        }
        other => Err(RnError::Domain(format!("variant must be 1 or 2, got {other}"))),
    }
}

/// Beukers family: k = 4t^2 + eps, B = ((k^m - eps)/(4t))^2 - k^m, with
/// three solutions at n in {1, m, 2m+1}. For eps = -1 the divisibility
/// 4t | k^m - eps holds only for odd m.
pub fn family_beukers(t: u32, eps: i8, m: u32) -> Result<FamilyInstance> {
    if t < 1 || m < 1 || (eps != 1 && eps != -1) {
        return Err(RnError::Domain("require t >= 1, m >= 1, eps in {-1, 1}".into()));
    }
    let k = 4 * (t as u64) * (t as u64);
    let k = if eps == 1 { k + 1 } else { k - 1 };
    let kb = BigInt::from(k);
    let km = kb.pow(m);
    let num = &km - eps as i64;
    let four_t = BigInt::from(4 * t as i64);
    if !(&num % &four_t).is_zero() {
        return Err(RnError::Domain(format!(
            "4t = {four_t} does not divide k^m - eps = {num} (eps = -1 needs odd m)"
        )));
    }
    let w = num / &four_t;
    let b = &w * &w - &km;
    let equation = Equation::new(BigInt::one(), k, b)?;
    let promised = vec![
        Solution {
            x: (&w - BigInt::from(2 * t as i64)).abs(),
            n: 1,
        },
        Solution { x: w.clone(), n: m as u64 },
        Solution {
            x: (BigInt::from(2 * t as i64) * &km + eps as i64 * &w).abs(),
            n: (2 * m + 1) as u64,
        },
    ];
    checked_instance(
        "family_beukers",
        vec![
            ("t".into(), t as i64),
            ("eps".into(), eps as i64),
            ("m".into(), m as i64),
        ],
        equation,
        promised,
    )
}

/// Even-k family: x^2 = (2t)^n + t^2((2t)^{2(m+2)} - 2(2t+1)(2t)^{m+2} +
/// (2t-1)^2), solutions at n in {3, m+4, m+5}.
pub fn family_even_k(t: u32, m: u32) -> Result<FamilyInstance> {
    if t < 1 {
        return Err(RnError::Domain("t must be >= 1".into()));
    }
    let k = 2 * t as u64;
    let kb = BigInt::from(k);
    let tb = BigInt::from(t);
    let one = BigInt::one();
    let km2 = kb.pow(m + 2);
    let inner: BigInt =
        &km2 * &km2 - BigInt::from(2) * (&kb + &one) * &km2 + (&kb - &one) * (&kb - &one);
    let b: BigInt = &tb * &tb * inner;
    let k2 = &kb * &kb;
    if (&b % &k2).is_zero() {
        return Err(RnError::Domain("family invariant B % k^2 != 0 violated".into()));
    }
    let equation = Equation::new(BigInt::one(), k, b)?;
    let promised = vec![
        Solution {
            x: (&tb * (&km2 - &kb - &one)).abs(),
            n: 3,
        },
        Solution {
            x: (&tb * (&km2 - &kb + &one)).abs(),
            n: (m + 4) as u64,
        },
        Solution {
            x: (&tb * (&km2 + &kb - &one)).abs(),
            n: (m + 5) as u64,
        },
    ];
    checked_instance(
        "family_even_k",
        vec![("t".into(), t as i64), ("m".into(), m as i64)],
        equation,
        promised,
    )
}

/// The Theorem-4.1 identity over Q[t] with k = t^2 + 1: returns
/// H_m = k^2/(4(k-1)) * (k^{2m+2} + 2(k-2)k^m + 1) and the three
/// polynomial solutions (x(t), n) of x^2 + k^n = H_m, each verified as an
/// exact polynomial identity.
pub fn family_neg_poly(m: u32) -> Result<(RationalPoly, Vec<(RationalPoly, u64)>)> {
    let k = RationalPoly::from_int_coeffs(&[1, 0, 1]); // t^2 + 1
    let one = RationalPoly::from_int_coeffs(&[1]);
    let two = RationalPoly::from_int_coeffs(&[2]);
    let two_t = RationalPoly::from_int_coeffs(&[0, 2]);
    let km = k.pow(m);
    // h = k^{2m+2} + 2(k-2)k^m + 1
    let h = k
        .pow(2 * m + 2)
        .add(&k.sub(&two).mul(&two).mul(&km))
        .add(&one);
    // k - 1 = t^2, so H = k^2 * h / (4 t^2); exactness is the theorem's
    // double-root claim
    let four_t2 = RationalPoly::from_int_coeffs(&[0, 0, 4]);
    let h_m = k.mul(&k).mul(&h).div_exact(&four_t2)?;

    let x1 = k.pow(m + 2).add(&k).sub(&two).div_exact(&two_t)?;
    let x2 = k.mul(&k.pow(m + 1).sub(&one)).div_exact(&two_t)?;
    let x3 = k.mul(&km.mul(&k.sub(&two)).add(&one)).div_exact(&two_t)?;
    let sols = vec![
        (x1, 0u64),
        (x2, (m + 2) as u64),
        (x3, (2 * m + 2) as u64),
    ];
    for (x, n) in &sols {
        let lhs = x.mul(x).add(&k.pow(*n as u32));
        if lhs != h_m {
            return Err(RnError::Domain(format!(
                "polynomial identity fails at n = {n} for m = {m}"
            )));
        }
    }
    Ok((h_m, sols))
}

/// The two conjectured negative-A four-solution families (k = 2).
pub fn family_neg_conj(variant: u8, m: u32) -> Result<FamilyInstance> {
    if m < 1 {
        return Err(RnError::Domain("m must be >= 1".into()));
    }
    let p2 = |e: u32| BigInt::from(2).pow(e);
    let one = BigInt::one();
    let (a, b, ns, id): (BigInt, BigInt, Vec<u64>, &str) = match variant {
        1 => (
            -(p2(m + 1) + &one),
            p2(4 * (m + 1)) + p2(3 * (m + 1)) + p2(2 * m) + p2(m + 1) + &one,
            vec![0u64, (m + 2) as u64, (2 * m + 3) as u64, (3 * m + 3) as u64],
            "family_neg_conj_v1",
        ),
        2 => (
            -((p2(2 * m + 6) - &one) / BigInt::from(3)),
            (BigInt::from(49) * p2(2 * (2 * m + 5)) - BigInt::from(11) * p2(2 * (m + 3)) + &one)
                / BigInt::from(9),
            vec![0u64, 3, (2 * m + 7) as u64, (2 * m + 8) as u64],
            "family_neg_conj_v2",
        ),
        other => return Err(RnError::Domain(format!("variant must be 1 or 2, got {other}"))),
    };
    let equation = Equation::new(a, 2, b)?;
    let mut promised = Vec::new();
    for n in ns {
        let v = equation.value_at(n);
        let x = arith::is_square(&v).ok_or_else(|| {
            RnError::Domain(format!("{id}: promised n = {n} gives non-square {v}"))
        })?;
        promised.push(Solution { x, n });
    }
    checked_instance(
        id,
        vec![("variant".into(), variant as i64), ("m".into(), m as i64)],
        equation,
        promised,
    )
}

/// Batch verification result for one instance: promised solutions
/// re-verified and the enumeration's extra solutions (if any) up to n_max.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub instance: FamilyInstance,
    pub promised_ok: bool,
    pub found: Vec<Solution>,
    pub extras: Vec<Solution>,
}

/// Verifies each instance's promises and enumerates to n_max (default:
/// twice the largest promised exponent plus 16) to surface extras.
pub fn verify_family_range(instances: &[FamilyInstance], n_max: Option<u64>) -> Vec<FamilyReport> {
    instances
        .iter()
        .map(|inst| {
            let promised_ok = inst
                .promised_solutions
                .iter()
                .all(|s| verify_solution(&inst.equation, &s.x, s.n));
            let cap = n_max.unwrap_or_else(|| {
                inst.promised_solutions
                    .iter()
                    .map(|s| s.n)
                    .max()
                    .unwrap_or(0)
                    * 2
                    + 16
            });
            let found = enumerate_solutions(&inst.equation, cap, None).solutions;
            let extras = found
                .iter()
                .filter(|s| !inst.promised_solutions.contains(s))
                .cloned()
                .collect();
            FamilyReport {
                instance: inst.clone(),
                promised_ok,
                found,
                extras,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn poly_arithmetic() {
        let f = RationalPoly::from_int_coeffs(&[1, 2, 3]);
        let g = RationalPoly::from_int_coeffs(&[0, 1]);
        let prod = f.mul(&g);
        assert_eq!(prod, RationalPoly::from_int_coeffs(&[0, 1, 2, 3]));
        let (q, r) = prod.div_rem(&g).unwrap();
        assert_eq!(q, f);
        assert!(r.is_zero());
        let pt = rat(3, 7);
        assert_eq!(f.eval(&pt) * g.eval(&pt), prod.eval(&pt));
        assert_eq!(f.sub(&f), RationalPoly::zero());
        assert_eq!(RationalPoly::zero().degree(), None);
    }

    #[test]
    fn construct_four_example() {
        let inst = construct_four(2, 1, 2, 3).unwrap();
        assert_eq!(inst.equation.a(), &BigInt::from(1080));
        assert_eq!(inst.equation.b(), &BigInt::from(-1071));
        let xs: Vec<i64> = inst
            .promised_solutions
            .iter()
            .map(|s| s.x.to_i64().unwrap())
            .collect();
        assert_eq!(xs, vec![3, 33, 57, 87]);
        let (norm, scale) = crate::model::normalize(&inst.equation);
        assert_eq!(scale, BigInt::from(3));
        assert_eq!((norm.a().to_i64().unwrap(), norm.b().to_i64().unwrap()), (120, -119));
    }

    #[test]
    fn construct_four_rejects_bad_input() {
        assert!(construct_four(2, 2, 2, 3).is_err());
        assert!(construct_four(1, 1, 2, 3).is_err());
        assert!(construct_four(2, 0, 1, 2).is_err());
    }

    #[test]
    fn k2_five_variant1() {
        let inst = family_k2_five(1, 2).unwrap();
        assert_eq!(inst.equation.a(), &BigInt::from(65));
        assert_eq!(inst.equation.b(), &BigInt::from(-511));
        assert_eq!(
            inst.promised_solutions.iter().map(|s| s.n).collect::<Vec<_>>(),
            vec![3, 4, 8, 10, 24]
        );
        assert!(!inst.degenerate);

        // m=1 contains the Ramanujan-Nagell equation; two formulas collide
        let inst = family_k2_five(1, 1).unwrap();
        assert_eq!(inst.equation.a(), &BigInt::from(9));
        assert_eq!(inst.equation.b(), &BigInt::from(-63));
        assert_eq!(inst.promised_solutions.len(), 4);
        assert!(inst.degenerate);
    }

    #[test]
    fn k2_five_variant2() {
        let inst = family_k2_five(2, 1).unwrap();
        assert_eq!(inst.equation.a(), &BigInt::from(7));
        assert_eq!(inst.equation.b(), &BigInt::from(57));
        let pairs: Vec<(i64, u64)> = inst
            .promised_solutions
            .iter()
            .map(|s| (s.x.to_i64().unwrap(), s.n))
            .collect();
        assert_eq!(pairs, vec![(8, 0), (13, 4), (43, 8), (85, 10), (10837, 24)]);
    }

    #[test]
    fn beukers_examples() {
        let inst = family_beukers(1, 1, 2).unwrap();
        assert_eq!(inst.equation.k(), 5);
        assert_eq!(inst.equation.b(), &BigInt::from(11));
        let pairs: Vec<(i64, u64)> = inst
            .promised_solutions
            .iter()
            .map(|s| (s.x.to_i64().unwrap(), s.n))
            .collect();
        assert_eq!(pairs, vec![(4, 1), (6, 2), (56, 5)]);

        // eps = -1 with even m violates the divisibility precondition
        assert!(family_beukers(1, -1, 2).is_err());
        assert!(family_beukers(1, -1, 3).is_ok());
    }

    #[test]
    fn even_k_examples() {
        let inst = family_even_k(1, 0).unwrap();
        assert_eq!(inst.equation.k(), 2);
        assert_eq!(inst.equation.b(), &BigInt::from(-7));
        let pairs: Vec<(i64, u64)> = inst
            .promised_solutions
            .iter()
            .map(|s| (s.x.to_i64().unwrap(), s.n))
            .collect();
        assert_eq!(pairs, vec![(1, 3), (3, 4), (5, 5)]);
        assert!(family_even_k(2, 0).is_ok());
    }

    #[test]
    fn neg_poly_identity() {
        let (h, sols) = family_neg_poly(1).unwrap();
        assert_eq!(sols.iter().map(|(_, n)| *n).collect::<Vec<_>>(), vec![0, 3, 4]);
        // evaluation at t = 1 (k = 2): H = 2^{2(m+1)} + 1 = 17
        let one = rat(1, 1);
        assert_eq!(h.eval(&one), rat(17, 1));
        let xs: Vec<BigRational> = sols.iter().map(|(x, _)| x.eval(&one)).collect();
        assert_eq!(xs, vec![rat(4, 1), rat(3, 1), rat(1, 1)]);
    }

    #[test]
    fn neg_poly_t1_specialization_all_m() {
        for m in 0..=8u32 {
            let (h, _) = family_neg_poly(m).unwrap();
            let expect = BigRational::from_integer(BigInt::from(2).pow(2 * (m + 1)) + 1);
            assert_eq!(h.eval(&rat(1, 1)), expect, "m={m}");
        }
    }

    #[test]
    fn neg_conj_examples() {
        let inst = family_neg_conj(1, 1).unwrap();
        assert_eq!(inst.equation.a(), &BigInt::from(-5));
        assert_eq!(inst.equation.b(), &BigInt::from(329));
        let pairs: Vec<(i64, u64)> = inst
            .promised_solutions
            .iter()
            .map(|s| (s.x.to_i64().unwrap(), s.n))
            .collect();
        assert_eq!(pairs, vec![(18, 0), (17, 3), (13, 5), (3, 6)]);

        let inst = family_neg_conj(2, 1).unwrap();
        assert_eq!(inst.equation.a(), &BigInt::from(-85));
        assert_eq!(inst.equation.b(), &BigInt::from(88889));
        assert_eq!(
            inst.promised_solutions.iter().map(|s| s.n).collect::<Vec<_>>(),
            vec![0, 3, 9, 10]
        );
    }

    #[test]
    fn verify_range_flags_extras() {
        // m = 1 of the first five-solution family is 9*(2^n - 7)/... with
        // the extra Ramanujan-Nagell solution at n = 4
        let inst = family_k2_five(1, 1).unwrap();
        let reports = verify_family_range(&[inst], Some(40));
        assert!(reports[0].promised_ok);
        assert_eq!(
            reports[0].extras.iter().map(|s| s.n).collect::<Vec<_>>(),
            vec![4]
        );

        let inst = family_k2_five(1, 2).unwrap();
        let reports = verify_family_range(&[inst], Some(40));
        assert!(reports[0].promised_ok && reports[0].extras.is_empty());
    }
}
