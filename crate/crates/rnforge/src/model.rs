//! Equation/solution data model: the triple (A, k, B), normalization by
//! square factors of gcd(A, B), exact verification and bounded enumeration.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Result, RnError};

/// Default moduli for the enumeration square sieve. Each rejects a value
/// only when it is provably a non-residue, so the sieve never drops
/// solutions.
pub const DEFAULT_SIEVE_MODULI: [u64; 7] = [9, 5, 7, 13, 16, 11, 63];

/// Default exponent cap for interactive enumeration.
pub const DEFAULT_N_MAX: u64 = 100;

/// The equation x^2 = A*k^n + B with A, B nonzero and not both negative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    a: BigInt,
    k: u64,
    b: BigInt,
}

impl Equation {
    pub fn new(a: BigInt, k: u64, b: BigInt) -> Result<Equation> {
        if k < 2 {
            return Err(RnError::Domain(format!("k must be >= 2, got {k}")));
        }
        if a.is_zero() || b.is_zero() {
            return Err(RnError::Domain("A and B must be nonzero".into()));
        }
        if a.is_negative() && b.is_negative() {
            return Err(RnError::Domain("A and B must not both be negative".into()));
        }
        Ok(Equation { a, k, b })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// A*k^n + B, exactly.
    pub fn value_at(&self, n: u64) -> BigInt {
        &self.a * BigInt::from(self.k).pow(n as u32) + &self.b
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, mag) = if self.b.is_negative() { ("-", -&self.b) } else { ("+", self.b.clone()) };
        write!(f, "x^2 = {}*{}^n {} {}", self.a, self.k, sign, mag)
    }
}

impl FromStr for Equation {
    type Err = RnError;

    /// Parses the canonical form "x^2 = A*k^n + B" (also accepts "- |B|").
    fn from_str(s: &str) -> Result<Equation> {
        let err = |msg: &str| RnError::Parse { line: 0, msg: format!("{msg}: {s:?}") };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact
            .strip_prefix("x^2=")
            .ok_or_else(|| err("expected prefix \"x^2 =\""))?;
        let (a_str, rest) = rest.split_once('*').ok_or_else(|| err("expected '*'"))?;
        let (k_str, b_part) = rest.split_once("^n").ok_or_else(|| err("expected '^n'"))?;
        let a = BigInt::from_str(a_str).map_err(|_| err("bad A"))?;
        let k: u64 = k_str.parse().map_err(|_| err("bad k"))?;
        let b = if let Some(pos) = b_part.strip_prefix('+') {
            BigInt::from_str(pos).map_err(|_| err("bad B"))?
        } else if let Some(neg) = b_part.strip_prefix('-') {
            -BigInt::from_str(neg).map_err(|_| err("bad B"))?
        } else {
            return Err(err("expected '+' or '-' before B"));
        };
        Equation::new(a, k, b)
    }
}

/// A verified pair (x, n) with x >= 0 and n >= 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: BigInt,
    pub n: u64,
}

/// How exhaustive a solution list is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Completeness {
    /// Exhaustive for n <= n_max only.
    Bounded(u64),
    /// Proven complete by the named certificate.
    Certified(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub equation: Equation,
    pub solutions: Vec<Solution>,
    pub completeness: Completeness,
}

impl SolutionSet {
    pub fn n_values(&self) -> Vec<u64> {
        self.solutions.iter().map(|s| s.n).collect()
    }

    pub fn x_values(&self) -> Vec<BigInt> {
        self.solutions.iter().map(|s| s.x.clone()).collect()
    }

    /// Count of solutions in strictly positive integers (x >= 1, n >= 1).
    pub fn positive_count(&self) -> usize {
        self.solutions
            .iter()
            .filter(|s| s.n >= 1 && s.x.is_positive())
            .count()
    }
}

/// True iff x^2 = A*k^n + B exactly.
pub fn verify_solution(eq: &Equation, x: &BigInt, n: u64) -> bool {
    x * x == eq.value_at(n)
}

/// Divides out the largest d with d^2 | A and d^2 | B. The returned
/// equation has square-free gcd(A, B); solutions (x, n) correspond
/// bijectively to (x/d, n).
pub fn normalize(eq: &Equation) -> (Equation, BigInt) {
    let g = eq.a.gcd(&eq.b);
    if g.is_one() {
        return (eq.clone(), BigInt::one());
    }
    let mut d = BigInt::one();
    let f = arith::factorize(&g).expect("gcd of nonzero integers is nonzero");
    for (p, e) in &f.factors {
        d *= p.pow(e / 2);
    }
    if d.is_one() {
        return (eq.clone(), d);
    }
    let d2 = &d * &d;
    let eq2 = Equation::new(&eq.a / &d2, eq.k, &eq.b / &d2).expect("normalization preserves validity");
    (eq2, d)
}

/// For A < 0, B > 0: the largest n >= 0 with |A|*k^n <= B, or -1 when
/// even n = 0 is inadmissible. Every solution has n <= this bound.
pub fn auto_bound(eq: &Equation) -> Result<i64> {
    if !eq.a.is_negative() {
        return Err(RnError::Domain("auto_bound requires A < 0".into()));
    }
    let abs_a = -&eq.a;
    if abs_a > eq.b {
        return Ok(-1);
    }
    let mut n: i64 = 0;
    let mut t = &abs_a * eq.k;
    while t <= eq.b {
        n += 1;
        t *= eq.k;
    }
    Ok(n)
}

/// All solutions with 0 <= n <= n_max (further capped by [`auto_bound`]
/// when A < 0), by incremental evaluation and exact square testing.
pub fn enumerate_solutions(eq: &Equation, n_max: u64, sieve_moduli: Option<&[u64]>) -> SolutionSet {
    let n_eff = if eq.a.is_negative() {
        let bound = auto_bound(eq).expect("A < 0 checked");
        if bound < 0 {
            return SolutionSet {
                equation: eq.clone(),
                solutions: vec![],
                completeness: Completeness::Bounded(n_max),
            };
        }
        n_max.min(bound as u64)
    } else {
        n_max
    };

    // per-modulus state: (m, residue table, A*k^n mod m, B mod m, k mod m)
    let mut sieve: Vec<(u64, Vec<bool>, u64, u64, u64)> = Vec::new();
    if let Some(moduli) = sieve_moduli {
        for &m in moduli {
            let table = arith::square_residues(m).expect("sieve modulus under cap");
            let am = eq.a.mod_floor(&BigInt::from(m)).to_u64().unwrap();
            let bm = eq.b.mod_floor(&BigInt::from(m)).to_u64().unwrap();
            sieve.push((m, table, am, bm, eq.k % m));
        }
    }

    let mut solutions = Vec::new();
    let mut t = eq.a.clone();
    for n in 0..=n_eff {
        let mut pass = true;
        for (m, table, am, bm, _) in &sieve {
            if !table[((am + bm) % m) as usize] {
                pass = false;
                break;
            }
        }
        if pass {
            let v = &t + &eq.b;
            if let Some(x) = arith::is_square(&v) {
                solutions.push(Solution { x, n });
            }
        }
        t *= eq.k;
        for (m, _, am, _, km) in &mut sieve {
            *am = arith::mulmod(*am, *km, *m);
        }
    }

    SolutionSet {
        equation: eq.clone(),
        solutions,
        completeness: Completeness::Bounded(n_max),
    }
}
