//! Arbitrary-precision integer primitives: exact roots, square tests,
//! factorization, divisor enumeration, square-free parts and the modular
//! machinery used by the enumeration sieve and the certificate checkers.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, RnError};

/// Largest modulus accepted by [`square_residues`].
pub const SQUARE_RESIDUE_CAP: u64 = 1_000_000;

const TRIAL_DIVISION_BOUND: u64 = 10_000;

/// Exact integer square root: the unique `r` with `r^2 <= n < (r+1)^2`.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return Err(RnError::Domain(format!("isqrt of negative integer {n}")));
    }
    Ok(n.sqrt())
}

/// Returns `r >= 0` with `r^2 = n`, or `None` (always `None` for `n < 0`).
pub fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // cheap rejection mod 64 before the exact root
    let low = (n & BigInt::from(63u8)).to_u64().unwrap();
    const MASK: u64 = {
        let mut m = 0u64;
        let mut i = 0u64;
        while i < 64 {
            m |= 1 << ((i * i) % 64);
            i += 1;
        }
        m
    };
    if MASK & (1 << low) == 0 {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Deterministic Miller-Rabin, valid for all inputs below 3.3*10^24
/// (first 13 prime bases).
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let n = n.magnitude().clone();
    is_prime_uint(&n)
}

fn is_prime_uint(n: &BigUint) -> bool {
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    for b in BASES {
        if *n == BigUint::from(b) {
            return true;
        }
        if (n % BigUint::from(b)).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'bases: for b in BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Signed prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: BigInt,
    pub sign: i8,
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    /// Recomputes `sign * prod p^e`; equals `value` for any valid instance.
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc
    }

    /// Factorization of the product of two factored values.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut map: HashMap<BigInt, u32> = HashMap::new();
        for (p, e) in self.factors.iter().chain(other.factors.iter()) {
            *map.entry(p.clone()).or_insert(0) += e;
        }
        let mut factors: Vec<_> = map.into_iter().collect();
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Factorization {
            value: &self.value * &other.value,
            sign: self.sign * other.sign,
            factors,
        }
    }
}

/// Factors `n != 0` deterministically: trial division, then Brent's rho
/// with a fixed parameter schedule on survivors.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(RnError::Domain("factorize(0)".into()));
    }
    let sign: i8 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut map: HashMap<BigUint, u32> = HashMap::new();

    let strip = |m: &mut BigUint, p: u64, map: &mut HashMap<BigUint, u32>| {
        let pb = BigUint::from(p);
        while (&*m % &pb).is_zero() {
            *m /= &pb;
            *map.entry(pb.clone()).or_insert(0) += 1;
        }
    };

    strip(&mut m, 2, &mut map);
    strip(&mut m, 3, &mut map);
    let mut p = 5u64;
    while p <= TRIAL_DIVISION_BOUND && BigUint::from(p) * BigUint::from(p) <= m {
        strip(&mut m, p, &mut map);
        strip(&mut m, p + 2, &mut map);
        p += 6;
    }

    let mut stack = vec![m];
    while let Some(v) = stack.pop() {
        if v.is_one() {
            continue;
        }
        if is_prime_uint(&v) {
            *map.entry(v).or_insert(0) += 1;
            continue;
        }
        let d = brent_rho(&v);
        let q = &v / &d;
        stack.push(d);
        stack.push(q);
    }

    let mut factors: Vec<(BigInt, u32)> = map
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e))
        .collect();
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization {
        value: n.clone(),
        sign,
        factors,
    })
}

/// Brent-cycle Pollard rho; input must be odd, composite and not a prime
/// power of a trial-division prime. The parameter schedule c = 1, 2, 3, ...
/// is fixed so output is deterministic.
fn brent_rho(n: &BigUint) -> BigUint {
    // perfect powers of a single prime sneak past rho's cycle; peel them here
    for e in [2u32, 3, 5, 7] {
        let r = n.nth_root(e);
        if r.pow(e) == *n {
            return r;
        }
    }
    let one = BigUint::one();
    for c in 1u64.. {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % n;
        let mut x = BigUint::from(2u8);
        let mut y = x.clone();
        let mut d = one.clone();
        let mut count = 0u64;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle without factor; retry with next c
            }
            d = diff.gcd(n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if !d.is_one() && &d != n {
            return d;
        }
    }
    unreachable!("rho schedule exhausted")
}

/// All positive divisors of the factored value, in increasing order.
pub fn divisors(f: &Factorization) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        let mut pk = BigInt::one();
        for _ in 0..=*e {
            for d in &out {
                next.push(d * &pk);
            }
            pk *= p;
        }
        out = next;
    }
    out.sort();
    out
}

/// Square-free part sf(n): the unique square-free `s` with `n = s*m^2`,
/// `m > 0`. Carries the sign of `n`.
pub fn sqfree_part(n: &BigInt) -> Result<BigInt> {
    let f = factorize(n)?;
    let mut s = BigInt::from(f.sign);
    for (p, e) in &f.factors {
        if e % 2 == 1 {
            s *= p;
        }
    }
    Ok(s)
}

/// Exponent `t >= 0` with `k^t = y`, if `y` is a power of `k`.
pub fn is_power_of(y: &BigInt, k: u64) -> Option<u64> {
    debug_assert!(k >= 2);
    if !y.is_positive() {
        return None;
    }
    let kb = BigInt::from(k);
    let mut y = y.clone();
    let mut t = 0u64;
    while (&y % &kb).is_zero() {
        y /= &kb;
        t += 1;
    }
    if y.is_one() {
        Some(t)
    } else {
        None
    }
}

/// The eventually-periodic sequence `k^n mod m` as (tail, cycle):
/// `k^n mod m` is `tail[n]` for `n < tail.len()` and
/// `cycle[(n - tail.len()) % cycle.len()]` afterwards.
pub fn power_residue_cycle(k: u64, m: u64) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(m >= 2);
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut vals: Vec<u64> = Vec::new();
    let mut r = 1 % m;
    loop {
        if let Some(&i) = seen.get(&r) {
            let cycle = vals[i..].to_vec();
            vals.truncate(i);
            return (vals, cycle);
        }
        seen.insert(r, vals.len());
        vals.push(r);
        r = mulmod(r, k % m, m);
    }
}

/// The set of quadratic residues `{x^2 mod m}` as a membership table.
pub fn square_residues(m: u64) -> Result<Vec<bool>> {
    if m > SQUARE_RESIDUE_CAP {
        return Err(RnError::Resource(format!(
            "square_residues modulus {m} exceeds cap {SQUARE_RESIDUE_CAP}"
        )));
    }
    debug_assert!(m >= 2);
    let mut table = vec![false; m as usize];
    for x in 0..=m / 2 {
        table[(mulmod(x, x, m)) as usize] = true;
    }
    Ok(table)
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Sieve of Eratosthenes, primes `<= n`.
pub(crate) fn primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p as u64);
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i128) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&bi(0)).unwrap(), bi(0));
        // x-value of the n=0 solution of 165*2^n + 26404
        assert_eq!(isqrt(&bi(26569)).unwrap(), bi(163));
        assert_eq!(isqrt(&bi(26568)).unwrap(), bi(162));
        assert!(isqrt(&bi(-1)).is_err());
    }

    #[test]
    fn is_square_examples() {
        // m=1 in the second five-solution k=2 family: (2^9 + 2^5 - 1)^2 = 294849
        assert_eq!(is_square(&bi(294849)), Some(bi(543)));
        assert_eq!(is_square(&bi(-4)), None);
        assert_eq!(is_square(&bi(2)), None);
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&bi(117440512)).unwrap();
        assert_eq!(f.factors, vec![(bi(2), 24), (bi(7), 1)]);
        assert_eq!(f.reconstruct(), bi(117440512));

        let f = factorize(&bi(1)).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.sign, 1);

        let f = factorize(&bi(5115)).unwrap();
        assert_eq!(
            f.factors,
            vec![(bi(3), 1), (bi(5), 1), (bi(11), 1), (bi(31), 1)]
        );

        let f = factorize(&bi(-8)).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.reconstruct(), bi(-8));

        assert!(factorize(&bi(0)).is_err());
    }

    #[test]
    fn factorize_large_semiprime() {
        // forces the rho path: two primes above the trial bound
        let n = bi(1_000_003) * bi(1_000_033);
        let f = factorize(&n).unwrap();
        assert_eq!(f.factors, vec![(bi(1_000_003), 1), (bi(1_000_033), 1)]);
    }

    #[test]
    fn divisors_examples() {
        let d = divisors(&factorize(&bi(5115)).unwrap());
        assert_eq!(d.len(), 16);
        assert!(d.contains(&bi(15)));
        assert!(d.contains(&bi(341)));
        assert_eq!(divisors(&factorize(&bi(1)).unwrap()), vec![bi(1)]);
        assert_eq!(
            divisors(&factorize(&bi(4)).unwrap()),
            vec![bi(1), bi(2), bi(4)]
        );
    }

    #[test]
    fn sqfree_part_examples() {
        assert_eq!(sqfree_part(&bi(1)).unwrap(), bi(1));
        assert_eq!(sqfree_part(&bi(117440512)).unwrap(), bi(7));
        assert_eq!(sqfree_part(&bi(-8)).unwrap(), bi(-2));
        assert!(sqfree_part(&bi(0)).is_err());
    }

    #[test]
    fn is_power_of_examples() {
        assert_eq!(is_power_of(&bi(1), 6), Some(0));
        assert_eq!(is_power_of(&bi(32), 2), Some(5));
        assert_eq!(is_power_of(&bi(24), 2), None);
        assert_eq!(is_power_of(&bi(0), 2), None);
    }

    #[test]
    fn power_residue_cycle_examples() {
        assert_eq!(power_residue_cycle(2, 4), (vec![1, 2], vec![0]));
        assert_eq!(power_residue_cycle(2, 7), (vec![], vec![1, 2, 4]));
        assert_eq!(power_residue_cycle(6, 5), (vec![], vec![1]));
    }

    #[test]
    fn power_residue_cycle_reconstruction() {
        for (k, m) in [(2u64, 12u64), (3, 100), (10, 37), (6, 64)] {
            let (tail, cycle) = power_residue_cycle(k, m);
            assert!(tail.len() + cycle.len() <= m as usize);
            let mut r = 1 % m;
            for n in 0..(4 * m as usize) {
                let expect = if n < tail.len() {
                    tail[n]
                } else {
                    cycle[(n - tail.len()) % cycle.len()]
                };
                assert_eq!(r, expect, "k={k} m={m} n={n}");
                r = mulmod(r, k % m, m);
            }
        }
    }

    #[test]
    fn square_residues_examples() {
        let t4 = square_residues(4).unwrap();
        assert_eq!(t4, vec![true, true, false, false]);
        let t5 = square_residues(5).unwrap();
        assert_eq!(
            (0..5).filter(|&i| t5[i as usize]).collect::<Vec<u64>>(),
            vec![0, 1, 4]
        );
        let t2 = square_residues(2).unwrap();
        assert!(t2[0] && t2[1]);
        assert!(square_residues(SQUARE_RESIDUE_CAP + 1).is_err());
    }

    #[test]
    fn isqrt_bracket_sampled() {
        for n in (0..1_000_000u64).step_by(997) {
            let nb = bi(n as i128);
            let r = isqrt(&nb).unwrap();
            assert!(&r * &r <= nb);
            assert!((&r + 1) * (&r + 1) > nb);
        }
    }

    #[test]
    fn divisors_brute_force_agreement() {
        for n in [1i128, 2, 12, 97, 360, 5115, 99_991, 65_536] {
            let ds = divisors(&factorize(&bi(n)).unwrap());
            let brute: Vec<BigInt> = (1..=n).filter(|d| n % d == 0).map(bi).collect();
            assert_eq!(ds, brute, "n={n}");
        }
    }
}
