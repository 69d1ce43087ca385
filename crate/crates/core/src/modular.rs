//! Arithmetic modulo a prime: primality, primitive roots, discrete logarithms
//! and Dirichlet characters.
//!
//! A character mod `q` is indexed by `j ∈ [0, q-2]` against the smallest
//! primitive root `g`:
//!
//! ```text
//! χ_j(g^k) = e(j·k / (q-1)),   χ_j(n) = 0 when q | n.
//! ```
//!
//! Character values are kept as the integer exponent `j·dlog(n) mod (q-1)`
//! and only turned into complex numbers at summation time.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::e_fraction;

/// Largest modulus accepted by [`PrimeModulus`].
pub const MAX_MODULUS: u64 = 1 << 31;

/// Largest modulus for which a discrete-log table is built (512 MiB of `u32`).
pub const MAX_TABLE_MODULUS: u64 = 1 << 27;

const NO_LOG: u32 = u32::MAX;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest generator of `(Z/qZ)^*`; `1` for `q = 2`.
pub fn find_primitive_root(q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Ok(1);
    }
    let order = q - 1;
    let factors = distinct_prime_factors(order);
    (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, order / p, q) != 1))
        .ok_or(Error::NotPrime(q))
}

/// A prime modulus together with its primitive root and discrete-log table.
#[derive(Debug, Clone)]
pub struct PrimeModulus {
    q: u64,
    g: u64,
    dlog: Vec<u32>,
}

impl PrimeModulus {
    pub fn new(q: u64) -> Result<Self> {
        if !(3..=MAX_MODULUS).contains(&q) {
            return Err(Error::ModulusOutOfRange(q));
        }
        if q > MAX_TABLE_MODULUS {
            return Err(Error::Guard {
                what: "discrete-log table",
                work: q as u128,
                limit: MAX_TABLE_MODULUS as u128,
            });
        }
        let g = find_primitive_root(q)?;
        let mut dlog = vec![NO_LOG; q as usize];
        let mut power = 1u64;
        for k in 0..(q - 1) as u32 {
            debug_assert_eq!(dlog[power as usize], NO_LOG);
            dlog[power as usize] = k;
            power = power * g % q;
        }
        debug_assert_eq!(power, 1);
        Ok(Self { q, g, dlog })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The primitive root the table is built against.
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// `q - 1`, the order of the unit group.
    pub fn group_order(&self) -> u64 {
        self.q - 1
    }

    #[inline]
    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }

    /// `k` with `g^k ≡ n (mod q)`, or `None` when `q | n`.
    #[inline]
    pub fn dlog(&self, n: i64) -> Option<u64> {
        self.dlog_residue(self.reduce(n))
    }

    /// Same as [`dlog`](Self::dlog) for an already reduced residue.
    #[inline]
    pub fn dlog_residue(&self, u: u64) -> Option<u64> {
        match self.dlog[u as usize] {
            NO_LOG => None,
            k => Some(k as u64),
        }
    }

    pub fn power(&self, k: u64) -> u64 {
        pow_mod(self.g, k, self.q)
    }
}

/// Dirichlet character `χ_j` modulo a prime.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: Arc<PrimeModulus>,
    index: u64,
}

impl DirichletCharacter {
    pub fn new(modulus: Arc<PrimeModulus>, index: u64) -> Result<Self> {
        let max = modulus.group_order() - 1;
        if index > max {
            return Err(Error::CharacterIndex { index, max });
        }
        Ok(Self { modulus, index })
    }

    /// Like [`new`](Self::new) but rejects the principal character.
    pub fn non_principal(modulus: Arc<PrimeModulus>, index: u64) -> Result<Self> {
        let chi = Self::new(modulus, index)?;
        if chi.is_principal() {
            return Err(Error::PrincipalCharacter);
        }
        Ok(chi)
    }

    /// Convenience constructor building a fresh table for `q`.
    pub fn for_prime(q: u64, index: u64) -> Result<Self> {
        Self::new(Arc::new(PrimeModulus::new(q)?), index)
    }

    /// The quadratic character (Legendre symbol).
    pub fn quadratic(modulus: Arc<PrimeModulus>) -> Result<Self> {
        let j = modulus.group_order() / 2;
        Self::non_principal(modulus, j)
    }

    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.q
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// Order Δ of the character: `(q-1) / gcd(j, q-1)`.
    pub fn order(&self) -> u64 {
        let n = self.modulus.group_order();
        n / gcd(self.index, n)
    }

    /// `j·dlog(n) mod (q-1)`, so that `χ(n) = e(exponent / (q-1))`.
    #[inline]
    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.exponent_residue(self.modulus.reduce(n))
    }

    #[inline]
    pub fn exponent_residue(&self, u: u64) -> Option<u64> {
        self.modulus
            .dlog_residue(u)
            .map(|k| mul_mod(k, self.index, self.modulus.group_order()))
    }

    /// `χ(n)` as a complex number (zero on multiples of `q`).
    pub fn eval(&self, n: i64) -> Complex64 {
        match self.exponent(n) {
            Some(k) => e_fraction(k as u128, self.modulus.group_order() as u128),
            None => Complex64::new(0.0, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::CompensatedSum;
    use proptest::prelude::*;

    /// Order of `g` by repeated multiplication.
    fn naive_order(g: u64, q: u64) -> u64 {
        let mut x = g % q;
        let mut k = 1;
        while x != 1 {
            x = x * g % q;
            k += 1;
        }
        k
    }

    #[test]
    fn primality_small_range_matches_trial_division() {
        for n in 0..5000u64 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(find_primitive_root(2), Ok(1));
        assert_eq!(find_primitive_root(7), Ok(3));
        assert_eq!(find_primitive_root(11), Ok(2));
        assert_eq!(find_primitive_root(12), Err(Error::NotPrime(12)));
    }

    #[test]
    fn primitive_root_is_smallest_by_exhaustive_order() {
        for q in (3..400).filter(|&q| is_prime(q)) {
            let g = find_primitive_root(q).unwrap();
            assert_eq!(naive_order(g, q), q - 1);
            for smaller in 2..g {
                assert!(naive_order(smaller, q) < q - 1);
            }
        }
    }

    #[test]
    fn dlog_table_inverts_powers() {
        let m = PrimeModulus::new(101).unwrap();
        for k in 0..100 {
            let u = m.power(k);
            assert_eq!(m.dlog(u as i64), Some(k));
        }
        assert_eq!(m.dlog(0), None);
        assert_eq!(m.dlog(-101), None);
    }

    #[test]
    fn modulus_range_is_enforced() {
        assert_eq!(PrimeModulus::new(2).unwrap_err(), Error::ModulusOutOfRange(2));
        assert_eq!(PrimeModulus::new(9).unwrap_err(), Error::NotPrime(9));
        assert!(PrimeModulus::new(MAX_TABLE_MODULUS + 1).unwrap_err().is_guard());
    }

    #[test]
    fn char_eval_examples() {
        let chi = DirichletCharacter::for_prime(7, 3).unwrap();
        assert_eq!(chi.eval(1), Complex64::new(1.0, 0.0));
        assert_eq!(chi.eval(7), Complex64::new(0.0, 0.0));
        // 3^2 = 2 mod 7, so χ(2) = e(3·2/6) = 1; 2 is a square mod 7.
        assert_eq!(chi.modulus().dlog(2), Some(2));
        assert_eq!(chi.eval(2), Complex64::new(1.0, 0.0));
        assert_eq!(chi.eval(3), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn char_order_examples() {
        assert_eq!(DirichletCharacter::for_prime(7, 0).unwrap().order(), 1);
        assert_eq!(DirichletCharacter::for_prime(7, 3).unwrap().order(), 2);
        assert_eq!(DirichletCharacter::for_prime(13, 4).unwrap().order(), 3);
    }

    #[test]
    fn character_index_is_validated() {
        let m = Arc::new(PrimeModulus::new(7).unwrap());
        assert!(matches!(
            DirichletCharacter::new(m.clone(), 6),
            Err(Error::CharacterIndex { index: 6, max: 5 })
        ));
        assert_eq!(
            DirichletCharacter::non_principal(m, 0).unwrap_err(),
            Error::PrincipalCharacter
        );
    }

    #[test]
    fn orthogonality_for_all_nonprincipal_characters() {
        for q in (3..=101).filter(|&q| is_prime(q)) {
            let m = Arc::new(PrimeModulus::new(q).unwrap());
            for j in 1..q - 1 {
                let chi = DirichletCharacter::new(m.clone(), j).unwrap();
                let mut acc = CompensatedSum::new();
                acc.extend((1..=q as i64).map(|n| chi.eval(n)));
                assert!(acc.total().norm() < 1e-9, "q={q} j={j}");
            }
        }
    }

    #[test]
    fn character_values_have_order_delta() {
        for (q, j) in [(13, 4), (31, 6), (101, 25), (97, 1)] {
            let chi = DirichletCharacter::for_prime(q, j).unwrap();
            let delta = chi.order();
            for n in 1..q as i64 {
                let k = chi.exponent(n).unwrap();
                assert_eq!(mul_mod(k, delta, q - 1), 0);
                assert!((chi.eval(n).powu(delta as u32) - 1.0).norm() < 1e-9);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn completely_multiplicative(
            qi in 0usize..20,
            j in 0u64..1000,
            m in -5000i64..5000,
            n in -5000i64..5000,
        ) {
            let primes: Vec<u64> = (3..=997).filter(|&q| is_prime(q)).collect();
            let q = primes[qi * primes.len() / 20];
            let chi = DirichletCharacter::for_prime(q, j % (q - 1)).unwrap();
            let lhs = chi.eval(m * n);
            let rhs = chi.eval(m) * chi.eval(n);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
