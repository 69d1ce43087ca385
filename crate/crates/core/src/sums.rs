//! Short mixed character sums `Σ_{N<n≤N+H} e(f(n)) χ(n)`, complete sums of
//! `χ(F_x(m))` and Weil-bound applicability.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modular::{gcd, is_prime, DirichletCharacter};
use crate::numeric::{e_fraction, e_turns, frac, CompensatedSum, FracDD};
use crate::vinogradov::TupleAssignment;

/// Largest common denominator handled by the exact phase mode.
pub const MAX_EXACT_DENOMINATOR: u64 = 1 << 62;

/// Largest `|n|` for which the float phase mode is exact in its argument.
const MAX_FLOAT_ARGUMENT: i64 = 1 << 53;

/// One coefficient of a phase polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Real(f64),
    /// `num / den` with `den ≥ 1`.
    Rational { num: i64, den: u64 },
}

impl Coefficient {
    pub fn rational(num: i64, den: u64) -> Self {
        Coefficient::Rational { num, den }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Coefficient::Real(v) => v,
            Coefficient::Rational { num, den } => num as f64 / den as f64,
        }
    }

    /// The coefficient reduced mod 1 in double-word precision.
    pub fn reduced_dd(self) -> FracDD {
        match self {
            Coefficient::Real(v) => FracDD::from_f64(v),
            Coefficient::Rational { num, den } => FracDD::from_ratio(num as i128, den),
        }
    }

    /// The coefficient reduced mod 1, as a number in `[0, 1)`.
    pub fn reduced_f64(self) -> f64 {
        match self {
            Coefficient::Real(v) => frac(v),
            Coefficient::Rational { num, den } => {
                num.rem_euclid(den as i64) as f64 / den as f64
            }
        }
    }
}

/// A phase polynomial `f(X) = f_0 + f_1 X + … + f_d X^d`.
///
/// The degree is declared, not inferred: trailing zero coefficients are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<Coefficient>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<Coefficient>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("a polynomial needs at least one coefficient"));
        }
        for c in &coeffs {
            match *c {
                Coefficient::Real(v) if !v.is_finite() => {
                    return Err(Error::invalid(format!("non-finite coefficient {v}")))
                }
                Coefficient::Rational { den: 0, .. } => {
                    return Err(Error::invalid("zero denominator"))
                }
                Coefficient::Rational { den, .. } if den > i64::MAX as u64 => {
                    return Err(Error::invalid("denominator exceeds i64 range"))
                }
                _ => {}
            }
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Coefficient::rational(0, 1); degree + 1] }
    }

    pub fn from_reals(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&v| Coefficient::Real(v)).collect())
    }

    /// Coefficients `num_j / den_j`, constant term first.
    pub fn from_rationals(coeffs: &[(i64, u64)]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&(n, d)| Coefficient::rational(n, d)).collect())
    }

    /// `f(n) = a·n / q`: the linear phase whose complete sums are Gauss sums.
    pub fn linear_over(a: i64, q: u64) -> Self {
        Self {
            coeffs: vec![Coefficient::rational(0, 1), Coefficient::rational(a, q)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// Coefficients reduced to `[0, 1)`.
    pub fn reduced(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.reduced_f64()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| matches!(c, Coefficient::Rational { .. }))
    }

    /// Least common denominator of rational coefficients.
    pub fn common_denominator(&self) -> Result<Option<u64>> {
        let mut l: u64 = 1;
        for c in &self.coeffs {
            match *c {
                Coefficient::Rational { den, .. } => {
                    let g = gcd(l, den);
                    l = (l / g)
                        .checked_mul(den)
                        .filter(|&v| v <= MAX_EXACT_DENOMINATOR)
                        .ok_or_else(|| Error::Overflow("common denominator".into()))?;
                }
                Coefficient::Real(_) => return Ok(None),
            }
        }
        Ok(Some(l))
    }

    /// Evaluates `f(n) mod 1` in floating point.
    pub fn eval_frac(&self, n: i64) -> f64 {
        FloatPhase::new(self).eval(n)
    }
}

/// How `e(f(n))` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// Exact when every coefficient is rational, float otherwise.
    #[default]
    Auto,
    /// Integer phases modulo the common denominator. Requires rational `f`.
    Exact,
    /// Coefficients reduced mod 1 and Horner evaluation reduced at every step.
    Float,
}

/// `f(n)·L mod L` for the common denominator `L`.
#[derive(Debug, Clone)]
pub(crate) struct ExactPhase {
    den: u64,
    nums: Vec<u64>,
}

impl ExactPhase {
    pub(crate) fn new(f: &RealPolynomial) -> Result<Self> {
        let den = f
            .common_denominator()?
            .ok_or_else(|| Error::invalid("exact phase mode requires rational coefficients"))?;
        let nums = f
            .coeffs
            .iter()
            .map(|c| match *c {
                Coefficient::Rational { num, den: dj } => {
                    let scaled = num.rem_euclid(dj as i64) as u128 * (den / dj) as u128;
                    (scaled % den as u128) as u64
                }
                Coefficient::Real(_) => unreachable!("checked by common_denominator"),
            })
            .collect();
        Ok(Self { den, nums })
    }

    pub(crate) fn den(&self) -> u64 {
        self.den
    }

    /// Numerator of `f(n) mod 1` over `den`.
    #[inline]
    pub(crate) fn eval(&self, n: i64) -> u64 {
        let l = self.den as u128;
        let x = n.rem_euclid(self.den as i64) as u128;
        let mut acc = 0u128;
        for &c in self.nums.iter().rev() {
            acc = (acc * x + c as u128) % l;
        }
        acc as u64
    }
}

#[derive(Debug, Clone)]
pub(crate) struct FloatPhase {
    coeffs: Vec<FracDD>,
}

impl FloatPhase {
    pub(crate) fn new(f: &RealPolynomial) -> Self {
        Self { coeffs: f.coeffs.iter().map(|c| c.reduced_dd()).collect() }
    }

    /// `f(n) mod 1`, reducing after every Horner step.
    #[inline]
    pub(crate) fn eval(&self, n: i64) -> f64 {
        let x = n as f64;
        let mut acc = FracDD::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_int(x).add_frac(c);
        }
        acc.to_f64()
    }
}

enum Phase {
    Exact(ExactPhase),
    Float(FloatPhase),
}

impl Phase {
    fn new(f: &RealPolynomial, mode: PhaseMode) -> Result<Self> {
        Ok(match mode {
            PhaseMode::Exact => Phase::Exact(ExactPhase::new(f)?),
            PhaseMode::Float => Phase::Float(FloatPhase::new(f)),
            PhaseMode::Auto => match f.common_denominator() {
                Ok(Some(_)) => Phase::Exact(ExactPhase::new(f)?),
                _ => Phase::Float(FloatPhase::new(f)),
            },
        })
    }

    /// `e(f(n)) χ(n)` given the character exponent of `n` over `q - 1`.
    #[inline]
    fn term(&self, n: i64, chi_exp: u64, group_order: u64) -> Complex64 {
        match self {
            Phase::Exact(p) => {
                let l = p.den() as u128;
                let m = group_order as u128;
                let num = p.eval(n) as u128 * m + chi_exp as u128 * l;
                e_fraction(num, l * m)
            }
            Phase::Float(p) => {
                let t = p.eval(n) + chi_exp as f64 / group_order as f64;
                e_turns(t)
            }
        }
    }
}

/// A complex sum with its magnitude and the number of terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumValue {
    pub value: Complex64,
    pub magnitude: f64,
    pub terms: u64,
}

impl SumValue {
    pub fn new(value: Complex64, terms: u64) -> Self {
        Self { value, magnitude: value.norm(), terms }
    }

    pub fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 0)
    }
}

/// Integer range `(N, N + ⌊H⌋]` with overflow checks.
fn summation_range(n_start: i64, h: f64) -> Result<(i64, i64)> {
    if h.is_nan() || h < 0.0 || !h.is_finite() {
        return Err(Error::invalid(format!("H must be a finite nonnegative real, got {h}")));
    }
    let len = h.floor();
    if len > i64::MAX as f64 {
        return Err(Error::Overflow(format!("H = {h}")));
    }
    let last = n_start
        .checked_add(len as i64)
        .ok_or_else(|| Error::Overflow(format!("N + H = {n_start} + {h}")))?;
    Ok((n_start + 1, last))
}

/// `Σ_{N<n≤N+H} e(f(n)) χ(n)` with [`PhaseMode::Auto`].
pub fn mixed_sum(chi: &DirichletCharacter, f: &RealPolynomial, n_start: i64, h: f64) -> Result<SumValue> {
    mixed_sum_with_mode(chi, f, n_start, h, PhaseMode::Auto)
}

pub fn mixed_sum_with_mode(
    chi: &DirichletCharacter,
    f: &RealPolynomial,
    n_start: i64,
    h: f64,
    mode: PhaseMode,
) -> Result<SumValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let (first, last) = summation_range(n_start, h)?;
    if first > last {
        return Ok(SumValue::zero());
    }
    let phase = Phase::new(f, mode)?;
    if matches!(phase, Phase::Float(_))
        && (first.unsigned_abs() >= MAX_FLOAT_ARGUMENT as u64
            || last.unsigned_abs() >= MAX_FLOAT_ARGUMENT as u64)
    {
        return Err(Error::Overflow(format!("n up to {last} exceeds 2^53 in float mode")));
    }
    let group_order = chi.modulus().group_order();
    let mut acc = CompensatedSum::new();
    let mut n = first;
    loop {
        if let Some(k) = chi.exponent(n) {
            acc.add(phase.term(n, k, group_order));
        }
        if n == last {
            break;
        }
        n += 1;
    }
    Ok(SumValue::new(acc.total(), (last - first + 1) as u64))
}

/// `Σ_{N<n≤N+H} χ(n)`.
pub fn plain_sum(chi: &DirichletCharacter, n_start: i64, h: f64) -> Result<SumValue> {
    mixed_sum(chi, &RealPolynomial::zero(0), n_start, h)
}

/// `F_x(X) = Π (X + x_i)^{δ(i)}` with `δ(i) = Δ - 1` at odd (1-based)
/// positions and `1` at even positions, stored as merged linear factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurgessPolynomial {
    /// `(shift mod q, multiplicity)` for each factor `(X + shift)`, sorted by shift.
    factors: Vec<(u64, u64)>,
    degree: u64,
    delta: u64,
    q: u64,
}

impl BurgessPolynomial {
    pub fn factors(&self) -> &[(u64, u64)] {
        &self.factors
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// True iff `F_x` is a perfect Δ-th power mod `q`: every multiplicity is
    /// divisible by Δ.
    pub fn is_perfect_power(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m % self.delta == 0)
    }
}

pub fn build_fx(x: &TupleAssignment, delta: u64, q: u64) -> Result<BurgessPolynomial> {
    if delta < 2 {
        return Err(Error::invalid(format!("character order Δ = {delta} must be at least 2")));
    }
    if x.tau() > q {
        return Err(Error::invalid(format!("τ = {} exceeds q = {q}", x.tau())));
    }
    let mut factors: Vec<(u64, u64)> = Vec::new();
    for (i, &xi) in x.entries().iter().enumerate() {
        // Slot i is position i+1; odd positions get Δ-1.
        let mult = if i % 2 == 0 { delta - 1 } else { 1 };
        let shift = xi % q;
        match factors.iter_mut().find(|(s, _)| *s == shift) {
            Some((_, m)) => *m += mult,
            None => factors.push((shift, mult)),
        }
    }
    factors.sort_unstable();
    let degree = factors.iter().map(|&(_, m)| m).sum();
    Ok(BurgessPolynomial { factors, degree, delta, q })
}

pub fn is_perfect_power(f: &BurgessPolynomial) -> bool {
    f.is_perfect_power()
}

/// `Σ_{m=1}^q χ(F_x(m))` with `Δ` the order of `χ`.
///
/// Each term is reduced to a class `c ∈ [0, Δ)` with `χ(F_x(m)) = e(c/Δ)`,
/// so the sum is an exact histogram until the final conversion.
pub fn complete_sum(chi: &DirichletCharacter, x: &TupleAssignment) -> Result<SumValue> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    let q = chi.q();
    let delta = chi.order();
    let f = build_fx(x, delta, q)?;
    let histogram = complete_sum_histogram(chi, &f);
    let mut acc = CompensatedSum::new();
    for (c, &count) in histogram.iter().enumerate() {
        if count > 0 {
            acc.add_scaled(e_fraction(c as u128, delta as u128), count as f64);
        }
    }
    Ok(SumValue::new(acc.total(), q))
}

/// Counts of `m ∈ [1, q]` by the class of `χ(F(m))`; zeros are dropped.
pub(crate) fn complete_sum_histogram(chi: &DirichletCharacter, f: &BurgessPolynomial) -> Vec<u64> {
    let q = chi.q();
    let group_order = q - 1;
    let step = group_order / f.delta;
    let mut histogram = vec![0u64; f.delta as usize];
    'm: for m in 1..=q {
        let mut total = 0u64;
        for &(shift, mult) in &f.factors {
            match chi.exponent_residue((m + shift) % q) {
                Some(k) => total = (total + (k as u128 * mult as u128 % group_order as u128) as u64) % group_order,
                None => continue 'm,
            }
        }
        debug_assert_eq!(total % step, 0);
        histogram[(total / step) as usize] += 1;
    }
    histogram
}

/// Outcome of checking a complete sum against the Weil bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeilReport {
    /// `F_x` is not a perfect Δ-th power, so the Weil bound applies.
    pub applicable: bool,
    pub magnitude: f64,
    /// `(deg F - 1)√q` when applicable, the trivial `q` otherwise.
    pub bound: f64,
    pub degree: u64,
    /// `magnitude ≤ bound + 1e-6`.
    pub holds: bool,
}

pub const WEIL_SLACK: f64 = 1e-6;

pub fn weil_report(chi: &DirichletCharacter, x: &TupleAssignment) -> Result<WeilReport> {
    let q = chi.q();
    debug_assert!(is_prime(q));
    let f = build_fx(x, chi.order(), q)?;
    let sum = complete_sum(chi, x)?;
    let applicable = !f.is_perfect_power();
    let bound = if applicable {
        (f.degree() as f64 - 1.0) * (q as f64).sqrt()
    } else {
        q as f64
    };
    Ok(WeilReport {
        applicable,
        magnitude: sum.magnitude,
        bound,
        degree: f.degree(),
        holds: sum.magnitude <= bound + WEIL_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::PrimeModulus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn chi(q: u64, j: u64) -> DirichletCharacter {
        DirichletCharacter::for_prime(q, j).unwrap()
    }

    fn tuple(xs: &[u64]) -> TupleAssignment {
        TupleAssignment::from_entries(xs.to_vec()).unwrap()
    }

    /// Direct oracle: `Σ_m Π χ(m + x_i)^{δ(i)}` by complex multiplication.
    fn complete_sum_direct(chi: &DirichletCharacter, xs: &[u64]) -> Complex64 {
        let delta = chi.order() as u32;
        (1..=chi.q() as i64)
            .map(|m| {
                xs.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (i, &x)| {
                    let e = if i % 2 == 0 { delta - 1 } else { 1 };
                    acc * chi.eval(m + x as i64).powu(e)
                })
            })
            .sum()
    }

    #[test]
    fn mixed_sum_full_period_vanishes() {
        let c = chi(7, 1);
        let s = mixed_sum(&c, &RealPolynomial::zero(2), 0, 7.0).unwrap();
        assert!(s.magnitude < 1e-9);
        assert_eq!(s.terms, 7);
    }

    #[test]
    fn gauss_sum_magnitude() {
        for (q, j) in [(7, 1), (101, 7), (499, 100)] {
            let c = chi(q, j);
            let s = mixed_sum(&c, &RealPolynomial::linear_over(1, q), 0, q as f64).unwrap();
            let root = (q as f64).sqrt();
            assert!((s.magnitude - root).abs() / root < 1e-6, "q={q}");
        }
    }

    #[test]
    fn empty_range_is_zero() {
        let c = chi(11, 3);
        let f = RealPolynomial::from_reals(&[0.3, 0.77, 0.1]).unwrap();
        assert_eq!(mixed_sum(&c, &f, 5, 0.0).unwrap(), SumValue::zero());
        assert_eq!(mixed_sum(&c, &f, 5, 0.99).unwrap().terms, 0);
    }

    #[test]
    fn mixed_sum_rejects_bad_input() {
        let c = chi(11, 3);
        let f = RealPolynomial::zero(1);
        assert!(matches!(mixed_sum(&c, &f, i64::MAX - 2, 10.0), Err(Error::Overflow(_))));
        assert!(matches!(mixed_sum(&c, &f, 0, -1.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(mixed_sum(&c, &f, 0, f64::NAN), Err(Error::InvalidParameter(_))));
        assert_eq!(mixed_sum(&chi(11, 0), &f, 0, 3.0).unwrap_err(), Error::PrincipalCharacter);
        let real = RealPolynomial::from_reals(&[0.5]).unwrap();
        assert!(mixed_sum_with_mode(&c, &real, 0, 3.0, PhaseMode::Exact).is_err());
        assert!(matches!(
            mixed_sum_with_mode(&c, &real, 1 << 54, 3.0, PhaseMode::Float),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn plain_sum_examples() {
        let c = chi(7, 3);
        let s = plain_sum(&c, 0, 3.0).unwrap();
        assert!((s.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(plain_sum(&c, 0, 7.0).unwrap().magnitude < 1e-12);
    }

    #[test]
    fn plain_sum_polya_vinogradov_scan() {
        for q in [101u64, 499] {
            let m = Arc::new(PrimeModulus::new(q).unwrap());
            let c = DirichletCharacter::quadratic(m).unwrap();
            let limit = (q as f64).sqrt() * (q as f64).ln();
            // Partial sums from each N cover every (N, H) pair.
            for n in 0..q as i64 {
                let mut s = Complex64::new(0.0, 0.0);
                for h in 1..=q as i64 {
                    s += c.eval(n + h);
                    assert!(s.norm() <= limit);
                }
            }
            assert!(plain_sum(&c, 17, 40.0).unwrap().magnitude <= limit);
        }
    }

    #[test]
    fn rational_sums_are_q_periodic() {
        let q = 101;
        let c = chi(q, 5);
        let f = RealPolynomial::from_rationals(&[(3, q), (-17, q), (44, q)]).unwrap();
        for n in [-300i64, -1, 0, 7, 250] {
            let a = mixed_sum(&c, &f, n, 37.5).unwrap();
            let b = mixed_sum(&c, &f, n + q as i64, 37.5).unwrap();
            assert!((a.value - b.value).norm() < 1e-9);
        }
    }

    #[test]
    fn float_mode_agrees_with_exact_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = chi(997, 13);
        for _ in 0..40 {
            let den = rng.random_range(1..=1_000_000u64);
            let coeffs: Vec<(i64, u64)> = (0..4)
                .map(|_| (rng.random_range(-(den as i64)..den as i64), den))
                .collect();
            let f = RealPolynomial::from_rationals(&coeffs).unwrap();
            let n = rng.random_range(-100_000i64..100_000);
            let h = rng.random_range(0.0..500.0f64);
            let exact = mixed_sum_with_mode(&c, &f, n, h, PhaseMode::Exact).unwrap();
            let float = mixed_sum_with_mode(&c, &f, n, h, PhaseMode::Float).unwrap();
            assert!((exact.value - float.value).norm() <= 1e-6 * h.max(1.0));
        }
    }

    #[test]
    fn exact_phase_handles_mixed_denominators() {
        let f = RealPolynomial::from_rationals(&[(1, 2), (1, 3), (5, 4)]).unwrap();
        assert_eq!(f.common_denominator().unwrap(), Some(12));
        let p = ExactPhase::new(&f).unwrap();
        for n in -20i64..20 {
            let want = 0.5 + n as f64 / 3.0 + 1.25 * (n * n) as f64;
            assert!((p.eval(n) as f64 / 12.0 - frac(want)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn degree_is_declared() {
        let f = RealPolynomial::from_rationals(&[(1, 3), (0, 1), (4, 4)]).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.reduced(), vec![1.0 / 3.0, 0.0, 0.0]);
        assert!(RealPolynomial::from_rationals(&[(1, 0)]).is_err());
        assert!(RealPolynomial::from_reals(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn build_fx_examples() {
        let f = build_fx(&tuple(&[5, 5]), 2, 7).unwrap();
        assert_eq!(f.factors(), &[(5, 2)]);
        assert_eq!(f.degree(), 2);
        assert!(f.is_perfect_power());

        let f = build_fx(&tuple(&[1, 2]), 2, 7).unwrap();
        assert_eq!(f.factors(), &[(1, 1), (2, 1)]);
        assert!(!is_perfect_power(&f));

        let f = build_fx(&tuple(&[1, 1, 2, 2]), 3, 7).unwrap();
        assert_eq!(f.factors(), &[(1, 3), (2, 3)]);
        assert_eq!(build_fx(&tuple(&[1, 2, 1, 2]), 3, 7).unwrap().factors(), &[(1, 4), (2, 2)]);
        assert_eq!(f.degree(), 6);
        assert!(f.is_perfect_power());

        assert!(build_fx(&tuple(&[1, 2]), 1, 7).is_err());
        assert!(build_fx(&tuple(&[1, 9]), 2, 7).is_err());
    }

    #[test]
    fn complete_sum_examples() {
        let c = chi(7, 3);
        let s = complete_sum(&c, &tuple(&[1, 2])).unwrap();
        assert!((s.value - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        // (m+3)^2 is a nonzero square except at m = 4.
        let s = complete_sum(&c, &tuple(&[3, 3])).unwrap();
        assert!((s.value - Complex64::new(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn complete_sum_matches_direct_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (q, j) in [(13u64, 4u64), (31, 5), (53, 26), (29, 1)] {
            let c = chi(q, j);
            for _ in 0..30 {
                let xs: Vec<u64> = (0..4).map(|_| rng.random_range(1..=q.min(10))).collect();
                let fast = complete_sum(&c, &tuple(&xs)).unwrap().value;
                let slow = complete_sum_direct(&c, &xs);
                assert!((fast - slow).norm() < 1e-9, "q={q} j={j} x={xs:?}");
            }
        }
    }

    #[test]
    fn weil_holds_for_random_good_tuples() {
        let q = 53;
        let c = DirichletCharacter::quadratic(Arc::new(PrimeModulus::new(q).unwrap())).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let mut checked = 0;
        while checked < 200 {
            let xs: Vec<u64> = (0..4).map(|_| rng.random_range(1..=10)).collect();
            let x = TupleAssignment::new(xs, 10).unwrap();
            if x.is_bad() {
                continue;
            }
            let rep = weil_report(&c, &x).unwrap();
            assert!(rep.applicable, "good tuples are never perfect powers");
            assert!(rep.magnitude <= (rep.degree as f64 - 1.0) * (q as f64).sqrt() + 1e-9);
            checked += 1;
        }
    }

    #[test]
    fn weil_report_examples() {
        let c = chi(7, 3);
        let rep = weil_report(&c, &tuple(&[5, 5])).unwrap();
        assert!(!rep.applicable);
        assert_eq!(rep.bound, 7.0);
        assert!(rep.holds);

        let rep = weil_report(&c, &tuple(&[1, 2])).unwrap();
        assert!(rep.applicable);
        assert!((rep.bound - 7f64.sqrt()).abs() < 1e-12);
        assert!((rep.magnitude - 1.0).abs() < 1e-12);

        let c = chi(101, 50);
        let rep = weil_report(&c, &tuple(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!(rep.degree, 6);
        assert!((rep.bound - 5.0 * 101f64.sqrt()).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn bad_tuples_respect_trivial_bound() {
        let c = chi(17, 8);
        for xs in [[1u64, 1, 2, 2], [3, 3, 3, 3], [1, 2, 2, 1], [4, 5, 5, 4]] {
            let rep = weil_report(&c, &tuple(&xs)).unwrap();
            assert!(rep.magnitude <= 17.0 + 1e-9);
        }
    }
}
