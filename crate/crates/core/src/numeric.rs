//! Floating-point helpers shared by the summation routines.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Neumaier compensated accumulator for complex values.
///
/// Real and imaginary parts carry independent compensation terms, so the
/// accumulated error stays O(ε) regardless of the number of terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn neumaier_add(sum: &mut f64, c: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *c += (*sum - t) + v;
    } else {
        *c += (v - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        neumaier_add(&mut self.re, &mut self.re_c, z.re);
        neumaier_add(&mut self.im, &mut self.im_c, z.im);
    }

    /// Adds `count` copies of `z` (used by histogram-style sums).
    #[inline]
    pub fn add_scaled(&mut self, z: Complex64, count: f64) {
        self.add(z * count);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl Extend<Complex64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = Complex64>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

/// `e(t) = exp(2πi t)` for a fractional turn `t`; `t` is first reduced to
/// `[-1/2, 1/2)` so the trigonometric argument stays small.
#[inline]
pub fn e_turns(t: f64) -> Complex64 {
    let mut r = t - t.round();
    if r >= 0.5 {
        r -= 1.0;
    }
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(num / den)` for an exact fraction. The numerator is reduced into a
/// symmetric window before the single rounding to `f64`.
#[inline]
pub fn e_fraction(num: u128, den: u128) -> Complex64 {
    debug_assert!(den > 0);
    let n = num % den;
    // Quarter-turn multiples are returned exactly.
    if (4 * n).is_multiple_of(den) {
        return match 4 * n / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let signed = if 2 * n >= den {
        -((den - n) as f64)
    } else {
        n as f64
    };
    let (s, c) = (TAU * (signed / den as f64)).sin_cos();
    Complex64::new(c, s)
}

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `(a * b) mod 1` using an error-free product: the rounding error of the
/// product is recovered with an FMA and added back after the reduction.
#[inline]
pub fn mul_frac(a: f64, b: f64) -> f64 {
    let hi = a * b;
    let lo = a.mul_add(b, -hi);
    frac(frac(hi) + lo)
}

/// `a + b = s + t` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let t = (a - (s - bb)) + (b - bb);
    (s, t)
}

/// A residue mod 1 held as an unevaluated sum `hi + lo` of two doubles.
///
/// Phases of high-degree terms need about twice the precision of an `f64`:
/// a coefficient error of one ulp is multiplied by `n^d`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FracDD {
    pub hi: f64,
    pub lo: f64,
}

impl FracDD {
    pub const ZERO: FracDD = FracDD { hi: 0.0, lo: 0.0 };

    /// Renormalises `hi + lo` modulo 1. The result lies in `[0, 1]`; the
    /// endpoint only occurs with a tiny negative `lo`.
    #[inline]
    fn normalize(hi: f64, lo: f64) -> Self {
        let (s, t) = two_sum(hi, lo);
        let (a, b) = two_sum(s, -s.floor());
        let (hi, lo) = two_sum(a, b + t);
        FracDD { hi, lo }
    }

    pub fn from_f64(v: f64) -> Self {
        Self::normalize(v, 0.0)
    }

    /// `num / den mod 1`; about 100 bits when `den < 2^53`.
    pub fn from_ratio(num: i128, den: u64) -> Self {
        let r = num.rem_euclid(den as i128);
        let hi = r as f64 / den as f64;
        let residual = (-hi).mul_add(den as f64, r as f64);
        Self::normalize(hi, residual / den as f64)
    }

    /// `self · x mod 1` for an integer-valued `x` with `|x| < 2^53`.
    #[inline]
    pub fn mul_int(self, x: f64) -> Self {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        let q = self.lo * x;
        let p = p - p.floor();
        let (s, t) = two_sum(p, e);
        Self::normalize(s, t + q)
    }

    #[inline]
    pub fn add_frac(self, other: Self) -> Self {
        let (s, t) = two_sum(self.hi, other.hi);
        Self::normalize(s, t + self.lo + other.lo)
    }

    pub fn to_f64(self) -> f64 {
        frac(self.hi + self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_beats_naive_on_cancellation() {
        let mut acc = CompensatedSum::new();
        acc.add(Complex64::new(1e16, 0.0));
        for _ in 0..1000 {
            acc.add(Complex64::new(1.0, 0.0));
        }
        acc.add(Complex64::new(-1e16, 0.0));
        assert_eq!(acc.total().re, 1000.0);
    }

    #[test]
    fn fraction_quarter_turns_are_exact() {
        assert_eq!(e_fraction(0, 7), Complex64::new(1.0, 0.0));
        assert_eq!(e_fraction(3, 6), Complex64::new(-1.0, 0.0));
        assert_eq!(e_fraction(1, 4), Complex64::new(0.0, 1.0));
        assert_eq!(e_fraction(9, 12), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn fraction_matches_turns() {
        for den in 1..40u128 {
            for num in 0..2 * den {
                let a = e_fraction(num, den);
                let b = e_turns(num as f64 / den as f64);
                assert!((a - b).norm() < 1e-14, "{num}/{den}");
            }
        }
    }

    #[test]
    fn mul_frac_keeps_low_bits() {
        // 0.5 + 2^-40 times 2^30: the integer part is huge, the fraction is 2^-10.
        let a = 0.5 + 2f64.powi(-40);
        let f = mul_frac(a, 2f64.powi(30));
        assert!((f - 2f64.powi(-10)).abs() < 1e-15);
        assert_eq!(frac(-0.25), 0.75);
    }

    #[test]
    fn frac_dd_ratio_is_accurate() {
        let x = FracDD::from_ratio(1, 3);
        // 3·(1/3) wraps to 0 up to the second word.
        let y = x.mul_int(3.0);
        assert!(y.hi.min(1.0 - y.hi) < 1e-30);
        let z = FracDD::from_ratio(-7, 10);
        assert!((z.to_f64() - 0.3).abs() < 1e-16);
    }

    #[test]
    fn frac_dd_cubic_phase_matches_integers() {
        // (a/den)·n³ mod 1 for large n, compared with exact integer reduction.
        let den: u64 = 999_983;
        let a: i128 = 123_457;
        let c = FracDD::from_ratio(a, den);
        for n in [99_991i64, -88_883, 1_234_567] {
            let x = n as f64;
            let got = c.mul_int(x).mul_int(x).mul_int(x).to_f64();
            let n = n as i128;
            let exact = (a * (n * n % den as i128) % den as i128 * n).rem_euclid(den as i128);
            let want = exact as f64 / den as f64;
            let diff = (got - want).abs();
            assert!(diff.min(1.0 - diff) < 1e-12, "n={n} got={got} want={want}");
        }
    }
}
