//! The amplification machinery at desk scale: the `n = aq + pm` split, the
//! counting function `𝒜(m)`, the grid of boxes and the `T(α; m, t)` sums.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::d_of;
use crate::error::{Error, Result};
use crate::modular::{gcd, is_prime, pow_mod, DirichletCharacter};
use crate::numeric::{e_fraction, CompensatedSum};
use crate::sums::{complete_sum, mixed_sum, RealPolynomial};
use crate::vinogradov::{count_j_mitm, TupleAssignment};

/// Largest number of grid vertices enumerated.
pub const GRID_LIMIT: u128 = 1 << 24;

/// Largest `q · Q^D · τ` accepted by [`s4_empirical`].
pub const S4_LIMIT: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub n: i64,
    pub p: u64,
    pub q: u64,
    pub n_context: i64,
    pub a: u64,
    pub m: i64,
}

impl Decomposition {
    pub fn reconstruct(&self) -> i128 {
        self.a as i128 * self.q as i128 + self.p as i128 * self.m as i128
    }
}

/// The unique `(a, m)` with `n = aq + pm` and `0 ≤ a < p`.
pub fn decompose(n: i64, p: u64, q: u64, n_context: i64) -> Result<Decomposition> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("p = {p} is not prime")));
    }
    if q == 0 || q.is_multiple_of(p) {
        return Err(Error::invalid(format!("p = {p} divides q = {q}")));
    }
    let q_inv = pow_mod(q % p, p - 2, p);
    let n_mod = n.rem_euclid(p as i64) as u64;
    let a = (n_mod as u128 * q_inv as u128 % p as u128) as u64;
    let m = (n as i128 - a as i128 * q as i128) / p as i128;
    let m = i64::try_from(m).map_err(|_| Error::Overflow(format!("m for n = {n}, q = {q}")))?;
    Ok(Decomposition { n, p, q, n_context, a, m })
}

/// Primes in `(P, 2P]`, ascending.
pub fn prime_window(p: u64) -> Result<Vec<u64>> {
    if p == 0 {
        return Err(Error::invalid("P must be at least 1"));
    }
    let hi = p.checked_mul(2).ok_or_else(|| Error::Overflow(format!("2P for P = {p}")))?;
    let len = usize::try_from(hi + 1).map_err(|_| Error::Overflow(format!("sieve up to {hi}")))?;
    if hi > 1 << 32 {
        return Err(Error::Guard { what: "prime sieve", work: hi as u128, limit: 1 << 32 });
    }
    let mut composite = vec![false; len];
    let mut primes = Vec::new();
    for n in 2..=hi as usize {
        if composite[n] {
            continue;
        }
        if n as u64 > p {
            primes.push(n as u64);
        }
        let mut k = n * n;
        while k < len {
            composite[k] = true;
            k += n;
        }
    }
    Ok(primes)
}

/// `P = ⌈½ H q^{-1/(2(r-D))}⌉`, at least 1. Needs `r > D`.
pub fn choose_p(q: u64, h: u64, r: u32, d: u32) -> Result<u64> {
    let big_d = d_of(d);
    if r as u64 <= big_d {
        return Err(Error::invalid(format!("need r > D, got r = {r}, D = {big_d}")));
    }
    let gap = (r as u64 - big_d) as f64;
    let x = h as f64 * (q as f64).powf(-1.0 / (2.0 * gap));
    Ok((0.5 * x).ceil().max(1.0) as u64)
}

/// Grid base `⌈4rH/P⌉` used with the Vinogradov route.
pub fn grid_base_vinogradov(r: u32, h: u64, p: u64) -> u64 {
    (4 * r as u64 * h).div_ceil(p)
}

/// Grid base `⌈2H/P⌉` used with the Chang route.
pub fn grid_base_chang(h: u64, p: u64) -> u64 {
    (2 * h).div_ceil(p)
}

/// Contribution of one `(a, p)` pair to `𝒜`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowCount {
    pub a: u64,
    pub p: u64,
    pub m_min: i64,
    pub m_max: i64,
}

impl RowCount {
    pub fn count(&self) -> u64 {
        (self.m_max - self.m_min + 1).max(0) as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountProfile {
    /// `N mod q`.
    pub n: u64,
    pub h: u64,
    pub p_param: u64,
    pub q: u64,
    pub primes: Vec<u64>,
    pub rows: Vec<RowCount>,
    /// `m ↦ 𝒜(m)` over the support.
    pub counts: BTreeMap<i64, u64>,
    pub s1: u128,
    pub s2: u128,
    /// `HP < q`.
    pub hp_lt_q: bool,
}

impl CountProfile {
    /// Largest `|m|` with `𝒜(m) > 0`.
    pub fn max_abs_m(&self) -> u64 {
        self.counts.keys().map(|m| m.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn support_within(&self, bound: u64) -> bool {
        self.max_abs_m() <= bound
    }

    pub fn ratio(&self) -> f64 {
        self.s2 as f64 / (self.h as f64 * self.p_param as f64)
    }
}

/// Integers `m` with `c/p − H/P < m ≤ c/p`, as a closed range.
fn interval(c: i128, p: i128, h: i128, big_p: i128) -> (i128, i128) {
    let hi = c.div_euclid(p);
    let lo = (c * big_p - h * p).div_euclid(p * big_p) + 1;
    (lo, hi)
}

/// `𝒜(m) = #{(a, p) : (N − aq)/p − H/P < m ≤ (N − aq)/p}` over `p ∈ (P, 2P]`,
/// `0 ≤ a < p`, by exact enumeration.
pub fn count_profile(n: i64, h: u64, p_param: u64, q: u64) -> Result<CountProfile> {
    if q < 2 {
        return Err(Error::invalid(format!("q = {q} must be at least 2")));
    }
    if h == 0 {
        return Err(Error::invalid("H must be at least 1"));
    }
    let primes = prime_window(p_param)?;
    if let Some(&p) = primes.iter().find(|&&p| q.is_multiple_of(p)) {
        return Err(Error::invalid(format!("p = {p} in the prime window divides q = {q}")));
    }
    let n_red = n.rem_euclid(q as i64) as u64;
    let rows: Vec<RowCount> = primes
        .par_iter()
        .flat_map_iter(|&p| {
            (0..p).map(move |a| {
                let c = n_red as i128 - a as i128 * q as i128;
                let (lo, hi) = interval(c, p as i128, h as i128, p_param as i128);
                RowCount { a, p, m_min: lo as i64, m_max: hi as i64 }
            })
        })
        .collect();
    let mut counts = BTreeMap::new();
    for row in &rows {
        for m in row.m_min..=row.m_max {
            *counts.entry(m).or_insert(0u64) += 1;
        }
    }
    let s1 = counts.values().map(|&c| c as u128).sum();
    let s2 = counts.values().map(|&c| c as u128 * c as u128).sum();
    let hp_lt_q = (h as u128) * (p_param as u128) < q as u128;
    Ok(CountProfile { n: n_red, h, p_param, q, primes, rows, counts, s1, s2, hp_lt_q })
}

/// `S₂ / (HP)`. Requires `HP < q`.
pub fn moment_ratio(n: i64, h: u64, p_param: u64, q: u64) -> Result<f64> {
    let profile = count_profile(n, h, p_param, q)?;
    if !profile.hp_lt_q {
        return Err(Error::invalid(format!("HP = {} is not below q = {q}", h as u128 * p_param as u128)));
    }
    Ok(profile.ratio())
}

/// A vertex `θ_α = (c₀, c₁/Q, …, c_d/Q^d)` of the grid of boxes; `c₀ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridVertex {
    base: u64,
    numerators: Vec<u64>,
}

fn checked_power(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

impl GridVertex {
    pub fn new(base: u64, numerators: Vec<u64>) -> Result<Self> {
        if base < 2 {
            return Err(Error::invalid(format!("Q = {base} must be at least 2")));
        }
        if numerators.is_empty() || numerators[0] != 0 {
            return Err(Error::invalid("c₀ must be 0"));
        }
        for (j, &c) in numerators.iter().enumerate() {
            if c >= checked_power(base, j as u32)? {
                return Err(Error::invalid(format!("c_{j} = {c} is not below Q^{j}")));
            }
        }
        checked_power(base, numerators.len() as u32 - 1)?;
        Ok(Self { base, numerators })
    }

    pub fn zero(base: u64, d: u32) -> Result<Self> {
        Self::new(base, vec![0; d as usize + 1])
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn degree(&self) -> u32 {
        self.numerators.len() as u32 - 1
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    /// `θ_j = c_j / Q^j`.
    pub fn coordinate(&self, j: usize) -> f64 {
        self.numerators[j] as f64 / (self.base as f64).powi(j as i32)
    }

    /// `Q^d`, the common denominator of every phase.
    pub fn denominator(&self) -> u64 {
        self.base.pow(self.degree())
    }

    /// `θ_α(n) · Q^d mod Q^d`.
    pub fn phase_numerator(&self, n: i64) -> u64 {
        self.phase_numerator_of(|j| {
            let l = self.denominator() as i128;
            let x = n.rem_euclid(l as i64) as u128;
            (0..j).fold(1u128, |acc, _| acc * x % l as u128)
        })
    }

    /// `Σ_j c_j P_j Q^{d-j} mod Q^d` for per-degree integer weights `P_j`.
    fn phase_numerator_of(&self, weight: impl Fn(u32) -> u128) -> u64 {
        let l = self.denominator() as u128;
        let d = self.degree();
        let mut acc = 0u128;
        for j in 1..=d {
            let scale = (self.base as u128).pow(d - j);
            let term = self.numerators[j as usize] as u128 * scale % l * (weight(j) % l) % l;
            acc = (acc + term) % l;
        }
        acc as u64
    }

    pub fn to_polynomial(&self) -> Result<RealPolynomial> {
        let coeffs: Vec<(i64, u64)> = self
            .numerators
            .iter()
            .enumerate()
            .map(|(j, &c)| (c as i64, self.base.pow(j as u32)))
            .collect();
        RealPolynomial::from_rationals(&coeffs)
    }
}

/// All `Q^D` vertices, lexicographic in `(c₁, …, c_d)`.
pub fn grid_vertices(base: u64, d: u32) -> Result<Vec<GridVertex>> {
    if base < 2 {
        return Err(Error::invalid(format!("Q = {base} must be at least 2")));
    }
    let count = (base as u128)
        .checked_pow(d_of(d) as u32)
        .unwrap_or(u128::MAX);
    if count > GRID_LIMIT {
        return Err(Error::Guard { what: "grid vertices", work: count, limit: GRID_LIMIT });
    }
    let sides: Vec<u64> = (0..=d).map(|j| base.pow(j)).collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut current = vec![0u64; d as usize + 1];
    loop {
        out.push(GridVertex { base, numerators: current.clone() });
        let mut j = d as usize;
        loop {
            if j == 0 {
                return Ok(out);
            }
            current[j] += 1;
            if current[j] < sides[j] {
                break;
            }
            current[j] = 0;
            j -= 1;
        }
    }
}

/// The vertex with `θ_j = ⌊f_j Q^j⌋ / Q^j` for the reduced coefficients `f_j`.
pub fn nearest_vertex(f: &RealPolynomial, base: u64) -> Result<GridVertex> {
    let reduced = f.reduced();
    let mut numerators = Vec::with_capacity(reduced.len());
    for (j, &fj) in reduced.iter().enumerate() {
        let side = checked_power(base, j as u32)?;
        let c = (fj * side as f64).floor() as u64;
        numerators.push(c.min(side - 1));
    }
    numerators[0] = 0;
    GridVertex::new(base, numerators)
}

/// `T(α; m, t) = |Σ_{0<n≤t} e(θ_α(n)) χ(n + m)|`.
pub fn t_alpha(chi: &DirichletCharacter, alpha: &GridVertex, m: i64, t: u64) -> f64 {
    t_alpha_value(chi, alpha, m, t).norm()
}

fn t_alpha_value(chi: &DirichletCharacter, alpha: &GridVertex, m: i64, t: u64) -> Complex64 {
    let l = alpha.denominator() as u128;
    let order = chi.modulus().group_order() as u128;
    let mut acc = CompensatedSum::new();
    for n in 1..=t as i64 {
        if let Some(k) = chi.exponent(n + m) {
            let num = alpha.phase_numerator(n) as u128 * order + k as u128 * l;
            acc.add(e_fraction(num, l * order));
        }
    }
    acc.total()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiCheck {
    /// `Σ_α e(Σ ε(i) θ_α(x_i))`.
    pub lhs: Complex64,
    /// `Q^D · Ξ_Q(x)`.
    pub rhs: f64,
    /// `Ξ_Q(x)`: `Σ ε(i) x_i^s ≡ 0 (mod Q^s)` for `s = 1..d`.
    pub congruent: bool,
    pub passed: bool,
}

/// `Ξ_Q(x)`.
pub fn xi_indicator(x: &TupleAssignment, base: u64, d: u32) -> bool {
    x.alternating_power_sums(d)
        .iter()
        .enumerate()
        .all(|(i, &s)| s.rem_euclid((base as i128).pow(i as u32 + 1)) == 0)
}

/// Compares the vertex sum `Σ_α e(Σ ε(i) θ_α(x_i))` with `Q^D · Ξ_Q(x)`.
pub fn xi_identity_check(x: &TupleAssignment, base: u64, d: u32) -> Result<XiCheck> {
    let vertices = grid_vertices(base, d)?;
    let sums = x.alternating_power_sums(d);
    let l = (base as u128).pow(d);
    // Residues of Σ ε(i) x_i^j mod Q^d; the j = 0 term vanishes since c₀ = 0.
    let weights: Vec<u128> = sums.iter().map(|&s| s.rem_euclid(l as i128) as u128).collect();
    let mut acc = CompensatedSum::new();
    for v in &vertices {
        let num = v.phase_numerator_of(|j| weights[j as usize - 1]);
        acc.add(e_fraction(num as u128, l));
    }
    let lhs = acc.total();
    let congruent = xi_indicator(x, base, d);
    let scale = vertices.len() as f64;
    let rhs = if congruent { scale } else { 0.0 };
    let passed = (lhs - Complex64::new(rhs, 0.0)).norm() <= 1e-6 * scale;
    Ok(XiCheck { lhs, rhs, congruent, passed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S4Report {
    /// `Σ_α Σ_{m=1}^q T(α; m, τ)^{2r}`.
    pub s4: f64,
    /// The same quantity as `Q^D Σ_{Ξ_Q(x)=1} Σ_m χ(F_x(m))`.
    pub s4_dual: f64,
    pub j: u128,
    /// `Q^D (τ^r q + τ^{2r} √q)`.
    pub chang_shape: f64,
    /// `Q^D (τ^r q + J_{r,d}(τ) √q)`.
    pub vin_shape: f64,
    pub chang_ratio: f64,
    pub vin_ratio: f64,
}

fn for_each_tuple(len: usize, tau: u64, mut f: impl FnMut(&[u64])) {
    let mut xs = vec![1u64; len];
    loop {
        f(&xs);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if xs[i] < tau {
                xs[i] += 1;
                break;
            }
            xs[i] = 1;
        }
    }
}

/// `S₄(τ)` directly and through the complete-sum expansion, with both
/// mean-value shapes (constant 1).
pub fn s4_empirical(chi: &DirichletCharacter, r: usize, d: u32, base: u64, tau: u64) -> Result<S4Report> {
    if chi.is_principal() {
        return Err(Error::PrincipalCharacter);
    }
    if r == 0 || tau == 0 {
        return Err(Error::invalid("r and τ must be at least 1"));
    }
    let q = chi.q();
    if tau > q {
        return Err(Error::invalid(format!("τ = {tau} exceeds q = {q}")));
    }
    let vertex_count = (base as u128).checked_pow(d_of(d) as u32).unwrap_or(u128::MAX);
    let work = vertex_count.saturating_mul(q as u128).saturating_mul(tau as u128);
    if work > S4_LIMIT {
        return Err(Error::Guard { what: "S4", work, limit: S4_LIMIT });
    }
    let tuple_work = (tau as u128).pow(2 * r as u32).saturating_mul(q as u128);
    if tuple_work > S4_LIMIT {
        return Err(Error::Guard { what: "S4 expansion", work: tuple_work, limit: S4_LIMIT });
    }
    let vertices = grid_vertices(base, d)?;
    let per_vertex: Vec<f64> = vertices
        .par_iter()
        .map(|v| {
            let mut acc = CompensatedSum::new();
            for m in 1..=q as i64 {
                let t = t_alpha(chi, v, m, tau);
                acc.add(Complex64::new(t.powi(2 * r as i32), 0.0));
            }
            acc.total().re
        })
        .collect();
    let mut total = CompensatedSum::new();
    total.extend(per_vertex.into_iter().map(|v| Complex64::new(v, 0.0)));
    let s4 = total.total().re;

    let mut dual = CompensatedSum::new();
    let mut err = None;
    for_each_tuple(2 * r, tau, |xs| {
        if err.is_some() {
            return;
        }
        let x = TupleAssignment::new(xs.to_vec(), tau).expect("entries in range");
        if xi_indicator(&x, base, d) {
            match complete_sum(chi, &x) {
                Ok(s) => dual.add(s.value),
                Err(e) => err = Some(e),
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let s4_dual = dual.total().re * vertex_count as f64;

    let j = count_j_mitm(r, d, tau)?;
    let qf = q as f64;
    let scale = vertex_count as f64;
    let tau_r = (tau as f64).powi(r as i32);
    let chang_shape = scale * (tau_r * qf + tau_r * tau_r * qf.sqrt());
    let vin_shape = scale * (tau_r * qf + j as f64 * qf.sqrt());
    Ok(S4Report {
        s4,
        s4_dual,
        j,
        chang_shape,
        vin_shape,
        chang_ratio: s4 / chang_shape,
        vin_ratio: s4 / vin_shape,
    })
}

/// `max_N |Σ_{N<n≤N+H} e(f(n)) χ(n)|` over the sampled starting points.
pub fn empirical_max_sum(chi: &DirichletCharacter, f: &RealPolynomial, h: f64, samples: &[i64]) -> Result<f64> {
    let values: Result<Vec<f64>> = samples
        .par_iter()
        .map(|&n| mixed_sum(chi, f, n, h).map(|s| s.magnitude))
        .collect();
    Ok(values?.into_iter().fold(0.0, f64::max))
}

/// Whether `gcd(p, q) = 1` for every prime in the window.
pub fn window_coprime(p_param: u64, q: u64) -> Result<bool> {
    Ok(prime_window(p_param)?.iter().all(|&p| gcd(p, q) == 1))
}
