//! Closed-form bounds for short mixed character sums.
//!
//! Every bound has the shape `H^a · q^b · (log q)^c` with the implied constant
//! set to 1. Validity ranges are evaluated with strict inequalities.

use std::fmt;

use crate::error::{Error, Result};

/// Default `ε` entering through `q^ε`.
pub const DEFAULT_EPS: f64 = 0.01;

/// `D = d(d+1)/2`.
pub fn d_of(d: u32) -> u64 {
    let d = d as u64;
    d * (d + 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `H^{1-1/r} q^{(r+1)/(4r²)} log q`.
    BurgessClassical,
    /// `H^{1-1/(2^d r)} q^{(r+1)/(2^{d+2} r²)+ε}`, valid for `H < q^{3/4+1/(4r)}`.
    Enflo,
    /// `H^{1-1/r} q^{(r+1+D)/(4r²)} (log q)²`, valid for `H < q^{1/2+1/(4r)}`.
    ChangRefined,
    /// `H^{1-1/r} q^{(r+1-D)/(4r(r-D))+ε}`, valid for `r > D`, `H < q^{1/2+1/(4(r-D))}`.
    Vinogradov,
    /// Like [`Theorem::Vinogradov`] with the Wooley loss `Δ`, for `D < r < d(d-1)`.
    Intermediate,
    /// The trivial bound `H`.
    Trivial,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::BurgessClassical => "burgess_classical",
            Theorem::Enflo => "enflo",
            Theorem::ChangRefined => "chang_refined",
            Theorem::Vinogradov => "vinogradov",
            Theorem::Intermediate => "intermediate",
            Theorem::Trivial => "trivial",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Inputs of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub q: f64,
    pub h: f64,
    pub r: u32,
    pub d: u32,
    pub eps: f64,
    pub delta_wooley: Option<f64>,
}

impl BoundParams {
    pub fn new(q: f64, h: f64, r: u32, d: u32, eps: f64) -> Result<Self> {
        if !(q.is_finite() && q >= 3.0) {
            return Err(Error::invalid(format!("q must be at least 3, got {q}")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("H must be positive, got {h}")));
        }
        if r == 0 {
            return Err(Error::invalid("r must be at least 1"));
        }
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::invalid(format!("ε must be positive, got {eps}")));
        }
        Ok(Self { q, h, r, d, eps, delta_wooley: None })
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::invalid(format!("Δ must be nonnegative, got {delta}")));
        }
        self.delta_wooley = Some(delta);
        Ok(self)
    }

    pub fn big_d(&self) -> u64 {
        d_of(self.d)
    }
}

/// Exponents of `H`, `q` and `log q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub h: f64,
    pub q: f64,
    pub log: f64,
}

impl Exponents {
    pub const TRIVIAL: Exponents = Exponents { h: 1.0, q: 0.0, log: 0.0 };

    /// `H^a q^b (ln q)^c`, evaluated in log space.
    pub fn evaluate(&self, q: f64, h: f64) -> f64 {
        let ln_q = q.ln();
        let mut ln = self.h * h.ln() + self.q * ln_q;
        if self.log != 0.0 {
            ln += self.log * ln_q.ln();
        }
        ln.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub params: BoundParams,
    pub exponents: Exponents,
    pub bound: f64,
    /// Inside the theorem's stated range of `(r, d, H)`.
    pub valid: bool,
    /// Why the report is invalid, when it is.
    pub reason: Option<String>,
    /// The family's own nontriviality condition (`r ≥ 1 + D` for the refined Chang bound).
    pub nontrivial: bool,
    /// Holds without assuming the Vinogradov main conjecture.
    pub unconditional: bool,
}

impl BoundReport {
    fn build(theorem: Theorem, params: BoundParams, exponents: Exponents) -> Self {
        let bound = exponents.evaluate(params.q, params.h);
        Self {
            theorem,
            params,
            exponents,
            bound,
            valid: true,
            reason: None,
            nontrivial: true,
            unconditional: true,
        }
    }

    fn invalid_if(mut self, cond: bool, reason: impl FnOnce() -> String) -> Self {
        if cond && self.valid {
            self.valid = false;
            self.reason = Some(reason());
        }
        self
    }

    /// The bound recomputed from the stored exponent triple.
    pub fn recompute(&self) -> f64 {
        self.exponents.evaluate(self.params.q, self.params.h)
    }

    /// `bound / H`; below 1 means the bound beats the trivial estimate.
    pub fn saving(&self) -> f64 {
        self.bound / self.params.h
    }

    pub fn trivial(params: BoundParams, reason: impl Into<String>) -> Self {
        let mut rep = Self::build(Theorem::Trivial, params, Exponents::TRIVIAL);
        rep.bound = params.h;
        rep.reason = Some(reason.into());
        rep.nontrivial = false;
        rep
    }
}

/// `H < q^{exp}`, strict.
fn below(h: f64, q: f64, exp: f64) -> bool {
    h.ln() < exp * q.ln()
}

pub fn q_exponent_classical(r: u32) -> f64 {
    let r = r as f64;
    (r + 1.0) / (4.0 * r * r)
}

/// Enflo q-exponent without `ε`.
pub fn q_exponent_enflo(r: u32, d: u32) -> f64 {
    let r = r as f64;
    (r + 1.0) / (2f64.powi(d as i32 + 2) * r * r)
}

pub fn q_exponent_chang(r: u32, d: u32) -> f64 {
    let r = r as f64;
    (r + 1.0 + d_of(d) as f64) / (4.0 * r * r)
}

/// Vinogradov q-exponent without `ε`; `None` unless `r > D`.
pub fn q_exponent_vinogradov(r: u32, d: u32) -> Option<f64> {
    q_exponent_intermediate(r, d, 0.0)
}

/// `(r+1-D+2Δ) / (4r(r-D+Δ))` without `ε`; `None` unless `r - D + Δ > 0`.
pub fn q_exponent_intermediate(r: u32, d: u32, delta: f64) -> Option<f64> {
    let r = r as f64;
    let big_d = d_of(d) as f64;
    let gap = r - big_d + delta;
    (gap > 0.0).then(|| (r + 1.0 - big_d + 2.0 * delta) / (4.0 * r * gap))
}

pub fn burgess_classical(q: f64, h: f64, r: u32) -> Result<BoundReport> {
    let params = BoundParams::new(q, h, r, 0, DEFAULT_EPS)?;
    let exps = Exponents {
        h: 1.0 - 1.0 / r as f64,
        q: q_exponent_classical(r),
        log: 1.0,
    };
    Ok(BoundReport::build(Theorem::BurgessClassical, params, exps))
}

pub fn enflo_bound(q: f64, h: f64, r: u32, d: u32, eps: f64) -> Result<BoundReport> {
    let params = BoundParams::new(q, h, r, d, eps)?;
    let rf = r as f64;
    let exps = Exponents {
        h: 1.0 - 1.0 / (2f64.powi(d as i32) * rf),
        q: q_exponent_enflo(r, d) + eps,
        log: 0.0,
    };
    let limit = 0.75 + 1.0 / (4.0 * rf);
    Ok(BoundReport::build(Theorem::Enflo, params, exps)
        .invalid_if(!below(h, q, limit), || format!("H ≥ q^{limit}")))
}

pub fn chang_refined_bound(q: f64, h: f64, r: u32, d: u32) -> Result<BoundReport> {
    let params = BoundParams::new(q, h, r, d, DEFAULT_EPS)?;
    let rf = r as f64;
    let exps = Exponents {
        h: 1.0 - 1.0 / rf,
        q: q_exponent_chang(r, d),
        log: 2.0,
    };
    let limit = 0.5 + 1.0 / (4.0 * rf);
    let mut rep = BoundReport::build(Theorem::ChangRefined, params, exps)
        .invalid_if(!below(h, q, limit), || format!("H ≥ q^{limit}"));
    rep.nontrivial = r as u64 > d_of(d);
    Ok(rep)
}

/// Whether the main conjecture is known in the `(r, d)` range needed.
pub fn vinogradov_unconditional(r: u32, d: u32) -> bool {
    match d {
        0..=2 => true,
        3 => r >= 7,
        _ => r >= d * (d - 1),
    }
}

pub fn vinogradov_bound(q: f64, h: f64, r: u32, d: u32, eps: f64) -> Result<BoundReport> {
    let params = BoundParams::new(q, h, r, d, eps)?;
    let big_d = d_of(d);
    let Some(qe) = q_exponent_vinogradov(r, d) else {
        let mut rep = BoundReport::trivial(params, "");
        rep.theorem = Theorem::Vinogradov;
        rep.valid = false;
        rep.reason = Some(format!("r = {r} ≤ D = {big_d}: no better than trivial"));
        rep.unconditional = vinogradov_unconditional(r, d);
        return Ok(rep);
    };
    let exps = Exponents { h: 1.0 - 1.0 / r as f64, q: qe + eps, log: 0.0 };
    let limit = 0.5 + 1.0 / (4.0 * (r as u64 - big_d) as f64);
    let mut rep = BoundReport::build(Theorem::Vinogradov, params, exps)
        .invalid_if(!below(h, q, limit), || format!("H ≥ q^{limit}"));
    rep.unconditional = vinogradov_unconditional(r, d);
    Ok(rep)
}

/// Admissible `r` for the intermediate range: `D < r < d(d-1)`, `d ≥ 4`.
pub fn intermediate_range(d: u32) -> std::ops::Range<u32> {
    if d < 4 {
        return 0..0;
    }
    (d_of(d) as u32 + 1)..(d * (d - 1))
}

pub fn intermediate_bound(q: f64, h: f64, r: u32, d: u32, eps: f64, delta: f64) -> Result<BoundReport> {
    let params = BoundParams::new(q, h, r, d, eps)?.with_delta(delta)?;
    let in_range = intermediate_range(d).contains(&r);
    let Some(qe) = q_exponent_intermediate(r, d, delta) else {
        let mut rep = BoundReport::trivial(params, "");
        rep.theorem = Theorem::Intermediate;
        rep.valid = false;
        rep.reason = Some(format!("r - D + Δ ≤ 0 for r = {r}, d = {d}, Δ = {delta}"));
        return Ok(rep);
    };
    let exps = Exponents { h: 1.0 - 1.0 / r as f64, q: qe + eps, log: 0.0 };
    let gap = r as f64 - d_of(d) as f64 + delta;
    let limit = 0.5 + 1.0 / (4.0 * gap);
    let mut rep = BoundReport::build(Theorem::Intermediate, params, exps)
        .invalid_if(!in_range, || format!("need d ≥ 4 and D < r < d(d-1); got r = {r}, d = {d}"))
        .invalid_if(!below(h, q, limit), || format!("H ≥ q^{limit}"));
    rep.unconditional = in_range;
    Ok(rep)
}

/// `κ² / (4((d+1)²+2)(1+2κ))`.
pub fn delta_chang(kappa: f64, d: u32) -> f64 {
    let d1 = d as f64 + 1.0;
    kappa * kappa / (4.0 * (d1 * d1 + 2.0) * (1.0 + 2.0 * kappa))
}

/// `κ² / (D+1)`.
pub fn delta_chang_refined(kappa: f64, d: u32) -> f64 {
    kappa * kappa / (d_of(d) as f64 + 1.0)
}

/// `(2κ / (1 + √(1 + 4Dκ)))²`.
pub fn delta_vin(kappa: f64, d: u32) -> f64 {
    let big_d = d_of(d) as f64;
    let t = 2.0 * kappa / (1.0 + (1.0 + 4.0 * big_d * kappa).sqrt());
    t * t
}

/// Saving `δ` of the refined Chang bound at `H = q^{1/4+κ}` for a given `r`.
pub fn delta_chang_at(kappa: f64, d: u32, r: u32) -> f64 {
    let r = r as f64;
    (kappa * r - 0.25 * (d_of(d) as f64 + 1.0)) / (r * r)
}

/// Saving `δ` of the Vinogradov bound at `H = q^{1/4+κ}` for a given `r > D`.
pub fn delta_vin_at(kappa: f64, d: u32, r: u32) -> Option<f64> {
    let gap = r as f64 - d_of(d) as f64;
    (gap > 0.0).then(|| (4.0 * kappa * gap - 1.0) / (4.0 * r as f64 * gap))
}

/// Real maximiser of [`delta_chang_at`]: `(D+1) / (2κ)`.
pub fn optimal_r_chang_real(kappa: f64, d: u32) -> f64 {
    0.5 * (d_of(d) as f64 + 1.0) / kappa
}

/// Real maximiser of [`delta_vin_at`]: `D + (1 + √(4Dκ+1)) / (4κ)`.
pub fn optimal_r_vin_real(kappa: f64, d: u32) -> f64 {
    let big_d = d_of(d) as f64;
    big_d + (1.0 + (4.0 * big_d * kappa + 1.0).sqrt()) / (4.0 * kappa)
}

/// The integer `r = x + θ` with `-1/2 < θ ≤ 1/2`.
fn nearest_integer_ties_up(x: f64) -> u32 {
    (x + 0.5).floor().max(1.0) as u32
}

pub fn optimal_r_chang(kappa: f64, d: u32) -> u32 {
    nearest_integer_ties_up(optimal_r_chang_real(kappa, d))
}

pub fn optimal_r_vin(kappa: f64, d: u32) -> u32 {
    nearest_integer_ties_up(optimal_r_vin_real(kappa, d))
}

/// Smallest valid bound over `r ∈ [1, 4D + 64]` and every applicable theorem.
///
/// Degree 0 only uses the classical bound. For `d ≥ 4` the intermediate
/// range uses `Δ = delta_wooley.unwrap_or(d)`. When nothing is valid (in
/// particular when `H ≥ q`) the trivial bound `H` is returned.
pub fn best_bound(q: f64, h: f64, d: u32, eps: f64, delta_wooley: Option<f64>) -> Result<BoundReport> {
    let params = BoundParams::new(q, h, 1, d, eps)?;
    if h >= q {
        return Ok(BoundReport::trivial(params, "H ≥ q: outside every short-sum range"));
    }
    let r_max = 4 * d_of(d) as u32 + 64;
    let delta = delta_wooley.unwrap_or(d as f64);
    let mut best: Option<BoundReport> = None;
    for r in 1..=r_max {
        let mut candidates = Vec::with_capacity(4);
        if d == 0 {
            candidates.push(burgess_classical(q, h, r)?);
        } else {
            candidates.push(enflo_bound(q, h, r, d, eps)?);
            candidates.push(chang_refined_bound(q, h, r, d)?);
            candidates.push(vinogradov_bound(q, h, r, d, eps)?);
            if d >= 4 {
                candidates.push(intermediate_bound(q, h, r, d, eps, delta)?);
            }
        }
        for rep in candidates.into_iter().filter(|rep| rep.valid) {
            if best.as_ref().is_none_or(|b| rep.bound < b.bound) {
                best = Some(rep);
            }
        }
    }
    Ok(best.unwrap_or_else(|| BoundReport::trivial(params, "no theorem applies")))
}
