//! Exact counting for the Vinogradov system
//!
//! ```text
//! x_1^m + … + x_r^m = x_{r+1}^m + … + x_{2r}^m,   1 ≤ m ≤ d,   1 ≤ x_i ≤ X,
//! ```
//!
//! membership in the alternating-sign set `V_{r,d}(τ)`, and good/bad tuple
//! classification.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bounds::d_of;
use crate::error::{Error, Result};

/// Enumeration guard for `X^{2r}` in the brute-force counter.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000_000;

/// Guard for the number of `r`-tuples `X^r` behind a meet-in-the-middle count.
pub const MITM_LIMIT: u128 = 100_000_000;

/// A vector `x ∈ [1, τ]^{2r}`. Positions are 1-based in the sign pattern
/// `ε(i) = (-1)^i`: odd positions carry `-1`, even positions `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleAssignment {
    entries: Vec<u64>,
    tau: u64,
}

impl TupleAssignment {
    pub fn new(entries: Vec<u64>, tau: u64) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "tuple length must be a positive even number, got {}",
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&x| x == 0 || x > tau) {
            return Err(Error::invalid(format!("entry {bad} outside [1, {tau}]")));
        }
        Ok(Self { entries, tau })
    }

    /// Takes `τ = max(entries)`.
    pub fn from_entries(entries: Vec<u64>) -> Result<Self> {
        let tau = entries.iter().copied().max().unwrap_or(0);
        Self::new(entries, tau)
    }

    pub fn r(&self) -> usize {
        self.entries.len() / 2
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Sign `ε(i)` for the 0-based slot `idx`.
    #[inline]
    pub fn sign(idx: usize) -> i128 {
        if idx.is_multiple_of(2) {
            -1
        } else {
            1
        }
    }

    /// `Σ ε(i) x_i^s` for `s = 1..=d`.
    pub fn alternating_power_sums(&self, d: u32) -> Vec<i128> {
        alternating_power_sums(&self.entries, d)
    }

    pub fn is_bad(&self) -> bool {
        is_bad(&self.entries)
    }

    pub fn in_v(&self, d: u32) -> bool {
        in_v(&self.entries, d)
    }
}

pub(crate) fn alternating_power_sums(xs: &[u64], d: u32) -> Vec<i128> {
    (1..=d)
        .map(|s| {
            xs.iter()
                .enumerate()
                .map(|(i, &x)| TupleAssignment::sign(i) * (x as i128).pow(s))
                .sum()
        })
        .collect()
}

/// Power sums `(Σ x_i, Σ x_i², …, Σ x_i^d)` of an `r`-subtuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerSumVector(pub Vec<u128>);

impl PowerSumVector {
    pub fn of(xs: &[u64], d: u32) -> Self {
        Self(
            (1..=d)
                .map(|m| xs.iter().map(|&x| (x as u128).pow(m)).sum())
                .collect(),
        )
    }
}

fn pow_u128(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

/// Checks that every power sum `r·X^d` fits below `2^127`.
fn check_power_range(r: usize, d: u32, x: u64) -> Result<()> {
    pow_u128(x as u128, d)
        .and_then(|p| p.checked_mul(r as u128))
        .filter(|&v| v < 1u128 << 127)
        .map(|_| ())
        .ok_or_else(|| Error::Overflow(format!("power sums r·X^d for r={r}, d={d}, X={x}")))
}

fn guard(what: &'static str, x: u64, exp: usize, limit: u128) -> Result<()> {
    let work = pow_u128(x as u128, exp as u32).unwrap_or(u128::MAX);
    if work > limit {
        return Err(Error::Guard { what, work, limit });
    }
    Ok(())
}

fn check_shape(r: usize, x: u64) -> Result<()> {
    if r == 0 {
        return Err(Error::invalid("r must be at least 1"));
    }
    if x == 0 {
        return Err(Error::invalid("X must be at least 1"));
    }
    Ok(())
}

/// Advances `digits` through `[1, x]^len` lexicographically; false when done.
fn odometer(digits: &mut [u64], x: u64) -> bool {
    for slot in digits.iter_mut().rev() {
        if *slot < x {
            *slot += 1;
            return true;
        }
        *slot = 1;
    }
    false
}

/// `J_{r,d}(X)` by direct enumeration of all `X^{2r}` tuples.
pub fn count_j_bruteforce(r: usize, d: u32, x: u64) -> Result<u128> {
    check_shape(r, x)?;
    guard("brute-force J", x, 2 * r, BRUTE_FORCE_LIMIT)?;
    check_power_range(r, d, x)?;

    let powers: Vec<Vec<i128>> = (0..=x)
        .map(|v| (1..=d).map(|m| (v as i128).pow(m)).collect())
        .collect();
    let solves = |tuple: &[u64]| {
        (0..d as usize).all(|m| {
            let (left, right) = tuple.split_at(r);
            let l: i128 = left.iter().map(|&v| powers[v as usize][m]).sum();
            let rr: i128 = right.iter().map(|&v| powers[v as usize][m]).sum();
            l == rr
        })
    };

    // Split on x_1; each worker walks the remaining 2r-1 coordinates.
    let total = (1..=x)
        .into_par_iter()
        .map(|first| {
            let mut tuple = vec![1u64; 2 * r];
            tuple[0] = first;
            let mut count = 0u128;
            loop {
                if solves(&tuple) {
                    count += 1;
                }
                if !odometer(&mut tuple[1..], x) {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(total)
}

/// Number of orderings of a sorted multiset: `r! / Π mult!`.
fn arrangements(sorted: &[u64]) -> u128 {
    let mut out: u128 = (1..=sorted.len() as u128).product();
    let mut run = 1u128;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            out /= run;
        } else {
            run = 1;
        }
    }
    out
}

/// Visits every nondecreasing `len`-sequence over `[start, x]`.
fn for_each_multiset(prefix: &mut Vec<u64>, len: usize, start: u64, x: u64, f: &mut impl FnMut(&[u64])) {
    if prefix.len() == len {
        f(prefix);
        return;
    }
    for v in start..=x {
        prefix.push(v);
        for_each_multiset(prefix, len, v, x, f);
        prefix.pop();
    }
}

/// Multiplicity of each power-sum vector over all `X^r` ordered `r`-tuples.
pub fn power_sum_histogram(r: usize, d: u32, x: u64) -> Result<HashMap<PowerSumVector, u128>> {
    check_shape(r, x)?;
    guard("meet-in-the-middle J", x, r, MITM_LIMIT)?;
    check_power_range(r, d, x)?;

    // Power sums only depend on the multiset, so walk sorted tuples and weight
    // each by its number of orderings. Partial maps per first entry are merged.
    let hist = (1..=x)
        .into_par_iter()
        .map(|first| {
            let mut local: HashMap<PowerSumVector, u128> = HashMap::new();
            let mut prefix = vec![first];
            for_each_multiset(&mut prefix, r, first, x, &mut |t| {
                *local.entry(PowerSumVector::of(t, d)).or_default() += arrangements(t);
            });
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Ok(hist)
}

/// `J_{r,d}(X) = Σ_v N(v)²` where `N(v)` counts `r`-tuples with power sums `v`.
pub fn count_j_mitm(r: usize, d: u32, x: u64) -> Result<u128> {
    Ok(power_sum_histogram(r, d, x)?.values().map(|&n| n * n).sum())
}

/// A tuple is bad when every value in it occurs at least twice.
pub fn is_bad(xs: &[u64]) -> bool {
    let mut counts: HashMap<u64, usize> = HashMap::new();
    for &x in xs {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().all(|&c| c >= 2)
}

/// `r^{2r+1} τ^r`, the upper bound on the number of bad tuples.
pub fn bad_tuple_bound(r: usize, tau: u64) -> u128 {
    let r = r as u128;
    r.pow(2 * r as u32 + 1) * (tau as u128).pow(r as u32)
}

/// Exact number of bad tuples in `[1, τ]^{2r}`.
pub fn count_bad(r: usize, tau: u64) -> Result<u128> {
    check_shape(r, tau)?;
    guard("bad-tuple count", tau, 2 * r, BRUTE_FORCE_LIMIT)?;
    let total = (1..=tau)
        .into_par_iter()
        .map(|first| {
            let mut tuple = vec![1u64; 2 * r];
            tuple[0] = first;
            let mut count = 0u128;
            loop {
                if is_bad(&tuple) {
                    count += 1;
                }
                if !odometer(&mut tuple[1..], tau) {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(total)
}

/// True iff `Σ ε(i) x_i^s = 0` for every `s ≤ d`.
pub fn in_v(xs: &[u64], d: u32) -> bool {
    alternating_power_sums(xs, d).iter().all(|&s| s == 0)
}

/// Split of `V_{r,d}(τ)` into good and bad tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VCensus {
    pub good_in_v: u128,
    pub bad_in_v: u128,
}

impl VCensus {
    pub fn total(&self) -> u128 {
        self.good_in_v + self.bad_in_v
    }
}

/// Enumerates `[1, τ]^{2r}` and classifies every member of `V_{r,d}(τ)`.
pub fn v_census(r: usize, d: u32, tau: u64) -> Result<VCensus> {
    check_shape(r, tau)?;
    guard("V census", tau, 2 * r, BRUTE_FORCE_LIMIT)?;
    check_power_range(r, d, tau)?;
    let mut tuple = vec![1u64; 2 * r];
    let mut census = VCensus { good_in_v: 0, bad_in_v: 0 };
    loop {
        if in_v(&tuple, d) {
            if is_bad(&tuple) {
                census.bad_in_v += 1;
            } else {
                census.good_in_v += 1;
            }
        }
        if !odometer(&mut tuple, tau) {
            break;
        }
    }
    Ok(census)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureRow {
    pub x: u64,
    pub j: u128,
    /// `J / (X^r + X^{2r-D})`.
    pub ratio: f64,
}

/// `J_{r,d}(X)` against the main-conjecture shape for `X = 1..=x_max`.
pub fn conjecture_ratio_table(r: usize, d: u32, x_max: u64) -> Result<Vec<ConjectureRow>> {
    check_shape(r, x_max)?;
    guard("meet-in-the-middle J", x_max, r, MITM_LIMIT)?;
    let big_d = d_of(d) as i32;
    (1..=x_max)
        .map(|x| {
            let j = count_j_mitm(r, d, x)?;
            let xf = x as f64;
            let shape = xf.powi(r as i32) + xf.powi(2 * r as i32 - big_d);
            Ok(ConjectureRow { x, j, ratio: j as f64 / shape })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bruteforce_examples() {
        for (r, d) in [(1, 1), (2, 3), (3, 2)] {
            assert_eq!(count_j_bruteforce(r, d, 1).unwrap(), 1);
        }
        for x in 1..=9 {
            assert_eq!(count_j_bruteforce(1, 3, x).unwrap(), x as u128);
        }
        assert_eq!(count_j_bruteforce(2, 1, 2).unwrap(), 6);
    }

    #[test]
    fn mitm_examples() {
        assert_eq!(count_j_mitm(2, 2, 3).unwrap(), 15);
        assert_eq!(count_j_mitm(2, 1, 2).unwrap(), 6);
        assert_eq!(
            count_j_mitm(3, 2, 6).unwrap(),
            count_j_bruteforce(3, 2, 6).unwrap()
        );
    }

    #[test]
    fn guards_trip() {
        assert!(count_j_bruteforce(3, 2, 100).unwrap_err().is_guard());
        assert!(count_j_mitm(5, 2, 100).unwrap_err().is_guard());
        assert!(matches!(count_j_mitm(1, 40, 1 << 20), Err(Error::Overflow(_))));
        assert!(matches!(count_j_mitm(0, 2, 4), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(&[1, 2, 3]), 6);
        assert_eq!(arrangements(&[1, 1, 2]), 3);
        assert_eq!(arrangements(&[4, 4, 4, 4]), 1);
        assert_eq!(arrangements(&[1, 1, 2, 2]), 6);
    }

    #[test]
    fn histogram_mass_is_x_to_the_r() {
        let h = power_sum_histogram(3, 2, 7).unwrap();
        assert_eq!(h.values().sum::<u128>(), 343);
    }

    #[test]
    fn bad_examples() {
        assert!(is_bad(&[5, 5]));
        assert!(!is_bad(&[1, 2]));
        assert!(is_bad(&[1, 2, 2, 1]));
        assert!(!is_bad(&[1, 1, 1, 2]));
    }

    #[test]
    fn count_bad_examples() {
        for tau in 1..=7 {
            assert_eq!(count_bad(1, tau).unwrap(), tau as u128);
        }
        assert_eq!(count_bad(2, 2).unwrap(), 8);
        let c = count_bad(2, 8).unwrap();
        assert!(c <= 2048);
        assert_eq!(bad_tuple_bound(2, 8), 2048);
        // 8 all-equal plus 3 pairings × 8·7 ordered value pairs.
        assert_eq!(c, 8 + 3 * 56);
    }

    #[test]
    fn in_v_examples() {
        for a in 1..5 {
            for b in 1..5 {
                assert!(in_v(&[a, a, b, b], 2));
            }
        }
        assert!(!in_v(&[1, 2], 1));
        let x = TupleAssignment::new(vec![3, 1, 1, 3], 3).unwrap();
        assert!(x.in_v(5));
        assert_eq!(x.alternating_power_sums(2), vec![0, 0]);
    }

    #[test]
    fn v_count_matches_j_after_reindexing() {
        let census = v_census(2, 2, 4).unwrap();
        assert_eq!(census.total(), count_j_bruteforce(2, 2, 4).unwrap());
        for (r, d, tau) in [(1, 1, 5), (2, 1, 4), (3, 2, 3), (2, 3, 5)] {
            let c = v_census(r, d, tau).unwrap();
            assert_eq!(c.total(), count_j_bruteforce(r, d, tau).unwrap());
        }
    }

    #[test]
    fn tuple_validation() {
        assert!(TupleAssignment::new(vec![1, 2, 3], 3).is_err());
        assert!(TupleAssignment::new(vec![], 3).is_err());
        assert!(TupleAssignment::new(vec![0, 1], 3).is_err());
        assert!(TupleAssignment::new(vec![4, 1], 3).is_err());
        assert_eq!(TupleAssignment::from_entries(vec![2, 5]).unwrap().tau(), 5);
    }

    #[test]
    fn conjecture_table_examples() {
        let rows = conjecture_ratio_table(2, 1, 50).unwrap();
        assert_eq!(rows[0].ratio, 0.5);
        assert!(rows.iter().all(|row| row.ratio <= 1.0));
        let rows = conjecture_ratio_table(2, 2, 30).unwrap();
        assert!(rows.iter().all(|row| row.ratio <= 2.0));
        assert_eq!(rows[2].j, 15);
    }

    #[test]
    fn structural_properties() {
        for r in 1..=3usize {
            for d in 1..=3u32 {
                let mut prev = 0;
                for x in 1..=7u64 {
                    let j = count_j_mitm(r, d, x).unwrap();
                    assert!(j >= prev, "monotone in X");
                    assert!(j >= (x as u128).pow(r as u32), "diagonal");
                    assert!(count_j_mitm(r, d + 1, x).unwrap() <= j, "monotone in d");
                    prev = j;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn permutation_invariance(
            xs in proptest::collection::vec(1u64..6, 2..9usize),
            d in 1u32..4,
        ) {
            let mut xs = xs;
            if xs.len() % 2 == 1 {
                xs.pop();
            }
            // Swapping two same-sign slots (0 and 2) leaves V membership alone;
            // any reordering leaves badness alone.
            let mut swapped = xs.clone();
            if swapped.len() >= 4 {
                swapped.swap(0, 2);
            }
            prop_assert_eq!(in_v(&xs, d), in_v(&swapped, d));
            let mut rev = xs.clone();
            rev.reverse();
            prop_assert_eq!(is_bad(&xs), is_bad(&rev));
            // Mirrored tuples (x, reversed x) pair every value.
            let mut mirrored = xs.clone();
            mirrored.extend(xs.iter().rev());
            prop_assert!(is_bad(&mirrored));
        }
    }
}
