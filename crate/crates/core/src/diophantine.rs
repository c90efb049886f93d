//! Counting solutions of `j1 n_k - j2 n_l = nu` and the limiting densities
//! `gamma_{j1,j2,nu}`.
//!
//! Counts are exact big-integer work. For each `k` the equation is solved by
//! an exact divisibility check and a binary search over the (strictly
//! increasing) term list, so the cost is `O(N log N)` comparisons rather than
//! `O(N^2)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::sequence::SequenceFamily;
use crate::{Error, Result};

/// Cost guard for general-family solution counts.
const COUNT_MAX_N: usize = 10_000;

/// Sparse table of limiting densities `gamma_{j1,j2,nu}`.
///
/// Stored with both orientations: `gamma_{j1,j2,nu} = gamma_{j2,j1,-nu}`.
/// Diagonal entries (`j1 = j2`) are forced to zero by the Hadamard gap
/// condition and are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTable {
    d_max: u32,
    entries: BTreeMap<(u32, u32, i64), BigRational>,
}

impl GammaTable {
    pub fn new(d_max: u32) -> Self {
        GammaTable {
            d_max,
            entries: BTreeMap::new(),
        }
    }

    /// Insert `gamma_{j1,j2,nu}` together with its mirror entry.
    pub fn insert(&mut self, j1: u32, j2: u32, nu: i64, gamma: BigRational) -> Result<()> {
        if j1 == 0 || j2 == 0 {
            return Err(Error::InvalidParameter("frequency indices start at 1"));
        }
        if gamma.is_negative() {
            return Err(Error::InvalidParameter("gamma must be non-negative"));
        }
        if j1 == j2 && !gamma.is_zero() {
            return Err(Error::InvalidParameter(
                "diagonal gamma must vanish for Hadamard sequences",
            ));
        }
        if gamma.is_zero() {
            return Ok(());
        }
        self.entries.insert((j1, j2, nu), gamma.clone());
        self.entries.insert((j2, j1, -nu), gamma);
        Ok(())
    }

    /// The exact table of Lemma-1 type for the base-3 sequence:
    /// `gamma_{3j,j,j} = gamma_{j,3j,-j} = 1/2` for all `3j <= d_max`.
    pub fn theorem1(d_max: u32) -> Self {
        let mut t = GammaTable::new(d_max);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut j = 1;
        while 3 * j <= d_max {
            t.insert(3 * j, j, j as i64, half.clone()).expect("off-diagonal");
            j += 1;
        }
        t
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn get(&self, j1: u32, j2: u32, nu: i64) -> Option<&BigRational> {
        self.entries.get(&(j1, j2, nu))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32, i64), &BigRational)> {
        self.entries.iter()
    }

    /// Largest `|nu|` with a stored entry.
    pub fn nu_span(&self) -> i64 {
        self.entries.keys().map(|k| k.2.abs()).max().unwrap_or(0)
    }
}

/// `S(j1,j2,nu,N)` over a precomputed, strictly increasing term list.
pub fn count_solutions_in_terms(terms: &[BigInt], j1: u64, j2: u64, nu: i64) -> u64 {
    let j1b = BigInt::from(j1);
    let j2b = BigInt::from(j2);
    let nub = BigInt::from(nu);
    let mut count = 0u64;
    for (k, nk) in terms.iter().enumerate() {
        let target = &j1b * nk - &nub;
        if target <= BigInt::zero() {
            continue;
        }
        let (quot, rem) = target.div_rem(&j2b);
        if !rem.is_zero() {
            continue;
        }
        if let Ok(l) = terms.binary_search(&quot) {
            if !(j1 == j2 && k == l) {
                count += 1;
            }
        }
    }
    count
}

/// `S(j1,j2,nu,N) = #{(k,l): (j1,k) != (j2,l), 1 <= k,l <= N, j1 n_k - j2 n_l = nu}`.
pub fn count_solutions(
    seq: &SequenceFamily,
    j1: u64,
    j2: u64,
    nu: i64,
    n: usize,
) -> Result<u64> {
    if j1 == 0 || j2 == 0 {
        return Err(Error::InvalidParameter("frequency indices start at 1"));
    }
    if n > COUNT_MAX_N {
        return Err(Error::SizeGuard("solution count horizon"));
    }
    let terms = seq.terms(n as u64)?;
    Ok(count_solutions_in_terms(&terms, j1, j2, nu))
}

/// `S(j1,j2,nu,N) == S(j2,j1,-nu,N)`.
pub fn symmetry_check(
    seq: &SequenceFamily,
    j1: u64,
    j2: u64,
    nu: i64,
    n: usize,
) -> Result<bool> {
    Ok(count_solutions(seq, j1, j2, nu, n)? == count_solutions(seq, j2, j1, -nu, n)?)
}

/// Empirical `S/N` series along a ladder of horizons.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `(N, S(j1,j2,nu,N))` per ladder entry.
    pub counts: Vec<(usize, u64)>,
    /// `S/N` per ladder entry.
    pub ratios: Vec<f64>,
    /// Last ratio, taken as the gamma estimate.
    pub estimate: f64,
    /// `max_i |ratios[i] - estimate|`.
    pub max_deviation: f64,
    /// Ratios monotone (either direction) along the ladder.
    pub monotone: bool,
    /// Successive ratio gaps non-increasing.
    pub cauchy: bool,
}

/// Estimate `gamma_{j1,j2,nu}` from the `S/N` series.
pub fn estimate_gamma(
    seq: &SequenceFamily,
    j1: u64,
    j2: u64,
    nu: i64,
    ladder: &[usize],
) -> Result<ConvergenceReport> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("ladder must be increasing"));
    }
    let n_max = *ladder.last().expect("non-empty");
    if n_max > COUNT_MAX_N {
        return Err(Error::SizeGuard("solution count horizon"));
    }
    let terms = seq.terms(n_max as u64)?;
    let counts: Vec<(usize, u64)> = ladder
        .iter()
        .map(|&n| (n, count_solutions_in_terms(&terms[..n], j1, j2, nu)))
        .collect();
    let ratios: Vec<f64> = counts.iter().map(|&(n, s)| s as f64 / n as f64).collect();
    let estimate = *ratios.last().expect("non-empty");
    let max_deviation = ratios
        .iter()
        .map(|r| (r - estimate).abs())
        .fold(0.0, f64::max);
    let diffs: Vec<f64> = ratios.windows(2).map(|w| w[1] - w[0]).collect();
    let monotone =
        diffs.iter().all(|d| *d >= 0.0) || diffs.iter().all(|d| *d <= 0.0);
    let cauchy = diffs
        .windows(2)
        .all(|w| w[1].abs() <= w[0].abs() + f64::EPSILON);
    Ok(ConvergenceReport {
        counts,
        ratios,
        estimate,
        max_deviation,
        monotone,
        cauchy,
    })
}

/// Estimate a whole gamma table: scan `1 <= j1,j2 <= d_max`, `|nu| <= nu_window`,
/// keep estimates above `threshold` (as exact `S/N` fractions).
pub fn estimate_gamma_table(
    seq: &SequenceFamily,
    d_max: u32,
    nu_window: i64,
    n: usize,
    threshold: f64,
) -> Result<GammaTable> {
    if n > COUNT_MAX_N {
        return Err(Error::SizeGuard("solution count horizon"));
    }
    let terms = seq.terms(n as u64)?;
    let mut table = GammaTable::new(d_max);
    for j1 in 1..=d_max as u64 {
        // only j1 >= j2: the mirror is filled by insert()
        for j2 in 1..=j1 {
            for nu in -nu_window..=nu_window {
                if j1 == j2 {
                    continue;
                }
                let s = count_solutions_in_terms(&terms, j1, j2, nu);
                if s == 0 {
                    continue;
                }
                let est = s as f64 / n as f64;
                if est >= threshold {
                    let g = BigRational::new(BigInt::from(s), BigInt::from(n));
                    table.insert(j1 as u32, j2 as u32, nu, g)?;
                }
            }
        }
    }
    Ok(table)
}
