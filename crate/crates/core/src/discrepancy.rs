//! Star and extremal discrepancy of finite point sets.
//!
//! Exact mode runs on rationals end-to-end; the float path exists for large
//! trajectory checkpoints. The sorted-points formulas are validated against
//! [`brute_force_discrepancy`], which enumerates interval endpoints and
//! evaluates both the closed and open counting convention at each candidate.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fmath;
use crate::{Error, Result};

/// Interval family the discrepancy ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscrepancyKind {
    /// Anchored intervals `[0,a]`.
    Star,
    /// All intervals `[a,b]`.
    Extremal,
}

/// A discrepancy value with the interval attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyResult<T> {
    pub value: T,
    pub kind: DiscrepancyKind,
    /// `[a,b]` attaining the supremum (for star results `a = 0`).
    pub witness: (T, T),
}

/// Exact points of `[0,1]`. Duplicates are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPoints {
    pts: Vec<BigRational>,
}

impl ExactPoints {
    pub fn new(pts: Vec<BigRational>) -> Result<Self> {
        if pts.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let one = BigRational::one();
        if pts.iter().any(|p| p.is_negative() || *p > one) {
            return Err(Error::InvalidParameter("points must lie in [0,1]"));
        }
        Ok(ExactPoints { pts })
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[BigRational] {
        &self.pts
    }

    fn sorted(&self) -> Vec<BigRational> {
        let mut s = self.pts.clone();
        s.sort();
        s
    }

    /// `#{x_k <= a}` on the sorted slice.
    fn count_le(sorted: &[BigRational], a: &BigRational) -> usize {
        sorted.partition_point(|p| p <= a)
    }

    /// `#{x_k < a}`.
    fn count_lt(sorted: &[BigRational], a: &BigRational) -> usize {
        sorted.partition_point(|p| p < a)
    }
}

/// Star discrepancy via the sorted-points formula
/// `max_k max(k/N - x_(k), x_(k) - (k-1)/N)`.
pub fn star_discrepancy_exact(ps: &ExactPoints) -> DiscrepancyResult<BigRational> {
    let sorted = ps.sorted();
    let n = BigInt::from(sorted.len());
    let mut best = BigRational::zero();
    let mut witness = BigRational::zero();
    for (i, x) in sorted.iter().enumerate() {
        let k = BigInt::from(i + 1);
        let up = BigRational::new(k.clone(), n.clone()) - x;
        let down = x - BigRational::new(k - 1, n.clone());
        let local = if up >= down { up } else { down };
        if local > best {
            best = local;
            witness = x.clone();
        }
    }
    DiscrepancyResult {
        value: best,
        kind: DiscrepancyKind::Star,
        witness: (BigRational::zero(), witness),
    }
}

/// Extremal discrepancy via the decomposition
/// `max_k(k/N - x_(k)) + max_k(x_(k) - (k-1)/N)`.
pub fn extremal_discrepancy_exact(ps: &ExactPoints) -> DiscrepancyResult<BigRational> {
    let sorted = ps.sorted();
    let n = BigInt::from(sorted.len());
    let mut up = BigRational::zero() - BigRational::one();
    let mut down = up.clone();
    let mut up_at = BigRational::zero();
    let mut down_at = BigRational::zero();
    for (i, x) in sorted.iter().enumerate() {
        let k = BigInt::from(i + 1);
        let u = BigRational::new(k.clone(), n.clone()) - x;
        if u > up {
            up = u;
            up_at = x.clone();
        }
        let d = x - BigRational::new(k - 1, n.clone());
        if d > down {
            down = d;
            down_at = x.clone();
        }
    }
    let witness = if down_at <= up_at {
        (down_at, up_at)
    } else {
        (up_at, down_at)
    };
    DiscrepancyResult {
        value: up + down,
        kind: DiscrepancyKind::Extremal,
        witness,
    }
}

/// Deviation of the anchored interval `[0,a]`: the supremum of
/// `|#{x_k in [0,t]}/N - t|` as `t` approaches `a` from either side.
pub fn star_deviation(ps: &ExactPoints, a: &BigRational) -> BigRational {
    star_deviation_sorted(&ps.sorted(), a)
}

fn star_deviation_sorted(sorted: &[BigRational], a: &BigRational) -> BigRational {
    let n = BigInt::from(sorted.len());
    let le = ExactPoints::count_le(sorted, a);
    let lt = ExactPoints::count_lt(sorted, a);
    let t1 = BigRational::new(BigInt::from(le), n.clone()) - a;
    let t2 = a - BigRational::new(BigInt::from(lt), n);
    if t1 >= t2 {
        t1
    } else {
        t2
    }
}

/// Deviation of a candidate interval `[a,b]`, checking all four
/// endpoint-inclusion limits (boundary points carry mass at rational x).
pub fn interval_deviation(
    ps: &ExactPoints,
    a: &BigRational,
    b: &BigRational,
) -> BigRational {
    interval_deviation_sorted(&ps.sorted(), a, b)
}

fn interval_deviation_sorted(
    sorted: &[BigRational],
    a: &BigRational,
    b: &BigRational,
) -> BigRational {
    let n = BigInt::from(sorted.len());
    let len = b - a;
    let a_le = ExactPoints::count_le(sorted, a);
    let a_lt = ExactPoints::count_lt(sorted, a);
    let b_le = ExactPoints::count_le(sorted, b);
    let b_lt = ExactPoints::count_lt(sorted, b);
    let mut best = BigRational::zero();
    for count in [
        b_le.saturating_sub(a_lt), // [a,b]
        b_lt.saturating_sub(a_le), // (a,b)
        b_lt.saturating_sub(a_lt), // [a,b)
        b_le.saturating_sub(a_le), // (a,b]
    ] {
        let dev = (BigRational::new(BigInt::from(count), n.clone()) - &len).abs();
        if dev > best {
            best = dev;
        }
    }
    best
}

const BRUTE_FORCE_MAX: usize = 1000;

/// Oracle: evaluate the supremum over the finite candidate set of interval
/// endpoints (0, 1, and every point), with both one-sided limits.
pub fn brute_force_discrepancy(
    ps: &ExactPoints,
    kind: DiscrepancyKind,
) -> Result<DiscrepancyResult<BigRational>> {
    if ps.len() > BRUTE_FORCE_MAX {
        return Err(Error::SizeGuard("brute-force discrepancy point count"));
    }
    let sorted = ps.sorted();
    let mut cands = sorted.clone();
    cands.push(BigRational::zero());
    cands.push(BigRational::one());
    cands.sort();
    cands.dedup();

    let mut best = BigRational::zero() - BigRational::one();
    let mut witness = (BigRational::zero(), BigRational::zero());
    match kind {
        DiscrepancyKind::Star => {
            let zero = BigRational::zero();
            for b in &cands {
                let dev = star_deviation_sorted(&sorted, b);
                if dev > best {
                    best = dev;
                    witness = (zero.clone(), b.clone());
                }
            }
        }
        DiscrepancyKind::Extremal => {
            for (i, a) in cands.iter().enumerate() {
                for b in &cands[i..] {
                    let dev = interval_deviation_sorted(&sorted, a, b);
                    if dev > best {
                        best = dev;
                        witness = (a.clone(), b.clone());
                    }
                }
            }
        }
    }
    Ok(DiscrepancyResult {
        value: best,
        kind,
        witness,
    })
}

/// Float-mode star discrepancy, `O(N log N)`.
pub fn star_discrepancy_f64(points: &[f64]) -> f64 {
    let mut s: Vec<f64> = points.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("no NaN points"));
    let n = s.len() as f64;
    let mut best = 0.0f64;
    for (i, x) in s.iter().enumerate() {
        let k = (i + 1) as f64;
        best = best.max((k / n - x).max(x - (k - 1.0) / n));
    }
    best
}

/// Float-mode extremal discrepancy.
pub fn extremal_discrepancy_f64(points: &[f64]) -> f64 {
    let mut s: Vec<f64> = points.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("no NaN points"));
    let n = s.len() as f64;
    let mut up = f64::NEG_INFINITY;
    let mut down = f64::NEG_INFINITY;
    for (i, x) in s.iter().enumerate() {
        let k = (i + 1) as f64;
        up = up.max(k / n - x);
        down = down.max(x - (k - 1.0) / n);
    }
    up + down
}

/// The LIL normalization `N d / sqrt(2 N log log N)`, defined for `N >= 3`.
pub fn lil_normalize(n: u64, d: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter("lil_normalize needs N >= 3"));
    }
    let nf = n as f64;
    Ok(nf * d / fmath::sqrt(2.0 * nf * fmath::log(fmath::log(nf))))
}
