//! Trajectory simulation for the iterated-logarithm normalization, exact
//! second-moment integrals for interval counts, and inequality checkers
//! (the variation bound on `|sum f| / N` and its symmetric sharpening).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::discrepancy::{
    extremal_discrepancy_exact, extremal_discrepancy_f64, lil_normalize,
    star_discrepancy_exact, star_discrepancy_f64, ExactPoints,
};
use crate::fmath;
use crate::rational::{frac, UnitRational};
use crate::sequence::SequenceFamily;
use crate::sigma::BVFunctionSpec;
use crate::{Error, Result};

/// Statistic tracked along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    StarDisc,
    ExtremalDisc,
    FunctionSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub n: u64,
    /// `D_N` (discrepancy kinds) or `(1/N) sum f` (function sums).
    pub stat: f64,
    /// `N D_N / sqrt(2 N log log N)` resp. `|sum f| / sqrt(2 N log log N)`.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    /// Running maximum of the normalized statistic over all checkpoints.
    pub runmax: f64,
}

/// Memory guard for simulated trajectories.
const TRAJECTORY_MAX_N: u64 = 10_000_000;

/// Doubling checkpoint ladder `start, 2 start, ...` capped at (and always
/// including) `n_max`.
pub fn checkpoint_ladder(start: u64, n_max: u64) -> Result<Vec<u64>> {
    if start < 3 || n_max < start {
        return Err(Error::InvalidParameter("need 3 <= start <= n_max"));
    }
    let mut out = Vec::new();
    let mut n = start;
    while n < n_max {
        out.push(n);
        n = n.saturating_mul(2);
    }
    out.push(n_max);
    Ok(out)
}

/// Evaluate the statistic of `({n_k x})_{k <= N}` at each checkpoint.
///
/// Fractional parts are exact modular images of `x = p/q` pushed to `f64`
/// once per term, so huge terms like `3^(k^2)` cost `O(1)` each.
pub fn simulate_trajectory(
    seq: &SequenceFamily,
    x: &UnitRational,
    kind: StatKind,
    f: Option<&BVFunctionSpec>,
    checkpoints: &[u64],
) -> Result<Trajectory> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("checkpoints must be increasing"));
    }
    if checkpoints[0] < 3 {
        return Err(Error::InvalidParameter("first checkpoint must be >= 3"));
    }
    let n_max = *checkpoints.last().expect("non-empty");
    if n_max > TRAJECTORY_MAX_N {
        return Err(Error::SizeGuard("trajectory length"));
    }
    if matches!(kind, StatKind::FunctionSum) != f.is_some() {
        return Err(Error::InvalidParameter(
            "function required exactly for function-sum statistics",
        ));
    }

    let fracs = frac_parts_f64(seq, x, n_max)?;

    let mut points = Vec::with_capacity(checkpoints.len());
    let mut runmax = 0.0f64;
    match kind {
        StatKind::FunctionSum => {
            let f = f.expect("checked above");
            let mut sum = 0.0f64;
            let mut done = 0usize;
            for &cp in checkpoints {
                for t in &fracs[done..cp as usize] {
                    sum += f.eval_f64(*t);
                }
                done = cp as usize;
                let nf = cp as f64;
                let normalized =
                    fmath::fabs(sum) / fmath::sqrt(2.0 * nf * fmath::log(fmath::log(nf)));
                runmax = runmax.max(normalized);
                points.push(TrajectoryPoint {
                    n: cp,
                    stat: sum / nf,
                    normalized,
                });
            }
        }
        StatKind::StarDisc | StatKind::ExtremalDisc => {
            for &cp in checkpoints {
                let slice = &fracs[..cp as usize];
                let d = match kind {
                    StatKind::StarDisc => star_discrepancy_f64(slice),
                    _ => extremal_discrepancy_f64(slice),
                };
                let normalized = lil_normalize(cp, d)?;
                runmax = runmax.max(normalized);
                points.push(TrajectoryPoint {
                    n: cp,
                    stat: d,
                    normalized,
                });
            }
        }
    }
    Ok(Trajectory { points, runmax })
}

/// `{n_k x}` for `k = 1..=n`, exact mod-q arithmetic rounded once to `f64`.
pub fn frac_parts_f64(seq: &SequenceFamily, x: &UnitRational, n: u64) -> Result<Vec<f64>> {
    if n > TRAJECTORY_MAX_N {
        return Err(Error::SizeGuard("trajectory length"));
    }
    let mut out = Vec::with_capacity(n as usize);
    match (x.denom().to_u64(), x.numer().to_u64()) {
        (Some(q), Some(p)) => {
            let qf = q as f64;
            for r in seq.residues_u64(q)?.take(n as usize) {
                let v = ((r as u128 * p as u128) % q as u128) as u64;
                out.push(v as f64 / qf);
            }
            if out.len() < n as usize {
                return Err(Error::IndexOutOfRange);
            }
        }
        _ => {
            let q = x.denom();
            for k in 1..=n {
                let r = seq.term_mod(k, q)?;
                let v = (r * x.numer()) % q;
                out.push(BigRational::new(v, q.clone()).to_f64().unwrap_or(f64::NAN));
            }
        }
    }
    Ok(out)
}

const PAIR_INTEGRAL_MAX_N: usize = 64;
const POINTWISE_MAX_TERM: u64 = 4096;

/// Exact `int_0^1 K_z(t) dt` where `K_z(t)` is the length of the set of arc
/// positions `a` whose closed circular arc `[a, a+z]` contains two points at
/// circular distance `d = min(t, 1-t)`:
/// `K_z(t) = (z - d)^+ + (z - (1 - d))^+`.
pub fn pair_kernel_integral(z: &BigRational) -> Result<BigRational> {
    check_open_unit(z)?;
    let one = BigRational::one();
    let two = BigRational::from(BigInt::from(2));
    let mut cuts = alloc::vec![
        BigRational::zero(),
        z.clone(),
        &one - z,
        &one / &two,
        one.clone(),
    ];
    cuts.sort();
    cuts.dedup();
    let mut acc = BigRational::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        // midpoint rule is exact on each linear piece
        acc += pair_kernel_at(z, &mid) * (&w[1] - &w[0]);
    }
    Ok(acc)
}

fn pair_kernel_at(z: &BigRational, t: &BigRational) -> BigRational {
    let one = BigRational::one();
    let d = core::cmp::min(t.clone(), &one - t);
    let mut k = BigRational::zero();
    let a = z - &d;
    if a.is_positive() {
        k += a;
    }
    let b = z - (&one - &d);
    if b.is_positive() {
        k += b;
    }
    k
}

fn check_open_unit(z: &BigRational) -> Result<()> {
    if !z.is_positive() || z >= &BigRational::one() {
        return Err(Error::InvalidParameter("arc length must lie in (0,1)"));
    }
    Ok(())
}

/// Exact double integral `int_0^1 int_0^1 (sum_k I_[a,a+z]({n_k x}) - Nz)^2 dx da`
/// for distinct positive integers `n_k`.
///
/// Diagonal terms integrate to `z` each; each ordered off-diagonal pair
/// contributes the [`pair_kernel_integral`] because `x -> {(n_k - n_l) x}`
/// preserves Lebesgue measure.
pub fn theorem4_exact(terms: &[BigInt], z: &BigRational) -> Result<BigRational> {
    check_open_unit(z)?;
    if terms.is_empty() || terms.len() > PAIR_INTEGRAL_MAX_N {
        return Err(Error::SizeGuard("pair integral term count"));
    }
    if terms.iter().any(|t| t <= &BigInt::zero()) {
        return Err(Error::InvalidParameter("terms must be positive"));
    }
    let mut sorted = terms.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != terms.len() {
        return Err(Error::InvalidParameter("terms must be distinct"));
    }
    let n = BigRational::from(BigInt::from(terms.len()));
    let kernel = pair_kernel_integral(z)?;
    let cross = &n * (&n - BigRational::one()) * kernel;
    Ok(&n * z + cross - &n * &n * z * z)
}

/// Exact single integral `int_0^1 (sum_k I_[a,a+z]({n_k x}) - Nz)^2 dx` at a
/// fixed arc position `a`. The integrand is piecewise constant in `x` with
/// breakpoints `({a} + i)/n_k` and `({a+z} + i)/n_k`.
pub fn theorem4_pointwise(terms: &[u64], z: &BigRational, a: &BigRational) -> Result<BigRational> {
    check_open_unit(z)?;
    if terms.is_empty() || terms.len() > PAIR_INTEGRAL_MAX_N {
        return Err(Error::SizeGuard("pair integral term count"));
    }
    if terms.iter().any(|&t| t == 0 || t > POINTWISE_MAX_TERM) {
        return Err(Error::InvalidParameter("terms must lie in 1..=4096"));
    }
    let a0 = frac(a);
    let a1 = frac(&(a + z));
    let mut cuts: Vec<BigRational> = alloc::vec![BigRational::zero(), BigRational::one()];
    for &nk in terms {
        let nb = BigInt::from(nk);
        for alpha in [&a0, &a1] {
            for i in 0..nk {
                cuts.push((alpha + BigRational::from(BigInt::from(i))) / BigRational::from(nb.clone()));
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let nz = BigRational::from(BigInt::from(terms.len() as u64)) * z;
    let two = BigRational::from(BigInt::from(2));
    let mut acc = BigRational::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        let mut count = 0u64;
        for &nk in terms {
            let t = frac(&(BigRational::from(BigInt::from(nk)) * &mid - &a0));
            if t <= *z {
                count += 1;
            }
        }
        let dev = BigRational::from(BigInt::from(count)) - &nz;
        acc += &dev * &dev * (&w[1] - &w[0]);
    }
    Ok(acc)
}

/// A verified inequality: `lhs <= rhs` with the exact values kept.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

impl BoundCheck {
    fn new(lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs <= rhs;
        BoundCheck { lhs, rhs, holds }
    }
}

/// Float analogue of [`BoundCheck`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheckF64 {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `|sum_k f(x_k)| / N <= Var f * D_N^*` for zero-mean `f`, all exact.
pub fn koksma_check(f: &BVFunctionSpec, ps: &ExactPoints) -> Result<BoundCheck> {
    let mut sum = BigRational::zero();
    for p in ps.points() {
        sum += f.eval_rational(p)?;
    }
    let n = BigRational::from(BigInt::from(ps.len() as u64));
    let lhs = (sum / n).abs();
    let rhs = f.variation() * star_discrepancy_exact(ps).value;
    Ok(BoundCheck::new(lhs, rhs))
}

/// Float path of [`koksma_check`] for functions without exact evaluation.
/// For trig polynomials the variation factor is an upper bound, so the
/// inequality is still valid.
pub fn koksma_check_f64(f: &BVFunctionSpec, points: &[f64]) -> Result<BoundCheckF64> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut sum = 0.0f64;
    for &p in points {
        sum += f.eval_f64(p);
    }
    let lhs = fmath::fabs(sum) / points.len() as f64;
    let rhs =
        f.variation().to_f64().unwrap_or(f64::NAN) * star_discrepancy_f64(points);
    Ok(BoundCheckF64 {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// Sharpened bound for `f` symmetric around 1/2:
/// `|sum_k f(x_k)| / N <= (Var f / 2) * D_N` with the extremal discrepancy.
pub fn symmetric_koksma_check(f: &BVFunctionSpec, ps: &ExactPoints) -> Result<BoundCheck> {
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut sum = BigRational::zero();
    for p in ps.points() {
        sum += f.eval_rational(p)?;
    }
    let n = BigRational::from(BigInt::from(ps.len() as u64));
    let lhs = (sum / n).abs();
    let two = BigRational::from(BigInt::from(2));
    let rhs = f.variation() / two * extremal_discrepancy_exact(ps).value;
    Ok(BoundCheck::new(lhs, rhs))
}

/// Float path of [`symmetric_koksma_check`].
pub fn symmetric_koksma_check_f64(
    f: &BVFunctionSpec,
    points: &[f64],
) -> Result<BoundCheckF64> {
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut sum = 0.0f64;
    for &p in points {
        sum += f.eval_f64(p);
    }
    let lhs = fmath::fabs(sum) / points.len() as f64;
    let rhs = 0.5
        * f.variation().to_f64().unwrap_or(f64::NAN)
        * extremal_discrepancy_f64(points);
    Ok(BoundCheckF64 {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// Fold each point to `min(x, 1-x)`, the distance to the nearer endpoint.
pub fn fold_points(ps: &ExactPoints) -> ExactPoints {
    let one = BigRational::one();
    let folded = ps
        .points()
        .iter()
        .map(|x| core::cmp::min(x.clone(), &one - x))
        .collect();
    ExactPoints::new(folded).expect("folded points stay in [0,1]")
}

/// The folding step behind the symmetric bound:
/// `D^*(2 min(x_k, 1-x_k)) <= D_N(x_k)`. The anchored interval `[0,t]` for the
/// doubled folded points pulls back to the complement of `(t/2, 1-t/2)`, a
/// single interval, so its deviation is dominated by the extremal discrepancy.
pub fn fold_chain_check(ps: &ExactPoints) -> BoundCheck {
    let two = BigRational::from(BigInt::from(2));
    let doubled = fold_points(ps)
        .points()
        .iter()
        .map(|x| x * &two)
        .collect();
    let folded = ExactPoints::new(doubled).expect("doubled folds stay in [0,1]");
    BoundCheck::new(
        star_discrepancy_exact(&folded).value,
        extremal_discrepancy_exact(ps).value,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigma::TrigTerm;
    use alloc::vec;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn bigs(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&t| BigInt::from(t)).collect()
    }

    fn pts(v: &[(i64, i64)]) -> ExactPoints {
        ExactPoints::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn kernel_integral_is_z_squared() {
        for (p, q) in [(1i64, 5i64), (1, 3), (1, 2), (3, 4), (9, 10)] {
            let z = rat(p, q);
            assert_eq!(pair_kernel_integral(&z).unwrap(), &z * &z, "z={p}/{q}");
        }
    }

    #[test]
    fn double_integral_matches_variance_formula() {
        for terms in [vec![1u64, 2], vec![1, 2, 3], vec![2, 5, 7, 11]] {
            for (p, q) in [(1i64, 5i64), (1, 3), (1, 2), (3, 4)] {
                let z = rat(p, q);
                let n = rat(terms.len() as i64, 1);
                let want = &z * (BigRational::one() - &z) * &n;
                assert_eq!(theorem4_exact(&bigs(&terms), &z).unwrap(), want);
            }
        }
    }

    #[test]
    fn pointwise_integral_examples() {
        // N = 1: int (I - z)^2 = z(1-z) at any arc position
        let z = rat(2, 7);
        let got = theorem4_pointwise(&[3], &z, &rat(1, 5)).unwrap();
        assert_eq!(got, &z * rat(5, 7));
        // the double integral averages the pointwise one, but pointwise the
        // value can differ: {1,2}, z = 1/3, a = 0 gives 5/9 != 4/9
        let z3 = rat(1, 3);
        assert_eq!(
            theorem4_pointwise(&[1, 2], &z3, &rat(0, 1)).unwrap(),
            rat(5, 9)
        );
        // while z = 1/2, a = 0 happens to match z(1-z)N = 1/2 exactly
        assert_eq!(
            theorem4_pointwise(&[1, 2], &rat(1, 2), &rat(0, 1)).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn pointwise_guards() {
        assert!(theorem4_pointwise(&[], &rat(1, 2), &rat(0, 1)).is_err());
        assert!(theorem4_pointwise(&[1, 5000], &rat(1, 2), &rat(0, 1)).is_err());
        assert!(theorem4_pointwise(&[1], &rat(0, 1), &rat(0, 1)).is_err());
        assert!(theorem4_exact(&bigs(&[2, 2]), &rat(1, 2)).is_err());
    }

    #[test]
    fn koksma_on_midpoints() {
        // midpoint set has |sum I_[0,1/2] - N/2| = 0
        let f = BVFunctionSpec::indicator(rat(0, 1), rat(1, 2)).unwrap();
        let v: Vec<(i64, i64)> = (1..=10).map(|k| (2 * k - 1, 20)).collect();
        let c = koksma_check(&f, &pts(&v)).unwrap();
        assert!(c.lhs.is_zero());
        assert_eq!(c.rhs, rat(1, 10)); // 2 * 1/20
        assert!(c.holds);
    }

    #[test]
    fn koksma_clustered_points() {
        let f = BVFunctionSpec::indicator(rat(0, 1), rat(1, 3)).unwrap();
        let ps = pts(&[(1, 10), (1, 9), (1, 8), (1, 7)]);
        let c = koksma_check(&f, &ps).unwrap();
        assert_eq!(c.lhs, rat(2, 3));
        assert!(c.holds);
    }

    #[test]
    fn symmetric_koksma_rejects_asymmetric() {
        let f = BVFunctionSpec::indicator(rat(0, 1), rat(1, 2)).unwrap();
        assert_eq!(
            symmetric_koksma_check(&f, &pts(&[(1, 2)])),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn symmetric_koksma_accepts_centered_arc() {
        let f = BVFunctionSpec::indicator(rat(1, 4), rat(3, 4)).unwrap();
        let ps = pts(&[(1, 10), (1, 5), (9, 10), (1, 2)]);
        let c = symmetric_koksma_check(&f, &ps).unwrap();
        assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
        // sharper than the generic bound on this set
        let generic = koksma_check(&f, &ps).unwrap();
        assert!(c.rhs <= generic.rhs);
    }

    #[test]
    fn symmetric_koksma_f64_cosine() {
        let f = BVFunctionSpec::trig_poly(vec![TrigTerm {
            freq: 1,
            cos_coeff: rat(1, 1),
            sin_coeff: rat(0, 1),
        }])
        .unwrap();
        let points: Vec<f64> = (0..50).map(|i| ((i * 17 + 3) % 50) as f64 / 50.0).collect();
        let c = symmetric_koksma_check_f64(&f, &points).unwrap();
        assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
    }

    #[test]
    fn fold_chain_examples() {
        let ps = pts(&[(1, 10), (1, 5), (9, 10), (1, 2), (3, 7), (6, 7)]);
        let c = fold_chain_check(&ps);
        assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
        let folded = fold_points(&ps);
        let half = rat(1, 2);
        assert!(folded.points().iter().all(|p| *p <= half));
    }

    #[test]
    fn checkpoint_ladders() {
        assert_eq!(
            checkpoint_ladder(4, 40).unwrap(),
            vec![4, 8, 16, 32, 40]
        );
        assert_eq!(checkpoint_ladder(8, 8).unwrap(), vec![8]);
        assert!(checkpoint_ladder(2, 10).is_err());
        assert!(checkpoint_ladder(16, 8).is_err());
    }

    #[test]
    fn frac_parts_match_exact_path() {
        let x = UnitRational::new(BigInt::from(5), BigInt::from(1_000_003)).unwrap();
        let s = SequenceFamily::Theorem1;
        let fast = frac_parts_f64(&s, &x, 12).unwrap();
        for (i, v) in fast.iter().enumerate() {
            let exact = s.frac_part(i as u64 + 1, &x).unwrap().to_f64();
            assert!((v - exact).abs() < 1e-12, "k={}", i + 1);
        }
    }

    #[test]
    fn trajectory_smoke() {
        let x = UnitRational::new(BigInt::from(41), BigInt::from(1_000_003)).unwrap();
        let s = SequenceFamily::Theorem1;
        let cps = checkpoint_ladder(64, 512).unwrap();
        let t = simulate_trajectory(&s, &x, StatKind::StarDisc, None, &cps).unwrap();
        assert_eq!(t.points.len(), cps.len());
        assert!(t.runmax > 0.0 && t.runmax.is_finite());
        for p in &t.points {
            assert!(p.stat > 0.0 && p.stat <= 1.0);
        }
        // function-sum mode needs a function, discrepancy modes reject one
        assert!(simulate_trajectory(&s, &x, StatKind::FunctionSum, None, &cps).is_err());
    }

    #[test]
    fn trajectory_function_sum() {
        let f = BVFunctionSpec::indicator(rat(0, 1), rat(1, 2)).unwrap();
        let x = UnitRational::new(BigInt::from(41), BigInt::from(1_000_003)).unwrap();
        let s = SequenceFamily::geometric(2).unwrap();
        let cps = vec![16, 64, 256];
        let t =
            simulate_trajectory(&s, &x, StatKind::FunctionSum, Some(&f), &cps).unwrap();
        assert_eq!(t.points.len(), 3);
        assert!(t.points.iter().all(|p| p.stat.abs() <= 0.5 + 1e-12));
    }
}
