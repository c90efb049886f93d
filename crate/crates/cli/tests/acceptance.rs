//! End-to-end acceptance suite: ten criteria covering the closed-form limsup
//! curve, the variance series, exact second-moment identities, solution-count
//! profiles, estimated-correlation limit laws, averaging identities,
//! variation bounds, discrepancy oracles, reference constants, and simulated
//! trajectories. Each test prints one `criterion N PASS` line.

use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use lacunary_core::diophantine::{count_solutions, estimate_gamma_table, GammaTable};
use lacunary_core::discrepancy::{
    brute_force_discrepancy, extremal_discrepancy_exact, star_discrepancy_exact,
    DiscrepancyKind, ExactPoints,
};
use lacunary_core::lil::{checkpoint_ladder, simulate_trajectory, theorem4_exact, StatKind};
use lacunary_core::rational::UnitRational;
use lacunary_core::sigma::{
    fukuyama_reference, gamma_bound_check, half_interval_sigma_sq_mean,
    lambda_extremal_numeric, lambda_star_theorem1_closed, lambda_star_theorem1_sup,
    sigma_sq_closed_form_theorem1, sigma_sq_series, theorem2_average_check, FukuyamaTheta,
    TrigTerm,
};
use lacunary_core::{BVFunctionSpec, SequenceFamily};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Criterion 1: on the 481-point grid the breakpoint-enumeration supremum of
/// the limiting variance equals the piecewise branch formula exactly, the
/// curve is exactly symmetric, and the two spot values come out right.
#[test]
fn criterion_01_limsup_curve_closed_form() {
    let t0 = Instant::now();
    for i in 0..=480i64 {
        let x = rat(i, 480);
        let (sup, _witness) = lambda_star_theorem1_sup(&x).expect("x in range");
        let branch = lambda_star_theorem1_closed(&x).expect("x in range");
        assert_eq!(sup, branch, "supremum != branch at x = {i}/480");
        let mirror = lambda_star_theorem1_closed(&(BigRational::one() - &x)).unwrap();
        assert_eq!(branch, mirror, "curve not symmetric at x = {i}/480");
        let diff =
            (sup.to_f64().unwrap().sqrt() - branch.to_f64().unwrap().sqrt()).abs();
        assert!(diff <= 1e-6);
    }
    assert_eq!(lambda_star_theorem1_closed(&rat(7, 24)).unwrap(), rat(1, 4));
    assert_eq!(lambda_star_theorem1_closed(&rat(1, 2)).unwrap(), rat(2, 9));
    assert!(t0.elapsed().as_secs() < 60, "curve sweep exceeded 60 s");
    println!("criterion 1 PASS: closed-form limsup curve verified on 481-point grid");
}

/// Criterion 2: the truncated variance series at J_max = 3*10^4 matches the
/// exact closed form within the certified tail bound, and within 1e-3, on a
/// 31 x 33 grid of arc lengths and points.
#[test]
fn criterion_02_variance_series_vs_closed_form() {
    let j_max = 30_000u32;
    let table = GammaTable::theorem1(j_max);
    for i in 1..32i64 {
        let a = rat(i, 32);
        let f = BVFunctionSpec::indicator(rat(0, 1), a.clone()).expect("arc");
        for j in 0..=32i64 {
            let x = rat(j, 32);
            let exact = sigma_sq_closed_form_theorem1(&a, &x).expect("in range");
            let sv = sigma_sq_series(&f, &table, x.to_f64().unwrap(), j_max, None);
            let diff = (sv.value - exact.to_f64().unwrap()).abs();
            assert!(
                diff <= sv.tail_bound,
                "series misses tail bound at a={i}/32, x={j}/32: {diff} > {}",
                sv.tail_bound
            );
            assert!(diff <= 1e-3, "series off by {diff} at a={i}/32, x={j}/32");
        }
    }
    println!("criterion 2 PASS: variance series matches closed form on 31x33 grid");
}

/// Criterion 3: the interval-count second moment integrates to z(1-z)N for
/// every subset of {1..12} with at most 4 elements and four arc lengths, and
/// a 10^6-sample Monte-Carlo estimate confirms three configurations.
#[test]
fn criterion_03_second_moment_identity() {
    let t0 = Instant::now();
    let zs = [rat(1, 5), rat(1, 3), rat(1, 2), rat(3, 4)];
    let mut subsets = 0u32;
    for mask in 1u32..(1 << 12) {
        if mask.count_ones() > 4 {
            continue;
        }
        subsets += 1;
        let terms: Vec<BigInt> = (0..12)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| BigInt::from(b + 1))
            .collect();
        let n = BigRational::from(BigInt::from(terms.len()));
        for z in &zs {
            let got = theorem4_exact(&terms, z).expect("valid input");
            let want = z * (BigRational::one() - z) * &n;
            assert_eq!(got, want, "mask {mask:b}, z = {z}");
        }
    }
    assert_eq!(subsets, 793);

    // independent sampling oracle
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    for (terms, z) in [
        (vec![1u64, 2], 1.0 / 3.0),
        (vec![3, 5, 7], 2.0 / 5.0),
        (vec![2, 3, 5, 7], 0.5),
    ] {
        let samples = 1_000_000u64;
        let mut acc = 0.0f64;
        for _ in 0..samples {
            let x: f64 = rng.gen();
            let a: f64 = rng.gen();
            let count = terms
                .iter()
                .filter(|&&nk| ((nk as f64 * x).fract() - a).rem_euclid(1.0) <= z)
                .count() as f64;
            let dev = count - terms.len() as f64 * z;
            acc += dev * dev;
        }
        let got = acc / samples as f64;
        let want = z * (1.0 - z) * terms.len() as f64;
        assert!(
            (got - want).abs() <= 3e-3,
            "MC estimate {got} vs {want} for {terms:?}, z = {z}"
        );
    }
    assert!(t0.elapsed().as_secs() < 120, "second-moment suite exceeded 120 s");
    println!("criterion 3 PASS: second moment is z(1-z)N on all 793 subsets + MC oracle");
}

/// Criterion 4: exhaustive solution-count profile of the base-3 sequence for
/// N <= 40, frequency indices <= 9, |shift| <= 100: the distinguished tuples
/// hit floor(N/2) exactly and every other count stays <= 2.
#[test]
fn criterion_04_solution_count_profile() {
    let seq = SequenceFamily::Theorem1;
    let terms = seq.terms(40).expect("exponent in range");
    for j1 in 1u64..=9 {
        for j2 in 1u64..=9 {
            for nu in -100i64..=100 {
                let mut by_max = [0u64; 41];
                let j1b = BigInt::from(j1);
                let j2b = BigInt::from(j2);
                for (k, nk) in terms.iter().enumerate() {
                    let target = &j1b * nk - BigInt::from(nu);
                    if target <= BigInt::zero() {
                        continue;
                    }
                    let (quot, rem) = target.div_rem(&j2b);
                    if !rem.is_zero() {
                        continue;
                    }
                    if let Ok(l) = terms.binary_search(&quot) {
                        if !(j1 == j2 && k == l) {
                            by_max[k.max(l) + 1] += 1;
                        }
                    }
                }
                let special = (j1 == 3 * j2 && nu == j2 as i64)
                    || (j2 == 3 * j1 && nu == -(j1 as i64));
                let mut count = 0u64;
                for n in 1usize..=40 {
                    count += by_max[n];
                    if special {
                        assert_eq!(
                            count,
                            n as u64 / 2,
                            "special tuple ({j1},{j2},{nu}) at N = {n}"
                        );
                    } else {
                        assert!(count <= 2, "tuple ({j1},{j2},{nu}) at N = {n}: {count}");
                    }
                }
            }
        }
    }
    assert_eq!(count_solutions(&seq, 3, 1, 1, 10).unwrap(), 5);
    assert_eq!(count_solutions(&seq, 1, 3, -1, 20).unwrap(), 10);
    println!("criterion 4 PASS: solution counts verified for N <= 40, j <= 9, |nu| <= 100");
}

/// Criterion 5: correlation coefficients estimated empirically from 2^k - 1
/// reproduce the non-Gaussian limit deviation sqrt(2)|cos pi x| for
/// cos 2 pi x + cos 4 pi x, while the telescoping combination
/// cos 2 pi x - cos 4 pi x for 2^k collapses to zero variance.
#[test]
fn criterion_05_estimated_correlations() {
    let trig = |c1: i64, c2: i64| {
        BVFunctionSpec::trig_poly(vec![
            TrigTerm {
                freq: 1,
                cos_coeff: rat(c1, 1),
                sin_coeff: rat(0, 1),
            },
            TrigTerm {
                freq: 2,
                cos_coeff: rat(c2, 1),
                sin_coeff: rat(0, 1),
            },
        ])
        .expect("trig")
    };

    let seq = SequenceFamily::powers_minus_one(2).unwrap();
    let table = estimate_gamma_table(&seq, 2, 2, 10_000, 0.1).expect("estimate");
    let f = trig(1, 1);
    for i in 0..=100 {
        let x = i as f64 / 100.0;
        let sv = sigma_sq_series(&f, &table, x, 10, None);
        let sigma = sv.value.max(0.0).sqrt();
        let want = std::f64::consts::SQRT_2 * (std::f64::consts::PI * x).cos().abs();
        assert!(
            (sigma - want).abs() <= 0.02,
            "x = {x}: sigma {sigma} vs sqrt(2)|cos pi x| = {want}"
        );
    }

    let mut tele = GammaTable::new(2);
    tele.insert(2, 1, 0, rat(1, 1)).expect("off-diagonal");
    let g = trig(1, -1);
    for i in 0..=20 {
        let sv = sigma_sq_series(&g, &tele, i as f64 / 20.0, 10, None);
        assert!(sv.value.abs() <= 1e-9, "telescoping variance {}", sv.value);
    }
    println!("criterion 5 PASS: estimated correlations reproduce both limit laws");
}

/// Criterion 6: the arc-average of the limiting variance is exactly 1/8 (to
/// quadrature accuracy 1e-4), the x-average over half-length arcs is at
/// least 1/4, and the two-endpoint extremal functional reaches 1/2.
#[test]
fn criterion_06_averaging_identity() {
    let j_max = 9000u32;
    let table = GammaTable::theorem1(j_max);
    for k in 0..10 {
        let x = (2 * k + 1) as f64 / 20.0;
        let avg = theorem2_average_check(&table, x, 256, j_max);
        assert!((avg - 0.125).abs() <= 1e-4, "x = {x}: average {avg}");
        let (ext, _witness) = lambda_extremal_numeric(&table, x, 24, j_max).unwrap();
        assert!(ext >= 0.499, "x = {x}: extremal value {ext}");
    }
    assert!(half_interval_sigma_sq_mean(&table, 256, j_max) >= 0.25 - 1e-6);
    println!("criterion 6 PASS: averaging identity and extremal lower bound verified");
}

/// Criterion 7: 10^4 random (point set, step function) trials for the plain
/// variation bound and 10^4 for the symmetric halved bound, all exact in
/// rational arithmetic with zero violations; runs through the binary so the
/// CLI path is exercised end to end.
#[test]
fn criterion_07_variation_bound_trials() {
    let out = Command::new(env!("CARGO_BIN_EXE_lacunary"))
        .args(["verify", "koksma", "--trials", "10000", "--seed", "0"])
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(
        out.status.success(),
        "koksma suite failed:\n{stdout}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout.contains("(10000 cases, 0 bad)"));
    assert!(stdout.contains("4/4 checks passed"));
    println!("criterion 7 PASS: 2 x 10^4 exact variation-bound trials, zero violations");
}

/// Criterion 8: the sorted-formula star and extremal discrepancies agree
/// exactly with the brute-force endpoint-enumeration oracle on 10^3 random
/// rational point sets.
#[test]
fn criterion_08_discrepancy_oracle_agreement() {
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    for trial in 0..1000 {
        let n = rng.gen_range(1..=50);
        let q = rng.gen_range(2i64..10_000);
        let pts: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(0..=q), q)).collect();
        let ps = ExactPoints::new(pts).expect("in range");
        let star = star_discrepancy_exact(&ps);
        let star_oracle = brute_force_discrepancy(&ps, DiscrepancyKind::Star).unwrap();
        assert_eq!(star.value, star_oracle.value, "star, trial {trial}");
        let ext = extremal_discrepancy_exact(&ps);
        let ext_oracle = brute_force_discrepancy(&ps, DiscrepancyKind::Extremal).unwrap();
        assert_eq!(ext.value, ext_oracle.value, "extremal, trial {trial}");
    }
    println!("criterion 8 PASS: closed formulas match the brute-force oracle on 10^3 sets");
}

/// Criterion 9: published reference constants for geometric sequences to six
/// decimals, and the absolute-coefficient bound with the exact constant
/// 64/15 for the half interval at growth ratio 8/3.
#[test]
fn criterion_09_reference_constants() {
    let cases = [
        (FukuyamaTheta::Integer(2), 0.720082),
        (FukuyamaTheta::Integer(3), 0.707107),
        (FukuyamaTheta::Integer(4), 0.608581),
        (FukuyamaTheta::Integer(5), 0.612372),
        // sqrt(7 * 6 * 4) / (2 * 5^(3/2))
        (FukuyamaTheta::Integer(6), 0.579655),
        (FukuyamaTheta::IrrationalPowers, 0.5),
    ];
    for (theta, want) in cases {
        let got = fukuyama_reference(theta).unwrap();
        assert!((got - want).abs() < 5e-7, "{theta:?}: {got} vs {want}");
    }
    let half = BVFunctionSpec::indicator(rat(0, 1), rat(1, 2)).expect("arc");
    let gb = gamma_bound_check(&half, &GammaTable::theorem1(300), &rat(8, 3)).unwrap();
    assert!(gb.holds);
    assert_eq!(gb.rhs, rat(64, 15));
    println!("criterion 9 PASS: reference constants and coefficient bound verified");
}

/// Criterion 10: 50 star-discrepancy trajectories of 2^k at random rationals
/// with a large prime denominator, run to N = 10^6 on a doubling checkpoint
/// ladder; every running maximum of the normalized statistic lands in the
/// window predicted by the limit theory.
#[test]
fn criterion_10_trajectory_window() {
    const DEN: u64 = 4_611_686_018_427_387_847;
    let seq = SequenceFamily::geometric(2).unwrap();
    let ladder = checkpoint_ladder(1024, 1_000_000).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let floor = 1.0 / (4.0 * std::f64::consts::SQRT_2) - 0.15;
    for trial in 0..50 {
        let p = rng.gen_range(1..DEN);
        let x = UnitRational::new(BigInt::from(p), BigInt::from(DEN)).unwrap();
        let traj =
            simulate_trajectory(&seq, &x, StatKind::StarDisc, None, &ladder).unwrap();
        assert!(
            traj.runmax >= 0.4 && traj.runmax <= 1.1,
            "trial {trial}: runmax {} outside [0.4, 1.1]",
            traj.runmax
        );
        assert!(traj.runmax >= floor);
    }
    println!("criterion 10 PASS: 50 trajectory maxima inside the predicted window");
}
