//! The LIL limit variance `sigma_f^2(x)` and the `Lambda*` functional.
//!
//! Two evaluation routes exist for the base-3 sequence of the `Lambda*`
//! construction: the truncated double Fourier series (generic, works for any
//! gamma table) and the exact convolution closed form
//! `a(1-a) + (1-a){3a}/3 - overlap/3`, where `overlap` is a circular-arc
//! intersection length. The closed form stays rational end-to-end, so the
//! supremum over `a` can be taken exactly by enumerating the analytic
//! breakpoints of the piecewise-quadratic structure.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diophantine::GammaTable;
use crate::fmath::{self, PI, TAU};
use crate::rational::frac;
use crate::{Error, Result};

/// One `a_j cos 2 pi j x + b_j sin 2 pi j x` term.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    pub freq: u32,
    pub cos_coeff: BigRational,
    pub sin_coeff: BigRational,
}

/// A 1-periodic zero-mean step function given by breakpoints `t_0 = 0 < t_1 <
/// ... < t_m < 1` and the value taken on each `[t_i, t_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<BigRational>,
    values: Vec<BigRational>,
}

impl StepFunction {
    /// Build from breakpoints and raw values; the mean is subtracted so the
    /// result integrates to zero.
    pub fn new(breakpoints: Vec<BigRational>, values: Vec<BigRational>) -> Result<Self> {
        if breakpoints.len() != values.len() || breakpoints.is_empty() {
            return Err(Error::InvalidParameter("breakpoints/values length mismatch"));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::InvalidParameter("first breakpoint must be 0"));
        }
        let one = BigRational::one();
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) || breakpoints.last().expect("non-empty") >= &one
        {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing in [0,1)",
            ));
        }
        let mut mean = BigRational::zero();
        for i in 0..values.len() {
            mean += &values[i] * Self::piece_len(&breakpoints, i);
        }
        let values = values.into_iter().map(|v| v - &mean).collect();
        Ok(StepFunction {
            breakpoints,
            values,
        })
    }

    fn piece_len(breakpoints: &[BigRational], i: usize) -> BigRational {
        let hi = breakpoints
            .get(i + 1)
            .cloned()
            .unwrap_or_else(BigRational::one);
        &hi - &breakpoints[i]
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Value at `{x}` (right-continuous pieces).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let t = frac(x);
        let idx = self.breakpoints.partition_point(|b| *b <= t);
        self.values[idx - 1].clone()
    }

    /// Total variation over one period, including the wrap-around jump.
    pub fn variation(&self) -> BigRational {
        let m = self.values.len();
        let mut v = BigRational::zero();
        for i in 1..m {
            v += (&self.values[i] - &self.values[i - 1]).abs();
        }
        v += (&self.values[0] - &self.values[m - 1]).abs();
        v
    }

    pub fn l2_norm_sq(&self) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..self.values.len() {
            s += &self.values[i] * &self.values[i] * Self::piece_len(&self.breakpoints, i);
        }
        s
    }

    /// Cosine/sine coefficient pair at frequency `j`.
    pub fn fourier_f64(&self, j: u32) -> (f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..self.values.len() {
            let lo = self.breakpoints[i].to_f64().unwrap_or(f64::NAN);
            let hi = self
                .breakpoints
                .get(i + 1)
                .map(|h| h.to_f64().unwrap_or(f64::NAN))
                .unwrap_or(1.0);
            let v = self.values[i].to_f64().unwrap_or(f64::NAN);
            let (aj, bj) = plain_indicator_fourier(lo, hi, j);
            a += v * aj;
            b += v * bj;
        }
        (a, b)
    }

    /// Exact check of `f(t) = f(1-t)` away from breakpoints.
    pub fn is_symmetric(&self) -> bool {
        let one = BigRational::one();
        let mut cuts: Vec<BigRational> = self.breakpoints.clone();
        for b in &self.breakpoints {
            let m = frac(&(&one - b));
            cuts.push(m);
        }
        cuts.push(one.clone());
        cuts.sort();
        cuts.dedup();
        let two = BigRational::from(BigInt::from(2));
        for w in cuts.windows(2) {
            let mid = (&w[0] + &w[1]) / &two;
            let mirrored = frac(&(&one - &mid));
            if self.eval(&mid) != self.eval(&mirrored) {
                return false;
            }
        }
        true
    }
}

/// A 1-periodic, zero-mean function of bounded variation.
#[derive(Debug, Clone, PartialEq)]
pub enum BVFunctionSpec {
    /// Finite trigonometric polynomial (no constant term, so zero mean).
    TrigPoly(Vec<TrigTerm>),
    /// Centered periodized indicator of the arc `[a,b]`, `0 <= b-a < 1`.
    CenteredIndicator { a: BigRational, b: BigRational },
    /// Centered step function with a finite jump list.
    CenteredStep(StepFunction),
}

impl BVFunctionSpec {
    pub fn indicator(a: BigRational, b: BigRational) -> Result<Self> {
        let len = &b - &a;
        if len.is_negative() || len >= BigRational::one() {
            return Err(Error::InvalidParameter("need 0 <= b-a < 1"));
        }
        Ok(BVFunctionSpec::CenteredIndicator { a, b })
    }

    pub fn trig_poly(terms: Vec<TrigTerm>) -> Result<Self> {
        if terms.iter().any(|t| t.freq == 0) {
            return Err(Error::InvalidParameter("frequencies start at 1"));
        }
        let mut freqs: Vec<u32> = terms.iter().map(|t| t.freq).collect();
        freqs.sort_unstable();
        freqs.dedup();
        if freqs.len() != terms.len() {
            return Err(Error::InvalidParameter("duplicate frequency"));
        }
        Ok(BVFunctionSpec::TrigPoly(terms))
    }

    /// Total variation. Exact for indicators and step functions; for trig
    /// polynomials this is the bound `sum_j 4 j (|a_j| + |b_j|)` (exact for a
    /// single pure cosine or sine term).
    pub fn variation(&self) -> BigRational {
        match self {
            BVFunctionSpec::TrigPoly(terms) => {
                let mut v = BigRational::zero();
                for t in terms {
                    let amp = t.cos_coeff.abs() + t.sin_coeff.abs();
                    v += BigRational::from(BigInt::from(4 * t.freq as u64)) * amp;
                }
                v
            }
            BVFunctionSpec::CenteredIndicator { .. } => {
                BigRational::from(BigInt::from(2))
            }
            BVFunctionSpec::CenteredStep(s) => s.variation(),
        }
    }

    /// `||f||^2` over one period, exact.
    pub fn l2_norm_sq(&self) -> BigRational {
        match self {
            BVFunctionSpec::TrigPoly(terms) => {
                let mut s = BigRational::zero();
                for t in terms {
                    s += (&t.cos_coeff * &t.cos_coeff + &t.sin_coeff * &t.sin_coeff)
                        / BigRational::from(BigInt::from(2));
                }
                s
            }
            BVFunctionSpec::CenteredIndicator { a, b } => {
                let len = b - a;
                &len * (BigRational::one() - &len)
            }
            BVFunctionSpec::CenteredStep(s) => s.l2_norm_sq(),
        }
    }

    /// Exact evaluation; trig polynomials have no exact path.
    pub fn eval_rational(&self, x: &BigRational) -> Result<BigRational> {
        match self {
            BVFunctionSpec::TrigPoly(_) => Err(Error::NotExactlyEvaluable),
            BVFunctionSpec::CenteredIndicator { a, b } => {
                let len = b - a;
                let t = frac(&(x - a));
                Ok(if t <= len {
                    BigRational::one() - len
                } else {
                    -len
                })
            }
            BVFunctionSpec::CenteredStep(s) => Ok(s.eval(x)),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            BVFunctionSpec::TrigPoly(terms) => {
                let mut s = 0.0;
                for t in terms {
                    let w = TAU * t.freq as f64 * x;
                    s += t.cos_coeff.to_f64().unwrap_or(f64::NAN) * fmath::cos(w)
                        + t.sin_coeff.to_f64().unwrap_or(f64::NAN) * fmath::sin(w);
                }
                s
            }
            _ => {
                // rational pieces evaluated through the f64 image of x
                let xf = x - fmath::floor(x);
                match self {
                    BVFunctionSpec::CenteredIndicator { a, b } => {
                        let af = a.to_f64().unwrap_or(f64::NAN);
                        let len = (b - a).to_f64().unwrap_or(f64::NAN);
                        let mut t = xf - af;
                        t -= fmath::floor(t);
                        if t <= len {
                            1.0 - len
                        } else {
                            -len
                        }
                    }
                    BVFunctionSpec::CenteredStep(s) => {
                        let mut idx = 0;
                        for (i, b) in s.breakpoints.iter().enumerate() {
                            if b.to_f64().unwrap_or(f64::NAN) <= xf {
                                idx = i;
                            } else {
                                break;
                            }
                        }
                        s.values[idx].to_f64().unwrap_or(f64::NAN)
                    }
                    BVFunctionSpec::TrigPoly(_) => unreachable!(),
                }
            }
        }
    }

    /// Fourier coefficient pair `(a_j, b_j)` at frequency `j >= 1`.
    pub fn fourier_f64(&self, j: u32) -> (f64, f64) {
        match self {
            BVFunctionSpec::TrigPoly(terms) => terms
                .iter()
                .find(|t| t.freq == j)
                .map(|t| {
                    (
                        t.cos_coeff.to_f64().unwrap_or(f64::NAN),
                        t.sin_coeff.to_f64().unwrap_or(f64::NAN),
                    )
                })
                .unwrap_or((0.0, 0.0)),
            BVFunctionSpec::CenteredIndicator { a, b } => plain_indicator_fourier(
                a.to_f64().unwrap_or(f64::NAN),
                b.to_f64().unwrap_or(f64::NAN),
                j,
            ),
            BVFunctionSpec::CenteredStep(s) => s.fourier_f64(j),
        }
    }

    /// Structural symmetry around 1/2: `f(1/2 - y) = f(1/2 + y)`.
    pub fn is_symmetric(&self) -> bool {
        match self {
            // f(1/2+y) - f(1/2-y) = sum 2 (-1)^j b_j sin 2 pi j y
            BVFunctionSpec::TrigPoly(terms) => {
                terms.iter().all(|t| t.sin_coeff.is_zero())
            }
            BVFunctionSpec::CenteredIndicator { a, b } => a + b == BigRational::one(),
            BVFunctionSpec::CenteredStep(s) => s.is_symmetric(),
        }
    }
}

/// Coefficients of the plain (uncentered) indicator of `[a,b]` at `j >= 1`:
/// `a_j = (sin 2 pi j b - sin 2 pi j a) / (pi j)`,
/// `b_j = (cos 2 pi j a - cos 2 pi j b) / (pi j)`.
pub fn plain_indicator_fourier(a: f64, b: f64, j: u32) -> (f64, f64) {
    let jf = j as f64;
    let wa = TAU * jf * a;
    let wb = TAU * jf * b;
    (
        (fmath::sin(wb) - fmath::sin(wa)) / (PI * jf),
        (fmath::cos(wa) - fmath::cos(wb)) / (PI * jf),
    )
}

/// Coefficients of the centered indicator `I_[a,b]` (same as the plain ones
/// for `j >= 1`; centering only shifts the mean).
pub fn indicator_fourier(a: f64, b: f64, j: u32) -> (f64, f64) {
    plain_indicator_fourier(a, b, j)
}

/// Which route produced a [`SigmaValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaPath {
    Series { j_max: u32, nu_max: i64 },
    ClosedFormTheorem1,
}

/// `sigma_f^2(x)` with a rigorous truncation-error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaValue {
    pub value: f64,
    pub tail_bound: f64,
    pub path: SigmaPath,
    /// True when gamma entries beyond `j_max`/`nu_max` were skipped.
    pub truncated: bool,
}

/// Conservative tail bound for the truncated series: each dropped term obeys
/// `|a_j|, |b_j| <= Var f / (pi j)` and the gamma rows beyond `j_max` pair a
/// frequency `j` with `3j`-type partners, giving
/// `sum_{j > j_max/3} 2 (Var f)^2 / (3 pi^2 j^2) <= 2 (Var f)^2 / (3 pi^2 M)`.
fn series_tail_bound(variation: f64, j_max: u32) -> f64 {
    let m = (j_max / 3).max(1) as f64;
    2.0 * variation * variation / (3.0 * PI * PI * m)
}

/// Truncated evaluation of the double series
/// `||f||^2 + sum_nu sum_{j1,j2} (gamma/2) [(a1 a2 + b1 b2) cos 2 pi nu x +
/// (b1 a2 - a1 b2) sin 2 pi nu x]`.
pub fn sigma_sq_series(
    f: &BVFunctionSpec,
    gamma: &GammaTable,
    x: f64,
    j_max: u32,
    nu_max: Option<i64>,
) -> SigmaValue {
    let nu_cap = nu_max.unwrap_or(i64::MAX);
    let mut coeffs: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    let mut value = f.l2_norm_sq().to_f64().unwrap_or(f64::NAN);
    let mut truncated = false;
    for (&(j1, j2, nu), g) in gamma.iter() {
        if j1 > j_max || j2 > j_max || nu.abs() > nu_cap {
            truncated = true;
            continue;
        }
        let (a1, b1) = *coeffs
            .entry(j1)
            .or_insert_with(|| f.fourier_f64(j1));
        let (a2, b2) = *coeffs
            .entry(j2)
            .or_insert_with(|| f.fourier_f64(j2));
        let g = g.to_f64().unwrap_or(f64::NAN);
        let w = TAU * nu as f64 * x;
        value += 0.5
            * g
            * ((a1 * a2 + b1 * b2) * fmath::cos(w) + (b1 * a2 - a1 * b2) * fmath::sin(w));
    }
    SigmaValue {
        value,
        tail_bound: series_tail_bound(
            f.variation().to_f64().unwrap_or(f64::NAN),
            j_max,
        ),
        path: SigmaPath::Series {
            j_max,
            nu_max: nu_cap,
        },
        truncated,
    }
}

/// Series value of `sigma^2_[a,b](x)` computed straight from arc
/// coefficients; fast path used by the numeric maximizers and quadratures.
pub fn sigma_sq_arc_series(
    gamma: &GammaTable,
    a: f64,
    b: f64,
    x: f64,
    j_max: u32,
) -> f64 {
    let len = b - a;
    let mut value = len * (1.0 - len);
    let mut coeffs: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    for (&(j1, j2, nu), g) in gamma.iter() {
        if j1 > j_max || j2 > j_max {
            continue;
        }
        let (a1, b1) = *coeffs
            .entry(j1)
            .or_insert_with(|| plain_indicator_fourier(a, b, j1));
        let (a2, b2) = *coeffs
            .entry(j2)
            .or_insert_with(|| plain_indicator_fourier(a, b, j2));
        let g = g.to_f64().unwrap_or(f64::NAN);
        let w = TAU * nu as f64 * x;
        value += 0.5
            * g
            * ((a1 * a2 + b1 * b2) * fmath::cos(w) + (b1 * a2 - a1 * b2) * fmath::sin(w));
    }
    value
}

fn check_unit(v: &BigRational, what: &'static str) -> Result<()> {
    if v.is_negative() || v > &BigRational::one() {
        return Err(Error::InvalidParameter(what));
    }
    Ok(())
}

/// Exact closed form of `sigma^2_[0,a](x)` for the base-3 sequence:
/// `a(1-a) + (1-a){3a}/3 - overlap/3` with `overlap` the length of the
/// intersection of `[0, 1-a]` with the circular arc `[x - {3a}, x]`.
pub fn sigma_sq_closed_form_theorem1(a: &BigRational, x: &BigRational) -> Result<BigRational> {
    check_unit(a, "a must lie in [0,1]")?;
    check_unit(x, "x must lie in [0,1]")?;
    let three = BigRational::from(BigInt::from(3));
    let s = frac(&(&three * a));
    let seg = BigRational::one() - a;
    let arc_start = frac(&(x - &s));
    let overlap = if &arc_start + &s <= BigRational::one() {
        // arc does not wrap: [u, u+s] vs [0, seg]
        let hi = core::cmp::min(&arc_start + &s, seg.clone());
        let lo = arc_start;
        if hi > lo {
            hi - lo
        } else {
            BigRational::zero()
        }
    } else {
        // wraps: [u,1] and [0, u+s-1] vs [0, seg]
        let first = if seg > arc_start {
            &seg - &arc_start
        } else {
            BigRational::zero()
        };
        let second = core::cmp::min(&arc_start + &s - BigRational::one(), seg.clone());
        first + second
    };
    Ok(a * &seg + &seg * &s / &three - overlap / three)
}

/// The piecewise formula for `Lambda*(x)^2` of the base-3 construction,
/// returned as an exact rational radicand.
pub fn lambda_star_theorem1_closed(x: &BigRational) -> Result<BigRational> {
    check_unit(x, "x must lie in [0,1]")?;
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let x = if x > &half {
        BigRational::one() - x
    } else {
        x.clone()
    };
    let num = |n: i64| BigRational::from(BigInt::from(n));
    let r = if x <= BigRational::new(BigInt::from(1), BigInt::from(6)) {
        (num(-3) * &x * &x - &x + num(2)) / num(6)
    } else if x <= BigRational::new(BigInt::from(3), BigInt::from(8)) {
        (num(-24) * &x + num(25)) / num(72)
    } else {
        BigRational::new(BigInt::from(2), BigInt::from(9))
    };
    Ok(r)
}

pub fn lambda_star_theorem1_closed_f64(x: &BigRational) -> Result<f64> {
    Ok(fmath::sqrt(
        lambda_star_theorem1_closed(x)?.to_f64().unwrap_or(f64::NAN),
    ))
}

/// Exact supremum of the closed-form `sigma^2_[0,a](x)` over `a in [0,1]`.
///
/// The map `a -> sigma^2` is piecewise quadratic; its breakpoints are the
/// rational solutions of the linear case-change conditions of the overlap
/// computation. On each piece a quadratic through three interior samples is
/// the piece itself, so its vertex is an exact interior candidate. Returns
/// `(max sigma^2, witness a)`.
pub fn lambda_star_theorem1_sup(x: &BigRational) -> Result<(BigRational, BigRational)> {
    check_unit(x, "x must lie in [0,1]")?;
    let num = |n: i64| BigRational::from(BigInt::from(n));
    let mut cands: Vec<BigRational> = Vec::new();
    for m in 0..=3i64 {
        cands.push(num(m) / num(3));
    }
    for m in -1..=3i64 {
        for c in -3..=3i64 {
            // arc start hits 0: x - 3a + m + c = 0
            cands.push((x + num(m + c)) / num(3));
            // arc start hits the segment end: x - 3a + m + c = 1 - a
            cands.push((x + num(m + c - 1)) / num(2));
            // arc end hits the segment end: x + c = 1 - a
            cands.push(num(1 - c) - x);
        }
    }
    let one = BigRational::one();
    cands.retain(|a| !a.is_negative() && *a <= one);
    cands.sort();
    cands.dedup();

    let mut all: Vec<BigRational> = cands.clone();
    let four = num(4);
    let two = num(2);
    for w in cands.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let h = hi - lo;
        if h.is_zero() {
            continue;
        }
        let p0 = lo + &h / &four;
        let p1 = lo + &h / &two;
        let p2 = lo + &h * num(3) / &four;
        let y0 = sigma_sq_closed_form_theorem1(&p0, x)?;
        let y1 = sigma_sq_closed_form_theorem1(&p1, x)?;
        let y2 = sigma_sq_closed_form_theorem1(&p2, x)?;
        let curv = &y0 - &two * &y1 + &y2;
        if !curv.is_zero() {
            // vertex of the quadratic through three equally spaced samples
            let v = &p1 - (&h / &four) * (&y2 - &y0) / (&two * &curv);
            if &v > lo && &v < hi {
                all.push(v);
            }
        }
        all.push(p0);
        all.push(p1);
        all.push(p2);
    }

    let mut best = BigRational::zero();
    let mut witness = BigRational::zero();
    for a in all {
        let s = sigma_sq_closed_form_theorem1(&a, x)?;
        if s > best {
            best = s;
            witness = a;
        }
    }
    Ok((best, witness))
}

/// Grid + golden-section supremum of `sigma_[0,a](x)` over `a` for a generic
/// gamma table. Returns `(Lambda*, witness a)` with values reported as
/// `sigma`, not `sigma^2`.
pub fn lambda_star_numeric(
    gamma: &GammaTable,
    x: f64,
    resolution: usize,
    refine_iters: usize,
    j_max: u32,
) -> Result<(f64, f64)> {
    if resolution < 64 {
        return Err(Error::InvalidParameter("resolution must be >= 64"));
    }
    let eval = |a: f64| sigma_sq_arc_series(gamma, 0.0, a, x, j_max);
    let n = resolution;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&a| eval(a)).collect();
    let mut best = f64::NEG_INFINITY;
    let mut witness = 0.0;
    for i in 0..=n {
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = if i < n { vals[i + 1] } else { f64::NEG_INFINITY };
        if vals[i] >= left && vals[i] >= right {
            // local maximum cell; refine
            let lo = if i > 0 { grid[i - 1] } else { grid[i] };
            let hi = if i < n { grid[i + 1] } else { grid[i] };
            let (v, a) = golden_max(&eval, lo, hi, refine_iters);
            if v > best {
                best = v;
                witness = a;
            }
        }
    }
    Ok((fmath::sqrt(best.max(0.0)), witness))
}

/// Golden-section search for a maximum on `[lo, hi]`.
fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    (f(mid), mid)
}

/// 2-D supremum of `sigma_[a,b](x)` over all arcs, via a coarse grid over
/// `(a, b-a)` followed by box-shrinking refinement. Returns
/// `(Lambda, witness (a,b))`.
pub fn lambda_extremal_numeric(
    gamma: &GammaTable,
    x: f64,
    grid: usize,
    j_max: u32,
) -> Result<(f64, (f64, f64))> {
    if grid < 16 {
        return Err(Error::InvalidParameter("grid must be >= 16"));
    }
    let coarse_j = j_max.min(999);
    let eval = |a: f64, len: f64, jm: u32| sigma_sq_arc_series(gamma, a, a + len, x, jm);

    let mut best = f64::NEG_INFINITY;
    let mut at = (0.0, 0.5);
    for i in 0..grid {
        let a = i as f64 / grid as f64;
        for l in 1..grid {
            let len = l as f64 / grid as f64;
            let v = eval(a, len, coarse_j);
            if v > best {
                best = v;
                at = (a, len);
            }
        }
    }
    // shrink a box around the best coarse cell, final rounds at full depth
    let mut half_a = 1.0 / grid as f64;
    let mut half_l = 1.0 / grid as f64;
    let rounds = 6;
    for round in 0..rounds {
        let jm = if round >= rounds - 3 { j_max } else { coarse_j };
        let (ca, cl) = at;
        let m = 8;
        for i in 0..=m {
            let a = (ca - half_a + 2.0 * half_a * i as f64 / m as f64).clamp(0.0, 1.0);
            for l in 0..=m {
                let len =
                    (cl - half_l + 2.0 * half_l * l as f64 / m as f64).clamp(1e-9, 1.0 - 1e-9);
                let v = eval(a, len, jm);
                if v > best {
                    best = v;
                    at = (a, len);
                }
            }
        }
        half_a /= 3.0;
        half_l /= 3.0;
    }
    let (a, len) = at;
    Ok((fmath::sqrt(best.max(0.0)), (a, a + len)))
}

/// Midpoint-rule quadrature of `sigma^2_[a,a+1/2](x)` over `a in [0,1/2]`.
/// The identity predicts exactly 1/8 for any admissible gamma table.
pub fn theorem2_average_check(
    gamma: &GammaTable,
    x: f64,
    resolution: usize,
    j_max: u32,
) -> f64 {
    let step = 0.5 / resolution as f64;
    let mut acc = 0.0;
    for t in 0..resolution {
        let a = (t as f64 + 0.5) * step;
        acc += sigma_sq_arc_series(gamma, a, a + 0.5, x, j_max);
    }
    acc * step
}

/// Midpoint-rule quadrature of `x -> sigma^2_[0,1/2](x)` over `[0,1]`; the
/// first Theorem-2 bound predicts a value `>= 1/4`.
pub fn half_interval_sigma_sq_mean(gamma: &GammaTable, resolution: usize, j_max: u32) -> f64 {
    let step = 1.0 / resolution as f64;
    let mut acc = 0.0;
    for t in 0..resolution {
        let x = (t as f64 + 0.5) * step;
        acc += sigma_sq_arc_series(gamma, 0.0, 0.5, x, j_max);
    }
    acc * step
}

/// Outcome of the absolute-coefficient bound check.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaBoundOutcome {
    pub lhs: f64,
    pub rhs: BigRational,
    pub holds: bool,
}

/// `sum (gamma/2)(|a1 a2| + |b1 b2| + |b1 a2| + |a1 b2|) <= 2 (Var f)^2 q / (3(q-1))`.
pub fn gamma_bound_check(
    f: &BVFunctionSpec,
    gamma: &GammaTable,
    q: &BigRational,
) -> Result<GammaBoundOutcome> {
    if q <= &BigRational::one() {
        return Err(Error::InvalidParameter("growth factor q must exceed 1"));
    }
    let mut coeffs: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    let mut lhs = 0.0;
    for (&(j1, j2, _nu), g) in gamma.iter() {
        let (a1, b1) = *coeffs.entry(j1).or_insert_with(|| f.fourier_f64(j1));
        let (a2, b2) = *coeffs.entry(j2).or_insert_with(|| f.fourier_f64(j2));
        lhs += 0.5
            * g.to_f64().unwrap_or(f64::NAN)
            * ((a1 * a2).abs() + (b1 * b2).abs() + (b1 * a2).abs() + (a1 * b2).abs());
    }
    let var = f.variation();
    let rhs = BigRational::from(BigInt::from(2)) * &var * &var * q
        / (BigRational::from(BigInt::from(3)) * (q - BigRational::one()));
    let holds = lhs <= rhs.to_f64().unwrap_or(f64::NAN) + 1e-9;
    Ok(GammaBoundOutcome { lhs, rhs, holds })
}

/// Reference limsup values for `n_k = theta^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FukuyamaTheta {
    Integer(u64),
    /// `theta^r` irrational for all rational `r`.
    IrrationalPowers,
}

pub fn fukuyama_reference(theta: FukuyamaTheta) -> Result<f64> {
    match theta {
        FukuyamaTheta::IrrationalPowers => Ok(0.5),
        FukuyamaTheta::Integer(t) if t < 2 => {
            Err(Error::InvalidParameter("theta must be >= 2"))
        }
        FukuyamaTheta::Integer(2) => Ok(fmath::sqrt(42.0) / 9.0),
        FukuyamaTheta::Integer(t) if t % 2 == 0 => {
            let tf = t as f64;
            Ok(fmath::sqrt((tf + 1.0) * tf * (tf - 2.0))
                / (2.0 * fmath::sqrt((tf - 1.0) * (tf - 1.0) * (tf - 1.0))))
        }
        FukuyamaTheta::Integer(t) => {
            let tf = t as f64;
            Ok(fmath::sqrt(tf + 1.0) / (2.0 * fmath::sqrt(tf - 1.0)))
        }
    }
}

/// Exact check of `sigma_[0,a](x) = sigma_[0,1-a](1-x)` on the closed form.
pub fn symmetry_relation_check(a: &BigRational, x: &BigRational) -> Result<bool> {
    let lhs = sigma_sq_closed_form_theorem1(a, x)?;
    let rhs = sigma_sq_closed_form_theorem1(
        &(BigRational::one() - a),
        &(BigRational::one() - x),
    )?;
    Ok(lhs == rhs)
}
