//! `lacunary` — exact experiments around the discrepancy of `({n_k x})` for
//! fast-growing integer sequences: term generation, exact discrepancy,
//! Diophantine correlation counting, limit-variance evaluation, the star
//! limsup curve, LIL trajectory simulation, and verification suites.

mod io;
mod manifest;
mod mc;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use lacunary_core::diophantine::{count_solutions, estimate_gamma_table};
use lacunary_core::discrepancy::{
    extremal_discrepancy_exact, star_discrepancy_exact, ExactPoints,
};
use lacunary_core::lil::{checkpoint_ladder, simulate_trajectory, StatKind};
use lacunary_core::rational::UnitRational;
use lacunary_core::sigma::{
    lambda_star_theorem1_closed_f64, lambda_star_theorem1_sup, sigma_sq_series,
};
use lacunary_core::SequenceFamily;

use io::{fmt17, rational_str};
use manifest::RunManifest;

/// Prime below 2^62 whose multiplicative orders of 2 and 3 both exceed 10^18,
/// so `{n_k x}` never becomes periodic within reachable trajectory lengths.
const LARGE_PRIME_DEN: u64 = 4_611_686_018_427_387_847;

#[derive(Parser)]
#[command(name = "lacunary", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// 3^(k^2) for odd k, 3^((k-1)^2+1) - 1 for even k
    Theorem1,
    /// base^k
    Geometric,
    /// base^k - 1
    PowersMinusOne,
}

#[derive(Args, Clone)]
struct FamilyOpts {
    /// Sequence family
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Base for the geometric / powers-minus-one families
    #[arg(long)]
    base: Option<u64>,
}

impl FamilyOpts {
    fn build(&self) -> Result<SequenceFamily> {
        match self.family {
            FamilyArg::Theorem1 => {
                if self.base.is_some() {
                    bail!("--base is not accepted for the theorem1 family");
                }
                Ok(SequenceFamily::Theorem1)
            }
            FamilyArg::Geometric => SequenceFamily::geometric(
                self.base.ok_or_else(|| anyhow!("--base required"))?,
            )
            .map_err(|e| anyhow!("{e}")),
            FamilyArg::PowersMinusOne => SequenceFamily::powers_minus_one(
                self.base.ok_or_else(|| anyhow!("--base required"))?,
            )
            .map_err(|e| anyhow!("{e}")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Star,
    Extremal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimKindArg {
    Star,
    Extremal,
    Sum,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print sequence terms, one decimal integer per line
    Terms {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        count: u64,
    },
    /// Exact fractional part {n_k x} for rational x
    Frac {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        k: u64,
        /// Point of [0,1) as P/Q or decimal
        #[arg(long)]
        x: String,
    },
    /// Star or extremal discrepancy of a point file
    Discrepancy {
        /// CSV file, one point per line (P/Q or decimal)
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
    /// Diophantine solution counting
    Dioph {
        #[command(subcommand)]
        cmd: DiophCmd,
    },
    /// Limit variance evaluation
    Sigma {
        #[command(subcommand)]
        cmd: SigmaCmd,
    },
    /// The star limsup curve of the base-3 construction
    LambdaStar {
        /// Emit the whole curve as CSV instead of a single value
        #[arg(long)]
        curve: bool,
        #[command(flatten)]
        family: FamilyOpts,
        /// Grid resolution: x = 0, 1/G, ..., 1
        #[arg(long, default_value_t = 480)]
        grid: u32,
        /// Single evaluation point (P/Q or decimal), exclusive with --curve
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// LIL trajectories at random rational x
    Simulate {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long, value_enum)]
        kind: SimKindArg,
        /// Function spec (required for --kind sum)
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        nmax: u64,
        #[arg(long, default_value_t = 10)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// First checkpoint of the doubling ladder
        #[arg(long, default_value_t = 1024)]
        start: u64,
        /// Denominator for random x (default: a large prime)
        #[arg(long, default_value_t = LARGE_PRIME_DEN)]
        den: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Identity and inequality verification suites
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum DiophCmd {
    /// Exact S(j1, j2, nu, N)
    Count {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        j1: u64,
        #[arg(long)]
        j2: u64,
        #[arg(long)]
        nu: i64,
        #[arg(long)]
        n: usize,
    },
    /// Estimate a gamma table from S/N ratios
    Gamma {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long)]
        dmax: u32,
        /// Comma-separated increasing N ladder, e.g. 100,1000,10000
        #[arg(long)]
        ladder: String,
        /// Half-width of the nu scan window (default: dmax)
        #[arg(long)]
        nu_window: Option<i64>,
        /// Drop estimates below this value
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SigmaCmd {
    /// sigma_f^2(x) for a function, gamma table, and point
    Eval {
        /// indicator:A,B | trig:J,A,B[;...] | step:T=V[;...]
        #[arg(long)]
        f: String,
        /// Gamma table JSON file
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 30_000)]
        jmax: u32,
        #[arg(long)]
        numax: Option<i64>,
    },
    /// sigma_f^2 sampled over an x grid, as CSV
    Curve {
        #[arg(long)]
        f: String,
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = 200)]
        grid: u32,
        #[arg(long, default_value_t = 30_000)]
        jmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Variance engine invariants (series vs closed form, curve, caps)
    SigmaSuite {
        #[arg(long, default_value_t = 3000)]
        jmax: u32,
    },
    /// Exact second-moment identity plus Monte-Carlo oracle
    Theorem4 {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        mc_samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized variation-bound suites (plain and symmetric)
    Koksma {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive solution-count profile of the base-3 sequence
    Lemma1,
    /// Arc-average identity and extremal lower bound
    Theorem2Average,
    /// Reference values, growth ratios, coefficient bounds
    Bounds,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match dispatch(cli, started) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Write `body` (with the manifest comment header) to `out`, or stdout.
fn emit(out: &Option<PathBuf>, m: &RunManifest, body: &str) -> Result<()> {
    let text = format!("{}{}", m.comment_header(), body);
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli, started: Instant) -> Result<i32> {
    match cli.cmd {
        Cmd::Terms { family, count } => {
            let m = RunManifest::new("terms", None);
            let seq = family.build()?;
            for k in 1..=count {
                println!("{}", seq.term(k).map_err(|e| anyhow!("term {k}: {e}"))?);
            }
            m.emit_stderr(started);
            Ok(0)
        }
        Cmd::Frac { family, k, x } => {
            let m = RunManifest::new("frac", None);
            let seq = family.build()?;
            let x = io::parse_unit_rational(&x)?;
            let v = seq.frac_part(k, &x).map_err(|e| anyhow!("{e}"))?;
            println!("{} {}", v, v.to_decimal_string());
            m.emit_stderr(started);
            Ok(0)
        }
        Cmd::Discrepancy { points, kind, mode } => {
            let m = RunManifest::new("discrepancy", None);
            let pts = io::read_points_file(&points)?;
            let out = match mode {
                ModeArg::Exact => {
                    let ps = ExactPoints::new(pts).map_err(|e| anyhow!("{e}"))?;
                    let r = match kind {
                        KindArg::Star => star_discrepancy_exact(&ps),
                        KindArg::Extremal => extremal_discrepancy_exact(&ps),
                    };
                    json!({
                        "value": rational_str(&r.value),
                        "witness_a": rational_str(&r.witness.0),
                        "witness_b": rational_str(&r.witness.1),
                    })
                }
                ModeArg::Float => {
                    let fp: Vec<f64> = pts.iter().map(io::to_f64).collect();
                    let r = float_discrepancy_with_witness(&fp, kind);
                    json!({
                        "value": r.0,
                        "witness_a": r.1,
                        "witness_b": r.2,
                    })
                }
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
            m.emit_stderr(started);
            Ok(0)
        }
        Cmd::Dioph { cmd } => dioph(cmd, started),
        Cmd::Sigma { cmd } => sigma(cmd, started),
        Cmd::LambdaStar {
            curve,
            family,
            grid,
            x,
            out,
        } => lambda_star(curve, family, grid, x, out, started),
        Cmd::Simulate {
            family,
            kind,
            f,
            nmax,
            samples,
            seed,
            start,
            den,
            out,
        } => simulate(family, kind, f, nmax, samples, seed, start, den, out, started),
        Cmd::Verify { cmd } => {
            let m = RunManifest::new("verify", None);
            let code = match cmd {
                VerifyCmd::SigmaSuite { jmax } => verify::sigma_suite(jmax)?,
                VerifyCmd::Theorem4 {
                    max_n,
                    mc_samples,
                    seed,
                } => verify::theorem4(max_n, mc_samples, seed)?,
                VerifyCmd::Koksma { trials, seed } => verify::koksma(trials, seed)?,
                VerifyCmd::Lemma1 => verify::lemma1()?,
                VerifyCmd::Theorem2Average => verify::theorem2_average()?,
                VerifyCmd::Bounds => verify::bounds()?,
            };
            m.emit_stderr(started);
            Ok(code)
        }
    }
}

/// Sorted-points discrepancy in f64 with the attaining interval.
fn float_discrepancy_with_witness(points: &[f64], kind: KindArg) -> (f64, f64, f64) {
    let mut s: Vec<f64> = points.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).expect("no NaN points"));
    let n = s.len() as f64;
    match kind {
        KindArg::Star => {
            let mut best = 0.0;
            let mut at = 0.0;
            for (i, x) in s.iter().enumerate() {
                let k = (i + 1) as f64;
                let local = (k / n - x).max(x - (k - 1.0) / n);
                if local > best {
                    best = local;
                    at = *x;
                }
            }
            (best, 0.0, at)
        }
        KindArg::Extremal => {
            let mut up = f64::NEG_INFINITY;
            let mut down = f64::NEG_INFINITY;
            let mut up_at = 0.0;
            let mut down_at = 0.0;
            for (i, x) in s.iter().enumerate() {
                let k = (i + 1) as f64;
                if k / n - x > up {
                    up = k / n - x;
                    up_at = *x;
                }
                if x - (k - 1.0) / n > down {
                    down = x - (k - 1.0) / n;
                    down_at = *x;
                }
            }
            (up + down, down_at.min(up_at), down_at.max(up_at))
        }
    }
}

fn dioph(cmd: DiophCmd, started: Instant) -> Result<i32> {
    match cmd {
        DiophCmd::Count {
            family,
            j1,
            j2,
            nu,
            n,
        } => {
            let m = RunManifest::new("dioph count", None);
            let seq = family.build()?;
            let s = count_solutions(&seq, j1, j2, nu, n).map_err(|e| anyhow!("{e}"))?;
            println!("{s}");
            m.emit_stderr(started);
            Ok(0)
        }
        DiophCmd::Gamma {
            family,
            dmax,
            ladder,
            nu_window,
            threshold,
            out,
        } => {
            let m = RunManifest::new("dioph gamma", None);
            let seq = family.build()?;
            let ladder: Vec<usize> = ladder
                .split(',')
                .map(|s| {
                    parse_human_int(s).and_then(|v| {
                        usize::try_from(v).map_err(|_| anyhow!("ladder entry too large"))
                    })
                })
                .collect::<Result<_>>()?;
            if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
                bail!("--ladder must be strictly increasing");
            }
            let n = *ladder.last().expect("non-empty");
            let nu_window = nu_window.unwrap_or(dmax as i64);
            let table = estimate_gamma_table(&seq, dmax, nu_window, n, threshold)
                .map_err(|e| anyhow!("{e}"))?;
            let body = format!(
                "{}\n",
                serde_json::to_string_pretty(&io::gamma_table_to_json(&table))?
            );
            // JSON cannot carry the comment header; files keep the bare schema
            match out {
                Some(path) => fs::write(&path, body)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => print!("{body}"),
            }
            m.emit_stderr(started);
            Ok(0)
        }
    }
}

/// Integers with scientific shorthand: `1000`, `1e3`, `5e2`.
fn parse_human_int(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Some((mant, exp)) = s.split_once(['e', 'E']) {
        let mant: u64 = mant.parse().context("bad mantissa")?;
        let exp: u32 = exp.parse().context("bad exponent")?;
        return mant
            .checked_mul(10u64.checked_pow(exp).ok_or_else(|| anyhow!("overflow"))?)
            .ok_or_else(|| anyhow!("overflow in {s:?}"));
    }
    Ok(s.parse()?)
}

fn sigma(cmd: SigmaCmd, started: Instant) -> Result<i32> {
    match cmd {
        SigmaCmd::Eval {
            f,
            gamma,
            x,
            jmax,
            numax,
        } => {
            let m = RunManifest::new("sigma eval", None);
            let f = io::parse_function_spec(&f)?;
            let table = io::read_gamma_file(&gamma)?;
            let x = io::parse_rational(&x)?;
            let sv = sigma_sq_series(&f, &table, io::to_f64(&x), jmax, numax);
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "x": rational_str(&x),
                    "value": sv.value,
                    "tail_bound": sv.tail_bound,
                    "truncated": sv.truncated,
                    "j_max": jmax,
                }))?
            );
            m.emit_stderr(started);
            Ok(0)
        }
        SigmaCmd::Curve {
            f,
            gamma,
            grid,
            jmax,
            out,
        } => {
            let m = RunManifest::new("sigma curve", None);
            if grid == 0 {
                bail!("--grid must be positive");
            }
            let f = io::parse_function_spec(&f)?;
            let table = io::read_gamma_file(&gamma)?;
            let mut body = String::from("x,sigma_sq,tail_bound\n");
            for i in 0..=grid {
                let x = i as f64 / grid as f64;
                let sv = sigma_sq_series(&f, &table, x, jmax, None);
                body.push_str(&format!(
                    "{},{},{}\n",
                    fmt17(x),
                    fmt17(sv.value),
                    fmt17(sv.tail_bound)
                ));
            }
            emit(&out, &m, &body)?;
            m.emit_stderr(started);
            Ok(0)
        }
    }
}

fn lambda_star(
    curve: bool,
    family: FamilyOpts,
    grid: u32,
    x: Option<String>,
    out: Option<PathBuf>,
    started: Instant,
) -> Result<i32> {
    let m = RunManifest::new("lambda-star", None);
    if family.family != FamilyArg::Theorem1 {
        bail!("the closed-form curve exists only for --family theorem1");
    }
    family.build()?;
    let eval = |x: &BigRational| -> Result<(f64, f64, BigRational, f64)> {
        let closed = lambda_star_theorem1_closed_f64(x).map_err(|e| anyhow!("{e}"))?;
        let (sup, witness) = lambda_star_theorem1_sup(x).map_err(|e| anyhow!("{e}"))?;
        let numeric = io::to_f64(&sup).sqrt();
        Ok((closed, numeric, witness, (closed - numeric).abs()))
    };
    if curve {
        if grid == 0 {
            bail!("--grid must be positive");
        }
        let mut body = String::from("x,lambda_closed,lambda_numeric,witness_a,abs_diff\n");
        for i in 0..=grid {
            let x = BigRational::new(BigInt::from(i), BigInt::from(grid));
            let (closed, numeric, witness, diff) = eval(&x)?;
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(i as f64 / grid as f64),
                fmt17(closed),
                fmt17(numeric),
                rational_str(&witness),
                fmt17(diff)
            ));
        }
        emit(&out, &m, &body)?;
    } else {
        let x = x.ok_or_else(|| anyhow!("need --x or --curve"))?;
        let x = io::parse_rational(&x)?;
        let (closed, numeric, witness, diff) = eval(&x)?;
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "x": rational_str(&x),
                "lambda_closed": closed,
                "lambda_numeric": numeric,
                "witness_a": rational_str(&witness),
                "abs_diff": diff,
            }))?
        );
    }
    m.emit_stderr(started);
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    family: FamilyOpts,
    kind: SimKindArg,
    f: Option<String>,
    nmax: u64,
    samples: u64,
    seed: u64,
    start: u64,
    den: u64,
    out: Option<PathBuf>,
    started: Instant,
) -> Result<i32> {
    let m = RunManifest::new("simulate", Some(seed));
    let seq = family.build()?;
    let (stat_kind, func) = match kind {
        SimKindArg::Star => (StatKind::StarDisc, None),
        SimKindArg::Extremal => (StatKind::ExtremalDisc, None),
        SimKindArg::Sum => {
            let spec = f.as_deref().ok_or_else(|| anyhow!("--kind sum requires --f"))?;
            (StatKind::FunctionSum, Some(io::parse_function_spec(spec)?))
        }
    };
    if kind != SimKindArg::Sum && f.is_some() {
        bail!("--f only applies to --kind sum");
    }
    if den < 2 {
        bail!("--den must be at least 2");
    }
    let ladder = checkpoint_ladder(start.min(nmax).max(3), nmax).map_err(|e| anyhow!("{e}"))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut body = String::from("x,N,stat,normalized,runmax\n");
    for _ in 0..samples {
        let p = rng.gen_range(1..den);
        let x = UnitRational::new(BigInt::from(p), BigInt::from(den))
            .map_err(|e| anyhow!("{e}"))?;
        let traj = simulate_trajectory(&seq, &x, stat_kind, func.as_ref(), &ladder)
            .map_err(|e| anyhow!("{e}"))?;
        let mut runmax = 0.0f64;
        for pt in &traj.points {
            runmax = runmax.max(pt.normalized);
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                x,
                pt.n,
                fmt17(pt.stat),
                fmt17(pt.normalized),
                fmt17(runmax)
            ));
        }
    }
    emit(&out, &m, &body)?;
    m.emit_stderr(started);
    Ok(0)
}
