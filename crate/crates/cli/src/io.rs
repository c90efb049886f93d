//! Parsing and rendering of the CLI's exchange formats: rationals as `P/Q`
//! or decimal strings, point-set CSV files, function specs, and the gamma
//! table JSON schema.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use lacunary_core::diophantine::GammaTable;
use lacunary_core::rational::UnitRational;
use lacunary_core::sigma::{StepFunction, TrigTerm};
use lacunary_core::BVFunctionSpec;

/// Parse `P/Q`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().context("bad numerator")?;
        let den: BigInt = q.trim().parse().context("bad denominator")?;
        if den.is_zero() {
            bail!("zero denominator in {s:?}");
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, fracpart)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().context("bad integer part")?
        };
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) {
            bail!("bad decimal {s:?}");
        }
        let digits: BigInt = fracpart.parse()?;
        let scale = BigInt::from(10u32).pow(fracpart.len() as u32);
        let frac = BigRational::new(digits, scale);
        let whole = BigRational::from(int_part.abs());
        let v = whole + frac;
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().with_context(|| format!("bad rational {s:?}"))?;
    Ok(BigRational::from(n))
}

/// Parse a rational and require it to be a point of `[0,1)`.
pub fn parse_unit_rational(s: &str) -> Result<UnitRational> {
    let r = parse_rational(s)?;
    UnitRational::new(r.numer().clone(), r.denom().clone())
        .map_err(|e| anyhow!("{s:?} is not a point of [0,1): {e}"))
}

/// `P/Q` rendering of a rational.
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// 17-digit decimal rendering used in all numeric CSV columns.
pub fn fmt17(v: f64) -> String {
    format!("{v:.17}")
}

/// One point per line, `P/Q` or decimal; blank lines and `#` comments are
/// skipped.
pub fn read_points_file(path: &Path) -> Result<Vec<BigRational>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let r = parse_rational(line)
            .with_context(|| format!("{}:{}", path.display(), i + 1))?;
        if r.is_negative() || r > BigRational::one() {
            bail!("{}:{}: point {} outside [0,1]", path.display(), i + 1, line);
        }
        out.push(r);
    }
    if out.is_empty() {
        bail!("{}: no points", path.display());
    }
    Ok(out)
}

/// Function specs:
/// - `indicator:A,B` — centered indicator of the arc `[A,B]`
/// - `trig:J,A,B[;J,A,B...]` — sum of `A cos 2 pi J x + B sin 2 pi J x`
/// - `step:T=V[;T=V...]` — step function (auto-centered), first `T` must be 0
pub fn parse_function_spec(s: &str) -> Result<BVFunctionSpec> {
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("function spec needs a `kind:` prefix: {s:?}"))?;
    match kind {
        "indicator" => {
            let (a, b) = body
                .split_once(',')
                .ok_or_else(|| anyhow!("indicator needs two endpoints"))?;
            BVFunctionSpec::indicator(parse_rational(a)?, parse_rational(b)?)
                .map_err(|e| anyhow!("bad indicator: {e}"))
        }
        "trig" => {
            let mut terms = Vec::new();
            for part in body.split(';') {
                let fields: Vec<&str> = part.split(',').collect();
                if fields.len() != 3 {
                    bail!("trig term must be J,A,B: {part:?}");
                }
                terms.push(TrigTerm {
                    freq: fields[0].trim().parse().context("bad frequency")?,
                    cos_coeff: parse_rational(fields[1])?,
                    sin_coeff: parse_rational(fields[2])?,
                });
            }
            BVFunctionSpec::trig_poly(terms).map_err(|e| anyhow!("bad trig poly: {e}"))
        }
        "step" => {
            let mut breakpoints = Vec::new();
            let mut values = Vec::new();
            for part in body.split(';') {
                let (t, v) = part
                    .split_once('=')
                    .ok_or_else(|| anyhow!("step piece must be T=V: {part:?}"))?;
                breakpoints.push(parse_rational(t)?);
                values.push(parse_rational(v)?);
            }
            let sf = StepFunction::new(breakpoints, values)
                .map_err(|e| anyhow!("bad step function: {e}"))?;
            Ok(BVFunctionSpec::CenteredStep(sf))
        }
        other => bail!("unknown function kind {other:?} (indicator|trig|step)"),
    }
}

/// Serialize a gamma table as
/// `{"d_max":D,"entries":[{"j1":3,"j2":1,"nu":1,"gamma":"1/2"},...]}`.
pub fn gamma_table_to_json(table: &GammaTable) -> Value {
    let entries: Vec<Value> = table
        .iter()
        .map(|(&(j1, j2, nu), g)| {
            json!({"j1": j1, "j2": j2, "nu": nu, "gamma": rational_str(g)})
        })
        .collect();
    json!({"d_max": table.d_max(), "entries": entries})
}

pub fn gamma_table_from_json(v: &Value) -> Result<GammaTable> {
    let d_max = v["d_max"]
        .as_u64()
        .ok_or_else(|| anyhow!("gamma table: missing d_max"))? as u32;
    let mut table = GammaTable::new(d_max);
    let entries = v["entries"]
        .as_array()
        .ok_or_else(|| anyhow!("gamma table: missing entries"))?;
    for e in entries {
        let j1 = e["j1"].as_u64().ok_or_else(|| anyhow!("entry: bad j1"))? as u32;
        let j2 = e["j2"].as_u64().ok_or_else(|| anyhow!("entry: bad j2"))? as u32;
        let nu = e["nu"].as_i64().ok_or_else(|| anyhow!("entry: bad nu"))?;
        let g = e["gamma"]
            .as_str()
            .ok_or_else(|| anyhow!("entry: gamma must be a fraction string"))?;
        table
            .insert(j1, j2, nu, parse_rational(g)?)
            .map_err(|err| anyhow!("entry ({j1},{j2},{nu}): {err}"))?;
    }
    Ok(table)
}

pub fn read_gamma_file(path: &Path) -> Result<GammaTable> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let v: Value = serde_json::from_str(&text)
        .with_context(|| format!("{}: invalid JSON", path.display()))?;
    gamma_table_from_json(&v)
}

/// Best-effort f64 image of a rational, for report columns.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
