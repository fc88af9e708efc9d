//! Text reports and small input parsers used by the command-line front end.
//!
//! Every number is written as a decimal string with an explicit number of
//! digits so that reports are byte-identical across runs and platforms.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::ParseError;
use crate::nodes::{NodeSet, Region};
use crate::observables::{ExpectationResult, IdentityCheck};
use crate::precision::{format_fixed, format_sci, ComplexHP, Real};
use crate::quantize::{EnergyLevel, HealthReport, Parity, ScanPoint};
use crate::wedges::WedgePair;

/// Largest moment accepted by [`parse_moments`].
pub const MAX_MOMENT: u32 = 64;

/// Significant digits used for error estimates and residuals.
const ERR_SIG: u32 = 3;

fn sci_f64(x: f64) -> String {
    sci_f64_sig(x, ERR_SIG as usize)
}

fn complex_json(z: &ComplexHP, sig: u32) -> Value {
    json!({ "re": format_sci(z.real(), sig), "im": format_sci(z.imag(), sig) })
}

/// Parameters echoed in every report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub n: u32,
    pub pmax: u32,
    pub radius: f64,
    pub digits: u32,
}

impl RunParams {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "pmax": self.pmax,
            "radius": self.radius.to_string(),
            "digits": self.digits,
        })
    }
}

pub fn scan_csv(points: &[ScanPoint], decimals: u32) -> String {
    let mut out = String::from("E,re_c,im_c,flag\n");
    for p in points {
        let e = format_fixed(&p.energy, decimals);
        match &p.c {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "{e},{},{},ok",
                    format_fixed(c.real(), decimals),
                    format_fixed(c.imag(), decimals)
                );
            }
            None => {
                let _ = writeln!(out, "{e},,,pole");
            }
        }
    }
    out
}

pub fn level_json(level: &EnergyLevel, sig: u32) -> Value {
    json!({
        "n": level.n,
        "E": format_sci(&level.energy, sig),
        "c": level.c.as_ref().map(|c| format_sci(c, sig)),
        "parity": level.parity.map(|p| match p {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }),
        "est_error": sci_f64(level.diagnostics.est_error),
        "params": {
            "pmax": level.diagnostics.pmax,
            "radius": level.diagnostics.radius.to_string(),
            "digits": level.diagnostics.digits,
            "pair": level.pair.k,
            "consistent": level.diagnostics.consistent,
        },
    })
}

pub fn spectrum_json(levels: &[EnergyLevel], sig: u32) -> Value {
    Value::Array(levels.iter().map(|l| level_json(l, sig)).collect())
}

pub fn health_json(h: &HealthReport) -> Value {
    json!({
        "N": h.n,
        "pmax": h.pmax,
        "radius": h.radius.to_string(),
        "e_max": h.e_max.to_string(),
        "digits": h.digits,
        "tail_ratio": sci_f64(h.tail_ratio),
        "threshold": sci_f64(h.threshold),
        "c_discrepancy": sci_f64(h.c_discrepancy),
        "pass": h.pass,
    })
}

pub fn nodes_json(set: &NodeSet, sig: u32) -> Value {
    let list = |v: &[ComplexHP]| Value::Array(v.iter().map(|z| complex_json(z, sig)).collect());
    json!({
        "level": level_json(&set.level, sig),
        "axis_nodes": list(&set.axis_nodes),
        "arch_nodes": list(&set.arch_nodes),
        "other_nodes": list(&set.other_nodes),
        "turning_points": list(&set.turning_points),
        "failed_seeds": set.failed_seeds.len(),
    })
}

pub fn expectations_csv(results: &[ExpectationResult], sig: u32) -> String {
    let mut out = String::from("n,m,re_value,im_value,est_error\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.m,
            format_sci(r.value.real(), sig),
            format_sci(r.value.imag(), sig),
            sci_f64(r.est_error)
        );
    }
    out
}

pub fn expectations_json(results: &[ExpectationResult], sig: u32) -> Value {
    Value::Array(
        results
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "m": r.m,
                    "value": complex_json(&r.value, sig),
                    "est_error": sci_f64(r.est_error),
                })
            })
            .collect(),
    )
}

pub fn identity_json(checks: &[IdentityCheck]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| {
                json!({
                    "n": c.n,
                    "ehrenfest_residual": sci_f64(c.ehrenfest_residual),
                    "virial_residual": c.virial_residual.map(sci_f64),
                    "pass": c.pass,
                })
            })
            .collect(),
    )
}

pub fn wedges_json(pairs: &[WedgePair]) -> Value {
    Value::Array(
        pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                json!({
                    "index": i,
                    "k": p.k,
                    "theta_right": p.theta_right.to_string(),
                    "theta_left": p.theta_left.to_string(),
                    "theta_right_value": format!("{:.15}", p.theta_right.to_f64()),
                    "theta_left_value": format!("{:.15}", p.theta_left.to_f64()),
                    "half_width": p.half_width.to_string(),
                    "p_symmetric": p.p_symmetric,
                })
            })
            .collect(),
    )
}

pub fn wedges_table(pairs: &[WedgePair]) -> String {
    let mut out = String::from("index,k,theta_right,theta_left,theta_right_value,theta_left_value,half_width,p_symmetric\n");
    for (i, p) in pairs.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{:.15},{:.15},{},{}",
            p.k,
            p.theta_right,
            p.theta_left,
            p.theta_right.to_f64(),
            p.theta_left.to_f64(),
            p.half_width,
            p.p_symmetric
        );
    }
    out
}

/// `ln |psi|` grid from [`crate::nodes::log_modulus_grid`] as `x,y,log_abs_psi` rows.
pub fn grid_csv(region: &Region, step: f64, nx: usize, values: &[f64]) -> String {
    let mut out = String::from("x,y,log_abs_psi\n");
    for (idx, v) in values.iter().enumerate() {
        let (i, j) = (idx % nx, idx / nx);
        let x = region.x0 + i as f64 * step;
        let y = region.y0 + j as f64 * step;
        let _ = writeln!(out, "{x:.6},{y:.6},{}", sci_f64_sig(*v, 8));
    }
    out
}

fn sci_f64_sig(x: f64, sig: usize) -> String {
    if x.is_finite() {
        let s = format!("{x:.*e}", sig - 1);
        match s.split_once('e') {
            Some((m, e)) => {
                let e: i32 = e.parse().unwrap_or(0);
                format!("{m}e{e:+03}")
            }
            None => s,
        }
    } else {
        x.to_string()
    }
}

/// `x,re_psi,im_psi` rows for a wavefunction sampled along the real line.
pub fn wavefunction_csv(samples: &[(Real, ComplexHP)], sig: u32) -> String {
    let mut out = String::from("x,re_psi,im_psi\n");
    for (x, psi) in samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_sci(x, sig),
            format_sci(psi.real(), sig),
            format_sci(psi.imag(), sig)
        );
    }
    out
}

fn parse_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).collect()
}

/// `"x0,x1,y0,y1"`.
pub fn parse_region(s: &str) -> Result<Region, ParseError> {
    let err = |msg: &str| ParseError::List { input: s.to_string(), msg: msg.to_string() };
    let parts = parse_list(s);
    if parts.len() != 4 {
        return Err(err("expected four comma-separated numbers x0,x1,y0,y1"));
    }
    let mut v = [0.0; 4];
    for (slot, p) in v.iter_mut().zip(&parts) {
        let x: f64 = p.parse().map_err(|_| ParseError::Number(p.to_string()))?;
        if !x.is_finite() || !p.bytes().all(|b| b.is_ascii_digit() || b".eE+-".contains(&b)) {
            return Err(ParseError::Number(p.to_string()));
        }
        *slot = x;
    }
    Region::new(v[0], v[1], v[2], v[3]).map_err(|_| err("region must satisfy x0 < x1 and y0 < y1"))
}

/// Comma-separated non-negative powers, e.g. `"1,2,3,4"`. Order is kept; duplicates are rejected.
pub fn parse_moments(s: &str) -> Result<Vec<u32>, ParseError> {
    let err = |msg: String| ParseError::List { input: s.to_string(), msg };
    let mut out: Vec<u32> = Vec::new();
    for p in parse_list(s) {
        if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(format!("{p:?} is not a non-negative integer")));
        }
        let m: u32 = p.parse().map_err(|_| err(format!("{p:?} is too large")))?;
        if m > MAX_MOMENT {
            return Err(err(format!("moment {m} exceeds {MAX_MOMENT}")));
        }
        if out.contains(&m) {
            return Err(err(format!("moment {m} listed twice")));
        }
        out.push(m);
    }
    Ok(out)
}

/// Error estimates and residuals: three significant digits.
pub fn format_error(x: f64) -> String {
    sci_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions() {
        let r = parse_region("-2, 2,-2,0").unwrap();
        assert_eq!((r.x0, r.x1, r.y0, r.y1), (-2.0, 2.0, -2.0, 0.0));
        assert!(parse_region("-2,2,-2").is_err());
        assert!(parse_region("2,-2,-2,0").is_err());
        assert!(parse_region("inf,2,-2,0").is_err());
        assert!(parse_region("nan,2,-2,0").is_err());
        assert!(parse_region("0x1,2,-2,0").is_err());
    }

    #[test]
    fn moments() {
        assert_eq!(parse_moments("1,2,3,4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_moments(" 0 ").unwrap(), vec![0]);
        assert!(parse_moments("").is_err());
        assert!(parse_moments("1,,2").is_err());
        assert!(parse_moments("1,1").is_err());
        assert!(parse_moments("-1").is_err());
        assert!(parse_moments("65").is_err());
        assert!(parse_moments("99999999999999").is_err());
    }

    #[test]
    fn small_float_format() {
        assert_eq!(sci_f64(1.234e-30), "1.23e-30");
        assert_eq!(sci_f64(0.0), "0.00e+00");
        assert_eq!(sci_f64_sig(-2.5, 3), "-2.50e+00");
    }
}
