//! Quick internal consistency checks run by `--selfcheck`.

use std::f64::consts::PI;

use ptseries::io::format_error;
use ptseries::precision::{cabs, PrecisionContext};
use ptseries::quantize::{quantize_p_symmetric, Parity, SearchOptions};
use ptseries::series::{SeriesEvaluator, Solution, TruncationParams};
use ptseries::wedges::pt_pairs;
use rug::{Complex, Float};
use serde_json::{json, Value};

use crate::Failure;

/// Sample points used for the Wronskian and reflection checks.
const SAMPLES: u32 = 100;

pub struct Check {
    name: &'static str,
    worst: f64,
    bound: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.worst < self.bound
    }
}

pub struct Report(Vec<Check>);

impl Report {
    pub fn pass(&self) -> bool {
        self.0.iter().all(Check::pass)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .0
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "worst": format_error(c.worst),
                    "bound": format_error(c.bound),
                    "pass": c.pass(),
                })
            })
            .collect();
        json!({ "selfcheck": checks, "pass": self.pass() })
    }

    pub fn summary(&self) -> String {
        self.0
            .iter()
            .map(|c| {
                let tag = if c.pass() { "ok" } else { "FAILED" };
                format!("selfcheck {}: {tag} ({} < {})\n", c.name, format_error(c.worst), format_error(c.bound))
            })
            .collect()
    }
}

pub fn run(n: u32, pmax: u32, digits: u32) -> Result<Report, Failure> {
    let ctx = PrecisionContext::new(digits)?;
    let ev = SeriesEvaluator::shared(n, pmax, ctx)?;
    let bits = ctx.bits();
    let one = ctx.real(1);
    let mut wronskian = 0f64;
    let mut reflection = 0f64;
    // deterministic points with |z| <= 2, E in [0, 20]
    for k in 0..SAMPLES {
        let r = 2.0 * f64::from((k * 37) % 101) / 100.0;
        let th = PI * (2.0 * f64::from((k * 61) % 100) / 100.0 - 1.0);
        let e = ctx.complex((20.0 * f64::from((k * 17) % 100) / 99.0, 0));
        let z = ctx.polar(&ctx.real(r), &ctx.real(th));
        let v = ev.eval(&z, &e, 1);
        let w = v.wronskian() - ctx.complex((0, 1));
        wronskian = wronskian.max(cabs(&w).to_f64());
        let mirror = Complex::with_val(bits, (-z.real().clone(), z.imag()));
        let back = ev.eval(&mirror, &e, 0);
        for sol in [Solution::Even, Solution::Odd] {
            let a = &v.get(sol).value;
            let conj = Complex::with_val(bits, (a.real(), -a.imag().clone()));
            let d = cabs(&Complex::with_val(bits, &back.get(sol).value - &conj));
            let scale = cabs(a).max(&one);
            reflection = reflection.max((d / scale).to_f64());
        }
    }

    let ev2 = SeriesEvaluator::shared(2, pmax, ctx)?;
    let pair = pt_pairs(2)?.into_iter().find(|p| p.p_symmetric && !p.on_imaginary_axis()).expect("real-axis pair");
    let trunc = TruncationParams::new(pmax, 8.0)?;
    let opts = SearchOptions::new(&ctx);
    let mut oracle = 0f64;
    for (parity, expect) in [(Parity::Even, [1u32, 5]), (Parity::Odd, [3, 7])] {
        let levels = quantize_p_symmetric(&ev2, &pair, parity, 2, &trunc, &opts)?;
        for (l, e) in levels.iter().zip(expect) {
            oracle = oracle.max(Float::with_val(bits, &l.energy - e).abs().to_f64());
        }
    }

    Ok(Report(vec![
        Check { name: "wronskian", worst: wronskian, bound: 10f64.powi(10 - digits as i32) },
        Check { name: "pt_reflection", worst: reflection, bound: 10f64.powi(2 - ctx.working_digits() as i32) },
        Check { name: "harmonic_oracle", worst: oracle, bound: 1e-15 },
    ]))
}
