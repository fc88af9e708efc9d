//! PT expectation values as ratios of contour integrals,
//!
//! ```text
//! <z^m> = int_C psi(z) z^m psi(z) dz / int_C psi(z) psi(z) dz
//! ```
//!
//! with `C` running from the left wedge of the pair to the right wedge.
//! The integrand is `psi * psi`, not `psi * conj(psi)`.

use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::Result;
use crate::precision::{cabs, ComplexHP, PrecisionContext};
use crate::quadrature::GaussLegendre;
use crate::quantize::EnergyLevel;
use crate::series::SeriesEvaluator;
use crate::wedges::{PiFraction, WedgePair};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContourStyle {
    /// `[-lambda, lambda]` on the real axis.
    RealLine,
    /// `lambda e^{i theta_left} -> 0 -> lambda e^{i theta_right}` along the wedge centres.
    WedgeRays,
}

/// Piecewise-linear path.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub segments: Vec<(ComplexHP, ComplexHP)>,
    pub lambda: f64,
    pub style: ContourStyle,
}

impl Contour {
    /// Largest `|z|` on the path.
    pub fn max_modulus(&self) -> f64 {
        self.segments
            .iter()
            .flat_map(|(a, b)| [cabs(a).to_f64(), cabs(b).to_f64()])
            .fold(0.0, f64::max)
    }
}

pub fn build_contour(
    pair: &WedgePair,
    lambda: f64,
    style: ContourStyle,
    ctx: &PrecisionContext,
) -> Result<Contour> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let lam = ctx.real(lambda);
    let segments = match style {
        ContourStyle::RealLine => {
            let right_ok = pair.contains_direction(PiFraction::new(0, 1));
            let left_ok = pair.contains_direction(PiFraction::new(1, 1));
            if !(right_ok && left_ok) {
                return Err(Error::Geometry(format!(
                    "the wedges centred at {} and {} (half-width {}) do not both contain the real axis",
                    pair.theta_left, pair.theta_right, pair.half_width
                )));
            }
            vec![(ctx.complex((-lambda, 0)), ctx.complex((lambda, 0)))]
        }
        ContourStyle::WedgeRays => {
            let left = ctx.polar(&lam, &pair.theta_left.to_real(ctx));
            let right = ctx.polar(&lam, &pair.theta_right.to_real(ctx));
            vec![(left, ctx.zero()), (ctx.zero(), right)]
        }
    };
    Ok(Contour { segments, lambda, style })
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` nodes per segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadratureRule {
    pub panels: usize,
    pub order: usize,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self { panels: 64, order: 20 }
    }
}

impl QuadratureRule {
    pub fn doubled(&self) -> Self {
        Self { panels: 2 * self.panels, ..*self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationResult {
    pub n: usize,
    pub m: u32,
    pub value: ComplexHP,
    pub norm: ComplexHP,
    /// `|value(rule) - value(doubled rule)|`.
    pub est_error: f64,
}

/// `(sum_k w_k psi^2 z^m dz)` for each requested `m`, plus the `m = 0` norm.
fn moments(
    ev: &SeriesEvaluator,
    level: &EnergyLevel,
    ms: &[u32],
    contour: &Contour,
    rule: QuadratureRule,
) -> (Vec<ComplexHP>, ComplexHP, Float) {
    let ctx = ev.ctx();
    let bits = ctx.bits();
    let gl = GaussLegendre::shared(rule.order, bits);
    let max_m = ms.iter().copied().max().unwrap_or(0);
    // (segment, panel, node)
    let jobs: Vec<(usize, usize, usize)> = (0..contour.segments.len())
        .flat_map(|s| (0..rule.panels).flat_map(move |p| (0..rule.order).map(move |k| (s, p, k))))
        .collect();
    let terms: Vec<(Vec<ComplexHP>, Float)> = jobs
        .par_iter()
        .map(|&(s, p, k)| {
            let (a, b) = &contour.segments[s];
            let span = Complex::with_val(bits, b - a);
            let h = Float::with_val(bits, 1) / rule.panels as u32;
            // t in [0, 1]: panel p covers [p h, (p + 1) h]
            let mid = Float::with_val(bits, &h * (2 * p + 1) as u32) / 2u32;
            let t = Float::with_val(bits, &gl.nodes[k] * &h) / 2u32 + mid;
            let mut z = Complex::with_val(bits, &span * &t);
            z += a;
            let w = Float::with_val(bits, &gl.weights[k] * &h) / 2u32;
            let dz = Complex::with_val(bits, &span * &w);
            let psi = level.psi(ev, &z, 0).value;
            let base = Complex::with_val(bits, psi.square_ref()) * dz;
            let mass = cabs(&base);
            let mut out = Vec::with_capacity(max_m as usize + 1);
            let mut cur = base;
            for _ in 0..=max_m {
                let next = Complex::with_val(bits, &cur * &z);
                out.push(cur);
                cur = next;
            }
            (out, mass)
        })
        .collect();
    let mut sums: Vec<ComplexHP> = (0..=max_m).map(|_| ctx.zero()).collect();
    let mut mass = Float::new(bits);
    for (t, w) in &terms {
        for (acc, v) in sums.iter_mut().zip(t) {
            *acc += v;
        }
        mass += w;
    }
    let norm = sums[0].clone();
    (ms.iter().map(|&m| sums[m as usize].clone()).collect(), norm, mass)
}

/// `<z^m>` for every `m` in `ms`, sharing the eigenfunction evaluations.
pub fn expectation_values(
    ev: &SeriesEvaluator,
    level: &EnergyLevel,
    ms: &[u32],
    contour: &Contour,
    rule: QuadratureRule,
) -> Result<Vec<ExpectationResult>> {
    if rule.panels == 0 || rule.order == 0 {
        return Err(Error::Parameter("quadrature needs at least one panel and node".into()));
    }
    if level.pair.n != ev.n() {
        return Err(Error::Parameter("level and evaluator disagree on N".into()));
    }
    let ctx = ev.ctx();
    let bits = ctx.bits();
    let (coarse, norm_c, mass) = moments(ev, level, ms, contour, rule);
    let (fine, norm_f, _) = moments(ev, level, ms, contour, rule.doubled());
    let floor = Float::with_val(bits, &mass * ctx.ten_pow_neg(ctx.digits() as i32 / 2));
    if cabs(&norm_f) <= floor {
        return Err(Error::DegenerateNorm(format!("{:.3e}", cabs(&norm_f).to_f64())));
    }
    Ok(ms
        .iter()
        .zip(coarse.iter().zip(&fine))
        .map(|(&m, (c, f))| {
            let vc = Complex::with_val(bits, c / &norm_c);
            let vf = Complex::with_val(bits, f / &norm_f);
            let est = cabs(&Complex::with_val(bits, &vf - &vc)).to_f64();
            ExpectationResult { n: level.n, m, value: vf, norm: norm_f.clone(), est_error: est }
        })
        .collect())
}

pub fn expectation(
    ev: &SeriesEvaluator,
    level: &EnergyLevel,
    m: u32,
    contour: &Contour,
    rule: QuadratureRule,
) -> Result<ExpectationResult> {
    Ok(expectation_values(ev, level, &[m], contour, rule)?.remove(0))
}

pub const EHRENFEST_THRESHOLD: f64 = 1e-9;
pub const VIRIAL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub n: usize,
    /// `|<z^(N-1)>|`.
    pub ehrenfest_residual: f64,
    /// `|<z^3> + (2/5) i E|`, only for `N = 3`.
    pub virial_residual: Option<f64>,
    pub pass: bool,
}

/// Moments needed by [`identity_check`] for this `N`.
pub fn identity_moments(n: u32) -> Vec<u32> {
    if n == 3 {
        vec![2, 3]
    } else {
        vec![n - 1]
    }
}

/// Ehrenfest and virial residuals from already computed moments of one level,
/// or `None` if a required moment is missing.
pub fn identity_check(level: &EnergyLevel, values: &[ExpectationResult]) -> Option<IdentityCheck> {
    let n = level.pair.n;
    let find = |m: u32| values.iter().find(|r| r.m == m).map(|r| &r.value);
    let ehr = cabs(find(n - 1)?).to_f64();
    let vir = if n == 3 {
        let bits = level.energy.prec();
        let target = Float::with_val(bits, &level.energy * 2u32) / 5u32;
        let mut r = find(3)?.clone();
        *r.mut_imag() += &target;
        Some(cabs(&r).to_f64())
    } else {
        None
    };
    let pass = ehr < EHRENFEST_THRESHOLD && vir.is_none_or(|v| v < VIRIAL_THRESHOLD);
    Some(IdentityCheck { n: level.n, ehrenfest_residual: ehr, virial_residual: vir, pass })
}

/// Ehrenfest (`<z^(N-1)> = 0`) and, for `N = 3`, virial (`<z^3> = -(2/5) i E`) residuals.
pub fn identity_checks(
    ev: &SeriesEvaluator,
    levels: &[EnergyLevel],
    contour: &Contour,
    rule: QuadratureRule,
) -> Result<Vec<IdentityCheck>> {
    let ms = identity_moments(ev.n());
    let mut out = Vec::with_capacity(levels.len());
    for level in levels {
        let vals = expectation_values(ev, level, &ms, contour, rule)?;
        out.push(identity_check(level, &vals).expect("all identity moments computed"));
    }
    Ok(out)
}
