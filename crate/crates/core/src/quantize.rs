//! Energy quantisation through the connection coefficient.
//!
//! `psi = psi1 + c psi2` decays in the wedge centred at `theta` when
//! `c = -lim psi1(r e^{i theta}) / psi2(r e^{i theta})`. The limit is replaced
//! by a finite radius `r`. For real `E` the PT reflection makes the
//! coefficient of the partner wedge `conj(c)`, so both wedges are decaying
//! exactly when `Im c = 0`: eigenvalues are the real roots of `Im c(E)`.

use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::Result;
use crate::precision::{cabs, ComplexHP, PrecisionContext, Real};
use crate::series::{Jet, SeriesEvaluator, Solution, TruncationParams};
use crate::wedges::{Side, WedgePair};
use crate::Error;

/// Hard cap on scan grid sizes.
pub const MAX_SCAN_POINTS: usize = 2_000_000;

/// One sample of `c(E)` on a scan grid. `c` is `None` at a pole, where
/// `psi2` vanishes on the evaluation ray to working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub energy: Real,
    pub c: Option<ComplexHP>,
}

impl ScanPoint {
    pub fn is_pole(&self) -> bool {
        self.c.is_none()
    }

    pub fn im_c(&self) -> Option<&Float> {
        self.c.as_ref().map(|c| c.imag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn solution(self) -> Solution {
        match self {
            Parity::Even => Solution::Even,
            Parity::Odd => Solution::Odd,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub pmax: u32,
    pub radius: f64,
    pub digits: u32,
    /// `|E(r) - E(0.9 r)|`.
    pub est_error: f64,
    /// `est_error <= 10^(-digits/2)`.
    pub consistent: bool,
}

/// A refined eigenvalue together with its connection coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyLevel {
    pub n: usize,
    pub energy: Real,
    /// Real connection coefficient; absent for parity-quantised levels.
    pub c: Option<Real>,
    /// Set for levels of a P-symmetric pair, whose eigenfunctions are pure `psi1` or `psi2`.
    pub parity: Option<Parity>,
    pub pair: WedgePair,
    pub diagnostics: Diagnostics,
}

impl EnergyLevel {
    /// The eigenfunction `psi1 + c psi2` (or the pure parity solution) at `z`.
    pub fn psi(&self, ev: &SeriesEvaluator, z: &ComplexHP, order: u32) -> Jet {
        let bits = ev.ctx().bits();
        let e = Complex::with_val(bits, &self.energy);
        match (self.parity, &self.c) {
            (Some(p), _) => ev.eval_solution(p.solution(), z, &e, order),
            (None, c) => {
                let c = c.clone().unwrap_or_else(|| Float::new(bits));
                let v = ev.eval(z, &e, order);
                let comb = |a: &ComplexHP, b: &ComplexHP| {
                    let mut out = Complex::with_val(bits, b * &c);
                    out += a;
                    out
                };
                Jet {
                    value: comb(&v.psi1.value, &v.psi2.value),
                    d1: v.psi1.d1.as_ref().zip(v.psi2.d1.as_ref()).map(|(a, b)| comb(a, b)),
                    d2: v.psi1.d2.as_ref().zip(v.psi2.d2.as_ref()).map(|(a, b)| comb(a, b)),
                }
            }
        }
    }
}

fn check_trunc(ev: &SeriesEvaluator, trunc: &TruncationParams) -> Result<()> {
    trunc.validate()?;
    if trunc.pmax != ev.pmax() {
        return Err(Error::Parameter(format!(
            "truncation pmax {} does not match the evaluator table ({})",
            trunc.pmax,
            ev.pmax()
        )));
    }
    Ok(())
}

fn check_pair(ev: &SeriesEvaluator, pair: &WedgePair) -> Result<()> {
    if pair.n != ev.n() {
        return Err(Error::Parameter(format!(
            "wedge pair belongs to N = {}, table to N = {}",
            pair.n,
            ev.n()
        )));
    }
    Ok(())
}

/// `c = -psi1(z*) / psi2(z*)` at `z* = r e^{i theta}` on the chosen wedge centre.
pub fn connection_coefficient(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    side: Side,
    energy: &Real,
    trunc: &TruncationParams,
) -> Result<ComplexHP> {
    check_trunc(ev, trunc)?;
    check_pair(ev, pair)?;
    connection_at(ev, pair, side, energy, trunc.radius)
}

fn connection_at(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    side: Side,
    energy: &Real,
    radius: f64,
) -> Result<ComplexHP> {
    let ctx = ev.ctx();
    let z = ctx.polar(&ctx.real(radius), &pair.theta(side).to_real(&ctx));
    let e = ctx.complex(energy);
    let (p1, p2) = ev.eval_values(&z, &e);
    let small = ctx.ten_pow_neg((ctx.digits() / 2) as i32) * cabs(&p1);
    if cabs(&p2) <= small {
        return Err(Error::Pole { energy: energy.to_string_radix(10, Some(20)) });
    }
    let mut c = Complex::with_val(ctx.bits(), &p1 / &p2);
    c = -c;
    Ok(c)
}

/// Energy grid `e_min + j * step`, `j = 0, 1, ...` while `<= e_max`.
pub fn energy_grid(ctx: &PrecisionContext, e_min: &Real, e_max: &Real, step: &Real) -> Result<Vec<Real>> {
    if !(e_min < e_max) {
        return Err(Error::Parameter("empty energy window: need e_min < e_max".into()));
    }
    if *step <= 0 {
        return Err(Error::Parameter("scan step must be positive".into()));
    }
    let span = Float::with_val(ctx.bits(), e_max - e_min) / step;
    let count = span.to_f64();
    if !(count.is_finite() && count < MAX_SCAN_POINTS as f64) {
        return Err(Error::Parameter(format!(
            "scan grid too large (> {MAX_SCAN_POINTS} points)"
        )));
    }
    // Tolerate a representation error in the last grid point.
    let last = (count + 1e-9).floor() as usize;
    Ok((0..=last)
        .map(|j| {
            let mut e = Float::with_val(ctx.bits(), step * j as u64);
            e += e_min;
            e
        })
        .collect())
}

/// `c(E)` on a uniform grid; poles come back as flagged points.
pub fn scan_im_c(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    side: Side,
    e_min: &Real,
    e_max: &Real,
    step: &Real,
    trunc: &TruncationParams,
) -> Result<Vec<ScanPoint>> {
    check_trunc(ev, trunc)?;
    check_pair(ev, pair)?;
    let grid = energy_grid(&ev.ctx(), e_min, e_max, step)?;
    grid.into_par_iter()
        .map(|e| match connection_at(ev, pair, side, &e, trunc.radius) {
            Ok(c) => Ok(ScanPoint { energy: e, c: Some(c) }),
            Err(Error::Pole { .. }) => Ok(ScanPoint { energy: e, c: None }),
            Err(other) => Err(other),
        })
        .collect()
}

/// Index pairs `(j, j + 1)` of neighbouring unflagged points whose `Im c` differ in sign.
pub fn sign_changes(points: &[ScanPoint]) -> Vec<(usize, usize)> {
    sign_changes_by(points.len(), |j| points[j].im_c().cloned())
}

fn sign_changes_by(len: usize, value: impl Fn(usize) -> Option<Float>) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut prev: Option<(usize, Float)> = None;
    for j in 0..len {
        let Some(b) = value(j) else {
            // Im c changes sign through a pole without a root
            prev = None;
            continue;
        };
        if let Some((i, a)) = &prev {
            if (a.is_sign_negative() != b.is_sign_negative()) || b.is_zero() {
                out.push((*i, j));
            }
        }
        prev = Some((j, b));
    }
    out
}

/// Bracketed root of a real function: bisection down to `switch_width`,
/// then Illinois (safeguarded false position) until the bracket is below `tol`.
pub fn bracketed_root<F>(f: F, lo: &Real, hi: &Real, tol: &Real, switch_width: &Real) -> Result<Real>
where
    F: Fn(&Real) -> Result<Real>,
{
    let bits = lo.prec().max(hi.prec());
    let (mut a, mut b) = if lo <= hi { (lo.clone(), hi.clone()) } else { (hi.clone(), lo.clone()) };
    let mut fa = f(&a)?;
    let mut fb = f(&b)?;
    if fa.is_zero() {
        return Ok(a);
    }
    if fb.is_zero() {
        return Ok(b);
    }
    if fa.is_sign_negative() == fb.is_sign_negative() {
        return Err(Error::Bracket {
            lo: a.to_string_radix(10, Some(20)),
            hi: b.to_string_radix(10, Some(20)),
        });
    }
    let start_scale = Float::with_val(bits, fa.abs_ref()).max(&Float::with_val(bits, fb.abs_ref()));
    // Which end was kept on the previous false-position step (-1 left, +1 right).
    let mut kept = 0i8;
    let mut last_width = Float::with_val(bits, &b - &a);
    let mut force_bisect = false;
    for _ in 0..10_000 {
        let width = Float::with_val(bits, &b - &a);
        if width <= *tol {
            break;
        }
        let use_bisection = force_bisect || width > *switch_width;
        let x = if use_bisection {
            Float::with_val(bits, &a + &b) / 2
        } else {
            // x = (a fb - b fa) / (fb - fa)
            let num = Float::with_val(bits, &a * &fb) - Float::with_val(bits, &b * &fa);
            let den = Float::with_val(bits, &fb - &fa);
            let x = num / den;
            if x <= a || x >= b || !x.is_finite() {
                Float::with_val(bits, &a + &b) / 2
            } else {
                x
            }
        };
        let fx = f(&x)?;
        if fx.is_zero() {
            return Ok(x);
        }
        if fx.is_sign_negative() == fa.is_sign_negative() {
            a = x;
            fa = fx;
            if !use_bisection && kept == 1 {
                fb /= 2;
            }
            kept = 1;
        } else {
            b = x;
            fb = fx;
            if !use_bisection && kept == -1 {
                fa /= 2;
            }
            kept = -1;
        }
        let new_width = Float::with_val(bits, &b - &a);
        force_bisect = !use_bisection && new_width > Float::with_val(bits, &last_width / 2);
        last_width = new_width;
    }
    // A pole masquerades as a sign change whose |f| grows as the bracket closes.
    let end_scale = Float::with_val(bits, fa.abs_ref()).min(&Float::with_val(bits, fb.abs_ref()));
    if end_scale > start_scale {
        return Err(Error::Pole { energy: a.to_string_radix(10, Some(20)) });
    }
    Ok(if Float::with_val(bits, fa.abs_ref()) <= Float::with_val(bits, fb.abs_ref()) { a } else { b })
}

/// Default bracket tolerance: `10^-(digits - 5)`.
pub fn default_tol(ctx: &PrecisionContext) -> Real {
    ctx.ten_pow_neg(ctx.digits().saturating_sub(5).max(1) as i32)
}

fn switch_width(ctx: &PrecisionContext) -> Real {
    ctx.ten_pow_neg(5)
}

fn im_c_fn<'a>(
    ev: &'a SeriesEvaluator,
    pair: &'a WedgePair,
    side: Side,
    radius: f64,
) -> impl Fn(&Real) -> Result<Real> + 'a {
    move |e: &Real| connection_at(ev, pair, side, e, radius).map(|c| c.imag().clone())
}

/// Re-solves at `0.9 r` starting from a narrow bracket around `energy`;
/// falls back to the original bracket. Returns `|E(r) - E(0.9r)|`.
fn radius_error(
    f09: impl Fn(&Real) -> Result<Real> + Copy,
    energy: &Real,
    original: (&Real, &Real),
    tol: &Real,
    ctx: &PrecisionContext,
) -> f64 {
    let bits = ctx.bits();
    let scale = Float::with_val(bits, energy.abs_ref()).max(&ctx.real(1));
    let mut delta = Float::with_val(bits, &scale * ctx.ten_pow_neg(24));
    let sw = switch_width(ctx);
    let half_window = Float::with_val(bits, original.1 - original.0) / 2;
    while delta < half_window {
        let lo = Float::with_val(bits, energy - &delta);
        let hi = Float::with_val(bits, energy + &delta);
        if let Ok(e2) = bracketed_root(f09, &lo, &hi, tol, &sw) {
            return Float::with_val(bits, &e2 - energy).abs().to_f64();
        }
        delta *= 10_000;
    }
    match bracketed_root(f09, original.0, original.1, tol, &sw) {
        Ok(e2) => Float::with_val(bits, &e2 - energy).abs().to_f64(),
        Err(_) => f64::INFINITY,
    }
}

fn diagnostics(ctx: &PrecisionContext, trunc: &TruncationParams, est_error: f64) -> Diagnostics {
    let limit = 10f64.powf(-(f64::from(ctx.digits()) / 2.0));
    Diagnostics {
        pmax: trunc.pmax,
        radius: trunc.radius,
        digits: ctx.digits(),
        est_error,
        consistent: est_error <= limit,
    }
}

/// Refines a sign change of `Im c` on `bracket` to width `tol`.
///
/// The returned level has `n = 0`; [`spectrum`] numbers levels in order.
pub fn refine_root(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    side: Side,
    bracket: (&Real, &Real),
    tol: &Real,
    trunc: &TruncationParams,
) -> Result<EnergyLevel> {
    check_trunc(ev, trunc)?;
    check_pair(ev, pair)?;
    let ctx = ev.ctx();
    let f = im_c_fn(ev, pair, side, trunc.radius);
    let energy = bracketed_root(&f, bracket.0, bracket.1, tol, &switch_width(&ctx))?;
    let c = connection_at(ev, pair, side, &energy, trunc.radius)?;
    let f09 = im_c_fn(ev, pair, side, 0.9 * trunc.radius);
    let est = radius_error(&f09, &energy, bracket, tol, &ctx);
    Ok(EnergyLevel {
        n: 0,
        energy,
        c: Some(c.real().clone()),
        parity: None,
        pair: *pair,
        diagnostics: diagnostics(&ctx, trunc, est),
    })
}

/// Scan/refine settings shared by [`spectrum`] and [`quantize_p_symmetric`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Grid step of the coarse scan.
    pub step: Real,
    /// Bracket width at which refinement stops.
    pub tol: Real,
    /// Width of each scan chunk.
    pub chunk: Real,
    /// Largest `|E|` the search may reach.
    pub e_limit: Real,
    pub side: Side,
}

impl SearchOptions {
    pub fn new(ctx: &PrecisionContext) -> Self {
        Self {
            step: ctx.parse_real("0.05").expect("literal"),
            tol: default_tol(ctx),
            chunk: ctx.real(5),
            e_limit: ctx.real(1000),
            side: Side::Right,
        }
    }
}

/// Chunked upward (`dir = 1`) or downward (`dir = -1`) scan from 0 collecting
/// sign-change brackets of `value` until `wanted` are found.
fn collect_brackets(
    ctx: &PrecisionContext,
    value: &(dyn Fn(&Real) -> Option<Real> + Sync),
    dir: i32,
    wanted: usize,
    opts: &SearchOptions,
    healthy: &dyn Fn(&Real) -> Result<()>,
) -> Result<Vec<(Real, Real)>> {
    let bits = ctx.bits();
    let per_chunk = Float::with_val(bits, &opts.chunk / &opts.step).to_f64();
    if !(per_chunk.is_finite() && per_chunk < MAX_SCAN_POINTS as f64) || opts.step <= 0 {
        return Err(Error::Parameter("bad scan step or chunk width".into()));
    }
    let per_chunk = ((per_chunk + 1e-9).floor() as u64).max(1);
    let signed_step = if dir > 0 { opts.step.clone() } else { Float::with_val(bits, -&opts.step) };
    let mut out: Vec<(Real, Real)> = Vec::new();
    let mut start = ctx.real(0);
    let mut prev: Option<(Real, Option<Real>)> = None;
    while out.len() < wanted {
        if Float::with_val(bits, start.abs_ref()) >= opts.e_limit {
            return Err(Error::Truncation(format!(
                "only {} of {wanted} levels below |E| = {}",
                out.len(),
                opts.e_limit.to_f64()
            )));
        }
        let point = |j: u64| {
            let mut e = Float::with_val(bits, &signed_step * j);
            e += &start;
            e
        };
        healthy(&point(per_chunk))?;
        // Point 0 of a later chunk repeats the last point of the previous one.
        let first = u64::from(prev.is_some());
        let vals: Vec<(Real, Option<Real>)> = (first..=per_chunk)
            .into_par_iter()
            .map(|j| {
                let e = point(j);
                let v = value(&e);
                (e, v)
            })
            .collect();
        let mut seq: Vec<(Real, Option<Real>)> = prev.take().into_iter().collect();
        seq.extend(vals);
        for (j0, j1) in sign_changes_by(seq.len(), |j| seq[j].1.clone()) {
            let (a, b) = (seq[j0].0.clone(), seq[j1].0.clone());
            out.push(if a <= b { (a, b) } else { (b, a) });
        }
        prev = seq.pop();
        start = prev.as_ref().map(|p| p.0.clone()).expect("chunk is non-empty");
    }
    Ok(out)
}

/// Tail health at a single energy: fails when the truncation is not trustworthy there.
fn tail_guard<'a>(
    ev: &'a SeriesEvaluator,
    pair: &'a WedgePair,
    trunc: &'a TruncationParams,
) -> impl Fn(&Real) -> Result<()> + 'a {
    move |e: &Real| {
        let ratio = tail_ratio(ev, pair, trunc.radius, e);
        let threshold = 10f64.powf(-(f64::from(ev.ctx().digits()) / 2.0));
        if ratio < threshold {
            Ok(())
        } else {
            Err(Error::Truncation(format!(
                "antidiagonal tail ratio {ratio:.3e} at E = {} exceeds {threshold:.1e}",
                e.to_f64()
            )))
        }
    }
}

/// First `n_levels` eigenvalues of the pair, in increasing order.
pub fn spectrum(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    n_levels: usize,
    trunc: &TruncationParams,
    opts: &SearchOptions,
) -> Result<Vec<EnergyLevel>> {
    check_trunc(ev, trunc)?;
    check_pair(ev, pair)?;
    if n_levels == 0 {
        return Err(Error::Parameter("n_levels must be at least 1".into()));
    }
    if pair.p_symmetric {
        // c is real (imaginary-axis pair) or purely imaginary (real-axis pair) for every real E.
        return Err(Error::Parameter(
            "Im c does not quantise a P-symmetric pair; use parity quantisation".into(),
        ));
    }
    let ctx = ev.ctx();
    let f = im_c_fn(ev, pair, opts.side, trunc.radius);
    let value = |e: &Real| f(e).ok();
    let guard = tail_guard(ev, pair, trunc);
    let mut levels: Vec<EnergyLevel> = Vec::new();
    let mut want = n_levels;
    // Pole crossings also change the sign of Im c; widen the search until
    // enough genuine roots are found.
    loop {
        let brackets = collect_brackets(&ctx, &value, 1, want, opts, &guard)?;
        levels.clear();
        for (lo, hi) in &brackets {
            match refine_root(ev, pair, opts.side, (lo, hi), &opts.tol, trunc) {
                Ok(level) => levels.push(level),
                Err(Error::Pole { .. }) => {}
                Err(e) => return Err(e),
            }
            if levels.len() == n_levels {
                break;
            }
        }
        if levels.len() >= n_levels {
            break;
        }
        want += n_levels - levels.len();
    }
    for (i, l) in levels.iter_mut().enumerate() {
        l.n = i;
    }
    Ok(levels)
}

/// The real-valued function whose zeros quantise a P-symmetric pair:
/// `psi1(z*)` for even states, `psi2(z*) / (i e^{i theta})` for odd ones, at `z* = r e^{i theta}`.
pub fn parity_function(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    parity: Parity,
    energy: &Real,
    radius: f64,
) -> ComplexHP {
    let ctx = ev.ctx();
    let theta = pair.theta_right.to_real(&ctx);
    let z = ctx.polar(&ctx.real(radius), &theta);
    let e = ctx.complex(energy);
    let jet = ev.eval_solution(parity.solution(), &z, &e, 0);
    match parity {
        Parity::Even => jet.value,
        Parity::Odd => {
            let unit = ctx.polar(&ctx.real(1), &theta) * Complex::with_val(ctx.bits(), (0, 1));
            Complex::with_val(ctx.bits(), &jet.value / &unit)
        }
    }
}

/// Levels of a P-symmetric pair as zeros of the pure even or odd solution
/// at the evaluation radius. On the imaginary-axis pair the energies are
/// negative; levels are then numbered by increasing `|E|`.
pub fn quantize_p_symmetric(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    parity: Parity,
    n_levels: usize,
    trunc: &TruncationParams,
    opts: &SearchOptions,
) -> Result<Vec<EnergyLevel>> {
    check_trunc(ev, trunc)?;
    check_pair(ev, pair)?;
    if !pair.p_symmetric {
        return Err(Error::Parameter("parity quantisation needs a P-symmetric pair".into()));
    }
    if n_levels == 0 {
        return Err(Error::Parameter("n_levels must be at least 1".into()));
    }
    let ctx = ev.ctx();
    let f = |r: f64| move |e: &Real| -> Result<Real> {
        Ok(parity_function(ev, pair, parity, e, r).real().clone())
    };
    let value = |e: &Real| f(trunc.radius)(e).ok();
    let dir = if pair.on_imaginary_axis() { -1 } else { 1 };
    let guard = tail_guard(ev, pair, trunc);
    let brackets = collect_brackets(&ctx, &value, dir, n_levels, opts, &guard)?;
    let sw = switch_width(&ctx);
    let mut levels = Vec::with_capacity(n_levels);
    for (i, (lo, hi)) in brackets.iter().take(n_levels).enumerate() {
        let energy = bracketed_root(f(trunc.radius), lo, hi, &opts.tol, &sw)?;
        let est = radius_error(f(0.9 * trunc.radius), &energy, (lo, hi), &opts.tol, &ctx);
        levels.push(EnergyLevel {
            n: i,
            energy,
            c: None,
            parity: Some(parity),
            pair: *pair,
            diagnostics: diagnostics(&ctx, trunc, est),
        });
    }
    Ok(levels)
}

/// `|sum over p+q=P| / |partial sum|`, maximised over both solutions and both
/// wedge centres of the pair at radius `r` and energy `e`.
pub fn tail_ratio(ev: &SeriesEvaluator, pair: &WedgePair, radius: f64, e: &Real) -> f64 {
    let ctx = ev.ctx();
    let energy = ctx.complex(e);
    let mut worst = 0f64;
    for side in [Side::Right, Side::Left] {
        let z = ctx.polar(&ctx.real(radius), &pair.theta(side).to_real(&ctx));
        for sol in [Solution::Even, Solution::Odd] {
            let sums = ev.antidiagonal_sums(sol, &z, &energy);
            let mut total = ctx.zero();
            for s in &sums {
                total += s;
            }
            let last = cabs(sums.last().expect("P >= 1"));
            let ratio = (last / cabs(&total)).to_f64();
            worst = worst.max(if ratio.is_nan() { f64::INFINITY } else { ratio });
        }
    }
    worst
}

/// Outcome of [`health_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HealthReport {
    pub n: u32,
    pub pmax: u32,
    pub radius: f64,
    pub e_max: f64,
    pub digits: u32,
    /// Worst `|last antidiagonal| / |partial sum|` over the pair's wedges.
    pub tail_ratio: f64,
    pub threshold: f64,
    /// `|c(r) - c(0.9 r)| / |c(r)|` at `E_max` (infinite at a pole).
    pub c_discrepancy: f64,
    pub pass: bool,
}

/// Checks that the truncated series is trustworthy out to radius `r` and energy `e_max`.
pub fn health_check(
    ev: &SeriesEvaluator,
    pair: &WedgePair,
    trunc: &TruncationParams,
    e_max: &Real,
) -> Result<HealthReport> {
    check_trunc(ev, trunc)?;
    check_pair(ev, pair)?;
    let ctx = ev.ctx();
    let tail = tail_ratio(ev, pair, trunc.radius, e_max);
    let threshold = 10f64.powf(-(f64::from(ctx.digits()) / 2.0));
    let disc = match (
        connection_at(ev, pair, Side::Right, e_max, trunc.radius),
        connection_at(ev, pair, Side::Right, e_max, 0.9 * trunc.radius),
    ) {
        (Ok(c1), Ok(c2)) => {
            let d = Complex::with_val(ctx.bits(), &c1 - &c2);
            (cabs(&d) / cabs(&c1)).to_f64()
        }
        _ => f64::INFINITY,
    };
    Ok(HealthReport {
        n: ev.n(),
        pmax: trunc.pmax,
        radius: trunc.radius,
        e_max: e_max.to_f64(),
        digits: ctx.digits(),
        tail_ratio: tail,
        threshold,
        c_discrepancy: disc,
        pass: tail < threshold,
    })
}
