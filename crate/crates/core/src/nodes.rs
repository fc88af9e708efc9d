//! Zeros of eigenfunctions in the complex plane.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float};

use crate::error::Result;
use crate::precision::{cabs, ComplexHP, PrecisionContext, Real};
use crate::quantize::EnergyLevel;
use crate::series::{SeriesEvaluator, TruncationParams};
use crate::Error;

pub const MAX_NEWTON_STEPS: usize = 100;
/// `|Re z|` below this puts a node on the imaginary axis.
pub const AXIS_THRESHOLD: f64 = 1e-10;
/// Digits used for the coarse `|psi|` grid that seeds Newton.
const GRID_DIGITS: u32 = 20;
const MAX_GRID_POINTS: usize = 4_000_000;

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
        if !ok {
            return Err(Error::Parameter(format!(
                "degenerate region [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    /// `[-1.2 s, 1.2 s] x [-1.2 s, 0]` with `s = |E|^(1/N)`: the lower half-plane
    /// box spanning the turning points.
    pub fn below_axis(level: &EnergyLevel) -> Self {
        let s = 1.2 * level.energy.to_f64().abs().powf(1.0 / f64::from(level.pair.n));
        Self { x0: -s, x1: s, y0: -s, y1: 0.0 }
    }

    pub fn contains(&self, z: &ComplexHP, slack: f64) -> bool {
        let (x, y) = (z.real().to_f64(), z.imag().to_f64());
        x >= self.x0 - slack && x <= self.x1 + slack && y >= self.y0 - slack && y <= self.y1 + slack
    }

    fn max_modulus(&self) -> f64 {
        [
            (self.x0, self.y0),
            (self.x0, self.y1),
            (self.x1, self.y0),
            (self.x1, self.y1),
        ]
        .iter()
        .map(|(x, y)| x.hypot(*y))
        .fold(0.0, f64::max)
    }
}

/// Newton iteration `z <- z - psi / psi'` on the eigenfunction of `level`.
pub fn newton_zero(
    ev: &SeriesEvaluator,
    level: &EnergyLevel,
    z0: &ComplexHP,
    tol: &Real,
    trunc: &TruncationParams,
) -> Result<ComplexHP> {
    let ctx = ev.ctx();
    let bits = ctx.bits();
    let mut z = Complex::with_val(bits, z0);
    let mut last_step = f64::NAN;
    for _ in 0..MAX_NEWTON_STEPS {
        let jet = level.psi(ev, &z, 1);
        let dpsi = jet.d1();
        let scale = Float::with_val(bits, cabs(dpsi) * cabs(&z)).max(&ctx.real(1));
        if cabs(&jet.value) <= Float::with_val(bits, tol * &scale) {
            return Ok(z);
        }
        if dpsi.is_zero() {
            break;
        }
        let step = Complex::with_val(bits, &jet.value / dpsi);
        last_step = cabs(&step).to_f64();
        z -= &step;
        if cabs(&z).to_f64() > trunc.radius {
            return Err(Error::Radius { radius: trunc.radius });
        }
    }
    Err(Error::Divergence { iterations: MAX_NEWTON_STEPS, last_step: format!("{last_step:.3e}") })
}

/// Zeros found in a region, split by location.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub level: EnergyLevel,
    /// On the positive imaginary axis.
    pub axis_nodes: Vec<ComplexHP>,
    /// Strictly below the real axis.
    pub arch_nodes: Vec<ComplexHP>,
    /// Anything else that was found.
    pub other_nodes: Vec<ComplexHP>,
    /// Roots of `E + (iz)^N = 0`, ordered by argument.
    pub turning_points: Vec<ComplexHP>,
    /// Seeds whose Newton iteration failed, with the reason.
    pub failed_seeds: Vec<(ComplexHP, String)>,
}

impl NodeSet {
    pub fn all_nodes(&self) -> impl Iterator<Item = &ComplexHP> {
        self.axis_nodes.iter().chain(&self.arch_nodes).chain(&self.other_nodes)
    }

    /// Largest distance from a node's PT image `-conj(z)` to the nearest node.
    pub fn pt_defect(&self) -> f64 {
        let nodes: Vec<&ComplexHP> = self.all_nodes().collect();
        nodes
            .iter()
            .map(|z| {
                let img = Complex::with_val(z.prec().0, (-z.real().clone(), z.imag().clone()));
                nodes
                    .iter()
                    .map(|w| cabs(&Complex::with_val(z.prec().0, &img - *w)).to_f64())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

/// Roots of `E + (iz)^N = 0`: `z = -i |E|^(1/N) e^{i pi (2j + 1) / N}` for `E > 0`.
pub fn turning_points(ctx: &PrecisionContext, n: u32, energy: &Real) -> Vec<ComplexHP> {
    let bits = ctx.bits();
    let pi = ctx.pi();
    let mag = Float::with_val(bits, energy.abs_ref()).pow(Float::with_val(bits, 1) / n);
    // For E < 0 the right-hand side flips sign and the phases shift by pi.
    let shift = if energy.is_sign_negative() { 0 } else { 1 };
    let mut pts: Vec<ComplexHP> = (0..n)
        .map(|j| {
            let phase = Float::with_val(bits, &pi * (2 * j + shift)) / n - Float::with_val(bits, &pi / 2);
            ctx.polar(&mag, &phase)
        })
        .collect();
    pts.sort_by(|a, b| {
        let aa = Float::with_val(bits, a.arg_ref()).to_f64();
        let bb = Float::with_val(bits, b.arg_ref()).to_f64();
        aa.total_cmp(&bb)
    });
    pts
}

/// `ln |psi|` on the grid of `region` with spacing `step`, row-major from `(x0, y0)`.
pub fn log_modulus_grid(
    ev: &SeriesEvaluator,
    level: &EnergyLevel,
    region: &Region,
    step: f64,
) -> Result<(usize, usize, Vec<f64>)> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Parameter(format!("grid step must be positive, got {step}")));
    }
    let nx = ((region.x1 - region.x0) / step + 1e-9).floor() as usize + 1;
    let ny = ((region.y1 - region.y0) / step + 1e-9).floor() as usize + 1;
    if nx.saturating_mul(ny) > MAX_GRID_POINTS {
        return Err(Error::Parameter("node grid too large".into()));
    }
    let coarse = PrecisionContext::new(GRID_DIGITS.min(ev.ctx().digits()))?;
    let cev = SeriesEvaluator::shared(ev.n(), ev.pmax(), coarse)?;
    let bits = coarse.bits();
    let mut lvl = level.clone();
    lvl.energy = Float::with_val(bits, &level.energy);
    lvl.c = level.c.as_ref().map(|c| Float::with_val(bits, c));
    let vals: Vec<f64> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let z = coarse.complex((region.x0 + i as f64 * step, region.y0 + j as f64 * step));
            let v = lvl.psi(&cev, &z, 0).value;
            cabs(&v).ln().to_f64()
        })
        .collect();
    Ok((nx, ny, vals))
}

/// Seeds Newton at local minima of `|psi|` on a grid, refines, deduplicates
/// within `10 tol`, and classifies the zeros that land inside `region`.
pub fn find_nodes(
    ev: &SeriesEvaluator,
    level: &EnergyLevel,
    region: &Region,
    grid_step: f64,
    tol: &Real,
    trunc: &TruncationParams,
) -> Result<NodeSet> {
    if region.max_modulus() > trunc.radius {
        return Err(Error::Radius { radius: trunc.radius });
    }
    let ctx = ev.ctx();
    let bits = ctx.bits();
    let (nx, ny, grid) = log_modulus_grid(ev, level, region, grid_step)?;
    let at = |i: usize, j: usize| grid[j * nx + i];
    let mut seeds = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let v = at(i, j);
            let mut is_min = !v.is_nan();
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    if at(ii as usize, jj as usize) < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push(ctx.complex((
                    region.x0 + i as f64 * grid_step,
                    region.y0 + j as f64 * grid_step,
                )));
            }
        }
    }
    let results: Vec<(ComplexHP, Result<ComplexHP>)> = seeds
        .into_par_iter()
        .map(|s| {
            let r = newton_zero(ev, level, &s, tol, trunc);
            (s, r)
        })
        .collect();

    let dedup = Float::with_val(bits, tol * 10u32).max(&ctx.ten_pow_neg(ctx.digits() as i32 / 2));
    let slack = grid_step * 1e-6;
    let mut found: Vec<ComplexHP> = Vec::new();
    let mut failed = Vec::new();
    for (seed, r) in results {
        match r {
            Ok(z) => {
                if !region.contains(&z, slack) {
                    continue;
                }
                let dup = found
                    .iter()
                    .any(|w| cabs(&Complex::with_val(bits, &z - w)) <= dedup);
                if !dup {
                    found.push(z);
                }
            }
            Err(e) => failed.push((seed, e.to_string())),
        }
    }
    found.sort_by(|a, b| {
        let key = |z: &ComplexHP| (z.imag().to_f64(), z.real().to_f64());
        let (ka, kb) = (key(a), key(b));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });

    let mut set = NodeSet {
        level: level.clone(),
        axis_nodes: Vec::new(),
        arch_nodes: Vec::new(),
        other_nodes: Vec::new(),
        turning_points: turning_points(&ctx, level.pair.n, &level.energy),
        failed_seeds: failed,
    };
    for z in found {
        let on_axis = z.real().to_f64().abs() < AXIS_THRESHOLD;
        if on_axis && z.imag().is_sign_positive() && !z.imag().is_zero() {
            set.axis_nodes.push(z);
        } else if z.imag().is_sign_negative() && !z.imag().is_zero() {
            set.arch_nodes.push(z);
        } else {
            set.other_nodes.push(z);
        }
    }
    Ok(set)
}
