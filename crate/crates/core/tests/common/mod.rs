#![allow(dead_code)]

pub mod shooting;

use std::sync::Arc;

use ptseries::precision::{PrecisionContext, Real};
use ptseries::quantize::{spectrum, EnergyLevel, SearchOptions};
use ptseries::series::{SeriesEvaluator, TruncationParams};
use ptseries::wedges::{pt_pairs, WedgePair};
use rug::Float;

pub struct Setup {
    pub ctx: PrecisionContext,
    pub ev: Arc<SeriesEvaluator>,
    pub pair: WedgePair,
    pub trunc: TruncationParams,
}

pub fn setup(n: u32, pair: usize, pmax: u32, radius: f64, digits: u32) -> Setup {
    let ctx = PrecisionContext::new(digits).unwrap();
    Setup {
        ctx,
        ev: SeriesEvaluator::shared(n, pmax, ctx).unwrap(),
        pair: pt_pairs(n).unwrap()[pair],
        trunc: TruncationParams::new(pmax, radius).unwrap(),
    }
}

impl Setup {
    pub fn levels(&self, count: usize) -> Vec<EnergyLevel> {
        spectrum(&self.ev, &self.pair, count, &self.trunc, &SearchOptions::new(&self.ctx)).unwrap()
    }

    pub fn real(&self, s: &str) -> Real {
        self.ctx.parse_real(s).unwrap()
    }
}

/// `|x - y| / |y|`.
pub fn rel(x: &Real, y: &Real) -> f64 {
    let d = Float::with_val(x.prec().max(y.prec()), x - y);
    (d / y).abs().to_f64()
}

/// Significant digits in a quoted decimal such as `-0.5387155045`.
pub fn quoted_sig(s: &str) -> u32 {
    let mantissa = s.split(['e', 'E']).next().unwrap();
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    digits.trim_start_matches('0').len() as u32
}

/// `|x - quoted| <= units` in the `sig`-th significant digit of `quoted`.
pub fn within_units(x: &Real, quoted: &str, sig: u32, units: f64) -> bool {
    let y = Float::with_val(x.prec(), Float::parse(quoted).unwrap());
    let mag = y.clone().abs().log10().floor().to_f64() as i32;
    let unit = 10f64.powi(mag - sig as i32 + 1);
    let d = Float::with_val(x.prec(), x - &y).abs();
    d.to_f64() <= units * unit
}

/// Agreement to `sig` significant figures: within one unit of the `sig`-th digit,
/// so that both rounded and truncated quotations are accepted.
pub fn matches_sig(x: &Real, quoted: &str, sig: u32) -> bool {
    within_units(x, quoted, sig, 1.0)
}

/// Independent high-precision roots of `Im c` for N = 3 (pair 0, P = 150, r = 8),
/// with the matching `c`, to 25 significant figures.
pub const N3_ORACLE: [(&str, &str); 5] = [
    ("1.156267071988113293799219", "-0.5387155454097590905020113"),
    ("4.109228752809651535843668", "-2.327274240758743340017201"),
    ("7.562273854978828041351809", "-2.698335141902790367089527"),
    ("11.31442182019580440223378", "-3.378234194942584528834972"),
    ("15.29155375039253238818163", "-3.909809260127766591456318"),
];

pub const N3_ENERGIES: [&str; 8] = [
    "1.1562670719881132937",
    "4.1092287528096515358",
    "7.5622738549788280413",
    "11.314421820195804397",
    "15.291553750392532",
    "19.451529130691",
    "23.766740435",
    "28.2175249",
];

pub const N3_C: [&str; 8] = [
    "-0.53871550451988192490",
    "-2.32727424075874334001",
    "-2.69833514190279036708",
    "-3.37823419494258452822",
    "-3.90980926012776641",
    "-4.41178037226863",
    "-4.87570168194",
    "-5.312499663",
];
