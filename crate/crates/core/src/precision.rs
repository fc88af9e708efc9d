//! Working-precision contract and the high-precision number types.
//!
//! All arithmetic is carried out by MPFR/MPC through `rug`, which rounds
//! every operation correctly at the requested binary precision. A
//! [`PrecisionContext`] fixes the number of decimal digits the caller wants
//! and adds a fixed number of guard digits for internal work.

use rug::ops::Pow;
use rug::float::{Constant, Round};
use rug::{Complex, Float, Integer};

use crate::error::{ParseError, Result};
use crate::Error;

/// High-precision real.
pub type Real = Float;
/// High-precision complex value.
pub type ComplexHP = Complex;

pub const DEFAULT_DIGITS: u32 = 40;
pub const GUARD_DIGITS: u32 = 15;
const MAX_DIGITS: u32 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: DEFAULT_DIGITS }
    }
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        if digits == 0 || digits > MAX_DIGITS {
            return Err(Error::Parameter(format!(
                "digits must be in 1..={MAX_DIGITS}, got {digits}"
            )));
        }
        Ok(Self { digits })
    }

    /// Decimal digits reported to the caller.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Decimal digits carried internally.
    pub fn working_digits(&self) -> u32 {
        self.digits + GUARD_DIGITS
    }

    /// Binary precision used for every `Float`/`Complex` built in this context.
    pub fn bits(&self) -> u32 {
        // log2(10) = 3.3219...; the extra word covers the conversion slack.
        (f64::from(self.working_digits()) * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    /// Rejects contexts that are too coarse for `sig_figs` trustworthy output digits.
    pub fn require_output(&self, sig_figs: u32) -> Result<()> {
        if sig_figs >= 20 && self.digits < 25 || self.digits < sig_figs {
            return Err(Error::Parameter(format!(
                "{sig_figs} significant figures requested but only {} digits of working precision",
                self.digits
            )));
        }
        Ok(())
    }

    pub fn real<T>(&self, v: T) -> Real
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), v)
    }

    pub fn complex<T>(&self, v: T) -> ComplexHP
    where
        Complex: rug::Assign<T>,
    {
        Complex::with_val(self.bits(), v)
    }

    pub fn zero(&self) -> ComplexHP {
        Complex::new(self.bits())
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// `10^(-k)` at working precision.
    pub fn ten_pow_neg(&self, k: i32) -> Real {
        let ten = self.real(10);
        Float::with_val(self.bits(), ten.pow(-k))
    }

    /// `r * e^{i theta}` with theta in radians.
    pub fn polar(&self, r: &Real, theta: &Real) -> ComplexHP {
        let (s, c) = theta.clone().sin_cos(self.real(0));
        self.complex((c * r, s * r))
    }

    pub fn parse_real(&self, s: &str) -> Result<Real, ParseError> {
        parse_real_bits(s, self.bits())
    }
}

/// Parses a finite decimal number (plain or scientific notation).
pub fn parse_real_bits(s: &str, bits: u32) -> Result<Real, ParseError> {
    let t = s.trim();
    let ok_chars = !t.is_empty()
        && t.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
    if !ok_chars {
        return Err(ParseError::Number(s.to_string()));
    }
    let parsed = Float::parse(t).map_err(|_| ParseError::Number(s.to_string()))?;
    let v = Float::with_val(bits.max(64), parsed);
    if !v.is_finite() {
        return Err(ParseError::Number(s.to_string()));
    }
    Ok(v)
}

/// Scientific notation with exactly `sig` significant digits, e.g. `-5.3871e-01`.
pub fn format_sci(x: &Float, sig: u32) -> String {
    let sig = sig.max(1) as usize;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if x.is_zero() {
        let mut m = String::from("0");
        if sig > 1 {
            m.push('.');
            m.extend(std::iter::repeat_n('0', sig - 1));
        }
        return format!("{m}e+00");
    }
    // value = 0.d1d2... * 10^exp
    let (neg, digits, exp) = x.to_sign_string_exp_round(10, Some(sig), Round::Nearest);
    let exp = i64::from(exp.unwrap_or(0)) - 1;
    let mut out = String::with_capacity(sig + 8);
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if sig > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    format!("{out}e{exp:+03}")
}

/// Fixed-point notation with `decimals` digits after the point.
pub fn format_fixed(x: &Float, decimals: u32) -> String {
    if !x.is_finite() {
        return format_sci(x, 1);
    }
    let scale = Integer::from(10).pow(decimals);
    let scaled = Float::with_val(x.prec() + 4 * decimals + 8, x * &scale);
    let n = scaled.round().to_integer().unwrap_or_default();
    let neg = n < 0;
    let digits = n.abs().to_string();
    let d = decimals as usize;
    let padded = if digits.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - d);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if d > 0 {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

/// `re` and `im` in scientific notation, joined as `a+bi`.
pub fn format_complex(z: &Complex, sig: u32) -> String {
    let re = format_sci(z.real(), sig);
    let im = format_sci(z.imag(), sig);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Modulus of a complex value as a real at the value's own precision.
pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}
