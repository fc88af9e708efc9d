//! The two fundamental double power series solutions.
//!
//! ```text
//! psi1(z) = sum a[p][q] (iz)^((N+2)p + 2q)     E^q,   a[0][0] = 1
//! psi2(z) = sum b[p][q] (iz)^(1 + (N+2)p + 2q) E^q,   b[0][0] = 1
//! ```
//!
//! Substituting into `-psi'' - (iz)^N psi = E psi` gives
//!
//! ```text
//! k (k - 1) a[p][q] = a[p-1][q] + a[p][q-1],   k = (N+2)p + 2q
//! k (k + 1) b[p][q] = b[p-1][q] + b[p][q-1]
//! ```
//!
//! so every coefficient is a positive rational fixed by its upper and left
//! neighbours. Only the antidiagonal triangle `p + q <= P` is ever built.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::Mutex;
use rug::ops::Pow;
use rug::{Assign, Complex, Float, Integer, Rational};

use crate::error::{ParseError, Result};
use crate::precision::{ComplexHP, PrecisionContext};
use crate::Error;

/// Upper bound on `P` accepted anywhere (table builds grow as `P^2` rationals).
pub const MAX_PMAX: u32 = 400;
/// Upper bound on `N`; larger exponents make `(iz)^N` meaningless at any useful radius.
pub const MAX_N: u32 = 200;

/// Antidiagonal cutoff and evaluation radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationParams {
    pub pmax: u32,
    pub radius: f64,
}

impl Default for TruncationParams {
    fn default() -> Self {
        Self { pmax: 100, radius: 8.0 }
    }
}

impl TruncationParams {
    pub fn new(pmax: u32, radius: f64) -> Result<Self> {
        let t = Self { pmax, radius };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pmax < 1 || self.pmax > MAX_PMAX {
            return Err(Error::Parameter(format!(
                "pmax must be in 1..={MAX_PMAX}, got {}",
                self.pmax
            )));
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::Parameter(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..*self }
    }
}

/// Which of the two fundamental solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solution {
    /// Even solution, `psi1(0) = 1`, `psi1'(0) = 0`.
    Even,
    /// Odd solution, `psi2(0) = 0`, `psi2'(0) = i`.
    Odd,
}

impl Solution {
    /// Power of `iz` carried by the `(0, 0)` term.
    fn offset(self) -> u64 {
        match self {
            Solution::Even => 0,
            Solution::Odd => 1,
        }
    }
}

#[inline]
fn tri_index(p: u32, q: u32) -> usize {
    let s = (p + q) as usize;
    s * (s + 1) / 2 + p as usize
}

/// Exact coefficient tables `a[p][q]`, `b[p][q]` for `p + q <= P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    n: u32,
    pmax: u32,
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl CoefficientTable {
    /// Builds both tables by running the recursions antidiagonal by antidiagonal.
    pub fn build(n: u32, pmax: u32) -> Result<Self> {
        check_n(n)?;
        if !(1..=MAX_PMAX).contains(&pmax) {
            return Err(Error::Parameter(format!(
                "P must be in 1..={MAX_PMAX}, got {pmax}"
            )));
        }
        let len = entry_count(pmax);
        let mut a: Vec<Rational> = Vec::with_capacity(len);
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        let step = u64::from(n) + 2;
        for s in 0..=pmax {
            for p in 0..=s {
                let q = s - p;
                if s == 0 {
                    a.push(Rational::from(1));
                    b.push(Rational::from(1));
                    continue;
                }
                let k = step * u64::from(p) + 2 * u64::from(q);
                let mut sa = Rational::new();
                let mut sb = Rational::new();
                if p > 0 {
                    sa += &a[tri_index(p - 1, q)];
                    sb += &b[tri_index(p - 1, q)];
                }
                if q > 0 {
                    sa += &a[tri_index(p, q - 1)];
                    sb += &b[tri_index(p, q - 1)];
                }
                sa /= Integer::from(k) * (k - 1);
                sb /= Integer::from(k) * (k + 1);
                a.push(sa);
                b.push(sb);
            }
        }
        Ok(Self { n, pmax, a, b })
    }

    /// Shared, immutable table for `(N, P)`; built at most once per process.
    pub fn shared(n: u32, pmax: u32) -> Result<Arc<Self>> {
        static CACHE: Lazy<Mutex<HashMap<(u32, u32), Arc<CoefficientTable>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        if let Some(t) = CACHE.lock().get(&(n, pmax)) {
            return Ok(t.clone());
        }
        let t = Arc::new(Self::build(n, pmax)?);
        Ok(CACHE.lock().entry((n, pmax)).or_insert(t).clone())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn pmax(&self) -> u32 {
        self.pmax
    }

    /// Number of stored `(p, q)` pairs per solution.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self, p: u32, q: u32) -> Option<&Rational> {
        (p + q <= self.pmax).then(|| &self.a[tri_index(p, q)])
    }

    pub fn b(&self, p: u32, q: u32) -> Option<&Rational> {
        (p + q <= self.pmax).then(|| &self.b[tri_index(p, q)])
    }

    pub fn coeff(&self, sol: Solution, p: u32, q: u32) -> Option<&Rational> {
        match sol {
            Solution::Even => self.a(p, q),
            Solution::Odd => self.b(p, q),
        }
    }

    /// Power of `iz` multiplying the `(p, q)` coefficient of `sol`.
    pub fn exponent(&self, sol: Solution, p: u32, q: u32) -> u64 {
        (u64::from(self.n) + 2) * u64::from(p) + 2 * u64::from(q) + sol.offset()
    }

    /// `(p, q)` in storage order: increasing `p + q`, then increasing `p`.
    pub fn indices(&self) -> impl Iterator<Item = (u32, u32)> {
        let pmax = self.pmax;
        (0..=pmax).flat_map(|s| (0..=s).map(move |p| (p, s - p)))
    }

    /// Checks positivity and both recursion identities exactly; returns the first offending `(p, q)`.
    pub fn verify(&self) -> std::result::Result<(), (u32, u32)> {
        let step = u64::from(self.n) + 2;
        for (p, q) in self.indices() {
            let i = tri_index(p, q);
            let (ai, bi) = (&self.a[i], &self.b[i]);
            if *ai <= 0 || *bi <= 0 {
                return Err((p, q));
            }
            if p == 0 && q == 0 {
                if *ai != 1 || *bi != 1 {
                    return Err((p, q));
                }
                continue;
            }
            let k = step * u64::from(p) + 2 * u64::from(q);
            let mut ra = Rational::from(ai * Integer::from(k * (k - 1)));
            let mut rb = Rational::from(bi * Integer::from(k * (k + 1)));
            if p > 0 {
                ra -= &self.a[tri_index(p - 1, q)];
                rb -= &self.b[tri_index(p - 1, q)];
            }
            if q > 0 {
                ra -= &self.a[tri_index(p, q - 1)];
                rb -= &self.b[tri_index(p, q - 1)];
            }
            if ra != 0 || rb != 0 {
                return Err((p, q));
            }
        }
        Ok(())
    }

    /// Line format: header `N P`, then `p q a_num a_den b_num b_den` per entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.pmax);
        for (p, q) in self.indices() {
            let i = tri_index(p, q);
            let (a, b) = (&self.a[i], &self.b[i]);
            let _ = writeln!(
                out,
                "{p} {q} {} {} {} {}",
                a.numer(),
                a.denom(),
                b.numer(),
                b.denom()
            );
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output. Rows may come in any order but
    /// each `(p, q)` must appear exactly once and the decoded table must satisfy
    /// the recursions exactly.
    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let err = |line: usize, msg: &str| ParseError::Table { line, msg: msg.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let hdr: Vec<&str> = header.split_whitespace().collect();
        if hdr.len() != 2 {
            return Err(err(hl, "header must be `N P`"));
        }
        let n: u32 = hdr[0].parse().map_err(|_| err(hl, "bad N"))?;
        let pmax: u32 = hdr[1].parse().map_err(|_| err(hl, "bad P"))?;
        if !(2..=MAX_N).contains(&n) {
            return Err(err(hl, "N out of range"));
        }
        if !(1..=MAX_PMAX).contains(&pmax) {
            return Err(err(hl, "P out of range"));
        }
        let len = entry_count(pmax);
        let mut a: Vec<Option<Rational>> = vec![None; len];
        let mut b: Vec<Option<Rational>> = vec![None; len];
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 6 {
                return Err(err(ln, "expected 6 fields"));
            }
            let p: u32 = f[0].parse().map_err(|_| err(ln, "bad p"))?;
            let q: u32 = f[1].parse().map_err(|_| err(ln, "bad q"))?;
            if p.checked_add(q).is_none_or(|s| s > pmax) {
                return Err(err(ln, "p + q exceeds P"));
            }
            let i = tri_index(p, q);
            if a[i].is_some() {
                return Err(err(ln, "duplicate entry"));
            }
            a[i] = Some(parse_fraction(f[2], f[3]).ok_or_else(|| err(ln, "bad a fraction"))?);
            b[i] = Some(parse_fraction(f[4], f[5]).ok_or_else(|| err(ln, "bad b fraction"))?);
        }
        let a: Option<Vec<Rational>> = a.into_iter().collect();
        let b: Option<Vec<Rational>> = b.into_iter().collect();
        let (Some(a), Some(b)) = (a, b) else {
            return Err(err(0, "missing entries"));
        };
        let table = Self { n, pmax, a, b };
        table
            .verify()
            .map_err(|(p, q)| err(0, &format!("recursion violated at ({p}, {q})")))?;
        Ok(table)
    }
}

fn parse_fraction(num: &str, den: &str) -> Option<Rational> {
    let plain = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit())
    };
    if !plain(num) || !plain(den) {
        return None;
    }
    let n = Integer::from_str_radix(num, 10).ok()?;
    let d = Integer::from_str_radix(den, 10).ok()?;
    if d <= 0 {
        return None;
    }
    let r = Rational::from((n, d));
    // Canonical form only, so that round trips are exact.
    (r.numer().to_string() == num.trim_start_matches('+') && r.denom().to_string() == den)
        .then_some(r)
}

/// Entries per table for cutoff `P`: `(P+1)(P+2)/2`.
pub fn entry_count(pmax: u32) -> usize {
    let p = pmax as usize;
    (p + 1) * (p + 2) / 2
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if !(2..=MAX_N).contains(&n) {
        return Err(Error::Parameter(format!("N must be in 2..={MAX_N}, got {n}")));
    }
    Ok(())
}

/// Value and (optionally) first two `z`-derivatives of one solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: ComplexHP,
    pub d1: Option<ComplexHP>,
    pub d2: Option<ComplexHP>,
}

impl Jet {
    pub fn d1(&self) -> &ComplexHP {
        self.d1.as_ref().expect("first derivative was not requested")
    }

    pub fn d2(&self) -> &ComplexHP {
        self.d2.as_ref().expect("second derivative was not requested")
    }
}

/// `psi1` and `psi2` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiValues {
    pub psi1: Jet,
    pub psi2: Jet,
}

impl PsiValues {
    pub fn get(&self, sol: Solution) -> &Jet {
        match sol {
            Solution::Even => &self.psi1,
            Solution::Odd => &self.psi2,
        }
    }

    /// `psi1 psi2' - psi1' psi2`; identically `i` for the exact solutions.
    pub fn wronskian(&self) -> ComplexHP {
        let l = Complex::with_val(self.psi1.value.prec(), &self.psi1.value * self.psi2.d1());
        let r = Complex::with_val(self.psi1.value.prec(), self.psi1.d1() * &self.psi2.value);
        l - r
    }
}

/// Coefficient family `c * k (k-1) ... (k-d+1)` for derivative order `d`.
struct Family {
    /// Row `p` holds the `q = 0..=P-p` coefficients.
    rows: Vec<Vec<Float>>,
}

/// The coefficient tables converted once to working precision, plus the
/// scaled copies needed for term-wise differentiation.
pub struct SeriesEvaluator {
    table: Arc<CoefficientTable>,
    ctx: PrecisionContext,
    // [solution][derivative order]
    fam: [[Family; 3]; 2],
}

impl std::fmt::Debug for SeriesEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeriesEvaluator")
            .field("n", &self.table.n)
            .field("pmax", &self.table.pmax)
            .field("digits", &self.ctx.digits())
            .finish()
    }
}

impl SeriesEvaluator {
    pub fn new(table: Arc<CoefficientTable>, ctx: PrecisionContext) -> Self {
        let bits = ctx.bits();
        let build = |sol: Solution, d: u32| -> Family {
            let rows = (0..=table.pmax)
                .map(|p| {
                    (0..=table.pmax - p)
                        .map(|q| {
                            let c = table.coeff(sol, p, q).expect("in range");
                            let k = table.exponent(sol, p, q);
                            let mut f = Integer::from(1);
                            for j in 0..u64::from(d) {
                                f *= k.saturating_sub(j);
                            }
                            Float::with_val(bits, Rational::from(c * f))
                        })
                        .collect()
                })
                .collect();
            Family { rows }
        };
        let fam = [
            [build(Solution::Even, 0), build(Solution::Even, 1), build(Solution::Even, 2)],
            [build(Solution::Odd, 0), build(Solution::Odd, 1), build(Solution::Odd, 2)],
        ];
        Self { table, ctx, fam }
    }

    /// Shared evaluator keyed by `(N, P, digits)`.
    pub fn shared(n: u32, pmax: u32, ctx: PrecisionContext) -> Result<Arc<Self>> {
        type Key = (u32, u32, u32);
        static CACHE: Lazy<Mutex<HashMap<Key, Arc<SeriesEvaluator>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        let key = (n, pmax, ctx.digits());
        if let Some(e) = CACHE.lock().get(&key) {
            return Ok(e.clone());
        }
        let table = CoefficientTable::shared(n, pmax)?;
        let ev = Arc::new(Self::new(table, ctx));
        Ok(CACHE.lock().entry(key).or_insert(ev).clone())
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    pub fn n(&self) -> u32 {
        self.table.n
    }

    pub fn pmax(&self) -> u32 {
        self.table.pmax
    }

    /// Evaluates both solutions and derivatives up to `order` (0, 1 or 2).
    pub fn eval(&self, z: &ComplexHP, energy: &ComplexHP, order: u32) -> PsiValues {
        let order = order.min(2);
        let work = self.prepare(z, energy);
        let jet = |s: usize| Jet {
            value: self.sum(&work, s, 0),
            d1: (order >= 1).then(|| self.sum(&work, s, 1)),
            d2: (order >= 2).then(|| self.sum(&work, s, 2)),
        };
        PsiValues { psi1: jet(0), psi2: jet(1) }
    }

    /// Values only, `(psi1, psi2)`.
    pub fn eval_values(&self, z: &ComplexHP, energy: &ComplexHP) -> (ComplexHP, ComplexHP) {
        let work = self.prepare(z, energy);
        (self.sum(&work, 0, 0), self.sum(&work, 1, 0))
    }

    /// Single solution with the requested derivatives.
    pub fn eval_solution(&self, sol: Solution, z: &ComplexHP, energy: &ComplexHP, order: u32) -> Jet {
        let s = match sol {
            Solution::Even => 0,
            Solution::Odd => 1,
        };
        let work = self.prepare(z, energy);
        Jet {
            value: self.sum(&work, s, 0),
            d1: (order >= 1).then(|| self.sum(&work, s, 1)),
            d2: (order >= 2).then(|| self.sum(&work, s, 2)),
        }
    }

    /// `-psi'' - (iz)^N psi - E psi` for the truncated series of `sol`.
    pub fn residual(&self, sol: Solution, z: &ComplexHP, energy: &ComplexHP) -> ComplexHP {
        let bits = self.ctx.bits();
        let jet = self.eval_solution(sol, z, energy, 2);
        let w = Complex::with_val(bits, z * Complex::with_val(bits, (0, 1)));
        let wn = Complex::with_val(bits, w.pow(self.table.n));
        let mut r = Complex::with_val(bits, -jet.d2());
        r -= Complex::with_val(bits, &wn * &jet.value);
        r -= Complex::with_val(bits, energy * &jet.value);
        r
    }

    /// Per-antidiagonal sums `sum_{p+q=s} a[p][q] (iz)^k E^q` of `sol`, for `s = 0..=P`.
    pub fn antidiagonal_sums(&self, sol: Solution, z: &ComplexHP, energy: &ComplexHP) -> Vec<ComplexHP> {
        let bits = self.ctx.bits();
        let work = self.prepare(z, energy);
        let s_idx = match sol {
            Solution::Even => 0,
            Solution::Odd => 1,
        };
        let fam = &self.fam[s_idx][0];
        let pmax = self.table.pmax;
        let mut out: Vec<ComplexHP> = (0..=pmax).map(|_| Complex::new(bits)).collect();
        let mut tmp = Complex::new(bits);
        for p in 0..=pmax {
            let e0 = (u64::from(self.table.n) + 2) * u64::from(p) + sol.offset();
            for (q, c) in fam.rows[p as usize].iter().enumerate() {
                tmp.assign(&work.upow[q] * c);
                tmp *= &work.wpow[e0 as usize];
                out[(p as usize) + q] += &tmp;
            }
        }
        out
    }

    fn prepare(&self, z: &ComplexHP, energy: &ComplexHP) -> Work {
        let bits = self.ctx.bits();
        let n = u64::from(self.table.n);
        let pmax = self.table.pmax as usize;
        let w = Complex::with_val(bits, z * Complex::with_val(bits, (0, 1)));
        let e = Complex::with_val(bits, energy);
        let max_exp = ((n + 2) * pmax as u64 + 2) as usize;
        let mut wpow = Vec::with_capacity(max_exp + 1);
        wpow.push(Complex::with_val(bits, 1));
        for j in 1..=max_exp {
            let next = Complex::with_val(bits, &wpow[j - 1] * &w);
            wpow.push(next);
        }
        let u = Complex::with_val(bits, &wpow[2] * &e);
        let mut upow = Vec::with_capacity(pmax + 1);
        upow.push(Complex::with_val(bits, 1));
        for q in 1..=pmax {
            let next = Complex::with_val(bits, &upow[q - 1] * &u);
            upow.push(next);
        }
        Work { wpow, upow, e }
    }

    /// `i^d * sum c_d[p][q] w^(k-d) E^q` with `w = iz`.
    fn sum(&self, work: &Work, s: usize, d: usize) -> ComplexHP {
        let bits = self.ctx.bits();
        let fam = &self.fam[s][d];
        let n = u64::from(self.table.n);
        let offset = s as u64;
        let mut total = Complex::new(bits);
        let mut row = Complex::new(bits);
        let mut tmp = Complex::new(bits);
        for (p, coeffs) in fam.rows.iter().enumerate() {
            let e0 = (n + 2) * p as u64 + offset;
            // Lowest q whose term survives differentiation: e0 + 2q >= d.
            let q0 = if e0 >= d as u64 { 0 } else { (d as u64 - e0).div_ceil(2) as usize };
            if q0 >= coeffs.len() {
                continue;
            }
            row.assign(0);
            for (j, c) in coeffs[q0..].iter().enumerate() {
                tmp.assign(&work.upow[j] * c);
                row += &tmp;
            }
            row *= &work.wpow[(e0 + 2 * q0 as u64 - d as u64) as usize];
            for _ in 0..q0 {
                row *= &work.e;
            }
            total += &row;
        }
        match d {
            0 => total,
            1 => total * Complex::with_val(bits, (0, 1)),
            _ => -total,
        }
    }
}

struct Work {
    wpow: Vec<ComplexHP>,
    upow: Vec<ComplexHP>,
    e: ComplexHP,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entries_n3() {
        let t = CoefficientTable::build(3, 4).unwrap();
        assert_eq!(*t.a(0, 0).unwrap(), 1);
        assert_eq!(*t.b(0, 0).unwrap(), 1);
        assert_eq!(*t.a(1, 0).unwrap(), Rational::from((1, 20)));
        assert_eq!(*t.a(0, 1).unwrap(), Rational::from((1, 2)));
        assert_eq!(*t.b(0, 1).unwrap(), Rational::from((1, 6)));
        assert_eq!(*t.b(1, 0).unwrap(), Rational::from((1, 30)));
        assert!(t.a(3, 2).is_none());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(CoefficientTable::build(1, 10), Err(Error::Parameter(_))));
        assert!(matches!(CoefficientTable::build(3, 0), Err(Error::Parameter(_))));
        assert!(TruncationParams::new(100, 0.0).is_err());
        assert!(TruncationParams::new(0, 8.0).is_err());
    }

    #[test]
    fn entry_count_is_triangular() {
        let t = CoefficientTable::build(3, 100).unwrap();
        assert_eq!(t.len(), 5151);
        assert_eq!(entry_count(100), 5151);
        assert_eq!(t.indices().count(), 5151);
    }

    #[test]
    fn verify_catches_tampering() {
        let mut t = CoefficientTable::build(4, 6).unwrap();
        assert!(t.verify().is_ok());
        t.a[tri_index(2, 1)] += Rational::from((1, 1_000_000_007));
        assert_eq!(t.verify(), Err((2, 1)));
    }

    #[test]
    fn text_round_trip() {
        let t = CoefficientTable::build(5, 12).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("5 12\n"));
        assert_eq!(CoefficientTable::from_text(&text).unwrap(), t);
    }

    #[test]
    fn text_rejects_damage() {
        let t = CoefficientTable::build(3, 3).unwrap();
        let text = t.to_text();
        let dropped: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(CoefficientTable::from_text(&dropped).is_err());
        let tampered = text.replacen("1 0 1 20", "1 0 1 21", 1);
        assert!(CoefficientTable::from_text(&tampered).is_err());
        let dup = format!("{text}0 0 1 1 1 1\n");
        assert!(CoefficientTable::from_text(&dup).is_err());
        assert!(CoefficientTable::from_text("").is_err());
        assert!(CoefficientTable::from_text("3 3 3\n").is_err());
        assert!(CoefficientTable::from_text("1 3\n").is_err());
    }

    #[test]
    fn values_at_origin() {
        let ctx = PrecisionContext::new(30).unwrap();
        let ev = SeriesEvaluator::new(CoefficientTable::shared(3, 20).unwrap(), ctx);
        let v = ev.eval(&ctx.zero(), &ctx.complex((7.3, 0)), 2);
        assert_eq!(v.psi1.value, Complex::with_val(53, 1));
        assert!(v.psi1.d1().is_zero());
        assert!(v.psi2.value.is_zero());
        assert_eq!(*v.psi2.d1(), Complex::with_val(53, (0, 1)));
        // psi1'' (0) = -E, psi2''(0) = 0
        assert_eq!(*v.psi1.d2(), ctx.complex((-7.3, 0)));
        assert!(v.psi2.d2().is_zero());
    }
}
