//! Stokes wedges and their PT-symmetric pairings.
//!
//! For integer `N` the `N + 2` wedge centres (anti-Stokes directions) sit on
//! the lattice `theta_0 + 2 pi k / (N + 2)` with
//! `theta_0 = -pi (N - 2) / (2 (N + 2))`. PT maps the direction `theta` to
//! `-pi - theta`. Angles are kept as exact rational multiples of pi so that
//! lattice membership, reflection and adjacency are integer arithmetic.

use std::fmt;

use serde::Serialize;

use crate::precision::{PrecisionContext, Real};
use crate::series::check_n;
use crate::error::Result;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The angle `pi * num / den`, normalised to `(-pi, pi]` and lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiFraction {
    num: i64,
    den: i64,
}

impl PiFraction {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        // Reduce to (-den, den].
        num = num.rem_euclid(2 * den);
        if num > den {
            num -= 2 * den;
        }
        let g = gcd(num, den).max(1);
        num /= g;
        den /= g;
        Self { num, den }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.num * other.den + other.num * self.den, self.den * other.den)
    }

    pub fn neg(self) -> Self {
        Self::new(-self.num, self.den)
    }

    /// PT image of a direction: `-pi - theta`.
    pub fn pt_image(self) -> Self {
        Self::new(-self.den - self.num, self.den)
    }

    /// Parity image of a direction: `theta + pi`.
    pub fn parity_image(self) -> Self {
        Self::new(self.num + self.den, self.den)
    }

    pub fn to_f64(self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    pub fn to_real(self, ctx: &PrecisionContext) -> Real {
        let pi = ctx.pi();
        pi * self.num / self.den
    }

    /// Exact `cos(theta) > 0` test.
    pub fn in_right_half_plane(self) -> bool {
        // |theta| < pi/2  <=>  2|num| < den
        2 * self.num.abs() < self.den
    }
}

impl fmt::Display for PiFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.num < 0 { "-" } else { "" };
        let n = self.num.abs();
        match (n, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "{sign}π"),
            (n, 1) => write!(f, "{sign}{n}π"),
            (1, d) => write!(f, "{sign}π/{d}"),
            (n, d) => write!(f, "{sign}{n}π/{d}"),
        }
    }
}

impl Serialize for PiFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A pair of non-adjacent wedges mapped onto each other by PT (or, for the
/// imaginary-axis pair of even `N`, by parity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WedgePair {
    /// Lattice index of the right wedge: `theta_right = theta_0 + 2 pi k / (N + 2)`.
    pub k: i64,
    pub n: u32,
    pub theta_right: PiFraction,
    pub theta_left: PiFraction,
    pub half_width: PiFraction,
    pub p_symmetric: bool,
}

impl WedgePair {
    pub fn theta(&self, side: Side) -> PiFraction {
        match side {
            Side::Right => self.theta_right,
            Side::Left => self.theta_left,
        }
    }

    /// Whether direction `theta` lies strictly inside one of the two wedges.
    pub fn contains_direction(&self, theta: PiFraction) -> bool {
        let inside = |centre: PiFraction| {
            let d = theta.add(centre.neg());
            // |d| < half_width, compared exactly.
            (d.num.abs() as i128) * (self.half_width.den as i128)
                < (self.half_width.num as i128) * (d.den as i128)
        };
        inside(self.theta_right) || inside(self.theta_left)
    }

    /// True for the pair lying on the imaginary axis (even `N` only).
    pub fn on_imaginary_axis(&self) -> bool {
        self.theta_right == PiFraction::new(-1, 2)
    }
}

/// One of the two wedges of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Side {
    #[default]
    Right,
    Left,
}

/// Centre of the wedge that carries the standard spectrum: `-pi (N-2) / (2 (N+2))`.
pub fn ground_angle(n: u32) -> Result<PiFraction> {
    check_n(n)?;
    let n = i64::from(n);
    Ok(PiFraction::new(-(n - 2), 2 * (n + 2)))
}

/// All `N + 2` wedge centres, lattice index `k = 0..N+2` from the ground angle.
pub fn wedge_centers(n: u32) -> Result<Vec<PiFraction>> {
    let g = ground_angle(n)?;
    let m = i64::from(n) + 2;
    Ok((0..m).map(|k| g.add(PiFraction::new(2 * k, m))).collect())
}

/// Lattice index (mod `N+2`) of a centre, or `None` if `theta` is off the lattice.
pub fn lattice_index(n: u32, theta: PiFraction) -> Option<i64> {
    let centers = wedge_centers(n).ok()?;
    centers.iter().position(|c| *c == theta).map(|i| i as i64)
}

/// PT-symmetric wedge pairs ordered by decreasing `theta_right`.
///
/// Odd `N` yields `(N - 1) / 2` pairs, even `N` yields `(N + 2) / 2`; the last
/// pair for even `N` is the imaginary-axis pair `{-pi/2, pi/2}`, which PT maps
/// onto itself wedge by wedge and which parity swaps.
pub fn pt_pairs(n: u32) -> Result<Vec<WedgePair>> {
    let centers = wedge_centers(n)?;
    let m = centers.len() as i64;
    let half_width = PiFraction::new(1, m);
    let g = ground_angle(n)?;
    let index_of = |t: PiFraction| centers.iter().position(|c| *c == t).map(|i| i as i64);
    let adjacent = |i: i64, j: i64| (i - j).rem_euclid(m) == 1 || (j - i).rem_euclid(m) == 1;

    let mut pairs = Vec::new();
    for (i, &t) in centers.iter().enumerate() {
        if !t.in_right_half_plane() {
            continue;
        }
        let image = t.pt_image();
        let j = index_of(image).expect("PT maps the lattice onto itself");
        if adjacent(i as i64, j) {
            continue;
        }
        let k = lattice_k(g, t, m);
        pairs.push(WedgePair {
            k,
            n,
            theta_right: t,
            theta_left: image,
            half_width,
            p_symmetric: image == t.parity_image(),
        });
    }
    let down = PiFraction::new(-1, 2);
    let up = PiFraction::new(1, 2);
    if index_of(down).is_some() && index_of(up).is_some() {
        pairs.push(WedgePair {
            k: -1,
            n,
            theta_right: down,
            theta_left: up,
            half_width,
            p_symmetric: true,
        });
    }
    pairs.sort_by(|a, b| b.theta_right.to_f64().total_cmp(&a.theta_right.to_f64()));
    Ok(pairs)
}

fn lattice_k(g: PiFraction, t: PiFraction, m: i64) -> i64 {
    // t - g = 2 pi k / m, with k taken in (-m/2, m/2].
    let d = t.add(g.neg());
    let k = d.num * m / (2 * d.den);
    if k > m / 2 {
        k - m
    } else {
        k
    }
}
