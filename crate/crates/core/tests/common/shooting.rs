//! Direct numerical integration of `psi'' = -((iz)^N + E) psi` along two rays,
//! in plain `f64`. Used only to cross-check the series solver.

use num_complex::Complex64;

pub struct Shooter {
    pub n: i32,
    /// Ray directions (radians) of the right and left wedge centres.
    pub theta_right: f64,
    pub theta_left: f64,
    /// Starting distance from the origin.
    pub reach: f64,
    /// RK4 step in the ray parameter.
    pub step: f64,
}

/// Value and `z`-derivative at the origin of the solution that decays along a ray.
fn shoot(n: i32, theta: f64, reach: f64, step: f64, e: Complex64) -> (Complex64, Complex64) {
    let dir = Complex64::from_polar(1.0, theta);
    let i = Complex64::i();
    // y = (psi, d psi / dt) with z = t dir, so d^2 psi / dt^2 = dir^2 Q psi
    let q = |t: f64| -((i * dir * t).powi(n) + e);
    let rhs = |t: f64, y: [Complex64; 2]| [y[1], dir * dir * q(t) * y[0]];
    // WKB start: psi ~ exp(-int sqrt(Q) dz), decaying outward.
    let mut k = (dir * dir * q(reach)).sqrt();
    if k.re < 0.0 {
        k = -k;
    }
    let mut y = [Complex64::new(1.0, 0.0), -k];
    let steps = (reach / step).round() as usize;
    let h = -reach / steps as f64;
    let mut t = reach;
    for _ in 0..steps {
        let k1 = rhs(t, y);
        let y2 = [y[0] + k1[0] * (h / 2.0), y[1] + k1[1] * (h / 2.0)];
        let k2 = rhs(t + h / 2.0, y2);
        let y3 = [y[0] + k2[0] * (h / 2.0), y[1] + k2[1] * (h / 2.0)];
        let k3 = rhs(t + h / 2.0, y3);
        let y4 = [y[0] + k3[0] * h, y[1] + k3[1] * h];
        let k4 = rhs(t + h, y4);
        for j in 0..2 {
            y[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
        }
        // keep magnitudes bounded; only ratios matter
        let s = y[0].norm().max(y[1].norm());
        if s > 1e100 {
            y[0] /= s;
            y[1] /= s;
        }
        t += h;
    }
    let s = y[0].norm().max(y[1].norm());
    (y[0] / s, y[1] / (s * dir))
}

impl Shooter {
    /// Normalised Wronskian of the two decaying shots at `z = 0`, Richardson-extrapolated in the step.
    pub fn mismatch(&self, e: Complex64) -> Complex64 {
        let w = |h: f64| {
            let (a, da) = shoot(self.n, self.theta_right, self.reach, h, e);
            let (b, db) = shoot(self.n, self.theta_left, self.reach, h, e);
            // each shot is scaled to unit size, so W is scale-free
            a * db - da * b
        };
        let coarse = w(self.step);
        let fine = w(self.step / 2.0);
        (fine * 16.0 - coarse) / 15.0
    }

    /// Complex secant iteration on the mismatch starting near `guess`.
    pub fn eigenvalue(&self, guess: f64) -> Complex64 {
        let mut e0 = Complex64::new(guess, 0.0);
        let mut e1 = Complex64::new(guess + 1e-3 * guess.abs().max(1.0), 0.0);
        let mut f0 = self.mismatch(e0);
        let mut f1 = self.mismatch(e1);
        for _ in 0..60 {
            let d = f1 - f0;
            if d.norm() == 0.0 {
                break;
            }
            let e2 = e1 - f1 * (e1 - e0) / d;
            if (e2 - e1).norm() < 1e-14 * e2.norm().max(1.0) {
                return e2;
            }
            e0 = e1;
            f0 = f1;
            e1 = e2;
            f1 = self.mismatch(e1);
        }
        e1
    }

    /// `c` such that the right-wedge solution is `psi1 + c psi2` (with `psi2'(0) = i`).
    pub fn connection(&self, e: f64) -> Complex64 {
        let (a, da) = shoot(self.n, self.theta_right, self.reach, self.step / 2.0, Complex64::new(e, 0.0));
        da / (a * Complex64::i())
    }
}
