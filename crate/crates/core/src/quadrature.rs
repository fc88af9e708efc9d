//! Gauss-Legendre rules in arbitrary precision.

use std::collections::HashMap;
use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::Mutex;
use rug::Float;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<Float>,
    pub weights: Vec<Float>,
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        // k P_k = (2k - 1) x P_{k-1} - (k - 1) P_{k-2}
        let mut p2 = Float::with_val(bits, x * &p1) * (2 * k - 1) as u32;
        p2 -= Float::with_val(bits, &p0 * (k - 1) as u32);
        p2 /= k as u32;
        p0 = p1;
        p1 = p2;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = (Float::with_val(bits, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(bits, x.square_ref()) - 1u32;
    (p1, num / den)
}

impl GaussLegendre {
    /// `n`-point rule with nodes and weights correct to `bits`.
    pub fn new(n: usize, bits: u32) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let work = bits + 32;
        let eps = Float::with_val(work, Float::i_exp(1, -(bits as i32) - 8));
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let guess = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(work, guess);
            for _ in 0..200 {
                let (p, dp) = legendre(n, &x);
                let dx = p / &dp;
                x -= &dx;
                if dx.abs() < eps {
                    break;
                }
            }
            let (_, dp) = legendre(n, &x);
            // w = 2 / ((1 - x^2) P_n'(x)^2)
            let one_minus = Float::with_val(work, 1) - Float::with_val(work, x.square_ref());
            let w = Float::with_val(work, 2) / (one_minus * dp.square());
            nodes.push(Float::with_val(bits, &x));
            weights.push(Float::with_val(bits, &w));
        }
        Self { nodes, weights }
    }

    pub fn shared(n: usize, bits: u32) -> Arc<Self> {
        static CACHE: Lazy<Mutex<HashMap<(usize, u32), Arc<GaussLegendre>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        CACHE
            .lock()
            .entry((n, bits))
            .or_insert_with(|| Arc::new(Self::new(n, bits)))
            .clone()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn weights_sum_to_two() {
        let g = GaussLegendre::new(20, 200);
        let s: Float = g.weights.iter().fold(Float::with_val(200, 0), |acc, w| acc + w);
        assert!((s - 2u32).abs() < Float::with_val(200, Float::i_exp(1, -190)));
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        // integral of x^38 over [-1, 1] = 2/39; x^39 integrates to zero
        let g = GaussLegendre::new(20, 200);
        let mut even = Float::with_val(200, 0);
        let mut odd = Float::with_val(200, 0);
        for (x, w) in g.nodes.iter().zip(&g.weights) {
            even += Float::with_val(200, x.clone().pow(38u32)) * w;
            odd += Float::with_val(200, x.clone().pow(39u32)) * w;
        }
        let target = Float::with_val(200, 2) / 39u32;
        assert!((even - target).abs() < Float::with_val(200, Float::i_exp(1, -185)));
        assert!(odd.abs() < Float::with_val(200, Float::i_exp(1, -185)));
    }

    #[test]
    fn nodes_are_symmetric_and_sorted() {
        let g = GaussLegendre::new(7, 128);
        for i in 0..7 {
            let s = Float::with_val(128, &g.nodes[i] + &g.nodes[6 - i]);
            assert!(s.abs() < Float::with_val(128, Float::i_exp(1, -120)));
        }
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(g.nodes[3].is_zero() || g.nodes[3].clone().abs() < Float::with_val(128, Float::i_exp(1, -120)));
    }
}
