mod common;

use std::f64::consts::PI;

use proptest::prelude::*;
use ptseries::precision::{cabs, PrecisionContext};
use ptseries::series::{CoefficientTable, SeriesEvaluator, Solution};
use rug::{Complex, Float, Rational};

fn conj(z: &Complex) -> Complex {
    Complex::with_val(z.prec(), (z.real(), -z.imag().clone()))
}

fn reflect(z: &Complex) -> Complex {
    Complex::with_val(z.prec(), (-z.real().clone(), z.imag()))
}

#[test]
fn recursion_holds_exactly_for_several_n() {
    for n in [2, 3, 4, 5, 7, 12] {
        let t = CoefficientTable::build(n, 60).unwrap();
        assert_eq!(t.verify(), Ok(()), "N = {n}");
        assert_eq!(t.len(), 61 * 62 / 2);
    }
}

#[test]
fn n3_boundary_row() {
    // a_{0,q} = 1 / (2q)! and b_{0,q} = 1 / (2q + 1)!
    let t = CoefficientTable::build(3, 20).unwrap();
    let mut f = Rational::from(1);
    for q in 1..=20u32 {
        f /= Rational::from((2 * q - 1) * 2 * q);
        assert_eq!(t.a(0, q).unwrap(), &f);
    }
    // 7 * 6 a_11 = a_01 + a_10 = 1/2 + 1/20
    assert_eq!(*t.a(1, 1).unwrap(), Rational::from((11, 840)));
    assert!(t.a(21, 0).is_none());
}

#[test]
fn psi1_small_z_leading_terms() {
    let ctx = PrecisionContext::new(40).unwrap();
    let ev = SeriesEvaluator::shared(3, 100, ctx).unwrap();
    let z = ctx.complex((ctx.parse_real("0.1").unwrap(), 0));
    let jet = ev.eval_solution(Solution::Even, &z, &ctx.zero(), 0);
    // 1 + (0.1 i)^5 / 20 + O(z^10)
    let expect = ctx.complex((1, ctx.parse_real("5e-7").unwrap()));
    let d = cabs(&Complex::with_val(ctx.bits(), &jet.value - &expect)).to_f64();
    assert!(d < 1e-12, "{d:e}");
}

#[test]
fn wronskian_at_generic_point() {
    let ctx = PrecisionContext::new(40).unwrap();
    let ev = SeriesEvaluator::shared(3, 100, ctx).unwrap();
    let z = ctx.complex((1, ctx.parse_real("0.5").unwrap()));
    let e = ctx.complex((ctx.parse_real("4.1").unwrap(), 0));
    let w = ev.eval(&z, &e, 1).wronskian() - ctx.complex((0, 1));
    assert!(cabs(&w) < ctx.ten_pow_neg(35));
}

#[test]
fn residual_is_tiny_inside_the_disk() {
    let ctx = PrecisionContext::new(60).unwrap();
    let ev = SeriesEvaluator::shared(3, 100, ctx).unwrap();
    let z = ctx.complex((ctx.parse_real("0.5").unwrap(), 0));
    let e = ctx.complex((ctx.parse_real("1.15").unwrap(), 0));
    for sol in [Solution::Even, Solution::Odd] {
        let r = ev.residual(sol, &z, &e);
        assert!(cabs(&r) < ctx.ten_pow_neg(50), "{sol:?}: {}", r);
    }
    let r0 = ev.residual(Solution::Even, &ctx.zero(), &e);
    assert!(r0.is_zero(), "{r0}");
}

#[test]
fn residual_equals_boundary_polynomial() {
    // -psi1'' - w^N psi1 - E psi1 = -sum_{p+q=P} a_pq w^k E^q (w^N + E), w = iz
    let ctx = PrecisionContext::new(50).unwrap();
    let n = 3u32;
    let pmax = 10u32;
    let t = CoefficientTable::build(n, pmax).unwrap();
    let ev = SeriesEvaluator::new(std::sync::Arc::new(t.clone()), ctx);
    let bits = ctx.bits();
    let mut last = Float::new(bits);
    for (x, y) in [(1, 0), (2, 0), (1, 1)] {
        let z = ctx.complex((x, y));
        let e = ctx.complex((5, 0));
        let w = Complex::with_val(bits, &z * Complex::with_val(bits, (0, 1)));
        let wn = Complex::with_val(bits, rug::ops::Pow::pow(&w, n));
        let mut poly = ctx.zero();
        for p in 0..=pmax {
            let q = pmax - p;
            let k = t.exponent(Solution::Even, p, q) as u32;
            let term = Complex::with_val(bits, rug::ops::Pow::pow(&w, k))
                * Complex::with_val(bits, rug::ops::Pow::pow(&e, q))
                * Float::with_val(bits, t.a(p, q).unwrap());
            poly += term;
        }
        poly *= Complex::with_val(bits, &wn + &e);
        poly = -poly;
        let r = ev.residual(Solution::Even, &z, &e);
        let d = cabs(&Complex::with_val(bits, &r - &poly));
        assert!(d <= cabs(&poly) * ctx.ten_pow_neg(40), "z = {z}: {r} vs {poly}");
        if y == 0 {
            let m = cabs(&r);
            assert!(m > last, "residual must grow with |z|");
            last = m;
        }
    }
}

#[test]
fn wronskian_error_shrinks_with_more_terms() {
    let ctx = PrecisionContext::new(40).unwrap();
    let z = ctx.complex((2, 0));
    let e = ctx.complex((20, 0));
    let err = |p| {
        let ev = SeriesEvaluator::shared(3, p, ctx).unwrap();
        cabs(&(ev.eval(&z, &e, 1).wronskian() - ctx.complex((0, 1)))).to_f64()
    };
    let (e20, e30) = (err(20), err(30));
    assert!(e30 * 10.0 < e20, "{e20:e} vs {e30:e}");
}

#[test]
fn evaluation_is_deterministic() {
    let ctx = PrecisionContext::new(40).unwrap();
    let ev = SeriesEvaluator::shared(5, 100, ctx).unwrap();
    let fresh = SeriesEvaluator::new(std::sync::Arc::new(CoefficientTable::build(5, 100).unwrap()), ctx);
    let z = ctx.complex((ctx.parse_real("1.3").unwrap(), ctx.parse_real("-0.7").unwrap()));
    let e = ctx.complex((ctx.parse_real("3.3").unwrap(), 0));
    let a = ev.eval(&z, &e, 2);
    let b = fresh.eval(&z, &e, 2);
    assert_eq!(a, b);
    assert_eq!(a, ev.eval(&z, &e, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wronskian_is_i(r in 0.0f64..2.0, th in -PI..PI, e in 0.0f64..20.0) {
        let ctx = PrecisionContext::new(40).unwrap();
        let ev = SeriesEvaluator::shared(3, 100, ctx).unwrap();
        let z = ctx.polar(&ctx.real(r), &ctx.real(th));
        let w = ev.eval(&z, &ctx.complex((e, 0)), 1).wronskian() - ctx.complex((0, 1));
        prop_assert!(cabs(&w) < ctx.ten_pow_neg(30), "|W - i| = {}", cabs(&w));
    }

    #[test]
    fn pt_reflection(n in 2u32..9, x in -3.0f64..3.0, y in -3.0f64..3.0, e in -10.0f64..30.0) {
        let ctx = PrecisionContext::new(30).unwrap();
        let ev = SeriesEvaluator::shared(n, 60, ctx).unwrap();
        let z = ctx.complex((x, y));
        let en = ctx.complex((e, 0));
        let a = ev.eval(&z, &en, 1);
        let b = ev.eval(&reflect(&z), &en, 0);
        for sol in [Solution::Even, Solution::Odd] {
            let lhs = &b.get(sol).value;
            let rhs = conj(&a.get(sol).value);
            let d = cabs(&Complex::with_val(ctx.bits(), lhs - &rhs));
            let scale = cabs(&rhs).max(&ctx.real(1));
            prop_assert!(d <= scale * ctx.ten_pow_neg(ctx.working_digits() as i32 - 2));
        }
    }

    #[test]
    fn text_format_round_trips(n in 2u32..12, pmax in 1u32..25) {
        let t = CoefficientTable::build(n, pmax).unwrap();
        let back = CoefficientTable::from_text(&t.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), t.to_text());
        prop_assert!(back.verify().is_ok());
    }

    #[test]
    fn entries_positive(n in 2u32..30, p in 0u32..30, q in 0u32..30) {
        let t = CoefficientTable::shared(n, 60).unwrap();
        prop_assert!(*t.a(p, q).unwrap() > 0);
        prop_assert!(*t.b(p, q).unwrap() > 0);
    }
}
