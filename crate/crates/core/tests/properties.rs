use proptest::prelude::*;

use fockspace::cli::report::format_real;
use fockspace::disk::{mobius_apply, MobiusMap};
use fockspace::fock::{inner_product_closed, Exponent, FockParams};
use fockspace::translations::{
    compose_phase, compose_phase_conjugate_form, heisenberg_compose, CVector, HeisenbergElement, WeightedTranslation,
};
use fockspace::{Complex64, TruncatedSeries};

fn point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_degree + 1)
        .prop_map(|c| TruncatedSeries::new(c.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap())
}

fn element(n: usize) -> impl Strategy<Value = HeisenbergElement> {
    (prop::collection::vec(point(2.0), n), -3.0..3.0f64).prop_map(|(z, t)| HeisenbergElement::new(CVector(z), t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_forms_agree(a in prop::collection::vec(point(3.0), 2), b in prop::collection::vec(point(3.0), 2), alpha in 0.1..4.0f64) {
        let (a, b) = (CVector(a), CVector(b));
        let d = compose_phase(&a, &b, alpha).unwrap() - compose_phase_conjugate_form(&a, &b, alpha).unwrap();
        prop_assert!(d.norm() <= 1e-14);
        prop_assert!((compose_phase(&a, &b, alpha).unwrap().norm() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn heisenberg_is_associative(g in element(2), h in element(2), k in element(2)) {
        let l = heisenberg_compose(&heisenberg_compose(&g, &h).unwrap(), &k).unwrap();
        let r = heisenberg_compose(&g, &heisenberg_compose(&h, &k).unwrap()).unwrap();
        prop_assert!((l.t - r.t).abs() <= 1e-12);
        for (x, y) in l.z.0.iter().zip(&r.z.0) {
            prop_assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn translation_round_trip(f in polynomial(12), a in point(1.2)) {
        let t = WeightedTranslation::on_line(a, 1.0).unwrap();
        let f = f.with_cap(30);
        let back = t.inverse().apply(&t.apply(&f).unwrap()).unwrap().with_cap(30);
        prop_assert!(back.max_coeff_diff(&f) <= 1e-10 * (1.0 + f.max_abs()));
    }

    #[test]
    fn translation_is_unitary(f in polynomial(10), g in polynomial(10), a in point(1.5), alpha in 0.5..2.0f64) {
        let p = FockParams::hilbert(alpha).unwrap();
        let (f, g) = (f.with_cap(40), g.with_cap(40));
        let t = WeightedTranslation::on_line(a, alpha).unwrap();
        let before = inner_product_closed(&f, &g, &p).unwrap();
        let after = inner_product_closed(&t.apply(&f).unwrap(), &t.apply(&g).unwrap(), &p).unwrap();
        prop_assert!((after - before).norm() <= 1e-8 * before.norm().max(1.0));
    }

    #[test]
    fn shifts_compose(f in polynomial(15), a in point(1.0), b in point(1.0)) {
        let d = f.shift(a).shift(b).max_coeff_diff(&f.shift(a + b));
        prop_assert!(d <= 1e-9 * (1.0 + f.shift(a + b).max_abs()));
    }

    #[test]
    fn mobius_is_involutive(a in point(0.9), z in point(0.99)) {
        let map = MobiusMap::new(a).unwrap();
        let back = mobius_apply(&map, mobius_apply(&map, z).unwrap()).unwrap();
        prop_assert!((back - z).norm() <= 1e-12);
    }

    #[test]
    fn real_format_round_trips(x in any::<f64>()) {
        let back: f64 = format_real(x).parse().unwrap();
        prop_assert!(back.to_bits() == x.to_bits() || (x.is_nan() && back.is_nan()));
    }

    #[test]
    fn exponent_text_round_trips(p in 1.0..50.0f64) {
        let e = Exponent::new(p).unwrap();
        prop_assert_eq!(e.to_string().parse::<Exponent>().unwrap(), e);
    }
}
