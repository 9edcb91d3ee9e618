use std::collections::BTreeMap;

use biquad_core::calculus::{Calculus, KForm, TwistFamily};
use biquad_core::freealg::{Algebra, Exponents, FreePoly, NormalPoly, Strategy as Order, Word};
use biquad_core::presentation::{families, AlgebraPresentation};
use biquad_core::scalar::{combine, FieldOp, Parameter, Rational, Scalar};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-3i64..=3).prop_map(Scalar::from_int),
        Just(Scalar::var("q")),
        Just(Scalar::var("t")),
        (1i64..=4, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d)),
    ]
}

fn scalar() -> impl Strategy<Value = Scalar> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        (inner.clone(), inner, 0u8..4).prop_map(|(a, b, op)| match op {
            0 => a + b,
            1 => a - b,
            2 => a * b,
            _ => a.checked_div(&b).unwrap_or(a),
        })
    })
}

fn point() -> impl Strategy<Value = BTreeMap<Parameter, Rational>> {
    (-7i64..=7, 1i64..=3, -7i64..=7).prop_map(|(a, b, c)| {
        BTreeMap::from([
            (Parameter::new("q").unwrap(), Rational::new(a.into(), b.into())),
            (Parameter::new("t").unwrap(), Rational::from_integer(c.into())),
        ])
    })
}

fn coefficient() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        12 => Just(Scalar::zero()),
        1 => Just(Scalar::one()),
        1 => Just(Scalar::from_int(-1)),
        1 => Just(Scalar::from_int(2)),
        1 => Just(Scalar::from_int(-2)),
        1 => Just(Scalar::var("q")),
        1 => Just(Scalar::var("q").recip().unwrap()),
    ]
}

fn q_value() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        4 => Just(Scalar::one()),
        1 => Just(Scalar::from_int(-1)),
        1 => Just(Scalar::from_int(2)),
        1 => Just(Scalar::var("q")),
        1 => Just(Scalar::var("q").recip().unwrap()),
    ]
}

fn presentation3() -> impl Strategy<Value = AlgebraPresentation> {
    (
        proptest::collection::vec(q_value(), 3),
        proptest::collection::vec(coefficient(), 9),
        proptest::collection::vec(coefficient(), 3),
    )
        .prop_map(|(qs, as_, bs)| {
            let mut p = AlgebraPresentation::new(3).with_params(&["q"]);
            for (t, (i, j)) in [(1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
                p.set_q(i, j, qs[t].clone()).set_b(i, j, bs[t].clone());
                for k in 1..=3 {
                    p.set_a(i, j, k, as_[3 * t + k - 1].clone());
                }
            }
            p
        })
}

fn consistent_catalog() -> Vec<AlgebraPresentation> {
    let mut qp = AlgebraPresentation::new(2).with_params(&["q"]);
    qp.set_q(1, 2, Scalar::var("q"));
    let mut qw = AlgebraPresentation::new(2).with_params(&["q"]);
    qw.set_q(1, 2, Scalar::var("q")).set_b(1, 2, Scalar::one());
    let mut sl2 = AlgebraPresentation::new(3);
    sl2.set_a(1, 2, 3, Scalar::from_int(-1)).set_a(1, 3, 1, Scalar::from_int(2)).set_a(2, 3, 2, Scalar::from_int(-2));
    vec![
        families::polynomial(3),
        qp,
        qw,
        families::weyl(1),
        families::weyl(2),
        families::multiplicative_weyl(3),
        families::shift_ops(1, 1),
        families::difference_ops(1, 1),
        families::q_heisenberg(1),
        sl2,
    ]
}

/// Entries where the forced twist family exists and passes every check.
fn smooth_catalog() -> Vec<AlgebraPresentation> {
    let mut qp = AlgebraPresentation::new(2).with_params(&["q"]);
    qp.set_q(1, 2, Scalar::var("q"));
    vec![
        families::polynomial(3),
        qp,
        families::weyl(1),
        families::weyl(2),
        families::multiplicative_weyl(3),
        families::shift_ops(1, 1),
        families::difference_ops(1, 1),
    ]
}

fn word_for(n: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(1..=n, 0..=6).prop_map(Word::new)
}

fn monomial(n: usize, max_degree: u32) -> impl Strategy<Value = NormalPoly> {
    proptest::collection::vec(0..=max_degree, n)
        .prop_filter("degree bound", move |e| e.iter().sum::<u32>() <= max_degree)
        .prop_map(|e| NormalPoly::monomial(Exponents::new(e)))
}

fn pick<T: Clone + std::fmt::Debug>(items: Vec<T>) -> impl Strategy<Value = T> {
    let len = items.len();
    (0..len).prop_map(move |i| items[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip().unwrap()).is_one());
        }
    }

    #[test]
    fn display_round_trips(a in scalar()) {
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in scalar(), b in scalar(), at in point(), op in 0u8..4) {
        let op = [FieldOp::Add, FieldOp::Sub, FieldOp::Mul, FieldOp::Div][op as usize];
        let (Ok(va), Ok(vb)) = (a.eval_at(&at), b.eval_at(&at)) else { return Ok(()) };
        let Ok(c) = combine(op, &a, &b) else { return Ok(()) };
        let Ok(vc) = c.eval_at(&at) else { return Ok(()) };
        let expected = match op {
            FieldOp::Add => &va + &vb,
            FieldOp::Sub => &va - &vb,
            FieldOp::Mul => &va * &vb,
            FieldOp::Div => {
                if vb == Rational::from_integer(0.into()) {
                    return Ok(());
                }
                &va / &vb
            }
        };
        prop_assert_eq!(vc, expected);
    }

    #[test]
    fn zero_evaluates_to_zero(a in scalar(), b in scalar(), at in point()) {
        let z = &(&a * &b) - &(&b * &a);
        prop_assert!(z.is_zero());
        if let Ok(v) = z.eval_at(&at) {
            prop_assert_eq!(v, Rational::from_integer(0.into()));
        }
    }

    #[test]
    fn translation_is_an_involution(p in presentation3()) {
        let back = p.translate_orientation().unwrap().translate_orientation().unwrap();
        prop_assert!(back.same_data(&p));
        let c1 = p.check_pbw_by_overlaps().unwrap().consistent;
        let flipped = p.translate_orientation().unwrap();
        let c2 = flipped.check_pbw_by_overlaps().unwrap().consistent;
        prop_assert_eq!(c1, c2);
    }

    #[test]
    fn rewriting_decreases_the_measure(p in presentation3(), w in word_for(3)) {
        let alg = Algebra::new(&p).unwrap();
        for s in [Order::Leftmost, Order::Rightmost] {
            if let Ok(out) = alg.reduce_once(&w, s) {
                for (v, _) in out.terms() {
                    prop_assert!((v.len(), v.inversions()) < (w.len(), w.inversions()));
                }
            }
        }
    }

    #[test]
    fn normalization_is_strategy_independent(
        (p, w) in pick(consistent_catalog()).prop_flat_map(|p| { let n = p.n(); (Just(p), word_for(n)) })
    ) {
        let alg = Algebra::new(&p).unwrap();
        let f = FreePoly::word(w);
        prop_assert_eq!(alg.normalize(&f, Order::Leftmost), alg.normalize(&f, Order::Rightmost));
    }

    #[test]
    fn random_consistent_presentations_are_confluent(p in presentation3(), w in word_for(3)) {
        if !p.check_pbw_by_overlaps().unwrap().consistent {
            return Ok(());
        }
        let alg = Algebra::new(&p).unwrap();
        let f = FreePoly::word(w);
        prop_assert_eq!(alg.normalize(&f, Order::Leftmost), alg.normalize(&f, Order::Rightmost));
    }

    #[test]
    fn multiplication_is_associative(
        (p, a, b, c) in pick(consistent_catalog()).prop_flat_map(|p| {
            let n = p.n();
            (Just(p), monomial(n, 3), monomial(n, 3), monomial(n, 3))
        })
    ) {
        let alg = Algebra::new(&p).unwrap();
        let left = alg.multiply(&alg.multiply(&a, &b), &c);
        let right = alg.multiply(&a, &alg.multiply(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn twists_are_multiplicative(
        (p, k, a, b) in pick(smooth_catalog()).prop_flat_map(|p| {
            let n = p.n();
            (Just(p), 1..=n, monomial(n, 3), monomial(n, 3))
        })
    ) {
        let alg = Algebra::new(&p).unwrap();
        let tw = TwistFamily::forced(&p).unwrap();
        let e = tw.rho(k);
        prop_assert!(alg.is_relation_preserving(e));
        let lhs = alg.apply_endo(e, &alg.multiply(&a, &b));
        let rhs = alg.multiply(&alg.apply_endo(e, &a), &alg.apply_endo(e, &b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule(
        (p, a, b) in pick(smooth_catalog()).prop_flat_map(|p| {
            let n = p.n();
            (Just(p), monomial(n, 3), monomial(n, 3))
        })
    ) {
        let calc = Calculus::forced(&p).unwrap();
        let alg = calc.algebra();
        let lhs = calc.differential(&alg.multiply(&a, &b));
        let mut rhs = calc.right_multiply_form(&calc.differential(&a), &b);
        rhs.add_form(&calc.left_multiply_form(&a, &calc.differential(&b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn volume_twist_law(
        (p, a) in pick(smooth_catalog()).prop_flat_map(|p| { let n = p.n(); (Just(p), monomial(n, 3)) })
    ) {
        let calc = Calculus::forced(&p).unwrap();
        let vol = calc.volume_data();
        let lhs = calc.left_multiply_form(&a, &vol.omega());
        let rhs = calc.right_multiply_form(&vol.omega(), &calc.algebra().apply_endo(&vol.nu_omega, &a));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squares_to_zero(
        (p, a) in pick(smooth_catalog()).prop_flat_map(|p| { let n = p.n(); (Just(p), monomial(n, 4)) })
    ) {
        let calc = Calculus::forced(&p).unwrap();
        let da = calc.differential(&a);
        prop_assert!(calc.d(&da).unwrap().is_zero());
        if p.n() >= 3 {
            let d2 = calc.d(&calc.d(&KForm::term(vec![1], a.clone())).unwrap()).unwrap();
            prop_assert!(d2.is_zero());
        }
    }
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[test]
fn wedge_reordering_is_well_defined() {
    for p in smooth_catalog().into_iter().chain([families::multiplicative_weyl(4)]) {
        let calc = Calculus::forced(&p).unwrap();
        let n = calc.n().min(4);
        for len in 1..=n {
            for p in permutations(&(1..=len).collect::<Vec<_>>()) {
                assert_eq!(calc.sort_dx(&p, Order::Leftmost), calc.sort_dx(&p, Order::Rightmost));
            }
        }
        assert_eq!(calc.sort_dx(&[1, 2, 1], Order::Leftmost), None);
    }
}
