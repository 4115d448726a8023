use proptest::prelude::*;

use poincare_ptc::expr::{Sample, ScalarExpr, Var};
use poincare_ptc::matrix::{c64, ComplexMatrix};
use poincare_ptc::operator::{FlagTransform, MomentumOperator};
use poincare_ptc::poincare::{build_generators, RepId};
use poincare_ptc::rep_calculus::{format_labels, parse_labels, ptc_complete, EnergySign, Half, IrrepLabel};

fn leaf() -> impl Strategy<Value = ScalarExpr> {
    prop_oneof![
        (0usize..3).prop_map(ScalarExpr::p),
        Just(ScalarExpr::mass()),
        Just(ScalarExpr::time()),
        Just(ScalarExpr::energy()),
        (-3.0f64..3.0).prop_map(ScalarExpr::real),
    ]
}

fn expr() -> impl Strategy<Value = ScalarExpr> {
    leaf().prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), -2i32..3).prop_map(|(a, n)| a.powi(n)),
            inner.prop_map(|a| (a.clone() * a + ScalarExpr::real(1.0)).sqrt()),
        ]
    })
}

fn sample() -> impl Strategy<Value = Sample> {
    ([-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0], 0.5f64..2.0, -1.0f64..1.0)
        .prop_map(|(p, m, t)| Sample::new(p, m, t))
}

fn flags() -> impl Strategy<Value = FlagTransform> {
    let sign = prop_oneof![Just(1i8), Just(-1i8)];
    (sign.clone(), sign.clone(), sign, any::<bool>()).prop_map(|(p, t, m, c)| FlagTransform::new(p, t, m, c))
}

fn label() -> impl Strategy<Value = IrrepLabel> {
    (any::<bool>(), 0u32..4, 0u32..4).prop_map(|(plus, s, t)| {
        let sign = if plus { EnergySign::Plus } else { EnergySign::Minus };
        IrrepLabel::new(sign, Half::from_twice(s), Half::from_twice(t))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn derivative_matches_central_difference(f in expr(), at in sample(), which in 0usize..5) {
        let var = [Var::P1, Var::P2, Var::P3, Var::M, Var::T][which];
        let h = 1e-5;
        let x = at.value(var);
        let fd = (f.eval(&at.with(var, x + h)) - f.eval(&at.with(var, x - h))) / (2.0 * h);
        let exact = f.differentiate(var).eval(&at);
        prop_assume!(exact.norm().is_finite() && fd.norm().is_finite() && exact.norm() < 1e4);
        prop_assert!((exact - fd).norm() < 1e-4 * (1.0 + exact.norm()), "{f}: {exact} vs {fd}");
    }

    #[test]
    fn flip_substitutes_arguments(f in expr(), at in sample(), fl in flags()) {
        let flipped = f.flip(fl.eta_p, fl.eta_m, fl.eta_t).eval(&at);
        let moved = Sample::new(at.p.map(|x| x * fl.eta_p as f64), at.m * fl.eta_m as f64, at.t * fl.eta_t as f64);
        let direct = f.eval(&moved);
        prop_assume!(direct.norm().is_finite());
        prop_assert!((flipped - direct).norm() < 1e-9 * (1.0 + direct.norm()));
    }

    #[test]
    fn jacobi_identity(i in 0usize..10, j in 0usize..10, k in 0usize..10, which in 0usize..3) {
        let rep = [RepId::rep1(1), RepId::rep2(1), RepId::rep3(1)][which];
        let g = build_generators(rep);
        let named = g.named();
        let (a, b, c) = (named[i].1, named[j].1, named[k].1);
        let term = |x: &MomentumOperator, y: &MomentumOperator, z: &MomentumOperator| {
            x.commutator(&y.commutator(z).unwrap()).unwrap()
        };
        let total = term(a, b, c).add(&term(b, c, a)).add(&term(c, a, b));
        let samples = poincare_ptc::samples::massive(3, 3);
        prop_assert!(total.max_abs_at(&samples) < 1e-9);
    }

    #[test]
    fn flags_respect_composition(i in 0usize..10, j in 0usize..10, f in flags(), g in flags()) {
        let gens = build_generators(RepId::rep1(1));
        let named = gens.named();
        let (a, b) = (named[i].1, named[j].1);
        let samples = poincare_ptc::samples::massive(4, 3);
        let lhs = a.compose(b).unwrap().apply_flags(&f);
        let rhs = a.apply_flags(&f).compose(&b.apply_flags(&f)).unwrap();
        prop_assert!(lhs.equal_at(&rhs, &samples, 1e-9).equal);
        let twice = a.apply_flags(&f).apply_flags(&g);
        let once = a.apply_flags(&f.compose(&g));
        prop_assert!(twice.equal_at(&once, &samples, 1e-12).equal);
    }

    #[test]
    fn ptc_is_permutation_invariant(mut labels in prop::collection::vec(label(), 1..8), seed in any::<u64>()) {
        let before = ptc_complete(&labels);
        let n = labels.len();
        labels.rotate_left((seed as usize) % n);
        labels.reverse();
        prop_assert_eq!(before, ptc_complete(&labels));
    }

    #[test]
    fn labels_round_trip(labels in prop::collection::vec(label(), 1..6)) {
        prop_assert_eq!(parse_labels(&format_labels(&labels)).unwrap(), labels);
    }

    #[test]
    fn conjugate_closure_is_complete(labels in prop::collection::vec(label(), 1..4)) {
        let mut closed = Vec::new();
        for l in &labels {
            let c = IrrepLabel { sign: l.sign.flipped(), ..*l };
            closed.extend([*l, c]);
            if l.s != l.tau {
                closed.extend([l.swapped(), c.swapped()]);
            }
        }
        prop_assert!(ptc_complete(&closed));
    }

    #[test]
    fn kron_is_multiplicative(a in prop::array::uniform4(-2.0f64..2.0), b in prop::array::uniform4(-2.0f64..2.0)) {
        let m = |v: [f64; 4]| ComplexMatrix::from_fn(2, |i, j| c64(v[2 * i + j], v[3 - (2 * i + j)]));
        let (x, y) = (m(a), m(b));
        let lhs = &x.kron(&y) * &y.kron(&x);
        let rhs = (&x * &y).kron(&(&y * &x));
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }
}
