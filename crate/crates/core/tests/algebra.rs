use algebroid::equation::AlgebroidEquation;
use algebroid::mapping::{map_invert, map_negate, pushforward, MapOp};
use algebroid::polyalg::{poly_roots, resultant_w, BiPolynomial, Polynomial};
use algebroid::{mapping, BiPoly, Equation, Map, Poly, C64};
use proptest::prelude::*;

fn cpx() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn small_int_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-3i32..=3, 1..=max_deg + 1)
        .prop_map(|c| Poly::from_real(&c.iter().map(|&x| x as f64).collect::<Vec<_>>()))
}

/// Equations with a nonzero constant leading coefficient and random lower terms.
fn equation(max_v: usize) -> impl Strategy<Value = Equation> {
    (1..=max_v)
        .prop_flat_map(|v| (prop::collection::vec(small_int_poly(2), v), 1i32..=3))
        .prop_filter_map("degenerate", |(mut cs, lead)| {
            cs.push(Poly::from_real(&[lead as f64]));
            if cs[0].is_zero() {
                cs[0] = Poly::from_real(&[1.0, 1.0]);
            }
            Equation::new(cs).ok()
        })
}

fn separated(points: &[C64], gap: f64) -> bool {
    points.iter().enumerate().all(|(i, a)| points[i + 1..].iter().all(|b| (a - b).norm() > gap))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_round_trip(roots in prop::collection::vec(cpx(), 1..7)) {
        prop_assume!(separated(&roots, 0.2));
        let found = poly_roots(&Polynomial::from_roots(&roots)).unwrap();
        prop_assert_eq!(found.len(), roots.len());
        for r in &roots {
            let d = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-8, "root {} missed by {}", r, d);
        }
    }

    #[test]
    fn valuation_is_additive(z0 in cpx(), a in 0usize..4, b in 0usize..4, other in prop::collection::vec(cpx(), 0..3)) {
        prop_assume!(other.iter().all(|o| (o - z0).norm() > 0.3));
        let p = Polynomial::from_roots(&[vec![z0; a], other.clone()].concat());
        let q = Polynomial::from_roots(&vec![z0; b]);
        let prod = &p * &q;
        prop_assert_eq!(prod.valuation(z0).unwrap(), p.valuation(z0).unwrap() + q.valuation(z0).unwrap());
    }

    #[test]
    fn self_eliminant_vanishes(eq in equation(3)) {
        prop_assume!(eq.v() >= 1);
        let e = eq.eliminant(&eq);
        prop_assert!(e.is_zero() || e.max_abs() < 1e-8, "{e}");
    }

    #[test]
    fn shared_branch_kills_resultant(a in small_int_poly(2), p1 in small_int_poly(1), q1 in small_int_poly(1)) {
        // P = (W − a)(W − p1), Q = (W − a)(W + q1 + 5)
        let lin = |c: &Poly| BiPolynomial::new(vec![-c, Poly::one()]);
        let shift = BiPolynomial::new(vec![&q1 + &Poly::from_real(&[5.0]), Poly::one()]);
        let p = &lin(&a) * &lin(&p1);
        let q = &lin(&a) * &shift;
        let r = resultant_w(&p, &q).unwrap();
        let scale = p.max_abs() * q.max_abs();
        prop_assert!(r.max_abs() <= 1e-8 * scale * scale, "{r}");
    }

    #[test]
    fn resultant_detects_no_common_branch(c in 1i32..5) {
        // W² − z against W − c: resultant c² − z is never identically zero
        let p = BiPolynomial::new(vec![Poly::from_real(&[0.0, -1.0]), Poly::zero(), Poly::one()]);
        let q = BiPolynomial::new(vec![Poly::from_real(&[-(c as f64)]), Poly::one()]);
        let r = resultant_w(&p, &q).unwrap();
        prop_assert!(r.max_diff(&Poly::from_real(&[(c * c) as f64, -1.0])) < 1e-12);
    }

    #[test]
    fn negate_is_involution(eq in equation(3)) {
        prop_assert!(map_negate(&map_negate(&eq)).is_identical(&eq).identical);
    }

    #[test]
    fn invert_is_involution(eq in equation(3)) {
        let once = map_invert(&eq).unwrap().equation().unwrap();
        let twice = map_invert(&once).unwrap().equation().unwrap();
        prop_assert!(twice.is_identical(&eq).identical);
    }

    #[test]
    fn pushforward_is_branchwise(eq in equation(2), z in cpx(), k in -2i32..=2) {
        prop_assume!(eq.is_squarefree().unwrap());
        // m = w² + k·z·w
        let m = Map::from_poly(&(&BiPoly::w() * &BiPoly::w()) + &(&BiPoly::w() * &BiPoly::z()).scale(C64::new(k as f64, 0.0)));
        let image = pushforward(&m, &eq).unwrap();
        prop_assert_eq!(image.v(), eq.v());
        let crit = eq.critical_points().unwrap();
        prop_assume!(crit.distance(z) > 0.1);
        let expect: Vec<C64> = eq.finite_roots_at(z).unwrap().into_iter().map(|w| m.eval(z, w)).collect();
        let got = image.finite_roots_at(z).unwrap();
        prop_assume!(separated(&expect, 1e-3));
        for e in &expect {
            let d = got.iter().map(|g| (g - e).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d < 1e-6 * (1.0 + e.norm()), "{e} missing from {got:?}");
        }
    }

    #[test]
    fn arithmetic_evaluates_pointwise(z in cpx(), w in cpx(), c in cpx()) {
        let a = Map::w();
        let b = mapping::map_arith(MapOp::Add, &Map::z(), &Map::constant(c)).unwrap();
        prop_assume!(b.eval(z, w).norm() > 1e-3);
        let ops = [(MapOp::Add, w + z + c), (MapOp::Sub, w - z - c), (MapOp::Mul, w * (z + c)), (MapOp::Div, w / (z + c))];
        for (op, expect) in ops {
            let got = mapping::map_arith(op, &a, &b).unwrap().eval(z, w);
            prop_assert!((got - expect).norm() < 1e-9 * (1.0 + expect.norm()));
        }
    }
}

#[test]
fn elimination_examples() {
    let sqrt_z = BiPoly::new(vec![Poly::from_real(&[0.0, -1.0]), Poly::zero(), Poly::one()]);
    let r = resultant_w(&sqrt_z, &sqrt_z.partial_w()).unwrap();
    assert!(r.max_diff(&Poly::from_real(&[0.0, -4.0])) < 1e-12);
}

#[test]
fn generic_over_f32() {
    let eq = AlgebroidEquation::<f32>::new(vec![
        Polynomial::from_real(&[0.0, -1.0]),
        Polynomial::zero(),
        Polynomial::one(),
    ])
    .unwrap();
    let roots = eq.finite_roots_at(num_complex::Complex::new(4.0f32, 0.0)).unwrap();
    assert!(roots.iter().any(|w| (w.re - 2.0).abs() < 1e-5));
    assert!(eq.is_squarefree().unwrap());
}
