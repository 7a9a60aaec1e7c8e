use abint::abelian::{integrate_cycle, integrate_eta};
use abint::algebra::{BiPoly, GaussRat, LinAtom, RatC, RatFunc, UniPoly, Var};
use abint::family::{Family, NormalForm, Puncture, Shape};
use abint::rectify::RectifyingMap;
use abint::sample::{random_form, random_normal_form, random_poly, Class, CLASSES};
use abint::transform::{reduce_to_nonexact_basis, NonExactReduction, OneForm, PolyAutomorphism};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, -3i64..=3, 1i64..=4).prop_map(|(a, b, d)| GaussRat::from_parts((a, d), (b, d)))
}

fn bipoly(deg: u32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((0..=deg, 0..=deg, -5i64..=5), 0..max_terms)
        .prop_map(|v| BiPoly::from_int_terms(&v))
}

fn atom() -> impl Strategy<Value = LinAtom> {
    prop_oneof![
        3 => (-1i64..=1, -3i64..=3).prop_map(|(a, b)| {
            LinAtom::t_minus(&UniPoly::from_ints(&[b, a])).unwrap()
        }),
        1 => (-3i64..=3).prop_map(|k| LinAtom::C { k: GaussRat::from_int(k) }),
    ]
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (bipoly(4, 6), prop::collection::vec((atom(), 1i64..=3), 0..4)).prop_map(|(num, atoms)| {
        let den = RatFunc::from_atoms(&GaussRat::one(), &atoms.iter().map(|(a, e)| (a.clone(), -e)).collect::<Vec<_>>());
        &RatFunc::from_bipoly(num) * &den
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_add_sub_roundtrip(a in gauss(), b in gauss()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) / &b, a);
        }
    }

    #[test]
    fn residues_sum_to_zero(f in ratfunc()) {
        let mut total = f.residue_at_infinity();
        for (root, _) in f.finite_poles() {
            total = &total + &f.residue(&root).unwrap();
        }
        prop_assert!(total.is_zero(), "sum {} for {}", total, f);
    }

    #[test]
    fn laurent_and_derivative_residues_agree(f in ratfunc()) {
        for (root, _) in f.finite_poles() {
            prop_assert_eq!(f.residue(&root).unwrap(), f.residue_by_derivative(&root).unwrap());
        }
    }

    #[test]
    fn substitute_is_a_ring_homomorphism(p in bipoly(3, 5), q in bipoly(3, 5), rx in ratfunc(), ry in ratfunc()) {
        let prod = (&p * &q).substitute(&rx, &ry);
        prop_assert_eq!(prod, &p.substitute(&rx, &ry) * &q.substitute(&rx, &ry));
        let sum = (&p + &q).substitute(&rx, &ry);
        prop_assert_eq!(sum, &p.substitute(&rx, &ry) + &q.substitute(&rx, &ry));
    }

    #[test]
    fn nonexact_reduction_roundtrip(a in bipoly(5, 8), b in bipoly(5, 8)) {
        let w = OneForm::new(a, b);
        let red = reduce_to_nonexact_basis(&w);
        prop_assert_eq!(red.reassemble(), w.clone());
        let n = w.degree().unwrap_or(0);
        for &(i, j) in red.coeffs.keys() {
            prop_assert!(j >= 1 && i + j <= n);
        }
        if let Some(dq) = red.exact_part.total_degree() {
            prop_assert!(dq <= n + 1);
        }
    }

    #[test]
    fn pushforward_commutes_with_d(h in bipoly(4, 6), f in bipoly(3, 4), g in bipoly(3, 4), s1 in gauss(), s0 in gauss()) {
        prop_assume!(!s1.is_zero());
        // triangular automorphisms: (u + f(v), v) then (x, y + g(x))
        let f = BiPoly::from_terms(f.terms().filter(|(&(i, _), _)| i == 0).map(|(&(_, j), c)| ((0, j), c.clone())));
        let g = BiPoly::from_terms(g.terms().filter(|(&(_, j), _)| j == 0).map(|(&(i, _), c)| ((i, 0), c.clone())));
        let (x, y) = (BiPoly::x(), BiPoly::y());
        let fwd1 = (&x + &f, y.clone());
        let inv1 = (&x - &f, y.clone());
        let fwd = (fwd1.0.clone(), &fwd1.1 + &g.compose(&fwd1.0, &fwd1.1));
        let inv2 = (x.clone(), &y - &g);
        let inv = (inv1.0.compose(&inv2.0, &inv2.1), inv1.1.compose(&inv2.0, &inv2.1));
        let aut = PolyAutomorphism::new(fwd, inv, s1, s0).unwrap();
        let lhs = aut.pushforward_oneform(&OneForm::exact(&h));
        prop_assert_eq!(lhs, OneForm::exact(&aut.pushforward_polynomial(&h)));
    }

    #[test]
    fn integration_is_linear(seed in any::<u64>(), a in gauss(), b in gauss()) {
        let mut r = rng(seed);
        let nf = random_normal_form(&mut r, CLASSES[(seed % 5) as usize], 8);
        let facts = nf.validate().unwrap();
        let rm = RectifyingMap::build(&nf, &facts).unwrap();
        let b1 = reduce_to_nonexact_basis(&random_form(&mut r, 3));
        let b2 = reduce_to_nonexact_basis(&random_form(&mut r, 3));
        let mix = NonExactReduction {
            coeffs: BiPoly::terms(&(&b1.as_polynomial().scale(&a) + &b2.as_polynomial().scale(&b)))
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            exact_part: BiPoly::zero(),
        };
        for cycle in &rm.cycles {
            let i1 = integrate_cycle(&rm, &b1, cycle).unwrap().value;
            let i2 = integrate_cycle(&rm, &b2, cycle).unwrap().value;
            let im = integrate_cycle(&rm, &mix, cycle).unwrap().value;
            prop_assert_eq!(im, &i1.scale(&a) + &i2.scale(&b));
        }
    }
}

#[test]
fn expanded_degree_matches_facts() {
    let mut r = rng(11);
    for k in 0..1000 {
        let nf = random_normal_form(&mut r, CLASSES[k % 5], 9);
        let facts = nf.validate().unwrap();
        assert_eq!(nf.expand(&facts).total_degree(), Some(facts.degree), "{nf:?}");
    }
}

#[test]
fn rectifier_inverts_for_every_class() {
    let mut r = rng(12);
    for k in 0..100 {
        let class = CLASSES[k % 5];
        let nf = random_normal_form(&mut r, class, 9);
        let facts = nf.validate().unwrap();
        let rm = RectifyingMap::build(&nf, &facts).unwrap();
        assert_eq!(rm.h.substitute(&rm.inverse_x, &rm.inverse_y), RatFunc::c());
        assert_eq!(rm.g.substitute(&rm.inverse_x, &rm.inverse_y), RatFunc::t());
        match class {
            Class::F1Plus | Class::F2Plus => assert_eq!(facts.sign_case, Some(1)),
            Class::F1Minus | Class::F2Minus => assert_eq!(facts.sign_case, Some(-1)),
            Class::F3 => assert_eq!(facts.sign_case, None),
        }
    }
}

#[test]
fn basis_pushforward_is_multiplicative() {
    let mut r = rng(13);
    for k in 0..25 {
        let nf = random_normal_form(&mut r, CLASSES[k % 5], 8);
        let facts = nf.validate().unwrap();
        let rm = RectifyingMap::build(&nf, &facts).unwrap();
        for (i, j) in [(0, 1), (1, 1), (2, 2)] {
            let lo = rm.pushforward_basis_form(i, j).eta_t;
            let hi = rm.pushforward_basis_form(i + 1, j).eta_t;
            assert_eq!(hi, &rm.inverse_x * &lo);
        }
    }
}

#[test]
fn poles_only_at_punctures() {
    let mut r = rng(14);
    for k in 0..60 {
        let nf = random_normal_form(&mut r, CLASSES[k % 5], 9);
        let facts = nf.validate().unwrap();
        let rm = RectifyingMap::build(&nf, &facts).unwrap();
        let w = random_form(&mut r, 4);
        let eta = rm.pushforward(&w).eta_t;
        let locations: Vec<UniPoly> = rm.cycles.iter().map(|c| c.location.clone()).collect();
        for (root, _) in eta.finite_poles() {
            assert!(locations.contains(&root), "pole at {root} outside {locations:?}");
        }
        assert_eq!(rm.cycles.len(), facts.homology_rank);
        if facts.family == Family::F1 {
            assert_eq!(rm.cycles.last().unwrap().puncture, Puncture::MovingC);
        }
    }
}

#[test]
fn third_family_fibers_over_beta_are_vertical_lines() {
    let mut r = rng(15);
    for _ in 0..50 {
        let nf = random_normal_form(&mut r, Class::F3, 9);
        let NormalForm::F3 { beta, h, .. } = &nf else { unreachable!() };
        let hh = nf.expand(&nf.validate().unwrap());
        for b in beta {
            // (β − x) divides 𝓗 − h(β)
            let shifted = &hh - &BiPoly::constant(h.eval(b));
            assert!(shifted.compose(&BiPoly::constant(b.clone()), &BiPoly::y()).is_zero());
        }
    }
}

#[test]
fn single_factor_second_family_has_miyanishi_sugie_shape() {
    let cases = [
        (0, 1, 1, UniPoly::from_ints(&[-1])),
        (1, 2, 2, UniPoly::from_ints(&[1, 1])),
        (2, 3, 3, UniPoly::from_ints(&[2, 0, 5])),
    ];
    for (p1, p, k, poly_p) in cases {
        let shape = Shape { p1, p, q1: 0, q: 0, k, poly_p: poly_p.clone() };
        let nf = NormalForm::F2 { shape, a: Vec::new(), beta: Vec::new() };
        let facts = nf.validate().unwrap();
        let s = &BiPoly::monomial(k, 1, GaussRat::one()) + &BiPoly::from_unipoly(&poly_p, Var::X);
        let expected = &BiPoly::monomial(p1, 0, GaussRat::one()) * &s.pow(p);
        assert_eq!(nf.expand(&facts), expected);
        assert_eq!(facts.homology_rank, 1);
        assert_eq!(facts.sign_case, Some(1));
    }
}

#[test]
fn exact_forms_integrate_to_zero() {
    let mut r = rng(16);
    for k in 0..40 {
        let nf = random_normal_form(&mut r, CLASSES[k % 5], 8);
        let facts = nf.validate().unwrap();
        let rm = RectifyingMap::build(&nf, &facts).unwrap();
        let q = random_poly(&mut r, 5, 0.4);
        let eta = rm.pushforward(&OneForm::exact(&q)).eta_t;
        for cycle in &rm.cycles {
            assert!(integrate_eta(&eta, cycle).unwrap().value.is_zero());
        }
    }
}

#[test]
fn residue_of_simple_pole() {
    // c/(t − 1) has residue c at t = 1 and −c at infinity
    let f = &RatFunc::c() * &RatFunc::from_atoms(&GaussRat::one(), &[(LinAtom::t_minus(&UniPoly::from_ints(&[1])).unwrap(), -1)]);
    assert_eq!(f.residue(&UniPoly::from_ints(&[1])).unwrap(), RatC::from_poly(UniPoly::var()));
    assert_eq!(f.residue_at_infinity(), RatC::from_poly(UniPoly::from_ints(&[0, -1])));
}
