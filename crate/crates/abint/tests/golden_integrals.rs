use abint::abelian::{full_report, Problem};
use abint::algebra::{BiPoly, GaussRat, UniPoly};
use abint::family::{NormalForm, Shape};
use abint::transform::OneForm;

fn shape() -> Shape {
    Shape { p1: 0, p: 1, q1: 1, q: 2, k: 1, poly_p: UniPoly::from_ints(&[-1]) }
}

fn poly(c: &[i64]) -> UniPoly {
    UniPoly::from_ints(c)
}

fn prod(fs: &[UniPoly]) -> UniPoly {
    fs.iter().fold(UniPoly::one(), |a, b| &a * b)
}

#[test]
fn f2_example_integrals_match_golden() {
    let nf = NormalForm::F2 { shape: shape(), a: vec![1], beta: vec![GaussRat::one()] };
    // y(y² − 108xy − 66) dx
    let w = OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (1, 2, -108), (0, 1, -66)]));
    let rep = full_report(&Problem::new(nf, w)).unwrap();
    let j1 = prod(&[poly(&[3]), poly(&[1, 1]), poly(&[-58, -36, 0, 0, 0, 3, 4])]);
    let j2 = prod(&[poly(&[-3]), poly(&[-1, 1]), poly(&[2, 1]), poly(&[-58, 18, -2, 8, 3, 4])]);
    assert_eq!(rep.integrals[0].value, j1);
    assert_eq!(rep.integrals[1].value, j2);
    assert_eq!(rep.zeros, vec![Some(6), Some(7)]);
    assert_eq!(rep.n_bc, Some(13));
    assert!(rep.ledger.satisfied(), "{:?}", rep.ledger.violations());
}

#[test]
fn f1_example_integrals_match_golden() {
    let nf = NormalForm::F1 { shape: shape(), a: vec![1], beta: vec![GaussRat::one()] };
    // y(y² − 96x² + 1008) dx
    let w = OneForm::dx(BiPoly::from_int_terms(&[(0, 3, 1), (2, 1, -96), (0, 1, 1008)]));
    let rep = full_report(&Problem::new(nf, w)).unwrap();
    let j1 = prod(&[poly(&[6]), poly(&[1, 1]), poly(&[168, 0, 0, 1, -1, -2, 2])]);
    let j2 = prod(&[poly(&[-6]), poly(&[-2, 1]), poly(&[252, 42, 21, 10, 5, 4, 2])]);
    let j3 = prod(&[poly(&[96]), poly(&[5, 2]), poly(&[-4, 1])]);
    assert_eq!(rep.integrals[0].value, j1);
    assert_eq!(rep.integrals[1].value, j2);
    assert_eq!(rep.integrals[2].value, j3);
    assert_eq!(rep.zeros, vec![Some(6), Some(7), Some(2)]);
    assert_eq!(rep.n_bc, Some(15));
    assert_eq!(rep.ledger.zeta, 19);
    assert!(rep.ledger.satisfied(), "{:?}", rep.ledger.violations());
}
