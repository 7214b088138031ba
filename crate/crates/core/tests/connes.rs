use ncgeo::algebra::{Algebra, AlgebraElement};
use ncgeo::connes::{diagonal_triple, two_point_triple, ConnesCalculus, SpectralTriple};
use ncgeo::error::Error;
use ncgeo::exactlin::{vector, Matrix, Scalar};
use ncgeo::universal::{monomial, udelta, UniversalForm};
use proptest::prelude::*;

fn gaussians(len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-3i64..=3, -2i64..=2), len).prop_map(|v| v.into_iter().map(|(a, b)| Scalar::gaussian(a, b)).collect())
}

fn path_calculus() -> ConnesCalculus {
    let d = Matrix::from_ints(&[&[0, 1, 0], &[1, 0, 1], &[0, 1, 0]]);
    ConnesCalculus::new(&diagonal_triple(d).unwrap(), 2).unwrap()
}

fn calculi() -> Vec<ConnesCalculus> {
    let two = two_point_triple(&Scalar::gaussian(2, -1)).unwrap();
    vec![ConnesCalculus::new(&two, 2).unwrap(), path_calculus()]
}

fn monomial_from(alg: &Algebra, c: &[Vec<Scalar>], deg: usize) -> UniversalForm {
    let m = alg.dim();
    let el = |v: &[Scalar]| AlgebraElement::new(alg, v[..m].to_vec()).unwrap();
    let rest: Vec<AlgebraElement> = c[1..=deg].iter().map(|v| el(v)).collect();
    monomial(&el(&c[0]), &rest).unwrap()
}

/// A random element of a subspace of degree-k forms, coefficients cycling through `c`.
fn element_of(calc: &ConnesCalculus, k: usize, c: &[Scalar]) -> UniversalForm {
    let junk = calc.junk_ideal(k).unwrap();
    let mut acc = vector::zeros(junk.ambient_dim());
    for (v, s) in junk.basis().row_vectors().zip(c.iter().cycle()) {
        vector::axpy(&mut acc, s, v);
    }
    UniversalForm::new(calc.algebra(), k, acc).unwrap()
}

#[test]
fn axioms_are_enforced() {
    let alg = ncgeo::algebra::function_algebra(2).unwrap();
    let rep = vec![Matrix::from_ints(&[&[1, 0], &[0, 0]]), Matrix::from_ints(&[&[0, 0], &[0, 1]])];
    let not_self_adjoint = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
    assert!(matches!(SpectralTriple::new(&alg, rep.clone(), not_self_adjoint, None), Err(Error::TripleAxiom(_))));
    let d = Matrix::from_ints(&[&[1, 0], &[0, -1]]);
    let grading = Matrix::from_ints(&[&[1, 0], &[0, -1]]);
    assert!(matches!(SpectralTriple::new(&alg, rep, d, Some(grading)), Err(Error::TripleAxiom(_))));
    assert!(two_point_triple(&Scalar::zero()).is_err());
}

#[test]
fn degree_bound_is_enforced() {
    let triple = two_point_triple(&Scalar::one()).unwrap();
    assert!(ConnesCalculus::new(&triple, 4).is_err());
    let calc = ConnesCalculus::new(&triple, 1).unwrap();
    let e = AlgebraElement::basis(calc.algebra(), 0);
    let w = monomial(&e, &[e.clone(), e.clone()]).unwrap();
    assert!(matches!(calc.pi(&w), Err(Error::DegreeBound { .. })));
}

#[test]
fn two_point_commutator() {
    let m = Scalar::gaussian(1, 1);
    let t = two_point_triple(&m).unwrap();
    let e1 = vector::unit(2, 0);
    let expected = Matrix::from_rows(2, vec![vec![Scalar::zero(), -&m], vec![m.conj(), Scalar::zero()]]).unwrap();
    assert_eq!(t.commutator(&e1), expected);
    let g = t.grading().unwrap();
    assert!((&(g * t.dirac()) + &(t.dirac() * g)).is_zero());
    let calc = ConnesCalculus::new(&t, 2).unwrap();
    assert!(calc.pi(&udelta(&AlgebraElement::one(calc.algebra()))).unwrap().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pi_is_multiplicative(pick in 0usize..2, d1 in 0usize..=1, d2 in 0usize..=1, c in prop::collection::vec(gaussians(3), 4)) {
        let calc = &calculi()[pick];
        let alg = calc.algebra();
        let w = monomial_from(alg, &c, d1);
        let w2 = monomial_from(alg, &c[2..], d2);
        prop_assert_eq!(calc.pi(&w.mul(&w2).unwrap()).unwrap(), &calc.pi(&w).unwrap() * &calc.pi(&w2).unwrap());
    }

    #[test]
    fn pi_intertwines_the_involution(pick in 0usize..2, deg in 0usize..=2, c in prop::collection::vec(gaussians(3), 3)) {
        let calc = &calculi()[pick];
        let w = monomial_from(calc.algebra(), &c, deg);
        prop_assert_eq!(calc.pi(&w.star().unwrap()).unwrap(), calc.pi(&w).unwrap().adjoint());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn junk_is_a_two_sided_ideal(j in gaussians(6), c in prop::collection::vec(gaussians(3), 2)) {
        let calc = path_calculus();
        let phi = element_of(&calc, 1, &j);
        let x = monomial_from(calc.algebra(), &c, 1);
        let j2 = calc.junk_ideal(2).unwrap();
        prop_assert!(j2.contains(phi.mul(&x).unwrap().coeffs()));
        prop_assert!(j2.contains(x.mul(&phi).unwrap().coeffs()));
        let a = monomial_from(calc.algebra(), &c, 0);
        prop_assert!(calc.junk_ideal(1).unwrap().contains(a.mul(&phi).unwrap().coeffs()));
    }

    #[test]
    fn classes_ignore_junk(j in gaussians(6), c in prop::collection::vec(gaussians(3), 2)) {
        let calc = path_calculus();
        let phi = element_of(&calc, 1, &j);
        let w = monomial_from(calc.algebra(), &c, 1);
        prop_assert_eq!(calc.class_of(&w.add(&phi).unwrap()).unwrap(), calc.class_of(&w).unwrap());
        prop_assert!(vector::is_zero(&calc.class_of(&phi.delta()).unwrap()));
    }
}
