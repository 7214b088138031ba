use ncgeo::algebra::{
    hom_space, is_morphism, matrix_algebra, projective_from_idempotent, truncated_polynomial_algebra, unvectorize,
    AlgebraElement, AlgebraMatrix, Derivation, ModuleKind,
};
use ncgeo::ce::{CeOneForms, DerivationFrame};
use ncgeo::connections::{
    canonical_connection, curvature, curvature_is_linear, difference, direct_sum, dv_check, grassmann_connection,
    inner_connection, shift, universal_check, DVConnection,
};
use ncgeo::exactlin::{Matrix, Scalar};
use proptest::prelude::*;

fn gaussians(len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-3i64..=3, -2i64..=2), len).prop_map(|v| v.into_iter().map(|(a, b)| Scalar::gaussian(a, b)).collect())
}

/// `∇ + σ` with `σ_q` drawn from a basis of `End(P)`, coefficients cycling through `c`.
fn shifted(conn: &DVConnection, c: &[Scalar]) -> DVConnection {
    let p = conn.module();
    let ends: Vec<Matrix> = hom_space(p, p).unwrap().basis().row_vectors().map(|v| unvectorize(v, p.dim(), p.dim())).collect();
    let family: Vec<Matrix> = (0..conn.endos().len())
        .map(|q| ends.iter().zip(c[q..].iter().cycle()).fold(Matrix::zeros(p.dim(), p.dim()), |acc, (e, s)| &acc + &e.scale(s)))
        .collect();
    shift(conn, &family).unwrap()
}

#[test]
fn constructors_satisfy_leibniz() {
    let su = DerivationFrame::su(2).unwrap();
    let trunc = DerivationFrame::standard(&truncated_polynomial_algebra(3).unwrap()).unwrap();
    let o1 = CeOneForms::new(&su).unwrap();
    for conn in [
        canonical_connection(&su),
        canonical_connection(&trunc),
        inner_connection(&su, &o1.module).unwrap(),
        direct_sum(&canonical_connection(&trunc), &canonical_connection(&trunc)).unwrap(),
    ] {
        assert!(dv_check(&conn));
    }
}

#[test]
fn grassmann_connections_on_shipped_idempotents() {
    let m2 = matrix_algebra(2).unwrap();
    let (one, zero) = (AlgebraElement::one(&m2), AlgebraElement::zero(&m2));
    let e11 = AlgebraElement::basis(&m2, 0);
    let idempotents = [
        AlgebraMatrix::identity(&m2, 2),
        AlgebraMatrix::diag(&m2, &[one.clone(), zero.clone()]).unwrap(),
        AlgebraMatrix::diag(&m2, &[e11.clone(), one]).unwrap(),
        AlgebraMatrix::scalar(&e11),
    ];
    for p in &idempotents {
        assert!(p.is_idempotent());
        for kind in [ModuleKind::Left, ModuleKind::Right] {
            let proj = projective_from_idempotent(p, kind).unwrap();
            let g = grassmann_connection(&proj).unwrap();
            assert!(universal_check(&g));
            assert!(curvature_is_linear(&g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_round_trip(c in gaussians(9)) {
        let su = DerivationFrame::su(2).unwrap();
        let o1 = CeOneForms::new(&su).unwrap();
        let base = inner_connection(&su, &o1.module).unwrap();
        let moved = shifted(&base, &c);
        prop_assert!(dv_check(&moved));
        let family = difference(&moved, &base).unwrap();
        prop_assert!(family.iter().all(|s| is_morphism(&o1.module, &o1.module, s)));
        let back = shift(&base, &family).unwrap();
        prop_assert_eq!(back.endos(), moved.endos());
    }

    #[test]
    fn curvature_is_centre_bilinear_and_module_linear(c in gaussians(6), z in gaussians(3), uc in gaussians(2), vc in gaussians(2)) {
        let frame = DerivationFrame::standard(&truncated_polynomial_algebra(3).unwrap()).unwrap();
        let alg = frame.algebra().clone();
        let can = canonical_connection(&frame);
        let conn = shifted(&direct_sum(&can, &can).unwrap(), &c);
        let p = conn.module().clone();
        let combine = |k: &[Scalar]| frame.generators().iter().zip(k).fold(Derivation::zero(&alg), |acc, (g, s)| acc.add(&g.scale(s)).unwrap());
        let (u, v) = (combine(&uc), combine(&vc));
        let r = curvature(&conn, &u, &v).unwrap();
        prop_assert!(is_morphism(&p, &p, &r));
        let zr = &p.centre_action(&z).unwrap() * &r;
        prop_assert_eq!(curvature(&conn, &u.central_multiple(&z).unwrap(), &v).unwrap(), zr.clone());
        prop_assert_eq!(curvature(&conn, &u, &v.central_multiple(&z).unwrap()).unwrap(), zr);
        prop_assert_eq!(curvature(&conn, &v, &u).unwrap(), -&r);
    }
}
