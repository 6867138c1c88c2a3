use gaudin_core::miura::{
    connection_from_roots, diagonal_coordinates, miura_scalar_oper, CartanConnection,
};
use gaudin_core::operforms::{
    canonical_form, canonical_form_with_gauge, gauge_transform, oper_coordinate_change, schwarzian,
    CanonicalOper, MatrixOper, RatMatrix,
};
use gaudin_core::ratfun::{LocalJet, Poly, RatFun};
use gaudin_core::rootdata::{Coweight, GeneralizedCartanMatrix};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ratfun() -> impl Strategy<Value = RatFun> {
    (
        prop::collection::vec(-1.0..1.0f64, 3),
        -1.0..1.0f64,
        0.5..1.5f64,
        -1.0..1.0f64,
    )
        .prop_map(|(p, r, pole, im)| {
            &RatFun::from_poly(Poly::from_real(&p))
                + &RatFun::pole_term(Complex64::new(pole, im), 1, c(r))
        })
}

fn matrix_oper(n: usize) -> impl Strategy<Value = MatrixOper> {
    prop::collection::vec(ratfun(), n * (n + 1) / 2).prop_map(move |fs| {
        let mut m: RatMatrix = vec![vec![RatFun::zero(); n]; n];
        let mut it = fs.into_iter();
        for i in 0..n {
            for j in i..n {
                m[i][j] = it.next().unwrap();
            }
            if i + 1 < n {
                m[i + 1][i] = RatFun::constant(c(-1.0));
            }
        }
        let tr = (0..n - 1).fold(RatFun::zero(), |acc, i| &acc + &m[i][i]);
        m[n - 1][n - 1] = -&tr;
        MatrixOper::new(m).unwrap()
    })
}

fn unipotent(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(ratfun(), n * (n - 1) / 2).prop_map(move |fs| {
        let mut g: RatMatrix = vec![vec![RatFun::zero(); n]; n];
        let mut it = fs.into_iter();
        for i in 0..n {
            g[i][i] = RatFun::constant(c(1.0));
            for j in i + 1..n {
                g[i][j] = it.next().unwrap();
            }
        }
        g
    })
}

const SAMPLES: [Complex64; 4] = [
    Complex64::new(3.1, 0.4),
    Complex64::new(-2.2, 2.5),
    Complex64::new(0.3, -3.0),
    Complex64::new(-3.5, -1.1),
];

fn close(a: &CanonicalOper, b: &CanonicalOper, tol: f64) -> bool {
    a.v.iter().zip(&b.v).all(|(x, y)| {
        SAMPLES
            .iter()
            .all(|&t| (x.eval(t) - y.eval(t)).norm() <= tol * (1.0 + x.eval(t).norm()))
    })
}

fn oper_and_gauge() -> impl Strategy<Value = (MatrixOper, RatMatrix)> {
    (2usize..=3).prop_flat_map(|n| (matrix_oper(n), unipotent(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn canonical_form_is_gauge_invariant((m, g) in oper_and_gauge()) {
        let v = canonical_form(&m).unwrap();
        let moved = gauge_transform(&m, &g).unwrap();
        prop_assert!(close(&v, &canonical_form(&moved).unwrap(), 1e-8));
    }

    #[test]
    fn canonical_form_is_idempotent((m, _g) in oper_and_gauge()) {
        let v = canonical_form(&m).unwrap();
        prop_assert!(close(&v, &canonical_form(&MatrixOper::companion(&v)).unwrap(), 1e-8));
    }

    #[test]
    fn returned_gauge_reaches_companion((m, _g) in oper_and_gauge()) {
        let (v, g) = canonical_form_with_gauge(&m).unwrap();
        let comp = MatrixOper::companion(&v);
        let moved = gauge_transform(&m, &g).unwrap();
        for &t in &SAMPLES {
            let (a, b) = (moved.eval(t), comp.eval(t));
            for (ra, rb) in a.iter().zip(&b) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()));
                }
            }
        }
    }

    #[test]
    fn miura_agrees_with_canonical_form(
        n in 2usize..=4,
        pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2),
        roots in prop::collection::vec((-1.0..1.0f64, 1.2..2.0f64), 0..3),
        labels in prop::collection::vec(0i64..3, 6),
    ) {
        let a = GeneralizedCartanMatrix::parse(&format!("A{}", n - 1)).unwrap();
        let r = n - 1;
        let terms: Vec<(Complex64, Coweight)> = pts
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                let w: Vec<i64> = (0..r).map(|i| labels[(k * r + i) % 6]).collect();
                (Complex64::new(x + 3.0 * k as f64, y), Coweight::from_integers(&w))
            })
            .collect();
        let mut conn = CartanConnection::new(a.clone(), terms).unwrap();
        for (k, &(x, y)) in roots.iter().enumerate() {
            let mut w = vec![0i64; r];
            w[k % r] = 1;
            let extra = CartanConnection::new(a.clone(), vec![(Complex64::new(x, y), Coweight::from_integers(&w))]).unwrap();
            let mut all = conn.terms().to_vec();
            all.extend(extra.terms().iter().cloned());
            conn = CartanConnection::new(a.clone(), all).unwrap();
        }
        let scalar = miura_scalar_oper(&conn, 1e-8).unwrap();
        let u = diagonal_coordinates(&conn).unwrap();
        let v = canonical_form(&MatrixOper::from_diagonal(&u)).unwrap();
        prop_assert!(close(&CanonicalOper::from(&scalar), &v, 1e-8));
    }

    #[test]
    fn schwarzian_cocycle(
        p in prop::collection::vec(-0.5..0.5f64, 4),
        q in prop::collection::vec(-0.5..0.5f64, 4),
        x0 in -1.0..1.0f64,
    ) {
        // psi near x0, phi near psi(x0); both with unit-ish derivative
        let order = 8;
        let mut pc: Vec<Complex64> = p.iter().map(|&x| c(x)).collect();
        pc[1] += 1.0;
        let psi = LocalJet::new(c(x0), 0, pc, order + 4);
        let mut qc: Vec<Complex64> = q.iter().map(|&x| c(x)).collect();
        qc[0] = psi.coeff(0);
        qc[1] += 1.0;
        let phi_at = LocalJet::new(psi.coeff(0), 0, qc, order + 4);
        let composed = phi_at.compose(&psi).unwrap();
        let lhs = schwarzian(&composed, 3).unwrap();
        let s_phi = schwarzian(&phi_at, order).unwrap().compose(&psi).unwrap();
        let dpsi = psi.derivative();
        let rhs = &(&s_phi * &(&dpsi * &dpsi)) + &schwarzian(&psi, order).unwrap();
        for k in 0..=3 {
            prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() < 1e-9 * (1.0 + lhs.coeff(k).norm()));
        }
    }

    #[test]
    fn mobius_maps_have_zero_schwarzian(
        a in -2.0..2.0f64, b in -2.0..2.0f64, d in -2.0..2.0f64, s0 in -0.2..0.2f64,
    ) {
        // (a s + b) / (s + d) with a d - b != 0, away from the pole
        prop_assume!((a * d - b).abs() > 0.1 && (s0 + d).abs() > 0.5);
        let den = LocalJet::new(c(s0), 0, vec![c(s0 + d), c(1.0)], 10).recip().unwrap();
        let num = LocalJet::new(c(s0), 0, vec![c(a * s0 + b), c(a)], 10);
        let phi = &num * &den;
        let s = schwarzian(&phi, 4).unwrap();
        // coefficient k measured at the scale of the distance to the pole
        let rho = (s0 + d).abs();
        let worst = (0..=4).map(|k| s.coeff(k).norm() * rho.powi(k)).fold(0.0, f64::max);
        prop_assert!(worst < 1e-12, "worst {worst:e}");
    }

    #[test]
    fn affine_change_scales_v1(scale in 0.5..2.0f64, shift_by in -1.0..1.0f64) {
        // t = scale s + shift: v_1 -> scale^2 v_1(t)
        let v = CanonicalOper { v: vec![RatFun::pole_term(c(5.0), 2, c(1.0))] };
        let phi = LocalJet::new(c(0.0), 0, vec![c(shift_by), c(scale)], 8);
        let out = oper_coordinate_change(&v, &phi, 2).unwrap();
        let expect = v.v[0].eval(c(shift_by)) * scale * scale;
        prop_assert!((out[0].coeff(0) - expect).norm() < 1e-12);
    }
}

#[test]
fn roots_connection_builds() {
    let a = GeneralizedCartanMatrix::parse("A1").unwrap();
    let p = gaudin_core::bethe::BetheProblem::new(
        a,
        vec![gaudin_core::bethe::Site::new(
            c(0.0),
            Coweight::from_integers(&[1]),
        )],
        vec![0],
    )
    .unwrap();
    let conn = connection_from_roots(&p, &[c(1.0)]);
    assert_eq!(conn.terms().len(), 2);
}
