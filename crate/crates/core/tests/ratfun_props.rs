use gaudin_core::ratfun::{Poly, RatFun};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

/// Poles on a coarse grid so that distinct poles are at least 0.1 apart.
fn separated_poles(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::sample::subsequence((0..64).collect::<Vec<_>>(), n).prop_map(|idx| {
        idx.into_iter()
            .map(|k| Complex64::new(-1.5 + 0.4 * (k % 8) as f64, -1.5 + 0.4 * (k / 8) as f64))
            .collect()
    })
}

fn samples() -> Vec<Complex64> {
    (0..20)
        .map(|k| {
            let a = 0.731 * k as f64;
            Complex64::new(2.7 * a.cos() + 0.05, 2.7 * a.sin() - 0.03)
        })
        .collect()
}

fn simple_pole_fn(poles: &[Complex64], coeffs: &[Complex64], poly: &[Complex64]) -> RatFun {
    poles.iter().zip(coeffs).fold(
        RatFun::from_poly(Poly::new(poly.to_vec())),
        |acc, (&p, &c)| &acc + &RatFun::pole_term(p, 1, c),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differentiate_then_integrate(
        poles in (1usize..5).prop_flat_map(separated_poles),
        coeffs in prop::collection::vec(complex(), 5),
        poly in prop::collection::vec(complex(), 0..4),
    ) {
        let f = simple_pole_fn(&poles, &coeffs, &poly);
        let h = f.derivative().hermite_integrate(1e-9).unwrap();
        prop_assert!(h.residues.is_empty(), "residues {:?}", h.residues);
        let g = h.antiderivative();
        let pts = samples();
        let shift = f.eval(pts[0]) - g.eval(pts[0]);
        for &t in &pts {
            prop_assert!((f.eval(t) - g.eval(t) - shift).norm() < 1e-8);
        }
    }

    #[test]
    fn jets_are_multiplicative(
        poles in separated_poles(4),
        coeffs in prop::collection::vec(complex(), 4),
        center in complex(),
        order in 1i32..6,
    ) {
        let f = simple_pole_fn(&poles[..2], &coeffs[..2], &[Complex64::new(1.0, 0.5)]);
        let g = simple_pole_fn(&poles[2..], &coeffs[2..], &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let direct = (&f * &g).local_jet(center, order);
        let product = &f.local_jet(center, order + 2) * &g.local_jet(center, order + 2);
        let k = direct.order().min(product.order());
        let low = direct.lowest_order().min(product.lowest_order());
        let scale = 1.0 + product.coefficients().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for j in low..=k {
            prop_assert!((direct.coeff(j) - product.coeff(j)).norm() < 1e-8 * scale);
        }
    }

    #[test]
    fn jet_of_quotient_matches_pole_form(
        poles in (1usize..4).prop_flat_map(separated_poles),
        coeffs in prop::collection::vec(complex(), 4),
        center in complex(),
    ) {
        let f = simple_pole_fn(&poles, &coeffs, &[Complex64::new(0.3, 0.0)]);
        let num = f.numerator();
        let den = f.denominator();
        let order = 4;
        let nj = gaudin_core::ratfun::LocalJet::new(center, 0, num.taylor_at(center), order + 6);
        let dj = gaudin_core::ratfun::LocalJet::new(center, 0, den.taylor_at(center), order + 6);
        let via_division = nj.checked_div(&dj).unwrap();
        let direct = f.local_jet(center, order);
        for j in direct.lowest_order()..=order {
            prop_assert!((via_division.coeff(j) - direct.coeff(j)).norm() < 1e-6 * (1.0 + direct.coeff(j).norm()));
        }
    }

    #[test]
    fn partial_fractions_recombine(
        poles in (1usize..5).prop_flat_map(separated_poles),
        coeffs in prop::collection::vec(complex(), 5),
        poly in prop::collection::vec(complex(), 0..3),
    ) {
        let f = simple_pole_fn(&poles, &coeffs, &poly);
        let rebuilt = RatFun::from_polys(&f.numerator(), &f.denominator(), 1e-12).unwrap();
        let pf = rebuilt.partial_fractions(1e-9).unwrap();
        for &t in &samples() {
            let sum: Complex64 = pf.polynomial.eval(t)
                + pf.terms.iter().map(|&(p, k, c)| c / (t - p).powi(k as i32)).sum::<Complex64>();
            prop_assert!((sum - f.eval(t)).norm() < 1e-9 * (1.0 + f.eval(t).norm()));
        }
    }
}
