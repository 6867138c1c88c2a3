use gaudin_core::bethe::{multi_start_solve, residual, BetheProblem, MultiStartOptions, Site};
use gaudin_core::ratfun::Poly;
use gaudin_core::repro::{
    degree_drop_value, explore_population, fertile_antiderivative, reproduce, tuple_from_solution,
    tuple_residual, PolyTuple, PopulationOptions,
};
use gaudin_core::rootdata::{Coweight, GeneralizedCartanMatrix};
use gaudin_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn solved(
    label: &str,
    sites: &[(Complex64, Vec<i64>)],
    colors: Vec<usize>,
    seed: u64,
) -> Option<(BetheProblem, PolyTuple)> {
    let a = GeneralizedCartanMatrix::parse(label).unwrap();
    let sites = sites
        .iter()
        .map(|(z, w)| Site::new(*z, Coweight::from_integers(w)))
        .collect();
    let p = BetheProblem::new(a, sites, colors).ok()?;
    let opts = MultiStartOptions {
        num_starts: 24,
        seed,
        ..Default::default()
    };
    let sol = multi_start_solve(&p, &opts)
        .into_iter()
        .find(|s| s.residual < 1e-11 && s.is_isolated())?;
    let t = tuple_from_solution(&p, &sol);
    Some((p, t))
}

fn site_strategy() -> impl Strategy<Value = Vec<(Complex64, Vec<i64>)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64, 1i64..3), 2..4).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(k, (x, y, p))| (Complex64::new(x + 5.0 * k as f64, y), vec![p]))
            .collect()
    })
}

fn sl2_case() -> impl Strategy<Value = (Vec<(Complex64, Vec<i64>)>, usize, u64)> {
    (site_strategy(), 1usize..3, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn solutions_are_fertile_and_perturbations_are_not((sites, m, seed) in sl2_case()) {
        let Some((p, t)) = solved("A1", &sites, vec![0; m], seed) else { return Ok(()) };
        prop_assert!(fertile_antiderivative(&p, &t, 0, 1e-9).is_ok());

        let roots: Vec<Complex64> = t.polys[0].roots(1e-9).unwrap().into_iter().map(|(r, _)| r).collect();
        let mut moved = roots.clone();
        moved[0] += Complex64::new(1e-3, 0.0);
        let bae = residual(&p, &moved, 1e-9).unwrap();
        let pt = PolyTuple { polys: vec![Poly::from_roots(&moved)] };
        match fertile_antiderivative(&p, &pt, 0, 1e-9) {
            Err(Error::Infertile { residues }) => {
                // residue_j = T(w_j) / prod_{s != j} (w_j - w_s)^2 * (BAE residual)_j
                for (pole, r) in residues {
                    let j = (0..moved.len()).min_by(|&a, &b| {
                        (moved[a] - pole).norm().partial_cmp(&(moved[b] - pole).norm()).unwrap()
                    }).unwrap();
                    let w = moved[j];
                    let t_val: Complex64 = p.sites().iter().map(|s| (w - s.z).powi(s.weight.to_integers().unwrap()[0] as i32)).product();
                    let others: Complex64 = moved.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| (w - v) * (w - v)).product();
                    let scaled = r.norm() / (t_val / others).norm();
                    let ratio = scaled / bae[j].norm();
                    prop_assert!(ratio > 0.1 && ratio < 10.0, "ratio {ratio}");
                }
            }
            other => prop_assert!(false, "expected infertile, got {other:?}"),
        }
    }

    #[test]
    fn reproduction_is_an_involution((sites, m, seed) in sl2_case(), cre in -2.0..2.0f64, cim in -2.0..2.0f64) {
        let Some((p, t)) = solved("A1", &sites, vec![0; m], seed) else { return Ok(()) };
        let c = Complex64::new(cre, cim);
        let Ok(once) = reproduce(&p, &t, 0, c, 1e-9) else { return Ok(()) };
        let f = fertile_antiderivative(&p, &once.tuple, 0, 1e-8).unwrap();
        let back_c = degree_drop_value(&f).unwrap();
        let back = reproduce(&p, &once.tuple, 0, back_c, 1e-8).unwrap();
        let diff = (&back.tuple.polys[0] - &t.polys[0]).max_abs();
        prop_assert!(diff < 1e-9 * (1.0 + t.polys[0].max_abs()), "diff {diff:e}");
    }

    #[test]
    fn generic_reproductions_solve_the_equations((sites, m, seed) in sl2_case(), cre in -2.0..2.0f64) {
        let Some((p, t)) = solved("A1", &sites, vec![0; m], seed) else { return Ok(()) };
        let Ok(r) = reproduce(&p, &t, 0, Complex64::new(cre, 0.3), 1e-9) else { return Ok(()) };
        if let Some(res) = tuple_residual(&p, &r.tuple, 1e-9) {
            prop_assert!(res < 1e-8 * (1.0 + r.tuple.polys[0].max_abs()), "residual {res:e}");
        }
    }
}

#[test]
fn rank_two_solutions_are_fertile_in_every_direction() {
    let w = |a: i64, b: i64| vec![a, b];
    let cases = [
        (
            vec![
                (Complex64::new(0.0, 0.0), w(1, 1)),
                (Complex64::new(2.0, 0.5), w(1, 0)),
            ],
            vec![0, 1],
        ),
        (
            vec![
                (Complex64::new(0.0, 0.0), w(2, 1)),
                (Complex64::new(1.5, 0.45), w(1, 1)),
            ],
            vec![0, 1, 0],
        ),
    ];
    for (sites, colors) in cases {
        let (p, t) = solved("A2", &sites, colors, 3).unwrap();
        for i in 0..2 {
            fertile_antiderivative(&p, &t, i, 1e-9).unwrap();
        }
    }
}

#[test]
fn flip_law_on_explored_edges() {
    let a = GeneralizedCartanMatrix::parse("A2").unwrap();
    let sites = vec![
        Site::new(Complex64::new(0.0, 0.0), Coweight::from_integers(&[1, 0])),
        Site::new(Complex64::new(2.0, 0.3), Coweight::from_integers(&[0, 1])),
    ];
    let p = BetheProblem::new(a, sites, vec![]).unwrap();
    let pop = explore_population(
        &p,
        &PolyTuple::ones(2),
        &PopulationOptions {
            depth: 2,
            ..Default::default()
        },
    );
    assert!(pop.edges.len() > 2);
    for e in &pop.edges {
        if e.degree_changed {
            assert_eq!(e.pairing_after, -e.pairing_before - 2);
        } else {
            assert_eq!(e.pairing_after, e.pairing_before);
            assert!(e.pairing_before <= -2);
        }
    }
    for n in &pop.nodes {
        assert!(n
            .mu_infinity
            .to_integers()
            .unwrap()
            .iter()
            .all(|&x| x != -1));
        if !n.degenerate {
            assert!(tuple_residual(&p, &n.tuple, 1e-9).unwrap() < 1e-8);
        }
    }
}
