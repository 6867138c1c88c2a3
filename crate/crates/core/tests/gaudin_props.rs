use gaudin_core::bethe::{multi_start_solve, BetheProblem, MultiStartOptions, Site};
use gaudin_core::gaudin::{
    bethe_vector, eigencheck, gaudin_hamiltonian, highest_weight_defect, weight_basis,
    weight_pairing, ModuleVector, TensorModule,
};
use gaudin_core::rootdata::{Coweight, GeneralizedCartanMatrix};
use gaudin_core::Execution;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sites(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::new(1.3 * k as f64, 0.4 * (k * k) as f64))
        .collect()
}

/// Every (module, beta) pair with weight-space dimension at most 200 from a
/// fixed list of small configurations.
fn weight_spaces() -> Vec<(TensorModule, Vec<usize>)> {
    let mut out = Vec::new();
    let sl2: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1], vec![1]],
        vec![vec![1], vec![2], vec![1]],
        vec![vec![2], vec![1], vec![1], vec![3]],
    ];
    for ws in sl2 {
        for b in 0..=4 {
            out.push((TensorModule::new(2, ws.clone()).unwrap(), vec![b]));
        }
    }
    let sl3: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![1, 1], vec![1, 0], vec![2, 0]],
    ];
    for ws in sl3 {
        for b0 in 0..=2 {
            for b1 in 0..=2 {
                out.push((TensorModule::new(3, ws.clone()).unwrap(), vec![b0, b1]));
            }
        }
    }
    out
}

#[test]
fn hamiltonians_commute_and_sum_to_zero() {
    let mut checked = 0;
    for (m, beta) in weight_spaces() {
        let basis = weight_basis(m.n(), m.num_factors(), &beta, 8).unwrap();
        if basis.len() > 200 {
            continue;
        }
        let z = sites(m.num_factors());
        let ops: Vec<_> = (0..z.len())
            .map(|i| gaudin_hamiltonian(&m, &z, i, &basis, Execution::Parallel).unwrap())
            .collect();
        let d = basis.len();
        let sum = ops
            .iter()
            .fold(DMatrix::<Complex64>::zeros(d, d), |acc, o| acc + &o.matrix);
        assert!(sum.norm() < 1e-12, "sum {:e}", sum.norm());
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                assert!(ops[i].commutator_norm(&ops[j]) < 1e-10);
            }
        }
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn sequential_and_parallel_assembly_agree() {
    let m = TensorModule::new(3, vec![vec![1, 1], vec![1, 0], vec![2, 0]]).unwrap();
    let basis = weight_basis(3, 3, &[2, 1], 8).unwrap();
    let z = sites(3);
    let a = gaudin_hamiltonian(&m, &z, 1, &basis, Execution::Sequential).unwrap();
    let b = gaudin_hamiltonian(&m, &z, 1, &basis, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn vacuum_eigenvalues() {
    let ws = vec![vec![1, 0], vec![2, 1], vec![0, 1]];
    let m = TensorModule::new(3, ws.clone()).unwrap();
    let z = sites(3);
    let basis = weight_basis(3, 3, &[0, 0], 8).unwrap();
    for i in 0..3 {
        let op = gaudin_hamiltonian(&m, &z, i, &basis, Execution::Sequential).unwrap();
        let (t, r) = eigencheck(&op, &m.vacuum()).unwrap();
        let expect: Complex64 = (0..3)
            .filter(|&j| j != i)
            .map(|j| c(weight_pairing(3, &ws[i], &ws[j])) / (z[i] - z[j]))
            .sum();
        assert!((t - expect).norm() < 1e-12 && r < 1e-12);
    }
}

/// `e f^k v = k (p - k + 1) f^{k-1} v` in the `sl_2` Verma module.
#[test]
fn sl2_lowering_chain() {
    for p in 0..4i64 {
        let m = TensorModule::new(2, vec![vec![p]]).unwrap();
        let mut v = m.vacuum();
        for k in 1..6i64 {
            let prev = v.clone();
            v = m.act((1, 0), 0, &v);
            let ev = m.act((0, 1), 0, &v);
            assert_eq!(ev, prev.scale(c((k * (p - k + 1)) as f64)).pruned());
        }
    }
}

trait Pruned {
    fn pruned(self) -> Self;
}

impl Pruned for ModuleVector {
    fn pruned(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() != 0.0);
        self
    }
}

fn problem(label: &str, sites: &[(Complex64, Vec<i64>)], colors: Vec<usize>) -> BetheProblem {
    let a = GeneralizedCartanMatrix::parse(label).unwrap();
    let s = sites
        .iter()
        .map(|(z, w)| Site::new(*z, Coweight::from_integers(w)))
        .collect();
    BetheProblem::new(a, s, colors).unwrap()
}

fn config() -> impl Strategy<Value = (bool, Vec<(Complex64, Vec<i64>)>, Vec<usize>, u64)> {
    (
        any::<bool>(),
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, 0i64..3, 0i64..3), 2..4),
        any::<u64>(),
        0usize..3,
    )
        .prop_map(|(sl3, raw, seed, extra)| {
            let sites: Vec<(Complex64, Vec<i64>)> = raw
                .into_iter()
                .enumerate()
                .map(|(k, (x, y, a, b))| {
                    let z = Complex64::new(x + 3.0 * k as f64, y);
                    if sl3 {
                        (z, vec![a.max(1), b])
                    } else {
                        (z, vec![a.max(1)])
                    }
                })
                .collect();
            let colors = if sl3 {
                [vec![0, 1], vec![0], vec![0, 1, 0]][extra].clone()
            } else {
                vec![0; extra + 1]
            };
            (sl3, sites, colors, seed)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn bethe_vectors_are_eigenvectors_iff_solutions((sl3, sites, colors, seed) in config()) {
        let p = problem(if sl3 { "A2" } else { "A1" }, &sites, colors);
        let opts = MultiStartOptions { num_starts: 16, seed, ..Default::default() };
        let Some(sol) = multi_start_solve(&p, &opts).into_iter().find(|s| s.residual < 1e-11 && s.is_isolated()) else {
            return Ok(());
        };
        let m = TensorModule::from_problem(&p).unwrap();
        let z: Vec<Complex64> = p.sites().iter().map(|s| s.z).collect();
        let basis = weight_basis(m.n(), m.num_factors(), &p.color_counts(), 8).unwrap();
        let v = bethe_vector(&m, &z, p.colors(), &sol.roots).unwrap();
        let mut moved = sol.roots.clone();
        moved[0] += Complex64::new(1e-2, 0.0);
        let w = bethe_vector(&m, &z, p.colors(), &moved).unwrap();
        let mut worst_bad: f64 = 0.0;
        for i in 0..z.len() {
            let op = gaudin_hamiltonian(&m, &z, i, &basis, Execution::Sequential).unwrap();
            let (_, r) = eigencheck(&op, &v).unwrap();
            prop_assert!(r < 1e-10, "residual {r:e}");
            worst_bad = worst_bad.max(eigencheck(&op, &w).unwrap().1);
        }
        prop_assert!(worst_bad > 1e-4, "perturbed residual {worst_bad:e}");
        if p.residue_at_infinity().is_dominant() {
            prop_assert!(highest_weight_defect(&m, &v) < 1e-10 * (1.0 + v.norm()));
        }
    }
}

/// Independent 4x4 model of two spin-1/2 sites with explicit e, f, h.
#[test]
fn two_spin_half_brute_force() {
    let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let f = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
    let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    // trace-form duals: e <-> f, h <-> h/2
    let omega = e.kronecker(&f) + f.kronecker(&e) + h.kronecker(&h) * 0.5;
    let xi1 = &omega / (0.0 - 2.0);
    let singlet = nalgebra::DVector::from_row_slice(&[0.0, 1.0, -1.0, 0.0]);
    let img = &xi1 * &singlet;
    assert!((img - &singlet * 0.75).norm() < 1e-14);
    let triplet = nalgebra::DVector::from_row_slice(&[0.0, 1.0, 1.0, 0.0]);
    assert!((&xi1 * &triplet - &triplet * -0.25).norm() < 1e-14);

    let m = TensorModule::new(2, vec![vec![1], vec![1]]).unwrap();
    let z = [c(0.0), c(2.0)];
    let basis = weight_basis(2, 2, &[1], 8).unwrap();
    let op = gaudin_hamiltonian(&m, &z, 0, &basis, Execution::Sequential).unwrap();
    let v = bethe_vector(&m, &z, &[0], &[c(1.0)]).unwrap();
    // f (x) 1 |0> - 1 (x) f |0>
    assert!((v.coeff(&vec![vec![(1, 0)], vec![]]) - c(1.0)).norm() < 1e-14);
    assert!((v.coeff(&vec![vec![], vec![(1, 0)]]) - c(-1.0)).norm() < 1e-14);
    let (t, r) = eigencheck(&op, &v).unwrap();
    assert!((t - c(0.75)).norm() < 1e-12 && r < 1e-12);
}
