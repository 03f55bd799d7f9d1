use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempered::linalg::*;
use tempered::reproduce::random_hermitian;
use tempered::states::{self, random_density, random_unitary};
use tempered::Error;

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn sorted_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    let mut w = want.to_vec();
    w.sort_by(f64::total_cmp);
    for (g, w) in got.iter().zip(&w) {
        assert_close(*g, *w, tol);
    }
}

fn sq(d: usize) -> BipartiteShape {
    BipartiteShape::square(d).unwrap()
}

#[test]
fn tensor_examples() {
    assert_eq!(tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)), ComplexMatrix::identity(6));
    let phi = states::phi(2).unwrap().matrix;
    assert_close(tensor(&phi, &phi).trace().re, 1.0, 1e-15);
    let x3 = states::x3().matrix;
    let big = tensor(&x3, &x3);
    assert_eq!(big.dim(), 81);
    let top = *hermitian_eigenvalues(&big).unwrap().last().unwrap();
    let bottom = hermitian_eigenvalues(&big).unwrap()[0];
    assert_close(top.max(-bottom), 4.0, 1e-9);
    assert_close(operator_norm(&big), 4.0, 1e-9);
}

#[test]
fn tensor_acts_factorwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_hermitian(2, &mut rng);
    let b = random_hermitian(3, &mut rng);
    let x = states::random_pure_vector(2, &mut rng);
    let y = states::random_pure_vector(3, &mut rng);
    let xy: Vec<C64> = x.iter().flat_map(|xi| y.iter().map(move |yj| xi * yj)).collect();
    let lhs = tensor(&a, &b).apply(&xy);
    let (ax, by) = (a.apply(&x), b.apply(&y));
    let rhs: Vec<C64> = ax.iter().flat_map(|u| by.iter().map(move |v| u * v)).collect();
    for (l, r) in lhs.iter().zip(&rhs) {
        assert!((l - r).norm() < 1e-13);
    }
}

#[test]
fn partial_transpose_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = random_hermitian(2, &mut rng);
    let y = random_hermitian(2, &mut rng);
    let pt = partial_transpose(&tensor(&x, &y), sq(2)).unwrap();
    assert!(pt.max_abs_diff(&tensor(&x, &y.transpose())) < 1e-15);

    let w = states::omega3();
    let ev = hermitian_eigenvalues(&w.partial_transpose()).unwrap();
    let s = 1.0 / 6.0;
    sorted_close(&ev, &[-s, -s, -s, s, s, s, 2.0 * s, 2.0 * s, 2.0 * s], 1e-12);
    assert!(partial_transpose(&w.partial_transpose(), sq(3)).unwrap().max_abs_diff(&w.matrix) == 0.0);
}

#[test]
fn partial_transpose_matches_index_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = BipartiteShape::new(2, 3).unwrap();
    let m = random_hermitian(6, &mut rng);
    let pt = partial_transpose(&m, shape).unwrap();
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..2 {
                for l in 0..3 {
                    assert_eq!(pt[(i * 3 + j, k * 3 + l)], m[(i * 3 + l, k * 3 + j)]);
                }
            }
        }
    }
}

#[test]
fn partial_trace_examples() {
    let third = ComplexMatrix::identity(3).scale(1.0 / 3.0);
    let phi3 = states::phi(3).unwrap().matrix;
    assert!(partial_trace(&phi3, sq(3), Subsystem::B).unwrap().max_abs_diff(&third) < 1e-15);

    // Direct summation over ω₃'s entries: (Tr_A ω)_{jl} = Σ_i ω_{ij,il}.
    let w = states::omega3().matrix;
    let direct = ComplexMatrix::from_fn(3, |j, l| (0..3).map(|i| w[(i * 3 + j, i * 3 + l)]).sum());
    let reduced = partial_trace(&w, sq(3), Subsystem::B).unwrap();
    assert!(reduced.max_abs_diff(&direct) < 1e-15);
    assert!(reduced.max_abs_diff(&third) < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ra = random_density(2, 2, &mut rng);
    let rb = random_density(3, 3, &mut rng).scale(0.5);
    let shape = BipartiteShape::new(2, 3).unwrap();
    let kept = partial_trace(&tensor(&ra, &rb), shape, Subsystem::A).unwrap();
    assert!(kept.max_abs_diff(&ra.scale(0.5)) < 1e-14);
}

#[test]
fn eigensystem_examples() {
    assert!(hermitian_eigenvalues(&ComplexMatrix::identity(4)).unwrap().iter().all(|&l| (l - 1.0).abs() < 1e-15));
    let x3 = states::x3();
    let mut want = vec![-1.0];
    want.extend([0.0; 6]);
    want.extend([2.0; 2]);
    sorted_close(&hermitian_eigenvalues(&x3.matrix).unwrap(), &want, 1e-12);
    let mut want = vec![-1.0; 3];
    want.extend([1.0; 6]);
    sorted_close(&hermitian_eigenvalues(&x3.partial_transpose()).unwrap(), &want, 1e-12);
}

#[test]
fn eigensystem_rejects_non_hermitian() {
    let mut m = ComplexMatrix::identity(3);
    m[(0, 1)] = C64::new(1.0, 0.0);
    assert!(matches!(hermitian_eigensystem(&m), Err(Error::Contract(_))));
}

#[test]
fn eigensystem_is_deterministic_with_normalised_phases() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_hermitian(7, &mut rng);
    let a = hermitian_eigensystem(&m).unwrap();
    let b = hermitian_eigensystem(&m).unwrap();
    assert_eq!(a.eigenvalues, b.eigenvalues);
    assert_eq!(a.eigenvectors, b.eigenvectors);
    assert!(a.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    for k in 0..7 {
        let v = a.vector(k);
        let first = v.iter().find(|c| c.norm() > 1e-12).unwrap();
        assert!(first.im.abs() < 1e-12 && first.re > 0.0);
    }
}

#[test]
fn norm_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rho = random_density(6, 3, &mut rng);
    assert_close(trace_norm(&rho), 1.0, 1e-12);
    for d in [2, 3] {
        assert_close(trace_norm(&states::phi(d).unwrap().partial_transpose()), d as f64, 1e-12);
    }
    assert_close(trace_norm(&states::omega3().partial_transpose()), 2.0, 1e-12);

    let x3 = states::x3();
    assert_close(operator_norm(&x3.matrix), 2.0, 1e-12);
    assert_close(operator_norm(&x3.partial_transpose()), 1.0, 1e-12);
    assert_close(operator_norm(&ComplexMatrix::identity(5)), 1.0, 1e-15);
}

#[test]
fn norms_of_non_hermitian_matrices_use_singular_values() {
    // [[0, 2], [0, 0]] has singular values {2, 0}.
    let m = ComplexMatrix::from_real(2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
    assert_close(trace_norm(&m), 2.0, 1e-14);
    assert_close(operator_norm(&m), 2.0, 1e-14);
    assert_eq!(singular_values(&m), vec![2.0, 0.0]);
}

#[test]
fn fidelity_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rho = random_density(4, 2, &mut rng);
    assert_close(fidelity(&rho, &rho).unwrap(), 1.0, 1e-9);
    let phi = states::phi(2).unwrap().matrix;
    assert_close(fidelity(&phi, &ComplexMatrix::identity(4).scale(0.25)).unwrap(), 0.25, 1e-12);
    assert_close(fidelity(&phi, &states::tau(1).unwrap().matrix).unwrap(), 0.0, 1e-12);
    let sigma = random_density(4, 4, &mut rng);
    let f = fidelity(&rho, &sigma).unwrap();
    assert_close(f, fidelity(&sigma, &rho).unwrap(), 1e-10);
    assert!((0.0..=1.0).contains(&f));
    assert!(matches!(fidelity(&ComplexMatrix::identity(4), &sigma), Err(Error::Contract(_))));
}

#[test]
fn entropy_examples() {
    let phi = states::phi(3).unwrap().matrix;
    assert_close(von_neumann_entropy(&phi).unwrap(), 0.0, 1e-12);
    assert_close(von_neumann_entropy(&ComplexMatrix::identity(3).scale(1.0 / 3.0)).unwrap(), 3f64.log2(), 1e-12);
    assert_close(von_neumann_entropy(&states::omega3().matrix).unwrap(), 1.0, 1e-12);
}

#[test]
fn relative_entropy_examples() {
    let w = states::omega3().matrix;
    let p3 = states::p_subspace(3).unwrap().matrix.scale(1.0 / 3.0);
    let mixed4 = ComplexMatrix::identity(4).scale(0.25);
    let phi2 = states::phi(2).unwrap().matrix;
    assert_close(quantum_relative_entropy(&w, &w).unwrap(), 0.0, 1e-10);
    assert_close(quantum_relative_entropy(&w, &p3).unwrap(), 1.5f64.log2(), 1e-10);
    assert_close(quantum_relative_entropy(&phi2, &mixed4).unwrap(), 2.0, 1e-10);

    assert_close(max_relative_entropy(&w, &w).unwrap(), 0.0, 1e-10);
    assert_close(max_relative_entropy(&w, &p3).unwrap(), 1.5f64.log2(), 1e-10);
    assert_close(max_relative_entropy(&phi2, &mixed4).unwrap(), 2.0, 1e-10);
    assert!(quantum_relative_entropy(&p3, &w).unwrap().is_infinite());
}

fn seeded_hermitian(seed: u64, n: usize) -> ComplexMatrix {
    random_hermitian(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_transpose_is_trace_preserving_hermitian_involution(seed in any::<u64>()) {
        let m = seeded_hermitian(seed, 9);
        let pt = partial_transpose(&m, sq(3)).unwrap();
        prop_assert!(pt.is_hermitian(1e-14));
        prop_assert!((pt.trace() - m.trace()).norm() < 1e-12);
        prop_assert!(partial_transpose(&pt, sq(3)).unwrap().max_abs_diff(&m) == 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trace_norm_bounds_trace_and_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian(n, &mut rng);
        let u = random_unitary(n, &mut rng);
        let t = trace_norm(&m);
        prop_assert!(t + 1e-12 >= m.trace().norm());
        prop_assert!((trace_norm(&m.conjugate_by(&u)) - t).abs() < 1e-9);
    }

    #[test]
    fn operator_norm_is_multiplicative_on_tensors(seed in any::<u64>(), na in 1usize..5, nb in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(na, &mut rng);
        let b = random_hermitian(nb, &mut rng);
        prop_assert!((operator_norm(&tensor(&a, &b)) - operator_norm(&a) * operator_norm(&b)).abs() < 1e-9);
    }

    #[test]
    fn relative_entropies_are_ordered_and_non_negative(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(n, n, &mut rng);
        let sigma = random_density(n, n, &mut rng);
        let d = quantum_relative_entropy(&rho, &sigma).unwrap();
        let dmax = max_relative_entropy(&rho, &sigma).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert!(dmax + 1e-9 >= d);
        // Distinct full-rank states are separated, so D must be strictly positive.
        prop_assert!(trace_norm(&(&rho - &sigma)) > 1e-8);
        prop_assert!(d > 0.0);
        prop_assert!(quantum_relative_entropy(&rho, &rho).unwrap().abs() < 1e-9);
    }

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), n in 1usize..24) {
        let m = seeded_hermitian(seed, n);
        let s = hermitian_eigensystem(&m).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(s.reconstruct().max_abs_diff(&m) <= 1e-9 * scale);
        let v = &s.eigenvectors;
        prop_assert!(v.adjoint().matmul(v).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
    }
}

#[test]
fn eigen_reconstruction_at_large_dimension() {
    for (seed, n) in [(10, 36), (11, 64), (12, 81)] {
        let m = seeded_hermitian(seed, n);
        let s = hermitian_eigensystem(&m).unwrap();
        let residual = (&s.reconstruct() - &m).frobenius_norm();
        assert!(residual <= 1e-9 * m.frobenius_norm().max(1.0), "n = {n}: residual {residual}");
        let v = &s.eigenvectors;
        assert!(v.adjoint().matmul(v).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
    }
}

#[test]
fn dimension_mismatches_are_errors() {
    let m = ComplexMatrix::identity(6);
    assert!(matches!(partial_transpose(&m, sq(2)), Err(Error::Dimension(_))));
    assert!(matches!(partial_trace(&m, sq(3), Subsystem::A), Err(Error::Dimension(_))));
}
