use tempered::linalg::*;
use tempered::protocols::isotropic_separability_check;
use tempered::states::*;
use tempered::Error;

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn assert_valid_state(op: &NamedOperator) {
    assert!(op.is_state, "{}", op.label);
    let ev = hermitian_eigenvalues(&op.matrix).unwrap();
    assert!(ev[0] >= -1e-9, "{}: smallest eigenvalue {}", op.label, ev[0]);
    assert_close(op.matrix.trace().re, 1.0, 1e-12);
}

#[test]
fn phi_examples() {
    let p = phi(2).unwrap();
    let want = ComplexMatrix::from_fn(4, |i, j| if (i == 0 || i == 3) && (j == 0 || j == 3) { c(0.5) } else { c(0.0) });
    assert_eq!(p.matrix, want);
    for d in 2..=4 {
        let p = phi(d).unwrap();
        assert_close(p.matrix.trace_product(&p.matrix).re, 1.0, 1e-14);
    }
    let two = p.power(2).unwrap();
    assert_close(trace_norm(&two.partial_transpose()), 4.0, 1e-12);
    assert!(matches!(phi(1), Err(Error::Domain(_))));
}

#[test]
fn phi_tensor_power_regroups_to_phi4() {
    let p2 = phi(2).unwrap();
    let plain = tensor(&p2.matrix, &p2.matrix);
    let grouped = regroup(&plain, p2.shape, 2).unwrap();
    assert!(grouped.max_abs_diff(&phi(4).unwrap().matrix) < 1e-15);
    assert!(p2.power(2).unwrap().matrix.max_abs_diff(&grouped) == 0.0);
}

#[test]
fn p_subspace_examples() {
    let p = p_subspace(3).unwrap();
    assert_close(p.matrix.trace().re, 3.0, 0.0);
    let phi3 = phi(3).unwrap().matrix;
    assert!(p.matrix.matmul(&phi3).max_abs_diff(&phi3) < 1e-15);
    assert_eq!(p.partial_transpose(), p.matrix);
    assert!(!p.is_state);
}

#[test]
fn omega3_examples() {
    let w = omega3();
    assert_valid_state(&w);
    let ev = hermitian_eigenvalues(&w.matrix).unwrap();
    let mut want = vec![0.0; 7];
    want.extend([0.5, 0.5]);
    for (g, w) in ev.iter().zip(&want) {
        assert_close(*g, *w, 1e-14);
    }
    assert_close(w.matrix.trace_product(&phi(3).unwrap().matrix).re, 0.0, 1e-15);
    assert_close(trace_norm(&w.partial_transpose()), 2.0, 1e-12);
}

#[test]
fn omega3_assembled_two_ways() {
    let by_definition = (&p_subspace(3).unwrap().matrix - &phi(3).unwrap().matrix).scale(0.5);
    // (1/6) Σ_{i,j} (|ii⟩⟨ii| − |ii⟩⟨jj|)
    let entrywise = ComplexMatrix::from_fn(9, |r, s| {
        let (ra, rb, sa, sb) = (r / 3, r % 3, s / 3, s % 3);
        if ra != rb || sa != sb {
            c(0.0)
        } else if r == s {
            c(2.0 / 6.0)
        } else {
            c(-1.0 / 6.0)
        }
    });
    let w = omega3().matrix;
    assert!(w.max_abs_diff(&by_definition) <= 1e-15);
    assert!(w.max_abs_diff(&entrywise) <= 1e-15);
}

#[test]
fn x3_examples() {
    assert_close(operator_norm(&x3_delta(0.2).unwrap().matrix), 12.0 / 7.0, 1e-12);
    assert_close(operator_norm(&x3_delta(0.2).unwrap().partial_transpose()), 1.0, 1e-12);
    assert_eq!(x3_delta(0.5).unwrap().matrix, x3().matrix);
    let want = &p_subspace(3).unwrap().matrix.scale(2.0) - &phi(3).unwrap().matrix.scale(3.0);
    assert!(x3().matrix.max_abs_diff(&want) < 1e-15);
    for bad in [0.0, -0.1, 1.5, f64::NAN] {
        assert!(matches!(x3_delta(bad), Err(Error::Domain(_))), "delta = {bad}");
    }
}

#[test]
fn sigma_pm_examples() {
    for d in 2..=5 {
        let (sp, sm) = sigma_pm(d).unwrap();
        let df = d as f64;
        let combo = &sp.matrix.scale(df) - &sm.matrix.scale(df - 1.0);
        assert!(combo.max_abs_diff(&phi(d).unwrap().matrix) <= 1e-12, "d = {d}");
        assert_close(sp.matrix.trace_product(&phi(d).unwrap().matrix).re, 1.0 / df, 1e-14);
        assert!(hermitian_eigenvalues(&sm.matrix).unwrap()[0] >= -1e-15);
        assert_valid_state(&sp);
        assert_valid_state(&sm);
    }
}

#[test]
fn tau_examples() {
    let t = tau(1).unwrap();
    assert_close(t.matrix.trace_product(&phi(2).unwrap().matrix).re, 0.0, 1e-15);
    let ev = hermitian_eigenvalues(&t.matrix).unwrap();
    assert_close(ev[0], 0.0, 1e-15);
    for l in &ev[1..] {
        assert_close(*l, 1.0 / 3.0, 1e-15);
    }
    assert!(isotropic_separability_check(&t).unwrap().separable);
    for m in 1..=3 {
        let t = tau(m).unwrap();
        assert_valid_state(&t);
        let phim = phi(2).unwrap().power(m).unwrap();
        assert_close(t.matrix.trace_product(&phim.matrix).re, 0.0, 1e-14);
    }
    assert!(matches!(tau(0), Err(Error::Domain(_))));
    assert!(matches!(tau(4), Err(Error::Domain(_))));
}

#[test]
fn tau3_examples() {
    let t = tau3_diag();
    assert_valid_state(&t);
    assert!(t.matrix.matmul(&p_subspace(3).unwrap().matrix).max_abs() == 0.0);
    assert_eq!(t.partial_transpose(), t.matrix);
}

#[test]
fn isotropic_examples() {
    for d in 2..=4 {
        assert!(isotropic(d, 1.0).unwrap().matrix.max_abs_diff(&phi(d).unwrap().matrix) < 1e-15);
        let n = (d * d) as f64;
        let uniform = ComplexMatrix::identity(d * d).scale(1.0 / n);
        assert!(isotropic(d, 1.0 / n).unwrap().matrix.max_abs_diff(&uniform) < 1e-15);
    }
    let (sp, _) = sigma_pm(3).unwrap();
    assert!(isotropic(3, 1.0 / 3.0).unwrap().matrix.max_abs_diff(&sp.matrix) < 1e-15);
    assert!(matches!(isotropic(3, 1.1), Err(Error::Domain(_))));
    assert!(matches!(isotropic(3, -0.1), Err(Error::Domain(_))));
}

#[test]
fn antisymmetric_examples() {
    let a = antisymmetric(3).unwrap();
    assert_valid_state(&a);
    let zeros = hermitian_eigenvalues(&a.matrix).unwrap().iter().filter(|l| l.abs() < 1e-12).count();
    assert_eq!(zeros, 6);
    assert_close(trace_norm(&antisymmetric(2).unwrap().partial_transpose()), 2.0, 1e-12);
}

#[test]
fn maximally_correlated_examples() {
    let uniform = ComplexMatrix::from_fn(3, |_, _| c(1.0 / 3.0));
    assert!(maximally_correlated(&uniform).unwrap().matrix.max_abs_diff(&phi(3).unwrap().matrix) < 1e-15);
    let coeffs = (&ComplexMatrix::identity(3) - &ComplexMatrix::from_fn(3, |_, _| c(1.0 / 3.0))).scale(0.5);
    let w = maximally_correlated(&coeffs).unwrap();
    assert!(w.matrix.max_abs_diff(&omega3().matrix) < 1e-15);
    assert_close(w.matrix.trace().re, 1.0, 1e-15);
    let not_a_state = ComplexMatrix::diagonal(&[1.5, -0.5, 0.0]);
    assert!(matches!(maximally_correlated(&not_a_state), Err(Error::Contract(_))));
}

#[test]
fn every_state_constructor_on_the_parameter_grid() {
    for d in 2..=4 {
        let df = d as f64;
        assert_valid_state(&phi(d).unwrap());
        let (sp, sm) = sigma_pm(d).unwrap();
        assert_valid_state(&sp);
        assert_valid_state(&sm);
        assert_valid_state(&antisymmetric(d).unwrap());
        assert_valid_state(&maximally_mixed(BipartiteShape::square(d).unwrap()).unwrap());
        for f in [0.0, 1.0 / (df * df), 1.0 / df, 1.0] {
            assert_valid_state(&isotropic(d, f).unwrap());
        }
    }
    assert_valid_state(&omega3());
    assert_valid_state(&tau3_diag());
    for m in 1..=3 {
        assert_valid_state(&tau(m).unwrap());
    }
}

#[test]
fn dimension_guards() {
    assert!(matches!(phi(10), Err(Error::Domain(_))));
    assert!(omega3().power(3).is_err());
    assert!(omega3().power(2).is_ok());
}

#[test]
fn named_operator_validation() {
    let shape = BipartiteShape::square(2).unwrap();
    assert!(matches!(NamedOperator::state(ComplexMatrix::identity(4), shape, "2I"), Err(Error::Contract(_))));
    assert!(matches!(NamedOperator::state(ComplexMatrix::identity(3), shape, "I3"), Err(Error::Dimension(_))));
    assert!(NamedOperator::new(x3().matrix, BipartiteShape::square(3).unwrap(), "x", false).is_ok());
}
