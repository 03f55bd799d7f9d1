//! Dense complex linear algebra: tensor products, bipartite partial operations,
//! spectra, norms and entropic quantities (all logarithms base 2).

mod eigen;
mod matrix;

pub(crate) use eigen::tql2;
pub use eigen::{hermitian_eigensystem, hermitian_eigenvalues, Spectrum, EIGEN_HERMITIAN_TOL};
pub use matrix::{ComplexMatrix, C64, HERMITIAN_TOL};

use crate::error::{contract, dimension, domain, Result};

/// Smallest eigenvalue accepted as "non-negative" for a state.
pub const PSD_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteShape {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteShape {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(domain("subsystem dimensions must be positive"));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    /// Shape of the n-th tensor power in (A1…An | B1…Bn) ordering.
    pub fn power(&self, n: u32) -> Self {
        Self { d_a: self.d_a.pow(n), d_b: self.d_b.pow(n) }
    }

    pub fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if m.dim() != self.dim() {
            return Err(dimension(format!(
                "matrix of dimension {} paired with shape {}x{}",
                m.dim(),
                self.d_a,
                self.d_b
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

/// Tensor product of two bipartite operators, regrouped as (A1A2 | B1B2).
pub fn bipartite_tensor(
    a: &ComplexMatrix,
    sa: BipartiteShape,
    b: &ComplexMatrix,
    sb: BipartiteShape,
) -> Result<(ComplexMatrix, BipartiteShape)> {
    sa.check(a)?;
    sb.check(b)?;
    let plain = tensor(a, b);
    // plain index: ((a1 * d_b1 + b1) * dim_b + a2 * d_b2 + b2)
    // target index: ((a1 * d_a2 + a2) * d_b1 + b1) * d_b2 + b2
    let n = plain.dim();
    let mut perm = vec![0; n];
    for a1 in 0..sa.d_a {
        for b1 in 0..sa.d_b {
            for a2 in 0..sb.d_a {
                for b2 in 0..sb.d_b {
                    let src = (a1 * sa.d_b + b1) * sb.dim() + a2 * sb.d_b + b2;
                    let dst = ((a1 * sb.d_a + a2) * sa.d_b + b1) * sb.d_b + b2;
                    perm[src] = dst;
                }
            }
        }
    }
    let shape = BipartiteShape { d_a: sa.d_a * sb.d_a, d_b: sa.d_b * sb.d_b };
    Ok((plain.permute_basis(&perm)?, shape))
}

/// n-fold bipartite tensor power in (A1…An | B1…Bn) ordering.
pub fn bipartite_power(m: &ComplexMatrix, shape: BipartiteShape, n: u32) -> Result<(ComplexMatrix, BipartiteShape)> {
    if n == 0 {
        return Err(domain("tensor power must be at least 1"));
    }
    shape.check(m)?;
    let mut acc = (m.clone(), shape);
    for _ in 1..n {
        acc = bipartite_tensor(&acc.0, acc.1, m, shape)?;
    }
    Ok(acc)
}

pub fn partial_transpose(m: &ComplexMatrix, shape: BipartiteShape) -> Result<ComplexMatrix> {
    shape.check(m)?;
    let db = shape.d_b;
    Ok(ComplexMatrix::from_fn(m.dim(), |r, c| {
        let (i, j) = (r / db, r % db);
        let (k, l) = (c / db, c % db);
        m[(i * db + l, k * db + j)]
    }))
}

pub fn partial_trace(m: &ComplexMatrix, shape: BipartiteShape, keep: Subsystem) -> Result<ComplexMatrix> {
    shape.check(m)?;
    let (da, db) = (shape.d_a, shape.d_b);
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, |i, k| (0..db).map(|j| m[(i * db + j, k * db + j)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(db, |j, l| (0..da).map(|i| m[(i * db + j, i * db + l)]).sum()),
    })
}

/// Singular values in descending order. Gram eigenvalues at rounding level
/// are set to zero, since their square roots would be pure noise.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let gram = m.adjoint().matmul(m).hermitian_part();
    let ev = hermitian_eigenvalues(&gram).expect("Gram matrix is Hermitian by construction");
    let floor = ev.last().map_or(0.0, |top| top.abs() * f64::EPSILON * gram.dim() as f64);
    let mut s: Vec<f64> = ev.into_iter().map(|l| if l > floor { l.sqrt() } else { 0.0 }).collect();
    s.reverse();
    s
}

pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_hermitian(HERMITIAN_TOL) {
        let ev = hermitian_eigenvalues(m).expect("checked Hermitian");
        ev.iter().map(|l| l.abs()).sum()
    } else {
        singular_values(m).iter().sum()
    }
}

pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    if m.is_hermitian(HERMITIAN_TOL) {
        let ev = hermitian_eigenvalues(m).expect("checked Hermitian");
        ev[0].abs().max(ev[ev.len() - 1].abs())
    } else {
        singular_values(m)[0]
    }
}

/// Checks that `rho` is Hermitian, PSD to −`PSD_TOL` and has unit trace to `trace_tol`.
pub fn check_state(rho: &ComplexMatrix, trace_tol: f64) -> Result<Spectrum> {
    let defect = rho.hermitian_defect();
    if defect > EIGEN_HERMITIAN_TOL {
        return Err(contract(format!("not Hermitian (defect {defect:.3e})")));
    }
    let spec = hermitian_eigensystem(rho)?;
    if spec.min() < -PSD_TOL {
        return Err(contract(format!("not positive semidefinite (smallest eigenvalue {:.3e})", spec.min())));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
        return Err(contract(format!("trace {:.12} differs from 1", tr.re)));
    }
    Ok(spec)
}

/// Principal square root of a PSD matrix (negative eigenvalues clipped).
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eigensystem(m)?.reconstruct_with(|l| l.max(0.0).sqrt()))
}

pub fn fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(dimension("fidelity of matrices with different dimensions"));
    }
    check_state(rho, 1e-9)?;
    check_state(sigma, 1e-9)?;
    let prod = psd_sqrt(rho)?.matmul(&psd_sqrt(sigma)?);
    let f = singular_values(&prod).iter().sum::<f64>().powi(2);
    Ok(f.clamp(0.0, 1.0))
}

fn entropy_of(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.log2()).sum()
}

pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let spec = check_state(rho, 1e-9)?;
    Ok(entropy_of(&spec.eigenvalues).max(0.0))
}

/// Tr ρ log₂ρ − Tr ρ log₂σ, or +∞ when supp ρ ⊄ supp σ.
pub fn quantum_relative_entropy(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(dimension("relative entropy of matrices with different dimensions"));
    }
    let sr = check_state(rho, 1e-9)?;
    let ss = check_state(sigma, 1e-9)?;
    let n = rho.dim();
    // Tr ρ log σ = Σ_k log λ_k ⟨s_k|ρ|s_k⟩
    let mut cross = 0.0;
    for k in 0..n {
        let v = ss.vector(k);
        let w = rho.apply(&v);
        let weight: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let lam = ss.eigenvalues[k];
        if lam <= SUPPORT_CUTOFF {
            if weight > SUPPORT_CUTOFF {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * lam.log2();
    }
    let neg_entropy: f64 = sr.eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| l * l.log2()).sum();
    Ok((neg_entropy - cross).max(0.0))
}

/// log₂ min{t : ρ ⪯ tσ}, or +∞ when supp ρ ⊄ supp σ.
pub fn max_relative_entropy(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(dimension("max-relative entropy of matrices with different dimensions"));
    }
    check_state(rho, 1e-9)?;
    let ss = check_state(sigma, 1e-9)?;
    let n = rho.dim();
    let outside = ss.reconstruct_with(|l| if l <= SUPPORT_CUTOFF { 1.0 } else { 0.0 });
    if outside.trace_product(rho).re > SUPPORT_CUTOFF {
        return Ok(f64::INFINITY);
    }
    let inv_sqrt = ss.reconstruct_with(|l| if l > SUPPORT_CUTOFF { 1.0 / l.sqrt() } else { 0.0 });
    let sandwich = inv_sqrt.matmul(rho).matmul(&inv_sqrt).hermitian_part();
    let top = hermitian_eigenvalues(&sandwich)?[n - 1];
    Ok(top.log2())
}
