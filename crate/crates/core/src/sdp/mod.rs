//! Block semidefinite programs over Hermitian matrices.
//!
//! Primal form: optimise Σ_b Tr[C_b X_b] subject to Σ_b Tr[A_kb X_b] = r_k and
//! X_b ⪰ 0. For a minimisation the dual is max rᵀy subject to
//! C − Σ_k y_k A_k = Z ⪰ 0; for a maximisation it is min rᵀy subject to
//! Σ_k y_k A_k − C = Z ⪰ 0.

pub mod dense;
pub mod lmi;
mod presolve;
mod solver;
pub mod text;

pub use solver::solve;

use crate::error::{contract, dimension, domain, Result};
use crate::linalg::{ComplexMatrix, C64, HERMITIAN_TOL};

/// Hermitian matrix stored by its upper triangle: entry (i, j, v) with i ≤ j
/// means M[i][j] = v and M[j][i] = conj(v).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseHermitian {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, entries: (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect() }
    }

    /// Drops entries with modulus ≤ `drop_tol`.
    pub fn from_dense_with_tol(m: &ComplexMatrix, drop_tol: f64) -> Result<Self> {
        let defect = m.hermitian_defect();
        if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(contract(format!("coefficient matrix is not Hermitian (defect {defect:.3e})")));
        }
        let n = m.dim();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                if i == j {
                    v.im = 0.0;
                }
                if v.norm() > drop_tol {
                    entries.push((i, j, v));
                }
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn from_dense(m: &ComplexMatrix) -> Result<Self> {
        Self::from_dense_with_tol(m, 0.0)
    }

    /// Adds v at (i, j) and conj(v) at (j, i); diagonal entries must be real.
    pub fn push(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.dim && j < self.dim, "entry outside the block");
        if i <= j {
            self.entries.push((i, j, v));
        } else {
            self.entries.push((j, i, v.conj()));
        }
    }

    /// Sorts and merges duplicate positions, dropping exact zeros.
    pub fn compact(&mut self) {
        self.entries.sort_by_key(|a| (a.0, a.1));
        let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(self.entries.len());
        for &(i, j, v) in &self.entries {
            match out.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => out.push((i, j, v)),
            }
        }
        out.retain(|e| e.2.re != 0.0 || e.2.im != 0.0);
        self.entries = out;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|e| e.2.im == 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&(i, j, v)| (i, j, v * s)).collect() }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
            if i != j {
                m[(j, i)] += v.conj();
            }
        }
        m
    }

    /// Re Tr[self · X] for Hermitian X.
    pub fn inner(&self, x: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v.re * x[(i, i)].re } else { 2.0 * (v * x[(j, i)]).re })
            .sum()
    }

    fn validate(&self) -> Result<()> {
        for &(i, j, v) in &self.entries {
            if i > j || j >= self.dim {
                return Err(dimension("sparse entry outside the upper triangle of its block"));
            }
            if i == j && v.im.abs() > HERMITIAN_TOL {
                return Err(contract("diagonal coefficient with non-zero imaginary part"));
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(domain("non-finite coefficient"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpec {
    pub label: String,
    pub dim: usize,
}

/// Σ_b Tr[A_kb X_b] = rhs
#[derive(Clone, Debug, PartialEq)]
pub struct Equality {
    pub terms: Vec<(usize, SparseHermitian)>,
    pub rhs: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub blocks: Vec<BlockSpec>,
    /// One coefficient matrix per block.
    pub objective: Vec<SparseHermitian>,
    pub equalities: Vec<Equality>,
    pub sense: Sense,
}

impl SdpProblem {
    pub fn new(blocks: Vec<BlockSpec>, sense: Sense) -> Self {
        let objective = blocks.iter().map(|b| SparseHermitian::zeros(b.dim)).collect();
        Self { blocks, objective, equalities: Vec::new(), sense }
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(domain("program has no blocks"));
        }
        if self.objective.len() != self.blocks.len() {
            return Err(dimension("objective must have one matrix per block"));
        }
        for (b, (c, spec)) in self.objective.iter().zip(&self.blocks).enumerate() {
            if spec.dim == 0 || c.dim != spec.dim {
                return Err(dimension(format!("objective matrix of block {b} has the wrong dimension")));
            }
            c.validate()?;
        }
        for (k, eq) in self.equalities.iter().enumerate() {
            if !eq.rhs.is_finite() {
                return Err(domain(format!("equality {k} has a non-finite right-hand side")));
            }
            for (b, a) in &eq.terms {
                let spec = self
                    .blocks
                    .get(*b)
                    .ok_or_else(|| dimension(format!("equality {k} refers to missing block {b}")))?;
                if a.dim != spec.dim {
                    return Err(dimension(format!("equality {k} has a wrong-sized matrix on block {b}")));
                }
                a.validate()?;
            }
        }
        Ok(())
    }

    /// Σ_b Tr[C_b X_b]
    pub fn objective_value(&self, x: &[ComplexMatrix]) -> f64 {
        self.objective.iter().zip(x).map(|(c, xb)| c.inner(xb)).sum()
    }

    /// Σ_b Tr[A_kb X_b] − r_k for every equality.
    pub fn equality_residuals(&self, x: &[ComplexMatrix]) -> Vec<f64> {
        self.equalities
            .iter()
            .map(|eq| eq.terms.iter().map(|(b, a)| a.inner(&x[*b])).sum::<f64>() - eq.rhs)
            .collect()
    }

    /// Dual slack for multipliers `y`: C − Σ y_k A_k (minimise) or Σ y_k A_k − C (maximise).
    pub fn dual_slack(&self, y: &[f64]) -> Vec<ComplexMatrix> {
        let mut z: Vec<ComplexMatrix> = self.objective.iter().map(|c| c.to_dense()).collect();
        for (eq, &yk) in self.equalities.iter().zip(y) {
            if yk == 0.0 {
                continue;
            }
            for (b, a) in &eq.terms {
                for &(i, j, v) in a.entries() {
                    z[*b][(i, j)] -= v * yk;
                    if i != j {
                        z[*b][(j, i)] -= v.conj() * yk;
                    }
                }
            }
        }
        if self.sense == Sense::Maximize {
            for zb in &mut z {
                *zb = -&*zb;
            }
        }
        z
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iterations: usize,
    pub verbosity: u8,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-8, max_iterations: 200, verbosity: 0 }
    }
}

impl SolverConfig {
    pub fn with_tol(tol: f64) -> Result<Self> {
        let cfg = Self { tol, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 1e-12 && self.tol < 1e-2) {
            return Err(domain(format!("solver tolerance {} outside (1e-12, 1e-2)", self.tol)));
        }
        if self.max_iterations == 0 {
            return Err(domain("max_iterations must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
}

impl SolverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverStatus::Optimal => "optimal",
            SolverStatus::Infeasible => "infeasible",
            SolverStatus::Unbounded => "unbounded",
            SolverStatus::MaxIterations => "max-iterations",
        }
    }
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub enum Certificate {
    /// y with rᵀy = 1 and −Σ_k y_k A_k ⪰ 0: no X ⪰ 0 meets the equalities.
    PrimalInfeasible { y: Vec<f64> },
    /// X ⪰ 0 with Σ_b Tr[A_kb X_b] = 0 for all k and an objective that improves
    /// along X (negative for minimise, positive for maximise).
    Unbounded { x: Vec<ComplexMatrix> },
}

/// Per-iteration summary, in the problem's own sense, of the normalised iterate.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// ‖y‖·‖𝒜x − r‖ + ‖x‖·‖𝒜*y + z − C‖: how far weak duality may be off
    /// because the iterate is not yet feasible.
    pub infeasibility_allowance: f64,
    pub mu: f64,
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SolverStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    pub block_values: Vec<ComplexMatrix>,
    pub dual_slacks: Vec<ComplexMatrix>,
    pub dual_multipliers: Vec<f64>,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub certificate: Option<Certificate>,
    pub history: Vec<IterationRecord>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolverStatus::Optimal
    }

    pub fn gap(&self) -> f64 {
        (self.primal_value - self.dual_value).abs()
    }
}
