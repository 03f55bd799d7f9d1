//! Programs written as linear matrix inequalities in free variables:
//!
//!   maximise fᵀy + f₀ subject to F_b0 + Σ_k y_k F_bk ⪰ 0 for every block b.
//!
//! Hermitian matrix unknowns are expanded in the basis E_ii, E_ij + E_ji and
//! i(E_ij − E_ji). The program is compiled to the primal form
//! min Σ_b Tr[F_b0 X_b] s.t. Σ_b Tr[F_bk X_b] = −f_k, whose dual multipliers are
//! −y.

use super::{solve, BlockSpec, Equality, Sense, SdpProblem, SdpSolution, SolverConfig, SolverStatus, SparseHermitian};
use crate::error::{dimension, Result};
use crate::linalg::{BipartiteShape, ComplexMatrix, C64};

#[derive(Clone, Copy, Debug)]
pub struct ScalarVar(usize);

#[derive(Clone, Copy, Debug)]
pub struct MatrixVar {
    offset: usize,
    dim: usize,
    complex: bool,
}

impl MatrixVar {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        if self.complex {
            self.dim * self.dim
        } else {
            self.dim * (self.dim + 1) / 2
        }
    }

    /// The k-th basis matrix.
    pub fn basis(&self, k: usize) -> SparseHermitian {
        let n = self.dim;
        let sym = n * (n + 1) / 2;
        let mut e = SparseHermitian::zeros(n);
        if k < sym {
            let (i, j) = upper_index(n, k);
            e.push(i, j, C64::new(1.0, 0.0));
        } else {
            let (i, j) = strict_upper_index(n, k - sym);
            e.push(i, j, C64::new(0.0, 1.0));
        }
        e
    }
}

fn upper_index(n: usize, mut k: usize) -> (usize, usize) {
    for i in 0..n {
        let len = n - i;
        if k < len {
            return (i, i + k);
        }
        k -= len;
    }
    unreachable!("basis index out of range")
}

fn strict_upper_index(n: usize, mut k: usize) -> (usize, usize) {
    for i in 0..n {
        let len = n - i - 1;
        if k < len {
            return (i, i + 1 + k);
        }
        k -= len;
    }
    unreachable!("basis index out of range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockId(usize);

struct LmiBlock {
    label: String,
    dim: usize,
    constant: SparseHermitian,
    terms: Vec<(usize, SparseHermitian)>,
}

#[derive(Default)]
pub struct LmiBuilder {
    n_vars: usize,
    objective: Vec<f64>,
    objective_constant: f64,
    blocks: Vec<LmiBlock>,
}

pub struct LmiSolution {
    pub status: SolverStatus,
    /// fᵀy + f₀ at the returned y.
    pub value: f64,
    pub y: Vec<f64>,
    /// Upper bound on the optimum certified by the dual blocks.
    pub bound: f64,
    pub sdp: SdpSolution,
}

impl LmiSolution {
    pub fn scalar(&self, v: ScalarVar) -> f64 {
        self.y[v.0]
    }

    pub fn matrix(&self, v: &MatrixVar) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(v.dim);
        for k in 0..v.count() {
            let yk = self.y[v.offset + k];
            if yk == 0.0 {
                continue;
            }
            for &(i, j, c) in v.basis(k).entries() {
                m[(i, j)] += c * yk;
                if i != j {
                    m[(j, i)] += c.conj() * yk;
                }
            }
        }
        m
    }

    /// F_b0 + Σ y_k F_bk for block `b`.
    pub fn slack(&self, b: BlockId) -> &ComplexMatrix {
        &self.sdp.dual_slacks[b.0]
    }

    /// The dual matrix attached to block `b`.
    pub fn multiplier(&self, b: BlockId) -> &ComplexMatrix {
        &self.sdp.block_values[b.0]
    }
}

impl LmiBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn scalar(&mut self) -> ScalarVar {
        self.objective.push(0.0);
        self.n_vars += 1;
        ScalarVar(self.n_vars - 1)
    }

    pub fn matrix(&mut self, dim: usize, complex: bool) -> MatrixVar {
        let v = MatrixVar { offset: self.n_vars, dim, complex };
        self.n_vars += v.count();
        self.objective.resize(self.n_vars, 0.0);
        v
    }

    pub fn block(&mut self, label: impl Into<String>, constant: SparseHermitian) -> BlockId {
        self.blocks.push(LmiBlock { label: label.into(), dim: constant.dim(), constant, terms: Vec::new() });
        BlockId(self.blocks.len() - 1)
    }

    pub fn block_dense(&mut self, label: impl Into<String>, constant: &ComplexMatrix) -> Result<BlockId> {
        Ok(self.block(label, SparseHermitian::from_dense(constant)?))
    }

    fn push_term(&mut self, b: BlockId, var: usize, coef: SparseHermitian) -> Result<()> {
        let blk = &mut self.blocks[b.0];
        if coef.dim() != blk.dim {
            return Err(dimension(format!("term of dimension {} added to block '{}' of dimension {}", coef.dim(), blk.label, blk.dim)));
        }
        if !coef.is_empty() {
            blk.terms.push((var, coef));
        }
        Ok(())
    }

    pub fn add_scalar(&mut self, b: BlockId, v: ScalarVar, coef: SparseHermitian) -> Result<()> {
        self.push_term(b, v.0, coef)
    }

    /// Adds map(X) to block `b`, with `map` linear on Hermitian matrices.
    pub fn add_matrix(&mut self, b: BlockId, v: &MatrixVar, map: impl Fn(&SparseHermitian) -> SparseHermitian) -> Result<()> {
        for k in 0..v.count() {
            let mut img = map(&v.basis(k));
            img.compact();
            self.push_term(b, v.offset + k, img)?;
        }
        Ok(())
    }

    pub fn objective_scalar(&mut self, v: ScalarVar, coef: f64) {
        self.objective[v.0] += coef;
    }

    /// Adds Re Tr[C · map(X)] to the objective.
    pub fn objective_matrix(&mut self, v: &MatrixVar, c: &ComplexMatrix, map: impl Fn(&SparseHermitian) -> SparseHermitian) {
        for k in 0..v.count() {
            self.objective[v.offset + k] += map(&v.basis(k)).inner(c);
        }
    }

    pub fn objective_constant(&mut self, c: f64) {
        self.objective_constant += c;
    }

    pub fn num_vars(&self) -> usize {
        self.n_vars
    }

    pub fn compile(&self) -> SdpProblem {
        let blocks: Vec<BlockSpec> = self.blocks.iter().map(|b| BlockSpec { label: b.label.clone(), dim: b.dim }).collect();
        let mut per_var: Vec<Vec<(usize, SparseHermitian)>> = vec![Vec::new(); self.n_vars];
        for (bi, blk) in self.blocks.iter().enumerate() {
            for (var, coef) in &blk.terms {
                match per_var[*var].iter_mut().find(|(b, _)| *b == bi) {
                    Some((_, acc)) => {
                        for &(i, j, c) in coef.entries() {
                            acc.push(i, j, c);
                        }
                    }
                    None => per_var[*var].push((bi, coef.clone())),
                }
            }
        }
        let equalities = per_var
            .into_iter()
            .zip(&self.objective)
            .map(|(mut terms, &f)| {
                for (_, t) in terms.iter_mut() {
                    t.compact();
                }
                terms.retain(|(_, t)| !t.is_empty());
                Equality { terms, rhs: -f }
            })
            .collect();
        SdpProblem {
            blocks,
            objective: self.blocks.iter().map(|b| b.constant.clone()).collect(),
            equalities,
            sense: Sense::Minimize,
        }
    }

    pub fn solve(&self, config: &SolverConfig) -> Result<LmiSolution> {
        let problem = self.compile();
        let sdp = solve(&problem, config)?;
        let y: Vec<f64> = sdp.dual_multipliers.iter().map(|v| -v).collect();
        let value = self.objective.iter().zip(&y).map(|(f, y)| f * y).sum::<f64>() + self.objective_constant;
        let status = match sdp.status {
            SolverStatus::Infeasible => SolverStatus::Unbounded,
            SolverStatus::Unbounded => SolverStatus::Infeasible,
            s => s,
        };
        let bound = sdp.primal_value + self.objective_constant;
        Ok(LmiSolution { status, value, y, bound, sdp })
    }
}

/// Partial transpose on the B factor of a sparse Hermitian matrix.
pub fn sparse_partial_transpose(a: &SparseHermitian, shape: BipartiteShape) -> SparseHermitian {
    let db = shape.d_b;
    let mut out = SparseHermitian::zeros(a.dim());
    for &(r, c, v) in a.entries() {
        let (i, j) = (r / db, r % db);
        let (k, l) = (c / db, c % db);
        out.push(i * db + l, k * db + j, v);
    }
    out.compact();
    out
}

/// Sparse columns of a dense matrix, dropping entries with modulus ≤ `drop_tol`.
pub fn sparse_columns(q: &ComplexMatrix, drop_tol: f64) -> Vec<Vec<(usize, C64)>> {
    (0..q.dim())
        .map(|j| (0..q.dim()).filter(|&i| q[(i, j)].norm() > drop_tol).map(|i| (i, q[(i, j)])).collect())
        .collect()
}

/// Q A Q† for Hermitian A, with the `out_dim × a.dim()` matrix Q given by its
/// sparse columns.
pub fn sparse_congruence(a: &SparseHermitian, q_cols: &[Vec<(usize, C64)>], out_dim: usize) -> SparseHermitian {
    debug_assert_eq!(q_cols.len(), a.dim());
    let mut out = SparseHermitian::zeros(out_dim);
    for &(r, s, v) in a.entries() {
        if r == s {
            add_outer_hermitian(&mut out, &q_cols[r], &q_cols[r], v * 0.5);
        } else {
            add_outer_hermitian(&mut out, &q_cols[r], &q_cols[s], v);
        }
    }
    out.compact();
    out
}

/// Adds v·u w† + conj(v)·w u† to `out`.
fn add_outer_hermitian(out: &mut SparseHermitian, u: &[(usize, C64)], w: &[(usize, C64)], v: C64) {
    for &(i, ui) in u {
        for &(j, wj) in w {
            let val = v * ui * wj.conj(); // entry (i, j) of v u w†
            if i < j {
                out.push(i, j, val);
            } else if i > j {
                // (i, j) in the lower triangle; the adjoint term puts conj(val) at (j, i).
                out.push(j, i, val.conj());
            } else {
                out.push(i, i, C64::new(2.0 * val.re, 0.0));
            }
        }
    }
}
