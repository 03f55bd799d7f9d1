//! Named bipartite states and operators. Basis ordering is |i⟩_A|j⟩_B ↦ i·d_B + j.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{contract, domain, Result};
use crate::linalg::{
    bipartite_power, check_state, partial_transpose, BipartiteShape, ComplexMatrix, C64,
};

/// Largest local dimension accepted by the bipartite constructors.
pub const MAX_LOCAL_DIM: usize = 9;
/// Largest total dimension accepted anywhere in the toolkit.
pub const MAX_TOTAL_DIM: usize = 162;

#[derive(Clone, Debug)]
pub struct NamedOperator {
    pub matrix: ComplexMatrix,
    pub shape: BipartiteShape,
    pub label: String,
    pub is_state: bool,
}

impl NamedOperator {
    /// Validates shape, Hermiticity and, for states, positivity and unit trace.
    pub fn new(matrix: ComplexMatrix, shape: BipartiteShape, label: impl Into<String>, is_state: bool) -> Result<Self> {
        shape.check(&matrix)?;
        if matrix.dim() > MAX_TOTAL_DIM {
            return Err(domain(format!("total dimension {} exceeds {MAX_TOTAL_DIM}", matrix.dim())));
        }
        if is_state {
            check_state(&matrix, 1e-12)?;
        } else if !matrix.is_hermitian(1e-12) {
            return Err(contract("operator is not Hermitian"));
        }
        Ok(Self { matrix, shape, label: label.into(), is_state })
    }

    pub fn state(matrix: ComplexMatrix, shape: BipartiteShape, label: impl Into<String>) -> Result<Self> {
        Self::new(matrix, shape, label, true)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn partial_transpose(&self) -> ComplexMatrix {
        partial_transpose(&self.matrix, self.shape).expect("shape checked at construction")
    }

    /// n-fold tensor power in (A1…An | B1…Bn) ordering.
    pub fn power(&self, n: u32) -> Result<Self> {
        let (m, shape) = bipartite_power(&self.matrix, self.shape, n)?;
        Self::new(m, shape, format!("{}^(x{n})", self.label), self.is_state)
    }

    pub fn require_state(&self) -> Result<()> {
        if !self.is_state {
            return Err(contract(format!("{} is not a state", self.label)));
        }
        Ok(())
    }
}

fn local_dim_guard(d: usize) -> Result<()> {
    if d < 2 {
        return Err(domain(format!("local dimension must be at least 2, got {d}")));
    }
    if d > MAX_LOCAL_DIM {
        return Err(domain(format!("local dimension {d} exceeds {MAX_LOCAL_DIM}")));
    }
    Ok(())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn phi_matrix(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = real(1.0 / d as f64);
        }
    }
    m
}

fn p_matrix(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        m[(i * d + i, i * d + i)] = real(1.0);
    }
    m
}

pub fn flip(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + j, j * d + i)] = real(1.0);
        }
    }
    m
}

/// Maximally entangled state Φ_d.
pub fn phi(d: usize) -> Result<NamedOperator> {
    local_dim_guard(d)?;
    NamedOperator::state(phi_matrix(d), BipartiteShape::square(d)?, format!("phi_{d}"))
}

/// Projector P_d onto span{|jj⟩}.
pub fn p_subspace(d: usize) -> Result<NamedOperator> {
    local_dim_guard(d)?;
    NamedOperator::new(p_matrix(d), BipartiteShape::square(d)?, format!("P_{d}"), false)
}

/// ω₃ = (P₃ − Φ₃)/2.
pub fn omega3() -> NamedOperator {
    let m = (&p_matrix(3) - &phi_matrix(3)).scale(0.5);
    NamedOperator::state(m, BipartiteShape { d_a: 3, d_b: 3 }, "omega_3").expect("omega_3 is a state")
}

/// X₃ = 2P₃ − 3Φ₃.
pub fn x3() -> NamedOperator {
    let m = &p_matrix(3).scale(2.0) - &phi_matrix(3).scale(3.0);
    NamedOperator::new(m, BipartiteShape { d_a: 3, d_b: 3 }, "X_3", false).expect("X_3 is Hermitian")
}

/// X₃(δ): equal to X₃ for δ ≥ 1/3, otherwise 3/(2−3δ)·((1−δ)P₃ − Φ₃).
pub fn x3_delta(delta: f64) -> Result<NamedOperator> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    if 3.0 * delta >= 1.0 {
        let mut x = x3();
        x.label = format!("X_3({delta})");
        return Ok(x);
    }
    let pre = 3.0 / (2.0 - 3.0 * delta);
    let m = (&p_matrix(3).scale(1.0 - delta) - &phi_matrix(3)).scale(pre);
    NamedOperator::new(m, BipartiteShape { d_a: 3, d_b: 3 }, format!("X_3({delta})"), false)
}

/// The separable pair σ₊ = (1 + dΦ_d)/(d(d+1)) and σ₋ = (1 − Φ_d)/(d²−1).
pub fn sigma_pm(d: usize) -> Result<(NamedOperator, NamedOperator)> {
    local_dim_guard(d)?;
    let n = d * d;
    let df = d as f64;
    let id = ComplexMatrix::identity(n);
    let ph = phi_matrix(d);
    let plus = (&id + &ph.scale(df)).scale(1.0 / (df * (df + 1.0)));
    let minus = (&id - &ph).scale(1.0 / (df * df - 1.0));
    let shape = BipartiteShape::square(d)?;
    Ok((
        NamedOperator::state(plus, shape, format!("sigma+_{d}"))?,
        NamedOperator::state(minus, shape, format!("sigma-_{d}"))?,
    ))
}

/// τ_m = (1 − Φ₂^{⊗m})/(4^m − 1) on m qubit pairs, in (A…|B…) ordering.
pub fn tau(m: u32) -> Result<NamedOperator> {
    if !(1..=3).contains(&m) {
        return Err(domain(format!("tau(m) requires 1 <= m <= 3, got {m}")));
    }
    let phi_m = phi(2)?.power(m)?;
    let n = phi_m.dim();
    let mat = (&ComplexMatrix::identity(n) - &phi_m.matrix).scale(1.0 / (n as f64 - 1.0));
    NamedOperator::state(mat, phi_m.shape, format!("tau_{m}"))
}

/// τ₃ = (1 − P₃)/6, the uniform mixture of |jk⟩ with j ≠ k.
pub fn tau3_diag() -> NamedOperator {
    let m = (&ComplexMatrix::identity(9) - &p_matrix(3)).scale(1.0 / 6.0);
    NamedOperator::state(m, BipartiteShape { d_a: 3, d_b: 3 }, "tau_3").expect("tau_3 is a state")
}

/// f·Φ_d + (1−f)(1−Φ_d)/(d²−1).
pub fn isotropic(d: usize, f: f64) -> Result<NamedOperator> {
    local_dim_guard(d)?;
    if !(0.0..=1.0).contains(&f) {
        return Err(domain(format!("isotropic fidelity must lie in [0, 1], got {f}")));
    }
    let n = d * d;
    let ph = phi_matrix(d);
    let rest = (&ComplexMatrix::identity(n) - &ph).scale((1.0 - f) / (n as f64 - 1.0));
    NamedOperator::state(&ph.scale(f) + &rest, BipartiteShape::square(d)?, format!("iso_{d}({f})"))
}

/// α_d = (1 − F)/(d(d−1)), F the swap.
pub fn antisymmetric(d: usize) -> Result<NamedOperator> {
    local_dim_guard(d)?;
    let n = d * d;
    let df = d as f64;
    let m = (&ComplexMatrix::identity(n) - &flip(d)).scale(1.0 / (df * (df - 1.0)));
    NamedOperator::state(m, BipartiteShape::square(d)?, format!("alpha_{d}"))
}

/// Σ_ij c_ij |ii⟩⟨jj|.
pub fn maximally_correlated(coeffs: &ComplexMatrix) -> Result<NamedOperator> {
    let d = coeffs.dim();
    local_dim_guard(d)?;
    check_state(coeffs, 1e-10)?;
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = coeffs[(i, j)];
        }
    }
    NamedOperator::state(m, BipartiteShape::square(d)?, format!("maxcorr_{d}"))
}

/// 1/(d_a d_b).
pub fn maximally_mixed(shape: BipartiteShape) -> Result<NamedOperator> {
    let n = shape.dim();
    NamedOperator::state(ComplexMatrix::identity(n).scale(1.0 / n as f64), shape, format!("mixed_{}x{}", shape.d_a, shape.d_b))
}

/// Index map taking the plain Kronecker order A1B1A2B2… of n copies to A1…An B1…Bn.
pub fn regroup_permutation(shape: BipartiteShape, n: u32) -> Vec<usize> {
    let (da, db) = (shape.d_a, shape.d_b);
    let total = shape.dim().pow(n);
    let mut perm = vec![0; total];
    for (src, slot) in perm.iter_mut().enumerate() {
        let mut rest = src;
        let mut a_digits = vec![0; n as usize];
        let mut b_digits = vec![0; n as usize];
        for k in (0..n as usize).rev() {
            b_digits[k] = rest % db;
            rest /= db;
            a_digits[k] = rest % da;
            rest /= da;
        }
        let a_idx = a_digits.iter().fold(0, |acc, &x| acc * da + x);
        let b_idx = b_digits.iter().fold(0, |acc, &x| acc * db + x);
        *slot = a_idx * db.pow(n) + b_idx;
    }
    perm
}

/// Regroups a plain n-fold Kronecker product of bipartite operators into (A…|B…) order.
pub fn regroup(plain: &ComplexMatrix, shape: BipartiteShape, n: u32) -> Result<ComplexMatrix> {
    plain.permute_basis(&regroup_permutation(shape, n))
}

/// Haar-random unit vector of length n.
pub fn random_pure_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(standard_normal(rng), standard_normal(rng))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Random density matrix G G†/Tr(G G†) with G an n×k complex Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> ComplexMatrix {
    let g: Vec<C64> = (0..n * k).map(|_| C64::new(standard_normal(rng), standard_normal(rng))).collect();
    let mut m = ComplexMatrix::from_fn(n, |i, j| (0..k).map(|t| g[i * k + t] * g[j * k + t].conj()).sum());
    let tr = m.trace().re;
    m = m.scale(1.0 / tr);
    m.hermitian_part()
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| C64::new(standard_normal(rng), standard_normal(rng))).collect();
        for c in &cols {
            let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            v.iter_mut().zip(c).for_each(|(x, a)| *x -= proj * a);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
