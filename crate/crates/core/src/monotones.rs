//! Entanglement monotones and the bounds built from them.
//!
//! Optimisation-defined quantities are posed as linear matrix inequalities and
//! handed to [`crate::sdp`]; spectral ones are closed forms. Results keep the
//! optimiser so that callers can re-check it (see the `replay_*` functions).

use crate::error::{contract, dimension, domain, Error, Result};
use crate::linalg::{
    hermitian_eigensystem, operator_norm, partial_trace, partial_transpose, quantum_relative_entropy, trace_norm,
    von_neumann_entropy, BipartiteShape, ComplexMatrix, Subsystem, C64, PSD_TOL, SUPPORT_CUTOFF,
};
use crate::protocols::{apply_local, ChoiMatrix};
use crate::sdp::lmi::{sparse_congruence, sparse_partial_transpose, BlockId, LmiBuilder, LmiSolution, MatrixVar};
use crate::sdp::{SolverConfig, SolverStatus, SparseHermitian};
use crate::states::NamedOperator;

/// Entries below this are treated as structural zeros when sparsifying.
const DROP_TOL: f64 = 1e-14;

/// Which free cone a robustness refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeTag {
    Ppt,
    /// Separable cone, available only in closed form for a few state families.
    SepAnalytic,
}

#[derive(Clone, Debug)]
pub struct MonotoneResult {
    pub value: f64,
    /// Optimal X for negativity-type programs, optimal δ for robustnesses,
    /// optimal W for the distillation fidelity.
    pub witness: Option<ComplexMatrix>,
    /// Dual matrices of the program's matrix inequalities, in block order.
    pub dual_certificate: Option<Vec<ComplexMatrix>>,
    /// Bound on the optimum implied by `dual_certificate`.
    pub dual_bound: Option<f64>,
    /// `None` for closed-form values.
    pub solver_status: Option<SolverStatus>,
    pub cone: ConeTag,
    /// Where a closed-form value comes from.
    pub provenance: Option<String>,
}

impl MonotoneResult {
    fn closed_form(value: f64) -> Self {
        Self {
            value,
            witness: None,
            dual_certificate: None,
            dual_bound: None,
            solver_status: None,
            cone: ConeTag::Ppt,
            provenance: None,
        }
    }

    fn analytic(value: f64, provenance: impl Into<String>) -> Self {
        Self { cone: ConeTag::SepAnalytic, provenance: Some(provenance.into()), ..Self::closed_form(value) }
    }

    fn from_lmi(sol: &LmiSolution, value: f64, bound: f64, witness: ComplexMatrix) -> Self {
        Self {
            value,
            witness: Some(witness),
            dual_certificate: Some(sol.sdp.block_values.clone()),
            dual_bound: Some(bound),
            solver_status: Some(sol.status),
            cone: ConeTag::Ppt,
            provenance: None,
        }
    }

    /// True for closed forms and for optimal solver exits.
    pub fn is_reliable(&self) -> bool {
        self.solver_status.is_none_or(|s| s == SolverStatus::Optimal)
    }
}

fn require_same_shape(a: &NamedOperator, b: &NamedOperator) -> Result<()> {
    if a.shape != b.shape {
        return Err(dimension(format!(
            "'{}' is {}x{} but '{}' is {}x{}",
            a.label, a.shape.d_a, a.shape.d_b, b.label, b.shape.d_a, b.shape.d_b
        )));
    }
    Ok(())
}

fn sparse(m: &ComplexMatrix) -> SparseHermitian {
    SparseHermitian::from_dense_with_tol(&m.hermitian_part(), DROP_TOL).expect("hermitian part is Hermitian")
}

/// log₂ ‖ρ^Γ‖₁
pub fn log_negativity(rho: &NamedOperator) -> Result<MonotoneResult> {
    rho.require_state()?;
    Ok(MonotoneResult::closed_form(trace_norm(&rho.partial_transpose()).log2()))
}

/// (‖ρ^Γ‖₁ − 1)/2, a lower bound on the standard PPT robustness.
pub fn negativity_robustness_lower_bound(rho: &NamedOperator) -> Result<f64> {
    rho.require_state()?;
    Ok((trace_norm(&rho.partial_transpose()) - 1.0) / 2.0)
}

/// Support projector of ω together with a sparse basis of its kernel.
///
/// Product-basis vectors with a vanishing diagonal entry of ω lie in the kernel
/// outright; only the principal submatrix on the remaining indices is
/// diagonalised. This keeps the kernel basis sparse for states such as ω₃^{⊗n}.
struct SupportSplit {
    projector: ComplexMatrix,
    kernel: Vec<Vec<(usize, C64)>>,
}

fn support_split(omega: &ComplexMatrix) -> Result<SupportSplit> {
    let n = omega.dim();
    let active: Vec<usize> = (0..n).filter(|&i| omega[(i, i)].re > SUPPORT_CUTOFF).collect();
    let sub = ComplexMatrix::from_fn(active.len(), |i, j| omega[(active[i], active[j])]);
    let spec = hermitian_eigensystem(&sub)?;
    let mut projector = ComplexMatrix::zeros(n);
    let mut kernel: Vec<Vec<(usize, C64)>> = Vec::new();
    let mut is_active = vec![false; n];
    for &i in &active {
        is_active[i] = true;
    }
    for (i, &act) in is_active.iter().enumerate() {
        if !act {
            kernel.push(vec![(i, C64::new(1.0, 0.0))]);
        }
    }
    for k in 0..active.len() {
        let v = spec.vector(k);
        if spec.eigenvalues[k] > SUPPORT_CUTOFF {
            for (a, &i) in active.iter().enumerate() {
                for (b, &j) in active.iter().enumerate() {
                    projector[(i, j)] += v[a] * v[b].conj();
                }
            }
        } else {
            kernel.push(
                v.iter()
                    .zip(&active)
                    .filter(|(c, _)| c.norm() > DROP_TOL)
                    .map(|(c, &i)| (i, *c))
                    .collect(),
            );
        }
    }
    Ok(SupportSplit { projector, kernel })
}

/// Operators X = t·P + V Y V† with P the support projector of ω and the columns
/// of V spanning its kernel. Every X with ‖X‖_∞ = Tr Xω has this form, with
/// −t ⪯ Y ⪯ t.
struct PinnedWitness {
    t: crate::sdp::lmi::ScalarVar,
    y: Option<MatrixVar>,
    split: SupportSplit,
    shape: BipartiteShape,
}

impl PinnedWitness {
    fn new(lmi: &mut LmiBuilder, omega: &ComplexMatrix, shape: BipartiteShape, complex: bool) -> Result<Self> {
        let split = support_split(omega)?;
        let complex = complex || split.kernel.iter().flatten().any(|(_, c)| c.im != 0.0);
        let t = lmi.scalar();
        let k = split.kernel.len();
        let y = (k > 0).then(|| lmi.matrix(k, complex));
        if let Some(y) = &y {
            let upper = lmi.block("t-Y", SparseHermitian::zeros(k));
            lmi.add_scalar(upper, t, SparseHermitian::identity(k))?;
            lmi.add_matrix(upper, y, |e| e.scaled(-1.0))?;
            let lower = lmi.block("t+Y", SparseHermitian::zeros(k));
            lmi.add_scalar(lower, t, SparseHermitian::identity(k))?;
            lmi.add_matrix(lower, y, |e| e.clone())?;
        } else {
            let nonneg = lmi.block("t", SparseHermitian::zeros(1));
            lmi.add_scalar(nonneg, t, SparseHermitian::identity(1))?;
        }
        Ok(Self { t, y, split, shape })
    }

    fn dim(&self) -> usize {
        self.shape.dim()
    }

    fn lift(&self, e: &SparseHermitian) -> SparseHermitian {
        sparse_congruence(e, &self.split.kernel, self.dim())
    }

    /// Adds s·X to block `b`, or s·X^Γ when `transposed`.
    fn add_to(&self, lmi: &mut LmiBuilder, b: BlockId, s: f64, transposed: bool) -> Result<()> {
        let p = if transposed {
            partial_transpose(&self.split.projector, self.shape)?
        } else {
            self.split.projector.clone()
        };
        lmi.add_scalar(b, self.t, sparse(&p).scaled(s))?;
        if let Some(y) = &self.y {
            let shape = self.shape;
            lmi.add_matrix(b, y, |e| {
                let x = self.lift(e);
                let x = if transposed { sparse_partial_transpose(&x, shape) } else { x };
                x.scaled(s)
            })?;
        }
        Ok(())
    }

    /// Adds Tr[Xρ] to the objective.
    fn objective(&self, lmi: &mut LmiBuilder, rho: &ComplexMatrix) {
        lmi.objective_scalar(self.t, self.split.projector.trace_product(rho).re);
        if let Some(y) = &self.y {
            lmi.objective_matrix(y, rho, |e| self.lift(e));
        }
    }

    fn value(&self, sol: &LmiSolution) -> ComplexMatrix {
        let mut x = self.split.projector.scale(sol.scalar(self.t));
        if let Some(y) = &self.y {
            let ym = sol.matrix(y);
            for (a, ca) in self.split.kernel.iter().enumerate() {
                for (b, cb) in self.split.kernel.iter().enumerate() {
                    let yab = ym[(a, b)];
                    if yab == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for &(i, vi) in ca {
                        for &(j, vj) in cb {
                            x[(i, j)] += vi * yab * vj.conj();
                        }
                    }
                }
            }
        }
        x.hermitian_part()
    }
}

fn data_is_complex(ms: &[&ComplexMatrix]) -> bool {
    ms.iter().any(|m| !m.is_real())
}

/// N_τ(ρ|ω) = sup{Tr Xρ : −1 ⪯ X^Γ ⪯ 1, −(Tr Xω)·1 ⪯ X ⪯ (Tr Xω)·1}.
///
/// The constraint pins X to t on the support of ω, so the program is posed over
/// t and the kernel block of X, where it is strictly feasible.
pub fn tempered_negativity(rho: &NamedOperator, omega: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    rho.require_state()?;
    omega.require_state()?;
    require_same_shape(rho, omega)?;
    let n = rho.dim();
    let mut lmi = LmiBuilder::new();
    let complex = data_is_complex(&[&rho.matrix, &omega.matrix]);
    let x = PinnedWitness::new(&mut lmi, &omega.matrix, rho.shape, complex)?;
    let upper = lmi.block("1-X^T", SparseHermitian::identity(n));
    x.add_to(&mut lmi, upper, -1.0, true)?;
    let lower = lmi.block("1+X^T", SparseHermitian::identity(n));
    x.add_to(&mut lmi, lower, 1.0, true)?;
    x.objective(&mut lmi, &rho.matrix);
    let sol = lmi.solve(cfg)?;
    let witness = x.value(&sol);
    Ok(MonotoneResult::from_lmi(&sol, sol.value, sol.bound, witness))
}

/// log₂ N_τ(ρ|ρ)
pub fn tempered_log_negativity(rho: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    let mut r = tempered_negativity(rho, rho, cfg)?;
    r.value = r.value.log2();
    r.dual_bound = r.dual_bound.map(f64::log2);
    Ok(r)
}

/// Lower bound on the entanglement cost under non-entangling or PPT-preserving
/// operations: the tempered logarithmic negativity.
pub fn cost_lower_bound(rho: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    tempered_log_negativity(rho, cfg)
}

/// R^τ_PPT(ρ|ω), from 1 + 2R^τ = sup{Tr Xρ : 1 ± X ∈ PPT*, ‖X‖_∞ = Tr Xω}.
/// Membership 1 ± X ∈ PPT* is written as 1 ± X − Z^Γ ⪰ 0 with Z ⪰ 0.
pub fn tempered_robustness_ppt(rho: &NamedOperator, omega: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    rho.require_state()?;
    omega.require_state()?;
    require_same_shape(rho, omega)?;
    let n = rho.dim();
    let shape = rho.shape;
    let complex = data_is_complex(&[&rho.matrix, &omega.matrix]);
    let mut lmi = LmiBuilder::new();
    let x = PinnedWitness::new(&mut lmi, &omega.matrix, shape, complex)?;
    for (z_label, label, sign) in [("Z1", "1-X-Z1^T", -1.0), ("Z2", "1+X-Z2^T", 1.0)] {
        let z = lmi.matrix(n, complex);
        let zb = lmi.block(z_label, SparseHermitian::zeros(n));
        lmi.add_matrix(zb, &z, |e| e.clone())?;
        let b = lmi.block(label, SparseHermitian::identity(n));
        x.add_to(&mut lmi, b, sign, false)?;
        lmi.add_matrix(b, &z, |e| sparse_partial_transpose(e, shape).scaled(-1.0))?;
    }
    x.objective(&mut lmi, &rho.matrix);
    let sol = lmi.solve(cfg)?;
    let witness = x.value(&sol);
    Ok(MonotoneResult::from_lmi(&sol, (sol.value - 1.0) / 2.0, (sol.bound - 1.0) / 2.0, witness))
}

fn robustness_lmi(rho: &NamedOperator, standard: bool, cfg: &SolverConfig) -> Result<MonotoneResult> {
    rho.require_state()?;
    let n = rho.dim();
    let shape = rho.shape;
    let mut lmi = LmiBuilder::new();
    let delta = lmi.matrix(n, !rho.matrix.is_real());
    let d = lmi.block("delta", SparseHermitian::zeros(n));
    lmi.add_matrix(d, &delta, |e| e.clone())?;
    if standard {
        let dg = lmi.block("delta^T", SparseHermitian::zeros(n));
        lmi.add_matrix(dg, &delta, |e| sparse_partial_transpose(e, shape))?;
    }
    let rg = lmi.block("(rho+delta)^T", sparse(&rho.partial_transpose()));
    lmi.add_matrix(rg, &delta, |e| sparse_partial_transpose(e, shape))?;
    lmi.objective_matrix(&delta, &ComplexMatrix::identity(n), |e| e.scaled(-1.0));
    let sol = lmi.solve(cfg)?;
    let witness = sol.matrix(&delta);
    Ok(MonotoneResult::from_lmi(&sol, -sol.value, -sol.bound, witness))
}

/// Standard robustness: min{Tr δ : δ, δ^Γ, (ρ+δ)^Γ ⪰ 0}.
pub fn std_robustness_ppt(rho: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    robustness_lmi(rho, true, cfg)
}

/// Generalised robustness: min{Tr δ : δ ⪰ 0, (ρ+δ)^Γ ⪰ 0}.
pub fn gen_robustness_ppt(rho: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    robustness_lmi(rho, false, cfg)
}

/// (Σ_j √λ_j)² − 1 for a pure state with Schmidt coefficients λ.
pub fn pure_state_robustness(schmidt: &[f64]) -> Result<f64> {
    if schmidt.is_empty() || schmidt.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
        return Err(domain("Schmidt coefficients must be non-negative reals"));
    }
    if schmidt.windows(2).any(|w| w[0] < w[1]) {
        return Err(domain("Schmidt coefficients must be sorted in descending order"));
    }
    let total: f64 = schmidt.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(domain(format!("Schmidt coefficients sum to {total}, not 1")));
    }
    let s: f64 = schmidt.iter().map(|l| l.sqrt()).sum();
    Ok(s * s - 1.0)
}

/// Schmidt coefficients of a pure bipartite state, or `None` if ρ is mixed.
fn schmidt_coefficients(rho: &NamedOperator) -> Result<Option<Vec<f64>>> {
    let purity = rho.matrix.trace_product(&rho.matrix).re;
    if (purity - 1.0).abs() > 1e-9 {
        return Ok(None);
    }
    let keep = if rho.shape.d_a <= rho.shape.d_b { Subsystem::A } else { Subsystem::B };
    let reduced = partial_trace(&rho.matrix, rho.shape, keep)?;
    let mut l = crate::linalg::hermitian_eigenvalues(&reduced)?;
    l.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = l.iter().sum();
    l.iter_mut().for_each(|x| *x /= total);
    l.sort_by(|a, b| b.total_cmp(a));
    Ok(Some(l))
}

/// Fidelity with Φ_d if ρ is isotropic on d×d, else `None`.
fn isotropic_fidelity(rho: &NamedOperator) -> Result<Option<(usize, f64)>> {
    let d = rho.shape.d_a;
    if rho.shape.d_b != d {
        return Ok(None);
    }
    let twirled = crate::protocols::twirl(&rho.matrix, d)?;
    if twirled.max_abs_diff(&rho.matrix) > 1e-10 {
        return Ok(None);
    }
    let phi = crate::states::phi(d)?;
    Ok(Some((d, rho.matrix.trace_product(&phi.matrix).re)))
}

fn is_omega3(rho: &NamedOperator) -> bool {
    rho.shape == BipartiteShape { d_a: 3, d_b: 3 } && rho.matrix.max_abs_diff(&crate::states::omega3().matrix) <= 1e-12
}

/// Separable-cone robustness in the cases where it is known in closed form:
/// pure states, isotropic states and ω₃.
fn sep_robustness(rho: &NamedOperator, standard: bool) -> Result<MonotoneResult> {
    rho.require_state()?;
    if let Some(l) = schmidt_coefficients(rho)? {
        return Ok(MonotoneResult::analytic(pure_state_robustness(&l)?, "pure state: (sum of sqrt Schmidt coefficients)^2 - 1"));
    }
    if let Some((d, f)) = isotropic_fidelity(rho)? {
        let value = (d as f64 * f - 1.0).max(0.0);
        return Ok(MonotoneResult::analytic(value, "isotropic state: max(0, d F - 1)"));
    }
    if is_omega3(rho) {
        let (value, note) = if standard {
            (0.75, "omega_3: explicit separable decomposition, standard robustness 3/4")
        } else {
            (0.5, "omega_3: explicit separable decomposition, generalised robustness 1/2")
        };
        return Ok(MonotoneResult::analytic(value, note));
    }
    Err(Error::Unsupported(format!(
        "separable-cone robustness of '{}' has no closed form (only pure, isotropic and omega_3 are supported)",
        rho.label
    )))
}

pub fn std_robustness(rho: &NamedOperator, cone: ConeTag, cfg: &SolverConfig) -> Result<MonotoneResult> {
    match cone {
        ConeTag::Ppt => std_robustness_ppt(rho, cfg),
        ConeTag::SepAnalytic => sep_robustness(rho, true),
    }
}

pub fn gen_robustness(rho: &NamedOperator, cone: ConeTag, cfg: &SolverConfig) -> Result<MonotoneResult> {
    match cone {
        ConeTag::Ppt => gen_robustness_ppt(rho, cfg),
        ConeTag::SepAnalytic => sep_robustness(rho, false),
    }
}

/// S(ρ_B) − S(ρ_AB) in bits.
pub fn coherent_information(rho: &NamedOperator) -> Result<f64> {
    rho.require_state()?;
    let rho_b = partial_trace(&rho.matrix, rho.shape, Subsystem::B)?;
    Ok(von_neumann_entropy(&rho_b)? - von_neumann_entropy(&rho.matrix)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReeBound {
    /// D(ρ‖σ) in bits; infinite when supp ρ ⊄ supp σ.
    pub value: f64,
    /// Whether the ansatz passed the PPT test. The value bounds the PPT
    /// relative entropy of entanglement only when this holds.
    pub ansatz_is_ppt: bool,
}

/// D(ρ‖σ) for a caller-chosen free state σ.
pub fn ree_upper_bound(rho: &NamedOperator, ansatz: &NamedOperator) -> Result<ReeBound> {
    rho.require_state()?;
    ansatz.require_state()?;
    require_same_shape(rho, ansatz)?;
    let pt_min = crate::linalg::hermitian_eigenvalues(&ansatz.partial_transpose())?[0];
    Ok(ReeBound { value: quantum_relative_entropy(&rho.matrix, &ansatz.matrix)?, ansatz_is_ppt: pt_min >= -PSD_TOL })
}

/// φ(δ) = max{Tr ρW : 0 ⪯ W ⪯ 1, Tr Wσ ≤ (1+δ)/2^m for every PPT state σ}.
///
/// The last condition says c·1 − W ∈ PPT*, written as c·1 − W − Z^Γ ⪰ 0, Z ⪰ 0.
pub fn distillation_fidelity_phi(rho: &NamedOperator, m: u32, delta: f64, cfg: &SolverConfig) -> Result<MonotoneResult> {
    rho.require_state()?;
    if m == 0 {
        return Err(domain("m must be positive"));
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(domain(format!("delta must be a non-negative real, got {delta}")));
    }
    let cap = (1.0 + delta) / 2f64.powi(m as i32);
    if cap > 1.0 {
        return Err(domain(format!("(1+delta)/2^m = {cap} exceeds 1")));
    }
    let n = rho.dim();
    let shape = rho.shape;
    let complex = !rho.matrix.is_real();
    let mut lmi = LmiBuilder::new();
    let w = lmi.matrix(n, complex);
    let z = lmi.matrix(n, complex);
    let wb = lmi.block("W", SparseHermitian::zeros(n));
    lmi.add_matrix(wb, &w, |e| e.clone())?;
    let ub = lmi.block("1-W", SparseHermitian::identity(n));
    lmi.add_matrix(ub, &w, |e| e.scaled(-1.0))?;
    let zb = lmi.block("Z", SparseHermitian::zeros(n));
    lmi.add_matrix(zb, &z, |e| e.clone())?;
    let cb = lmi.block("c-W-Z^T", SparseHermitian::identity(n).scaled(cap));
    lmi.add_matrix(cb, &w, |e| e.scaled(-1.0))?;
    lmi.add_matrix(cb, &z, |e| sparse_partial_transpose(e, shape).scaled(-1.0))?;
    lmi.objective_matrix(&w, &rho.matrix, |e| e.clone());
    let sol = lmi.solve(cfg)?;
    let witness = sol.matrix(&w);
    Ok(MonotoneResult::from_lmi(&sol, sol.value, sol.bound, witness))
}

/// Lower bound on the dilution rate of ω₃ when the error may approach 1 − δ:
/// 1 for δ ≥ 1/3 and log₂(3(1−δ)/(2−3δ)) below.
pub fn tradeoff_rate_lower_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain(format!("delta must lie in (0, 1], got {delta}")));
    }
    if 3.0 * delta >= 1.0 {
        Ok(1.0)
    } else {
        Ok((3.0 * (1.0 - delta) / (2.0 - 3.0 * delta)).log2())
    }
}

/// E^τ_N([id ⊗ Λ](probe)) for a single probe on reference ⊗ input; a lower
/// bound on the channel's tempered log-negativity.
pub fn channel_tempered_negativity_lower(choi: &ChoiMatrix, probe: &NamedOperator, cfg: &SolverConfig) -> Result<MonotoneResult> {
    probe.require_state()?;
    if probe.shape.d_b != choi.d_in {
        return Err(domain(format!(
            "probe acts on a {}-dimensional input but the channel takes {}",
            probe.shape.d_b, choi.d_in
        )));
    }
    let out = apply_local(choi, &probe.matrix, probe.shape)?;
    let shape = BipartiteShape::new(probe.shape.d_a, choi.d_out)?;
    let out = NamedOperator::state(out, shape, format!("(id x channel)({})", probe.label))?;
    tempered_log_negativity(&out, cfg)
}

/// Re-evaluation of a tempered-negativity witness.
#[derive(Clone, Debug, PartialEq)]
pub struct TemperedWitnessCheck {
    /// Tr Xρ
    pub objective: f64,
    /// ‖X^Γ‖_∞ − 1
    pub pt_excess: f64,
    /// ‖X‖_∞ − Tr Xω
    pub norm_excess: f64,
}

impl TemperedWitnessCheck {
    pub fn feasible(&self, tol: f64) -> bool {
        self.pt_excess <= tol && self.norm_excess <= tol
    }
}

pub fn replay_tempered_witness(x: &ComplexMatrix, rho: &NamedOperator, omega: &NamedOperator) -> Result<TemperedWitnessCheck> {
    require_same_shape(rho, omega)?;
    rho.shape.check(x)?;
    if !x.is_hermitian(1e-10) {
        return Err(contract("witness is not Hermitian"));
    }
    Ok(TemperedWitnessCheck {
        objective: x.trace_product(&rho.matrix).re,
        pt_excess: operator_norm(&partial_transpose(x, rho.shape)?) - 1.0,
        norm_excess: operator_norm(x) - x.trace_product(&omega.matrix).re,
    })
}

/// Re-evaluation of a robustness witness δ.
#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessWitnessCheck {
    /// Tr δ
    pub objective: f64,
    /// Smallest eigenvalue over δ, (ρ+δ)^Γ and, for the standard robustness, δ^Γ.
    pub min_eigenvalue: f64,
}

pub fn replay_robustness_witness(delta: &ComplexMatrix, rho: &NamedOperator, standard: bool) -> Result<RobustnessWitnessCheck> {
    rho.shape.check(delta)?;
    let dpt = partial_transpose(delta, rho.shape)?;
    let mut mins = vec![
        crate::linalg::hermitian_eigenvalues(&delta.hermitian_part())?[0],
        crate::linalg::hermitian_eigenvalues(&(&rho.partial_transpose() + &dpt).hermitian_part())?[0],
    ];
    if standard {
        mins.push(crate::linalg::hermitian_eigenvalues(&dpt.hermitian_part())?[0]);
    }
    Ok(RobustnessWitnessCheck { objective: delta.trace().re, min_eigenvalue: mins.into_iter().fold(f64::INFINITY, f64::min) })
}
