//! Explicit maps and channels: twirling, the preparation map for ω₃, the
//! phase/permutation average, Choi calculus and numerical checks of the
//! inequalities these maps are used for.

use crate::error::{contract, dimension, domain, Error, Result};
use crate::linalg::{
    check_state, hermitian_eigenvalues, partial_transpose, tensor, trace_norm, BipartiteShape, ComplexMatrix, C64,
    PSD_TOL,
};
use crate::monotones::{std_robustness_ppt, tempered_negativity};
use crate::sdp::{SolverConfig, SolverStatus};
use crate::states::{self, NamedOperator};

/// T(X) = Tr[XΦ_d]Φ_d + Tr[X(1−Φ_d)](1−Φ_d)/(d²−1)
pub fn twirl(x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    if d < 2 || x.dim() != d * d {
        return Err(domain(format!("twirl over {d}x{d} needs a {0}x{0} input, got {1}", d * d, x.dim())));
    }
    let phi = states::phi(d)?.matrix;
    let overlap = x.trace_product(&phi);
    let rest = x.trace() - overlap;
    let comp = &ComplexMatrix::identity(d * d) - &phi;
    Ok(&phi.scale_complex(overlap) + &comp.scale_complex(rest / ((d * d - 1) as f64)))
}

/// Λ(X) = Tr[XΦ₂]ω₃ + Tr[X(1−Φ₂)]τ₃, from two qubits to two qutrits.
pub fn prepare_omega3_map(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    LinearMapSpec::prepare_omega3().apply(x)
}

fn permutations3() -> [[usize; 3]; 6] {
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// Average of (U_{θ,π} ⊗ U_{−θ,π}) X (·)† over θ ∈ [0,2π)³ and π ∈ S₃, where
/// U_{θ,π} = Σ_j e^{iθ_j}|π(j)⟩⟨j|.
///
/// The θ-average keeps exactly the entries ⟨ab|X|cd⟩ whose phase
/// θ_a − θ_b − θ_c + θ_d vanishes identically, i.e. a = b and c = d, or a = c
/// and b = d. The permutation average is then a finite sum.
pub fn phase_permutation_average(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.dim() != 9 {
        return Err(domain(format!("the phase/permutation average acts on two qutrits, got dimension {}", x.dim())));
    }
    let idx = |a: usize, b: usize| 3 * a + b;
    let mut kept = ComplexMatrix::zeros(9);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    if (a == b && c == d) || (a == c && b == d) {
                        kept[(idx(a, b), idx(c, d))] = x[(idx(a, b), idx(c, d))];
                    }
                }
            }
        }
    }
    let mut out = ComplexMatrix::zeros(9);
    for p in permutations3() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        out[(idx(p[a], p[b]), idx(p[c], p[d]))] += kept[(idx(a, b), idx(c, d))] / 6.0;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// U_{θ,π} ⊗ U_{−θ,π}
pub fn phase_permutation_unitary(theta: [f64; 3], perm: [usize; 3]) -> ComplexMatrix {
    let u = |sign: f64| {
        let mut m = ComplexMatrix::zeros(3);
        for j in 0..3 {
            m[(perm[j], j)] = C64::from_polar(1.0, sign * theta[j]);
        }
        m
    };
    tensor(&u(1.0), &u(-1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// 1/d − Tr[ρΦ_d]; non-negative exactly when separable.
    pub margin: f64,
}

/// Isotropic states are separable iff PPT iff Tr[ρΦ_d] ≤ 1/d.
pub fn isotropic_separability_check(rho: &NamedOperator) -> Result<SeparabilityVerdict> {
    rho.require_state()?;
    let d = rho.shape.d_a;
    if rho.shape.d_b != d {
        return Err(contract(format!("'{}' is not on a d x d system", rho.label)));
    }
    let dev = twirl(&rho.matrix, d)?.max_abs_diff(&rho.matrix);
    if dev > 1e-10 {
        return Err(contract(format!("'{}' is not isotropic (twirl moves it by {dev:.3e})", rho.label)));
    }
    let f = rho.matrix.trace_product(&states::phi(d)?.matrix).re;
    let margin = 1.0 / d as f64 - f;
    Ok(SeparabilityVerdict { separable: margin >= -1e-12, margin })
}

/// A linear map on matrices, described structurally so that its action, its
/// Choi matrix and its free-ness can all be derived from the description.
#[derive(Clone, Debug)]
pub enum LinearMapSpec {
    Identity { dim: usize },
    /// Complete dephasing in the computational basis.
    Dephasing { dim: usize },
    /// Isotropic twirl on d×d.
    Twirl { d: usize },
    /// The phase/permutation average on two qutrits.
    PhasePermutationAverage,
    /// X ↦ Σ_i Tr[X M_i] σ_i
    MeasurePrepare { effects: Vec<ComplexMatrix>, outputs: Vec<ComplexMatrix> },
    /// X ↦ Σ_i c_i Λ_i(X)
    AffineCombination { terms: Vec<(f64, LinearMapSpec)> },
}

impl LinearMapSpec {
    pub fn prepare_omega3() -> Self {
        let phi2 = states::phi(2).expect("d = 2 is valid").matrix;
        let comp = &ComplexMatrix::identity(4) - &phi2;
        LinearMapSpec::MeasurePrepare {
            effects: vec![phi2, comp],
            outputs: vec![states::omega3().matrix, states::tau3_diag().matrix],
        }
    }

    /// Ω₃ = (3/2)Δ − (1/2)id on a qutrit; its Choi state is ω₃.
    pub fn omega3_channel() -> Self {
        LinearMapSpec::AffineCombination {
            terms: vec![(1.5, LinearMapSpec::Dephasing { dim: 3 }), (-0.5, LinearMapSpec::Identity { dim: 3 })],
        }
    }

    pub fn name(&self) -> String {
        match self {
            LinearMapSpec::Identity { dim } => format!("identity({dim})"),
            LinearMapSpec::Dephasing { dim } => format!("dephasing({dim})"),
            LinearMapSpec::Twirl { d } => format!("twirl({d})"),
            LinearMapSpec::PhasePermutationAverage => "phase-permutation-average".into(),
            LinearMapSpec::MeasurePrepare { effects, .. } => format!("measure-prepare({} outcomes)", effects.len()),
            LinearMapSpec::AffineCombination { terms } => {
                let parts: Vec<String> = terms.iter().map(|(c, m)| format!("{c}*{}", m.name())).collect();
                parts.join(" + ")
            }
        }
    }

    pub fn input_dim(&self) -> Result<usize> {
        Ok(match self {
            LinearMapSpec::Identity { dim } | LinearMapSpec::Dephasing { dim } => *dim,
            LinearMapSpec::Twirl { d } => d * d,
            LinearMapSpec::PhasePermutationAverage => 9,
            LinearMapSpec::MeasurePrepare { effects, .. } => {
                effects.first().ok_or_else(|| domain("measure-prepare map without outcomes"))?.dim()
            }
            LinearMapSpec::AffineCombination { terms } => {
                terms.first().ok_or_else(|| domain("empty affine combination"))?.1.input_dim()?
            }
        })
    }

    pub fn output_dim(&self) -> Result<usize> {
        Ok(match self {
            LinearMapSpec::MeasurePrepare { outputs, .. } => {
                outputs.first().ok_or_else(|| domain("measure-prepare map without outcomes"))?.dim()
            }
            LinearMapSpec::AffineCombination { terms } => {
                terms.first().ok_or_else(|| domain("empty affine combination"))?.1.output_dim()?
            }
            _ => self.input_dim()?,
        })
    }

    fn validate(&self) -> Result<()> {
        match self {
            LinearMapSpec::Identity { dim } | LinearMapSpec::Dephasing { dim } if *dim == 0 => {
                Err(domain("map dimension must be positive"))
            }
            LinearMapSpec::Twirl { d } if *d < 2 => Err(domain("twirl needs d >= 2")),
            LinearMapSpec::MeasurePrepare { effects, outputs } => {
                if effects.len() != outputs.len() || effects.is_empty() {
                    return Err(domain("measure-prepare needs one output per effect"));
                }
                let (di, dout) = (effects[0].dim(), outputs[0].dim());
                if effects.iter().any(|e| e.dim() != di) || outputs.iter().any(|o| o.dim() != dout) {
                    return Err(dimension("measure-prepare effects or outputs have inconsistent sizes"));
                }
                Ok(())
            }
            LinearMapSpec::AffineCombination { terms } => {
                let (di, dout) = (self.input_dim()?, self.output_dim()?);
                for (_, t) in terms {
                    t.validate()?;
                    if t.input_dim()? != di || t.output_dim()? != dout {
                        return Err(dimension("terms of an affine combination act between different spaces"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.validate()?;
        let din = self.input_dim()?;
        if x.dim() != din {
            return Err(domain(format!("{} acts on dimension {din}, got {}", self.name(), x.dim())));
        }
        match self {
            LinearMapSpec::Identity { .. } => Ok(x.clone()),
            LinearMapSpec::Dephasing { dim } => {
                Ok(ComplexMatrix::from_fn(*dim, |i, j| if i == j { x[(i, i)] } else { C64::new(0.0, 0.0) }))
            }
            LinearMapSpec::Twirl { d } => twirl(x, *d),
            LinearMapSpec::PhasePermutationAverage => phase_permutation_average(x),
            LinearMapSpec::MeasurePrepare { effects, outputs } => {
                let mut out = ComplexMatrix::zeros(outputs[0].dim());
                for (e, o) in effects.iter().zip(outputs) {
                    out += &o.scale_complex(x.trace_product(e));
                }
                Ok(out)
            }
            LinearMapSpec::AffineCombination { terms } => {
                let mut out = ComplexMatrix::zeros(self.output_dim()?);
                for (c, t) in terms {
                    out += &t.apply(x)?.scale(*c);
                }
                Ok(out)
            }
        }
    }

    /// Trace preservation on the matrix units, worst deviation.
    pub fn trace_preservation_defect(&self) -> Result<f64> {
        let n = self.input_dim()?;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut e = ComplexMatrix::zeros(n);
                e[(i, j)] = C64::new(1.0, 0.0);
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.apply(&e)?.trace() - expected).norm());
            }
        }
        Ok(worst)
    }
}

/// Normalised Choi state J = [id ⊗ Λ](Φ_{d_in}).
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    pub matrix: ComplexMatrix,
    pub d_in: usize,
    pub d_out: usize,
}

impl ChoiMatrix {
    pub fn new(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if d_in == 0 || d_out == 0 || matrix.dim() != d_in * d_out {
            return Err(dimension(format!("Choi matrix of dimension {} is not {d_in} x {d_out}", matrix.dim())));
        }
        let min = hermitian_eigenvalues(&matrix).map_err(|_| contract("Choi matrix is not Hermitian"))?[0];
        if min < -PSD_TOL {
            return Err(contract(format!("Choi matrix is not positive (smallest eigenvalue {min:.3e}); the map is not completely positive")));
        }
        let shape = BipartiteShape::new(d_in, d_out)?;
        let marginal = crate::linalg::partial_trace(&matrix, shape, crate::linalg::Subsystem::A)?;
        let dev = marginal.max_abs_diff(&ComplexMatrix::identity(d_in).scale(1.0 / d_in as f64));
        if dev > 1e-10 {
            return Err(contract(format!("Choi marginal deviates from 1/d_in by {dev:.3e}; the map is not trace preserving")));
        }
        Ok(Self { matrix, d_in, d_out })
    }

    pub fn shape(&self) -> BipartiteShape {
        BipartiteShape { d_a: self.d_in, d_b: self.d_out }
    }
}

pub fn choi_of(map: &LinearMapSpec, d_in: usize) -> Result<ChoiMatrix> {
    if map.input_dim()? != d_in {
        return Err(domain(format!("{} is not defined on dimension {d_in}", map.name())));
    }
    let d_out = map.output_dim()?;
    let mut j = ComplexMatrix::zeros(d_in * d_out);
    for a in 0..d_in {
        for b in 0..d_in {
            let mut e = ComplexMatrix::zeros(d_in);
            e[(a, b)] = C64::new(1.0, 0.0);
            let img = map.apply(&e)?;
            for r in 0..d_out {
                for s in 0..d_out {
                    j[(a * d_out + r, b * d_out + s)] = img[(r, s)] / d_in as f64;
                }
            }
        }
    }
    ChoiMatrix::new(j, d_in, d_out)
}

/// Λ(ρ) = d_in · Tr_in[(ρᵀ ⊗ 1) J]
pub fn apply_via_choi(choi: &ChoiMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != choi.d_in {
        return Err(domain(format!("channel input has dimension {}, got {}", choi.d_in, rho.dim())));
    }
    let (din, dout) = (choi.d_in, choi.d_out);
    let mut out = ComplexMatrix::zeros(dout);
    for a in 0..din {
        for b in 0..din {
            // (ρᵀ)_{ba} = ρ_{ab} pairs with the block J_{(a,·),(b,·)} = Λ(|a⟩⟨b|)/d_in.
            let w = rho[(a, b)] * din as f64;
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..dout {
                for s in 0..dout {
                    out[(r, s)] += w * choi.matrix[(a * dout + r, b * dout + s)];
                }
            }
        }
    }
    Ok(out)
}

/// [id_ref ⊗ Λ](M) for M on reference ⊗ input with the given shape.
pub fn apply_local(choi: &ChoiMatrix, m: &ComplexMatrix, shape: BipartiteShape) -> Result<ComplexMatrix> {
    shape.check(m)?;
    if shape.d_b != choi.d_in {
        return Err(domain(format!("channel input has dimension {}, second factor is {}", choi.d_in, shape.d_b)));
    }
    let (dr, din, dout) = (shape.d_a, choi.d_in, choi.d_out);
    let mut out = ComplexMatrix::zeros(dr * dout);
    for i in 0..dr {
        for k in 0..dr {
            let block = ComplexMatrix::from_fn(din, |a, b| m[(i * din + a, k * din + b)]);
            if block.max_abs() == 0.0 {
                continue;
            }
            let img = apply_via_choi(choi, &block)?;
            for r in 0..dout {
                for s in 0..dout {
                    out[(i * dout + r, k * dout + s)] = img[(r, s)];
                }
            }
        }
    }
    Ok(out)
}

fn square_shape(dim: usize) -> Result<BipartiteShape> {
    let d = (dim as f64).sqrt().round() as usize;
    if d * d != dim {
        return Err(domain(format!("dimension {dim} is not that of a d x d system")));
    }
    BipartiteShape::square(d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NegativityBoundReport {
    /// ‖Λ(Φ_d)^Γ‖₁
    pub output_negativity: f64,
    /// d‖Λ(σ₊)^Γ‖₁ + (d−1)‖Λ(σ₋)^Γ‖₁, the triangle-inequality bound.
    pub triangle_bound: f64,
    /// 2d − 1
    pub bound: f64,
    /// max |Λ(Φ_d) − dΛ(σ₊) + (d−1)Λ(σ₋)|
    pub split_residual: f64,
    pub holds: bool,
}

/// Checks ‖Λ(Φ_d)^Γ‖₁ ≤ 2d − 1 through the split Φ_d = dσ₊ − (d−1)σ₋.
pub fn ne_output_negativity_bound_check(map: &LinearMapSpec, d: usize) -> Result<NegativityBoundReport> {
    if d < 2 || map.input_dim()? != d * d {
        return Err(domain(format!("{} is not defined on a {d} x {d} input", map.name())));
    }
    let out_shape = square_shape(map.output_dim()?)?;
    let phi = states::phi(d)?;
    let (sp, sm) = states::sigma_pm(d)?;
    let neg = |x: &ComplexMatrix| -> Result<f64> { Ok(trace_norm(&partial_transpose(x, out_shape)?)) };
    let out_phi = map.apply(&phi.matrix)?;
    let out_p = map.apply(&sp.matrix)?;
    let out_m = map.apply(&sm.matrix)?;
    let df = d as f64;
    let recombined = &out_p.scale(df) - &out_m.scale(df - 1.0);
    let output_negativity = neg(&out_phi)?;
    let triangle_bound = df * neg(&out_p)? + (df - 1.0) * neg(&out_m)?;
    let bound = 2.0 * df - 1.0;
    Ok(NegativityBoundReport {
        output_negativity,
        triangle_bound,
        bound,
        split_residual: recombined.max_abs_diff(&out_phi),
        holds: output_negativity <= bound + 1e-9,
    })
}

#[derive(Clone, Debug)]
pub struct ApproxMonotonicityReport {
    /// Robustness-generating level used on the right-hand side.
    pub level: f64,
    /// R^s_PPT(Λ(ρ)) + 1
    pub lhs: f64,
    /// (1 + 2δ)(R^s_PPT(ρ) + 1)
    pub rhs: f64,
    pub holds: bool,
    pub statuses: Vec<SolverStatus>,
}

/// Product pure states |a⟩⟨a| ⊗ |b⟩⟨b| with a, b from the computational and
/// Fourier bases.
fn product_probe_states(d: usize) -> Vec<ComplexMatrix> {
    let mut local: Vec<Vec<C64>> = Vec::new();
    for k in 0..d {
        let mut e = vec![C64::new(0.0, 0.0); d];
        e[k] = C64::new(1.0, 0.0);
        local.push(e);
        let f: Vec<C64> = (0..d)
            .map(|j| C64::from_polar(1.0 / (d as f64).sqrt(), 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64))
            .collect();
        local.push(f);
    }
    let mut out = Vec::new();
    for a in &local {
        for b in &local {
            out.push(tensor(&ComplexMatrix::projector(a), &ComplexMatrix::projector(b)));
        }
    }
    out
}

fn is_ppt_state(m: &ComplexMatrix, shape: BipartiteShape) -> Result<bool> {
    let min = hermitian_eigenvalues(&m.hermitian_part())?[0];
    let min_pt = hermitian_eigenvalues(&partial_transpose(m, shape)?.hermitian_part())?[0];
    Ok(min >= -PSD_TOL && min_pt >= -PSD_TOL)
}

/// Effects {Φ_d, 1−Φ_d}: PPT inputs have Tr[σΦ_d] ∈ [0, 1/d], so by convexity
/// the map preserves PPT iff both endpoint mixtures of the outputs are PPT.
fn isotropic_measurement_is_free(
    effects: &[ComplexMatrix],
    outputs: &[ComplexMatrix],
    in_shape: BipartiteShape,
    out_shape: BipartiteShape,
) -> Result<bool> {
    let d = in_shape.d_a;
    if effects.len() != 2 || in_shape.d_b != d || effects[0].dim() != d * d {
        return Ok(false);
    }
    let phi = states::phi(d)?.matrix;
    let comp = &ComplexMatrix::identity(d * d) - &phi;
    if effects[0].max_abs_diff(&phi) > 1e-12 || effects[1].max_abs_diff(&comp) > 1e-12 {
        return Ok(false);
    }
    let top = 1.0 / d as f64;
    let edge = &outputs[0].scale(top) + &outputs[1].scale(1.0 - top);
    Ok(is_ppt_state(&outputs[1], out_shape)? && is_ppt_state(&edge, out_shape)?)
}

/// The PPT-robustness generated by the map on free inputs: exactly 0 for kinds
/// that send PPT states to PPT states by construction, and for affine
/// combinations the largest standard robustness over a sweep of product
/// inputs.
fn generation_level(map: &LinearMapSpec, in_shape: BipartiteShape, cfg: &SolverConfig) -> Result<f64> {
    match map {
        LinearMapSpec::Identity { .. }
        | LinearMapSpec::Dephasing { .. }
        | LinearMapSpec::Twirl { .. }
        | LinearMapSpec::PhasePermutationAverage => Ok(0.0),
        LinearMapSpec::MeasurePrepare { effects, outputs } => {
            let out_shape = square_shape(map.output_dim()?)?;
            if effects.iter().any(|e| hermitian_eigenvalues(&e.hermitian_part()).map_or(true, |l| l[0] < -PSD_TOL)) {
                return Err(Error::Unsupported("measure-prepare map with a non-positive effect".into()));
            }
            let mut all_ppt = true;
            for o in outputs {
                all_ppt &= is_ppt_state(o, out_shape)?;
            }
            if all_ppt || isotropic_measurement_is_free(effects, outputs, in_shape, out_shape)? {
                Ok(0.0)
            } else {
                Err(Error::Unsupported("measure-prepare map with a non-PPT output state".into()))
            }
        }
        LinearMapSpec::AffineCombination { .. } => {
            let out_shape = square_shape(map.output_dim()?)?;
            let mut level: f64 = 0.0;
            for s in product_probe_states(in_shape.d_a) {
                let out = map.apply(&s)?;
                let out = NamedOperator::state(out, out_shape, "sweep output").map_err(|_| {
                    Error::Unsupported(format!("{} does not map product states to states", map.name()))
                })?;
                let r = std_robustness_ppt(&out, cfg)?;
                if !r.is_reliable() {
                    return Err(Error::Unsupported("robustness sweep did not converge".into()));
                }
                level = level.max(r.value);
            }
            Ok(level)
        }
    }
}

/// Checks R^s_PPT(Λ(ρ)) + 1 ≤ (1 + 2δ)(R^s_PPT(ρ) + 1).
pub fn approx_monotonicity_check(
    map: &LinearMapSpec,
    delta_level: f64,
    rho: &NamedOperator,
    cfg: &SolverConfig,
) -> Result<ApproxMonotonicityReport> {
    if !(delta_level >= 0.0) {
        return Err(domain("delta level must be non-negative"));
    }
    if map.input_dim()? != rho.dim() {
        return Err(domain(format!("{} does not act on '{}'", map.name(), rho.label)));
    }
    let level = generation_level(map, rho.shape, cfg)?;
    if level > delta_level + 1e-7 {
        return Err(contract(format!("{} generates robustness {level:.6} above the stated level {delta_level}", map.name())));
    }
    let out_shape = square_shape(map.output_dim()?)?;
    let out = NamedOperator::state(map.apply(&rho.matrix)?, out_shape, format!("{}({})", map.name(), rho.label))?;
    let r_out = std_robustness_ppt(&out, cfg)?;
    let r_in = std_robustness_ppt(rho, cfg)?;
    let lhs = r_out.value + 1.0;
    let rhs = (1.0 + 2.0 * delta_level) * (r_in.value + 1.0);
    Ok(ApproxMonotonicityReport {
        level,
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-6,
        statuses: vec![r_out.solver_status.unwrap_or(SolverStatus::Optimal), r_in.solver_status.unwrap_or(SolverStatus::Optimal)],
    })
}

#[derive(Clone, Debug)]
pub struct ChainLink {
    pub label: String,
    pub value: f64,
}

/// 2d−1 ≥ ‖Λ(Φ_d)^Γ‖₁ ≥ N_τ(Λ(Φ_d)|ω₃^{⊗n}) ≥ (1−2ε)N_τ(ω₃)^n with d = 2^n
/// and Λ the n-fold exact preparation map. Values at n = 1, 2 are
/// finite-size lower evidence only, never a limit in n.
#[derive(Clone, Debug)]
pub struct DilutionChainReport {
    pub n: u32,
    pub links: Vec<ChainLink>,
    /// Successive differences link[i] − link[i+1].
    pub slacks: Vec<f64>,
    pub holds: bool,
    pub statuses: Vec<SolverStatus>,
}

/// Evaluates the dilution chain with a caller-supplied single-copy value of
/// N_τ(ω₃) and n-copy tempered negativity, as computed elsewhere.
pub fn dilution_chain(n: u32, epsilon: f64, n_tau_single: f64, n_tau_multi: f64, tol: f64) -> Result<DilutionChainReport> {
    if !(1..=2).contains(&n) {
        return Err(domain("the dilution chain is evaluated for n = 1 or 2"));
    }
    if !(0.0..0.5).contains(&epsilon) {
        return Err(domain("epsilon must lie in [0, 1/2)"));
    }
    let d = 1usize << n;
    let out = states::omega3().power(n)?;
    let links = vec![
        ChainLink { label: format!("2d-1 (d = {d})"), value: 2.0 * d as f64 - 1.0 },
        ChainLink { label: "||Lambda(Phi_d)^T||_1".into(), value: trace_norm(&out.partial_transpose()) },
        ChainLink { label: "N_tau(Lambda(Phi_d)|omega_3^n)".into(), value: n_tau_multi },
        ChainLink { label: "(1-2 eps) N_tau(omega_3)^n".into(), value: (1.0 - 2.0 * epsilon) * n_tau_single.powi(n as i32) },
    ];
    let slacks: Vec<f64> = links.windows(2).map(|w| w[0].value - w[1].value).collect();
    let holds = slacks.iter().all(|&s| s >= -tol);
    Ok(DilutionChainReport { n, links, slacks, holds, statuses: Vec::new() })
}

/// The dilution chain with every SDP solved here.
pub fn dilution_error_floor_check(n: u32, epsilon: f64, cfg: &SolverConfig, tol: f64) -> Result<DilutionChainReport> {
    let w = states::omega3();
    let map = LinearMapSpec::prepare_omega3();
    let single = map.apply(&states::phi(2)?.matrix)?;
    if single.max_abs_diff(&w.matrix) > 1e-12 {
        return Err(contract("preparation map does not send Phi_2 to omega_3"));
    }
    let one = tempered_negativity(&w, &w, cfg)?;
    let (multi, multi_status) = if n == 1 {
        (one.value, one.solver_status)
    } else {
        let wn = w.power(n)?;
        let r = tempered_negativity(&wn, &wn, cfg)?;
        (r.value, r.solver_status)
    };
    let mut rep = dilution_chain(n, epsilon, one.value, multi, tol)?;
    rep.statuses = [one.solver_status, multi_status].into_iter().flatten().collect();
    Ok(rep)
}

/// Checks that the preparation map sends a two-qubit state to a PPT state;
/// returns the smallest eigenvalue over the output and its partial transpose.
pub fn prepare_omega3_output_min_eigenvalue(sigma: &ComplexMatrix) -> Result<f64> {
    check_state(sigma, 1e-9)?;
    let out = prepare_omega3_map(sigma)?;
    let shape = BipartiteShape::square(3)?;
    let a = hermitian_eigenvalues(&out)?[0];
    let b = hermitian_eigenvalues(&partial_transpose(&out, shape)?)?[0];
    Ok(a.min(b))
}
