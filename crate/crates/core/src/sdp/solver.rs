//! Homogeneous self-dual interior-point method with Nesterov-Todd scaling and a
//! Mehrotra predictor-corrector.
//!
//! Complex blocks are handled through the real embedding
//! M ↦ ½[[Re M, −Im M], [Im M, Re M]], which preserves Re Tr[A X] and
//! positivity; blocks whose data are all real stay real.

use super::dense::{self, cholesky, cholesky_solve, cholesky_strict, congruence, congruence_t, jacobi_svd};
use super::presolve::{presolve, Presolved};
use super::{
    Certificate, IterationRecord, Sense, SdpProblem, SdpSolution, SolverConfig, SolverStatus,
};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, C64};

type Triplets = Vec<(usize, usize, f64)>;

/// Real symmetric minimisation problem: min ⟨C, X⟩ s.t. ⟨A_k, X⟩ = b_k, X ⪰ 0.
pub(crate) struct RealProblem {
    pub dims: Vec<usize>,
    pub c: Vec<Vec<f64>>,
    pub rows: Vec<Vec<(usize, Triplets)>>,
    pub b: Vec<f64>,
}

const STEP_FRACTION: f64 = 0.98;
const STALL_WINDOW: usize = 30;
const REFINE_STEPS: usize = 2;
const POLISH_RANGE: f64 = 1e3;

struct Embedding {
    complex: Vec<bool>,
    dims: Vec<usize>,
}

impl Embedding {
    fn new(p: &SdpProblem) -> Self {
        let mut complex: Vec<bool> = p.objective.iter().map(|c| !c.is_real()).collect();
        for eq in &p.equalities {
            for (b, a) in &eq.terms {
                if !a.is_real() {
                    complex[*b] = true;
                }
            }
        }
        let dims = p.blocks.iter().zip(&complex).map(|(s, &cx)| if cx { 2 * s.dim } else { s.dim }).collect();
        Self { complex, dims }
    }

    fn triplets(&self, block: usize, n: usize, entries: &[(usize, usize, C64)], sign: f64) -> Triplets {
        let mut out = Vec::with_capacity(entries.len() * 2);
        for &(i, j, v) in entries {
            let v = v * sign;
            if self.complex[block] {
                if v.re != 0.0 {
                    out.push((i, j, 0.5 * v.re));
                    out.push((n + i, n + j, 0.5 * v.re));
                }
                if i != j && v.im != 0.0 {
                    out.push((i, n + j, -0.5 * v.im));
                    out.push((j, n + i, 0.5 * v.im));
                }
            } else if v.re != 0.0 {
                out.push((i, j, v.re));
            }
        }
        out.sort_by_key(|a| (a.0, a.1));
        let mut merged: Triplets = Vec::with_capacity(out.len());
        for t in out {
            match merged.last_mut() {
                Some(last) if last.0 == t.0 && last.1 == t.1 => last.2 += t.2,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.2 != 0.0);
        merged
    }

    fn real_problem(&self, p: &SdpProblem) -> RealProblem {
        let sign = if p.sense == Sense::Maximize { -1.0 } else { 1.0 };
        let c = p
            .objective
            .iter()
            .enumerate()
            .map(|(b, cb)| {
                let n = self.dims[b];
                let mut d = vec![0.0; n * n];
                for (r, s, v) in self.triplets(b, p.blocks[b].dim, cb.entries(), sign) {
                    d[r * n + s] += v;
                    if r != s {
                        d[s * n + r] += v;
                    }
                }
                d
            })
            .collect();
        let rows = p
            .equalities
            .iter()
            .map(|eq| {
                let mut parts: Vec<(usize, Triplets)> = Vec::new();
                for (b, a) in &eq.terms {
                    let t = self.triplets(*b, p.blocks[*b].dim, a.entries(), 1.0);
                    if let Some(existing) = parts.iter_mut().find(|(pb, _)| pb == b) {
                        existing.1.extend(t);
                        existing.1.sort_by_key(|x| (x.0, x.1));
                        let mut merged: Triplets = Vec::new();
                        for e in existing.1.drain(..) {
                            match merged.last_mut() {
                                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
                                _ => merged.push(e),
                            }
                        }
                        existing.1 = merged;
                    } else if !t.is_empty() {
                        parts.push((*b, t));
                    }
                }
                parts.sort_by_key(|(b, _)| *b);
                parts
            })
            .collect();
        let b = p.equalities.iter().map(|e| e.rhs).collect();
        RealProblem { dims: self.dims.clone(), c, rows, b }
    }

    /// Recovers the Hermitian block from its real representative.
    fn extract(&self, block: usize, n: usize, x: &[f64], scale: f64) -> ComplexMatrix {
        if self.complex[block] {
            let nn = 2 * n;
            ComplexMatrix::from_fn(n, |i, j| {
                let re = 0.5 * (x[i * nn + j] + x[(n + i) * nn + n + j]);
                let im = 0.5 * (x[(n + i) * nn + j] - x[i * nn + n + j]);
                C64::new(re, im) * scale
            })
        } else {
            ComplexMatrix::from_fn(n, |i, j| C64::new(x[i * n + j] * scale, 0.0))
        }
    }
}

struct Part {
    row: usize,
    trip: Triplets,
}

/// The linear map X ↦ (⟨A_k, X⟩)_k of a presolved problem, stored by block.
struct Operator {
    dims: Vec<usize>,
    c: Vec<Vec<f64>>,
    b: Vec<f64>,
    by_block: Vec<Vec<Part>>,
}

impl Operator {
    fn new(p: &RealProblem, keep: &[usize]) -> Self {
        let mut by_block: Vec<Vec<Part>> = p.dims.iter().map(|_| Vec::new()).collect();
        for (new_k, &k) in keep.iter().enumerate() {
            for (blk, trip) in &p.rows[k] {
                by_block[*blk].push(Part { row: new_k, trip: trip.clone() });
            }
        }
        Self { dims: p.dims.clone(), c: p.c.clone(), b: keep.iter().map(|&k| p.b[k]).collect(), by_block }
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    fn apply(&self, x: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.m()];
        for (blk, parts) in self.by_block.iter().enumerate() {
            let n = self.dims[blk];
            let xb = &x[blk];
            for part in parts {
                out[part.row] += triplet_inner(&part.trip, xb, n);
            }
        }
        out
    }

    fn adjoint(&self, y: &[f64]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = self.dims.iter().map(|&n| vec![0.0; n * n]).collect();
        for (blk, parts) in self.by_block.iter().enumerate() {
            let n = self.dims[blk];
            let ob = &mut out[blk];
            for part in parts {
                let yk = y[part.row];
                if yk == 0.0 {
                    continue;
                }
                for &(r, s, v) in &part.trip {
                    ob[r * n + s] += yk * v;
                    if r != s {
                        ob[s * n + r] += yk * v;
                    }
                }
            }
        }
        out
    }
}

fn triplet_inner(trip: &[(usize, usize, f64)], x: &[f64], n: usize) -> f64 {
    trip.iter().map(|&(r, s, v)| if r == s { v * x[r * n + r] } else { 2.0 * v * x[r * n + s] }).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn blocks_dot(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| dense::dot(x, y)).sum()
}

/// NT scaling of one block: W = G Gᵀ with Gᵀ Z G = G⁻¹ X G⁻ᵀ = diag(λ).
struct Scaling {
    g: Vec<f64>,
    w: Vec<f64>,
    lambda: Vec<f64>,
}

fn nt_scaling(x: &[f64], z: &[f64], n: usize) -> Option<Scaling> {
    let l = cholesky_strict(x, n)?;
    let r = cholesky_strict(z, n)?;
    let rtl = dense::matmul_tn(&r, &l, n);
    let (sigma, v) = jacobi_svd(&rtl, n);
    if sigma.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
        return None;
    }
    let mut g = dense::matmul(&l, &v, n);
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] /= sigma[j].sqrt();
        }
    }
    let mut w = dense::matmul_nt(&g, &g, n);
    dense::symmetrize(&mut w, n);
    Some(Scaling { g, w, lambda: sigma })
}

/// Largest α with Λ + αD ⪰ 0 (∞ if D ⪰ 0).
fn max_step(lambda: &[f64], d: &[f64], n: usize) -> f64 {
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = d[i * n + j] / (lambda[i] * lambda[j]).sqrt();
        }
    }
    dense::symmetrize(&mut s, n);
    let lmin = dense::sym_eigenvalues(&s, n)[0];
    if lmin < 0.0 {
        -1.0 / lmin
    } else {
        f64::INFINITY
    }
}

struct Direction {
    dx: Vec<Vec<f64>>,
    dz: Vec<Vec<f64>>,
    dy: Vec<f64>,
    dtau: f64,
    dkappa: f64,
    dx_scaled: Vec<Vec<f64>>,
    dz_scaled: Vec<Vec<f64>>,
}

struct Iterate {
    x: Vec<Vec<f64>>,
    z: Vec<Vec<f64>>,
    y: Vec<f64>,
    tau: f64,
    kappa: f64,
}

enum Outcome {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    Stalled,
}

struct HsdResult {
    outcome: Outcome,
    it: Iterate,
    iterations: usize,
    history: Vec<IterationRecord>,
    pres: f64,
    dres: f64,
}

struct Residuals {
    rp: Vec<f64>,
    rd: Vec<Vec<f64>>,
    rg: f64,
    mu: f64,
}

fn hsd(op: &Operator, cfg: &SolverConfig, sense: Sense) -> HsdResult {
    let m = op.m();
    let nb = op.dims.len();
    let nu: f64 = op.dims.iter().sum::<usize>() as f64;
    let mut it = Iterate {
        x: op.dims.iter().map(|&n| dense::identity(n)).collect(),
        z: op.dims.iter().map(|&n| dense::identity(n)).collect(),
        y: vec![0.0; m],
        tau: 1.0,
        kappa: 1.0,
    };
    let cnorm = op.c.iter().map(|c| max_abs(c)).fold(0.0, f64::max);
    let tol = cfg.tol;
    let user_sign = if sense == Sense::Maximize { -1.0 } else { 1.0 };

    let gram = {
        let eye: Vec<Vec<f64>> = op.dims.iter().map(|&n| dense::identity(n)).collect();
        let mut g = schur_complement(op, &eye.iter().map(|e| e.as_slice()).collect::<Vec<_>>());
        match cholesky(&mut g, m, 1e-14) {
            Some(0) => Some(g),
            _ => None,
        }
    };

    let mut history = Vec::new();
    let mut best: Option<(f64, Iterate, f64, f64)> = None;
    let mut stall_ref = f64::INFINITY;
    let mut stall_iter = 0;
    let mut last = (f64::INFINITY, f64::INFINITY);

    for iter in 0..=cfg.max_iterations {
        let ax = op.apply(&it.x);
        let aty = op.adjoint(&it.y);
        let rp: Vec<f64> = ax.iter().zip(&op.b).map(|(a, b)| a - b * it.tau).collect();
        let rd: Vec<Vec<f64>> = (0..nb)
            .map(|k| {
                aty[k].iter().zip(&it.z[k]).zip(&op.c[k]).map(|((a, z), c)| a + z - c * it.tau).collect()
            })
            .collect();
        let cx = blocks_dot(&op.c, &it.x);
        let by = dense::dot(&op.b, &it.y);
        let rg = cx - by + it.kappa;
        let xz = blocks_dot(&it.x, &it.z);
        let mu = (xz + it.tau * it.kappa) / (nu + 1.0);

        let tau = it.tau;
        let pres = max_abs(&rp) / tau;
        let dres = rd.iter().map(|r| max_abs(r)).fold(0.0, f64::max) / tau / (1.0 + cnorm);
        let pobj = cx / tau;
        let dobj = by / tau;
        let gap = (pobj - dobj).abs();
        let allowance = norm2(&it.y) / tau * norm2(&rp) / tau
            + blocks_dot(&it.x, &it.x).sqrt() / tau * blocks_dot(&rd, &rd).sqrt() / tau;
        history.push(IterationRecord {
            iteration: iter,
            primal_objective: user_sign * pobj,
            dual_objective: user_sign * dobj,
            infeasibility_allowance: allowance,
            mu: mu / (tau * tau),
        });
        if cfg.verbosity > 0 {
            eprintln!(
                "{iter:4} pobj {:+.10e} dobj {:+.10e} pres {pres:.2e} dres {dres:.2e} mu {:.2e} tau {tau:.2e} kappa {:.2e}",
                user_sign * pobj,
                user_sign * dobj,
                mu,
                it.kappa
            );
        }
        last = (pres, dres);

        if pres <= tol && dres <= tol && gap <= tol * (1.0 + pobj.abs()) {
            return HsdResult { outcome: Outcome::Optimal, it, iterations: iter, history, pres, dres };
        }
        if pres <= POLISH_RANGE * tol && dres <= tol && gap <= tol * (1.0 + pobj.abs()) {
            if let Some((x, pres)) = gram.as_deref().and_then(|g| polish(op, g, &it, &rp, tol)) {
                it.x = x;
                return HsdResult { outcome: Outcome::Optimal, it, iterations: iter, history, pres, dres };
            }
        }
        if it.tau < it.kappa {
            if by > 0.0 {
                let ray_res = aty.iter().zip(&it.z).map(|(a, z)| {
                    a.iter().zip(z).fold(0.0f64, |acc, (p, q)| acc.max((p + q).abs()))
                }).fold(0.0, f64::max);
                if ray_res / by <= tol {
                    return HsdResult { outcome: Outcome::PrimalInfeasible, it, iterations: iter, history, pres, dres };
                }
            }
            if cx < 0.0 && max_abs(&ax) / (-cx) <= tol {
                return HsdResult { outcome: Outcome::DualInfeasible, it, iterations: iter, history, pres, dres };
            }
        }

        let merit = pres.max(dres).max(gap / (1.0 + pobj.abs()));
        if best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, clone_iterate(&it), pres, dres));
        }
        if merit < stall_ref / 10.0 {
            stall_ref = merit;
            stall_iter = iter;
        }
        if iter - stall_iter >= STALL_WINDOW || iter == cfg.max_iterations {
            break;
        }

        let Some(step) = newton_step(op, gram.as_deref(), &it, &Residuals { rp, rd, rg, mu }) else {
            break;
        };
        it = step;
    }

    let (_, it, pres, dres) = best.unwrap_or((f64::INFINITY, it, last.0, last.1));
    let iterations = history.len().saturating_sub(1);
    HsdResult { outcome: Outcome::Stalled, it, iterations, history, pres, dres }
}

fn clone_iterate(it: &Iterate) -> Iterate {
    Iterate { x: it.x.clone(), z: it.z.clone(), y: it.y.clone(), tau: it.tau, kappa: it.kappa }
}

/// One predictor-corrector step; `None` on numerical breakdown.
fn newton_step(op: &Operator, gram: Option<&[f64]>, it: &Iterate, res: &Residuals) -> Option<Iterate> {
    let nb = op.dims.len();
    let m = op.m();
    let mut scal = Vec::with_capacity(nb);
    for k in 0..nb {
        scal.push(nt_scaling(&it.x[k], &it.z[k], op.dims[k])?);
    }

    let schur = schur_complement(op, &scal.iter().map(|s| s.w.as_slice()).collect::<Vec<_>>());
    let mut chol = schur;
    cholesky(&mut chol, m, 1e-20)?;

    // Cholesky of an ill-conditioned M leaves an error floor in the equality
    // residual near the optimum; refine against the operator form of M.
    let m_times = |v: &[f64]| -> Vec<f64> {
        let aty = op.adjoint(v);
        let waw: Vec<Vec<f64>> = (0..nb).map(|k| congruence(&scal[k].w, &aty[k], op.dims[k])).collect();
        op.apply(&waw)
    };
    // Cholesky of an ill-conditioned M leaves an error floor in the equality
    // residual near the optimum; refine against the operator form of M while
    // that keeps reducing the residual.
    let solve_m = |rhs: &mut Vec<f64>| {
        let target = rhs.clone();
        cholesky_solve(&chol, m, rhs);
        let residual = |v: &[f64]| -> Vec<f64> { target.iter().zip(m_times(v)).map(|(t, mv)| t - mv).collect() };
        let mut r = residual(rhs);
        let mut rnorm = max_abs(&r);
        for _ in 0..REFINE_STEPS {
            cholesky_solve(&chol, m, &mut r);
            let trial: Vec<f64> = rhs.iter().zip(&r).map(|(x, d)| x + d).collect();
            let r_trial = residual(&trial);
            let n_trial = max_abs(&r_trial);
            if !(n_trial < 0.5 * rnorm) {
                break;
            }
            *rhs = trial;
            r = r_trial;
            rnorm = n_trial;
        }
    };

    let wcw: Vec<Vec<f64>> = (0..nb).map(|k| congruence(&scal[k].w, &op.c[k], op.dims[k])).collect();
    let g = op.apply(&wcw);
    let c0 = blocks_dot(&op.c, &wcw);
    let mut u: Vec<f64> = g.iter().zip(&op.b).map(|(a, b)| a + b).collect();
    solve_m(&mut u);
    let gmb: Vec<f64> = g.iter().zip(&op.b).map(|(a, b)| a - b).collect();
    let gmb_u = dense::dot(&gmb, &u);
    let wrdw: Vec<Vec<f64>> = (0..nb).map(|k| congruence(&scal[k].w, &res.rd[k], op.dims[k])).collect();

    let solve_dir = |sigma: f64, eta: f64, corr: Option<&Direction>| -> Option<Direction> {
        let mut t_blocks = Vec::with_capacity(nb);
        let mut q_blocks = Vec::with_capacity(nb);
        for k in 0..nb {
            let n = op.dims[k];
            let lam = &scal[k].lambda;
            let mut rc = vec![0.0; n * n];
            if let Some(a) = corr {
                let p1 = dense::matmul(&a.dx_scaled[k], &a.dz_scaled[k], n);
                for i in 0..n {
                    for j in 0..n {
                        rc[i * n + j] = -0.5 * (p1[i * n + j] + p1[j * n + i]);
                    }
                }
            }
            for i in 0..n {
                rc[i * n + i] += sigma * res.mu - lam[i] * lam[i];
            }
            let mut q = rc;
            for i in 0..n {
                for j in 0..n {
                    q[i * n + j] *= 2.0 / (lam[i] + lam[j]);
                }
            }
            let r = congruence(&scal[k].g, &q, n);
            let t: Vec<f64> = r.iter().zip(&wrdw[k]).map(|(a, b)| a + eta * b).collect();
            t_blocks.push((r, t));
            q_blocks.push(q);
        }
        let at = op.apply(&t_blocks.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>());
        let mut v: Vec<f64> = res.rp.iter().zip(&at).map(|(p, a)| -eta * p - a).collect();
        solve_m(&mut v);
        let r_tk = sigma * res.mu - it.tau * it.kappa - corr.map_or(0.0, |a| a.dtau * a.dkappa);
        let h0: f64 = (0..nb).map(|k| dense::dot(&op.c[k], &t_blocks[k].1)).sum();
        let denom = gmb_u - c0 - it.kappa / it.tau;
        let numer = -eta * res.rg - h0 - dense::dot(&gmb, &v) - r_tk / it.tau;
        let dtau = numer / denom;
        if !dtau.is_finite() {
            return None;
        }
        let dy: Vec<f64> = v.iter().zip(&u).map(|(a, b)| a + dtau * b).collect();
        let atdy = op.adjoint(&dy);
        let mut dx = Vec::with_capacity(nb);
        let mut dz = Vec::with_capacity(nb);
        let mut dxs = Vec::with_capacity(nb);
        let mut dzs = Vec::with_capacity(nb);
        for k in 0..nb {
            let n = op.dims[k];
            let dzk: Vec<f64> = (0..n * n)
                .map(|i| -eta * res.rd[k][i] - atdy[k][i] + op.c[k][i] * dtau)
                .collect();
            let wdzw = congruence(&scal[k].w, &dzk, n);
            let dxk: Vec<f64> = t_blocks[k].0.iter().zip(&wdzw).map(|(r, w)| r - w).collect();
            let dzs_k = congruence_t(&scal[k].g, &dzk, n);
            let dxs_k: Vec<f64> = q_blocks[k].iter().zip(&dzs_k).map(|(q, z)| q - z).collect();
            dx.push(dxk);
            dz.push(dzk);
            dxs.push(dxs_k);
            dzs.push(dzs_k);
        }
        if let Some(gram) = gram {
            project_primal(op, gram, &scal, &it.z, &res.rp, eta, dtau, &mut dx, &mut dxs);
        }
        let dkappa = (r_tk - it.kappa * dtau) / it.tau;
        Some(Direction { dx, dz, dy, dtau, dkappa, dx_scaled: dxs, dz_scaled: dzs })
    };

    let step_to_boundary = |d: &Direction| -> f64 {
        let mut alpha = f64::INFINITY;
        for k in 0..nb {
            let n = op.dims[k];
            alpha = alpha.min(max_step(&scal[k].lambda, &d.dx_scaled[k], n));
            alpha = alpha.min(max_step(&scal[k].lambda, &d.dz_scaled[k], n));
        }
        if d.dtau < 0.0 {
            alpha = alpha.min(-it.tau / d.dtau);
        }
        if d.dkappa < 0.0 {
            alpha = alpha.min(-it.kappa / d.dkappa);
        }
        alpha
    };

    let aff = solve_dir(0.0, 1.0, None)?;
    let alpha_aff = step_to_boundary(&aff).min(1.0);
    let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);
    let dir = solve_dir(sigma, 1.0 - sigma, Some(&aff))?;
    let alpha = (STEP_FRACTION * step_to_boundary(&dir)).min(1.0);
    if !(alpha > 0.0) || !alpha.is_finite() {
        return None;
    }

    let mut next = clone_iterate(it);
    for k in 0..nb {
        let n = op.dims[k];
        for (x, d) in next.x[k].iter_mut().zip(&dir.dx[k]) {
            *x += alpha * d;
        }
        for (z, d) in next.z[k].iter_mut().zip(&dir.dz[k]) {
            *z += alpha * d;
        }
        dense::symmetrize(&mut next.x[k], n);
        dense::symmetrize(&mut next.z[k], n);
    }
    for (y, d) in next.y.iter_mut().zip(&dir.dy) {
        *y += alpha * d;
    }
    next.tau += alpha * dir.dtau;
    next.kappa += alpha * dir.dkappa;
    if !(next.tau > 0.0 && next.kappa > 0.0) {
        return None;
    }
    Some(next)
}

/// Projects X onto {A·X = b·τ}. Accepted only if the result still meets every
/// optimality test, so the interior point loop can stop instead of stalling a
/// hair above the equality tolerance.
fn polish(op: &Operator, gram: &[f64], it: &Iterate, rp: &[f64], tol: f64) -> Option<(Vec<Vec<f64>>, f64)> {
    let mut e = rp.to_vec();
    cholesky_solve(gram, op.m(), &mut e);
    let delta = op.adjoint(&e);
    let x: Vec<Vec<f64>> = it.x.iter().zip(&delta).map(|(x, d)| x.iter().zip(d).map(|(a, b)| a - b).collect()).collect();
    for (k, xk) in x.iter().enumerate() {
        if dense::sym_eigenvalues(xk, op.dims[k])[0] < -tol * it.tau {
            return None;
        }
    }
    let ax = op.apply(&x);
    let pres = ax.iter().zip(&op.b).map(|(a, b)| (a - b * it.tau).abs()).fold(0.0, f64::max) / it.tau;
    let pobj = blocks_dot(&op.c, &x) / it.tau;
    let dobj = dense::dot(&op.b, &it.y) / it.tau;
    let comp = blocks_dot(&x, &it.z) / (it.tau * it.tau);
    let ok = pres <= tol && (pobj - dobj).abs() <= tol * (1.0 + pobj.abs()) && comp.abs() <= 10.0 * tol;
    ok.then_some((x, pres))
}

/// Least-squares correction making A·dx − b·dτ = −η·rp hold to working
/// precision. The Newton system loses this once W is badly conditioned.
fn project_primal(
    op: &Operator,
    gram: &[f64],
    scal: &[Scaling],
    z: &[Vec<f64>],
    rp: &[f64],
    eta: f64,
    dtau: f64,
    dx: &mut [Vec<f64>],
    dxs: &mut [Vec<f64>],
) {
    let adx = op.apply(dx);
    let mut e: Vec<f64> = (0..op.m()).map(|i| -eta * rp[i] - adx[i] + op.b[i] * dtau).collect();
    cholesky_solve(gram, op.m(), &mut e);
    let delta = op.adjoint(&e);
    for (k, dk) in delta.iter().enumerate() {
        let n = op.dims[k];
        let lam = &scal[k].lambda;
        // g⁻¹ = Λ⁻¹·gᵀ·Z, so the scaled correction is Λ⁻¹ gᵀ Z δ Z g Λ⁻¹.
        let mut ds = congruence_t(&scal[k].g, &congruence(&z[k], dk, n), n);
        for i in 0..n {
            for j in 0..n {
                ds[i * n + j] /= lam[i] * lam[j];
            }
        }
        for (x, d) in dx[k].iter_mut().zip(dk) {
            *x += d;
        }
        for (x, d) in dxs[k].iter_mut().zip(&ds) {
            *x += d;
        }
    }
}

/// Lower triangle of M_ij = Σ_b ⟨A_ib, W_b A_jb W_b⟩.
fn schur_complement(op: &Operator, ws: &[&[f64]]) -> Vec<f64> {
    let m = op.m();
    let mut mat = vec![0.0; m * m];
    for (blk, parts) in op.by_block.iter().enumerate() {
        let n = op.dims[blk];
        let w = ws[blk];
        let mut gbuf = vec![0.0; n * n];
        for (pi, part) in parts.iter().enumerate() {
            sandwich(w, &part.trip, n, &mut gbuf);
            let row = &mut mat[part.row * m..part.row * m + m];
            for other in &parts[..=pi] {
                row[other.row] += triplet_inner(&other.trip, &gbuf, n);
            }
        }
    }
    // Parts are ordered by row within a block, so only entries with
    // other.row ≤ part.row were written; that is the lower triangle.
    mat
}

/// G = W A W for sparse symmetric A.
fn sandwich(w: &[f64], trip: &[(usize, usize, f64)], n: usize, g: &mut [f64]) {
    if trip.len() > 2 * n {
        let mut a = vec![0.0; n * n];
        for &(r, s, v) in trip {
            a[r * n + s] += v;
            if r != s {
                a[s * n + r] += v;
            }
        }
        let wa = dense::matmul(w, &a, n);
        dense::gemm(n, n, n, 1.0, &wa, w, 0.0, g);
        return;
    }
    g.iter_mut().for_each(|x| *x = 0.0);
    for &(r, s, v) in trip {
        let wr = &w[r * n..(r + 1) * n];
        let ws = &w[s * n..(s + 1) * n];
        for i in 0..n {
            let gi = &mut g[i * n..(i + 1) * n];
            let a = v * wr[i];
            if r == s {
                for (gij, wsj) in gi.iter_mut().zip(ws) {
                    *gij += a * wsj;
                }
            } else {
                let bcoef = v * ws[i];
                for j in 0..n {
                    gi[j] += a * ws[j] + bcoef * wr[j];
                }
            }
        }
    }
}

pub fn solve(problem: &SdpProblem, config: &SolverConfig) -> Result<SdpSolution> {
    problem.validate()?;
    config.validate()?;
    let emb = Embedding::new(problem);
    let real = emb.real_problem(problem);
    let m_full = problem.equalities.len();
    let user_dims: Vec<usize> = problem.blocks.iter().map(|b| b.dim).collect();

    let keep = match presolve(&real) {
        Presolved::Infeasible { ray } => {
            return Ok(SdpSolution {
                status: SolverStatus::Infeasible,
                primal_value: f64::NAN,
                dual_value: f64::NAN,
                block_values: user_dims.iter().map(|&n| ComplexMatrix::zeros(n)).collect(),
                dual_slacks: user_dims.iter().map(|&n| ComplexMatrix::zeros(n)).collect(),
                dual_multipliers: vec![0.0; m_full],
                iterations: 0,
                primal_residual: f64::NAN,
                dual_residual: f64::NAN,
                certificate: Some(Certificate::PrimalInfeasible { y: ray }),
                history: Vec::new(),
            });
        }
        Presolved::Reduced { keep } => keep,
    };

    let op = Operator::new(&real, &keep);
    let res = hsd(&op, config, problem.sense);
    let it = &res.it;
    let user_sign = if problem.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut y_full = vec![0.0; m_full];

    let extract_all = |mats: &[Vec<f64>], scale: f64, complex_factor: f64| -> Vec<ComplexMatrix> {
        mats.iter()
            .enumerate()
            .map(|(b, x)| {
                let f = if emb.complex[b] { complex_factor } else { 1.0 };
                emb.extract(b, user_dims[b], x, scale * f)
            })
            .collect()
    };

    let (status, certificate, xs, zs) = match res.outcome {
        Outcome::Optimal | Outcome::Stalled => {
            let inv = 1.0 / it.tau;
            for (i, &k) in keep.iter().enumerate() {
                y_full[k] = user_sign * it.y[i] * inv;
            }
            let status = if matches!(res.outcome, Outcome::Optimal) {
                SolverStatus::Optimal
            } else {
                SolverStatus::MaxIterations
            };
            (status, None, extract_all(&it.x, inv, 1.0), extract_all(&it.z, inv, 2.0))
        }
        Outcome::PrimalInfeasible => {
            let by = dense::dot(&op.b, &it.y);
            let mut ray = vec![0.0; m_full];
            for (i, &k) in keep.iter().enumerate() {
                ray[k] = it.y[i] / by;
            }
            let z = extract_all(&it.z, 1.0 / by, 2.0);
            (SolverStatus::Infeasible, Some(Certificate::PrimalInfeasible { y: ray }), vec![], z)
        }
        Outcome::DualInfeasible => {
            let cx = blocks_dot(&op.c, &it.x);
            let x = extract_all(&it.x, 1.0 / (-cx), 1.0);
            (SolverStatus::Unbounded, Some(Certificate::Unbounded { x: x.clone() }), x, vec![])
        }
    };

    let zeros = || user_dims.iter().map(|&n| ComplexMatrix::zeros(n)).collect::<Vec<_>>();
    let block_values = if xs.is_empty() { zeros() } else { xs };
    let dual_slacks = if zs.is_empty() { zeros() } else { zs };
    let (primal_value, dual_value) = match status {
        SolverStatus::Optimal | SolverStatus::MaxIterations => (
            problem.objective_value(&block_values),
            problem.equalities.iter().zip(&y_full).map(|(e, y)| e.rhs * y).sum(),
        ),
        SolverStatus::Infeasible => (f64::NAN, f64::NAN),
        SolverStatus::Unbounded => (user_sign * f64::NEG_INFINITY, user_sign * f64::NEG_INFINITY),
    };

    Ok(SdpSolution {
        status,
        primal_value,
        dual_value,
        block_values,
        dual_slacks,
        dual_multipliers: y_full,
        iterations: res.iterations,
        primal_residual: res.pres,
        dual_residual: res.dres,
        certificate,
        history: res.history,
    })
}
