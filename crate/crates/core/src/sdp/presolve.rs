//! Removal of linearly dependent equality rows.
//!
//! Rows are compared through their Gram matrix ⟨A_k, A_l⟩. Rows that share no
//! matrix position are orthogonal, so the Gram matrix splits into connected
//! components, each factored by a pivoted Cholesky that stops once every
//! remaining row is, relative to its own norm, inside the span of the rows
//! already selected.

use std::collections::HashMap;

use super::solver::RealProblem;

/// Relative squared residual below which a row counts as dependent.
pub(crate) const DEPENDENCE_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-9;

pub(crate) enum Presolved {
    Reduced { keep: Vec<usize> },
    /// Ray y with rᵀy = 1 and Σ y_k A_k = 0.
    Infeasible { ray: Vec<f64> },
}

pub(crate) fn presolve(p: &RealProblem) -> Presolved {
    let m = p.b.len();
    let mut positions: HashMap<(usize, usize, usize), Vec<(usize, f64)>> = HashMap::new();
    for (k, row) in p.rows.iter().enumerate() {
        for (blk, trip) in row {
            for &(r, s, v) in trip {
                positions.entry((*blk, r, s)).or_default().push((k, v));
            }
        }
    }

    let mut uf = UnionFind::new(m);
    for rows in positions.values() {
        for w in rows.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut components: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..m {
        components.entry(uf.find(k)).or_default().push(k);
    }
    let mut comps: Vec<Vec<usize>> = components.into_values().collect();
    comps.sort_by_key(|c| c[0]);

    let mut local = vec![0usize; m];
    for comp in &comps {
        for (i, &k) in comp.iter().enumerate() {
            local[k] = i;
        }
    }
    let mut grams: Vec<Vec<f64>> = comps.iter().map(|c| vec![0.0; c.len() * c.len()]).collect();
    let mut comp_of = vec![0usize; m];
    for (ci, comp) in comps.iter().enumerate() {
        for &k in comp {
            comp_of[k] = ci;
        }
    }
    let mut keys: Vec<&(usize, usize, usize)> = positions.keys().collect();
    keys.sort();
    for key in keys {
        let weight = if key.1 == key.2 { 1.0 } else { 2.0 };
        let rows = &positions[key];
        let ci = comp_of[rows[0].0];
        let c = comps[ci].len();
        let g = &mut grams[ci];
        for &(k, vk) in rows {
            for &(l, vl) in rows {
                g[local[k] * c + local[l]] += weight * vk * vl;
            }
        }
    }

    let mut keep = Vec::with_capacity(m);
    for (comp, gram) in comps.iter().zip(&grams) {
        match reduce_component(comp, gram, &p.b) {
            Ok(mut kept) => keep.append(&mut kept),
            Err(ray_local) => {
                let mut ray = vec![0.0; m];
                for (i, &k) in comp.iter().enumerate() {
                    ray[k] = ray_local[i];
                }
                return Presolved::Infeasible { ray };
            }
        }
    }
    keep.sort_unstable();
    Presolved::Reduced { keep }
}

/// Returns the kept rows of one component, or a local infeasibility ray.
fn reduce_component(comp: &[usize], gram: &[f64], b: &[f64]) -> Result<Vec<usize>, Vec<f64>> {
    let c = comp.len();
    let diag: Vec<f64> = (0..c).map(|i| gram[i * c + i]).collect();
    // l[i] holds row i of the partial factor in selection order.
    let mut l: Vec<Vec<f64>> = vec![Vec::new(); c];
    let mut resid = diag.clone();
    let mut selected: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..c).filter(|&i| diag[i] > 0.0).collect();
    loop {
        let best = remaining
            .iter()
            .copied()
            .map(|i| (i, resid[i] / diag[i]))
            .fold(None::<(usize, f64)>, |acc, cur| match acc {
                Some(a) if a.1 >= cur.1 => Some(a),
                _ => Some(cur),
            });
        let Some((piv, rel)) = best else { break };
        if rel <= DEPENDENCE_TOL {
            break;
        }
        let lpp = resid[piv].sqrt();
        let t = selected.len();
        remaining.retain(|&i| i != piv);
        let lp = l[piv].clone();
        l[piv].push(lpp);
        for &i in &remaining {
            let dotp: f64 = l[i].iter().zip(&lp).map(|(a, b)| a * b).sum();
            let v = (gram[i * c + piv] - dotp) / lpp;
            l[i].push(v);
            resid[i] -= v * v;
        }
        debug_assert_eq!(l[piv].len(), t + 1);
        selected.push(piv);
    }

    let r = selected.len();
    let mut kept = Vec::with_capacity(r);
    for &s in &selected {
        kept.push(comp[s]);
    }
    let sel_set: std::collections::HashSet<usize> = selected.iter().copied().collect();
    for i in 0..c {
        if sel_set.contains(&i) {
            continue;
        }
        // Solve L_Sᵀ coef = l_iᵀ so that A_i ≈ Σ coef_s A_s.
        let mut row = l[i].clone();
        row.resize(r, 0.0);
        let mut coef = row;
        for t in (0..r).rev() {
            let mut s = coef[t];
            for u in t + 1..r {
                s -= l[selected[u]][t] * coef[u];
            }
            coef[t] = s / l[selected[t]][t];
        }
        let predicted: f64 = (0..r).map(|t| coef[t] * b[comp[selected[t]]]).sum();
        let scale = 1.0 + b[comp[i]].abs() + (0..r).map(|t| (coef[t] * b[comp[selected[t]]]).abs()).sum::<f64>();
        let mismatch = b[comp[i]] - predicted;
        if mismatch.abs() > CONSISTENCY_TOL * scale {
            let mut ray = vec![0.0; c];
            ray[i] = 1.0 / mismatch;
            for t in 0..r {
                ray[selected[t]] = -coef[t] / mismatch;
            }
            return Err(ray);
        }
    }
    Ok(kept)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
