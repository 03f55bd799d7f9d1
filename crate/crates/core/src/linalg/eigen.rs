//! Hermitian eigensolver: complex Householder reduction to a real tridiagonal
//! matrix followed by implicit-shift QL.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{contract, Result};

pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with the matching unitary of eigenvectors
/// (column k belongs to `eigenvalues[k]`).
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// V f(Λ) V†
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                if fl[k] != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * fl[k];
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<Spectrum> {
    check_hermitian(m)?;
    let (d, v) = decompose(m, true);
    Ok(Spectrum { eigenvalues: d, eigenvectors: v.unwrap() })
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(decompose(m, false).0)
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let defect = m.hermitian_defect();
    if !(defect <= EIGEN_HERMITIAN_TOL) {
        return Err(contract(format!("matrix is not Hermitian (defect {defect:.3e})")));
    }
    Ok(())
}

fn decompose(m: &ComplexMatrix, vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut q = if vectors { Some(ComplexMatrix::identity(n)) } else { None };
    let mut sub = vec![C64::new(0.0, 0.0); n.saturating_sub(1)];

    for k in 0..n.saturating_sub(1) {
        let x0 = a[(k + 1, k)];
        let scale = (k + 1..n).map(|i| a[(i, k)].norm()).fold(0.0, f64::max);
        if scale == 0.0 || (k + 2..n).all(|i| a[(i, k)] == C64::new(0.0, 0.0)) {
            sub[k] = x0;
            continue;
        }
        // Work with the column divided by its largest entry so that tiny
        // columns do not underflow when squared.
        let mut v: Vec<C64> = (k + 1..n).map(|i| a[(i, k)] / scale).collect();
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let h = 2.0 / vnorm2;
        sub[k] = -phase * (alpha * scale);

        // Trailing block B ← H B H with H = 1 − h v v†.
        let off = k + 1;
        let len = n - off;
        let mut p = vec![C64::new(0.0, 0.0); len];
        for i in 0..len {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..len {
                acc += a[(off + i, off + j)] * v[j];
            }
            p[i] = acc * h;
        }
        let vp: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let kk = 0.5 * h * vp.re;
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk).collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                a[(off + i, off + j)] -= upd;
            }
        }
        for i in off..n {
            a[(i, k)] = C64::new(0.0, 0.0);
            a[(k, i)] = C64::new(0.0, 0.0);
        }

        if let Some(q) = q.as_mut() {
            // Q ← Q H
            for r in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for j in 0..len {
                    s += q[(r, off + j)] * v[j];
                }
                s *= h;
                for j in 0..len {
                    q[(r, off + j)] -= s * v[j].conj();
                }
            }
        }
    }

    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    // Diagonal unitary turning the complex off-diagonal into |e|.
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let mag = sub[k].norm();
        e[k] = mag;
        phases[k + 1] = if mag > 0.0 { phases[k] * (sub[k] / mag) } else { phases[k] };
    }

    match q {
        None => {
            tql2(&mut d, &mut e, None);
            let mut d = d;
            d.sort_by(f64::total_cmp);
            (d, None)
        }
        Some(q) => {
            let mut z = vec![0.0; n * n];
            for i in 0..n {
                z[i * n + i] = 1.0;
            }
            tql2(&mut d, &mut e, Some(&mut z));
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
            let mut qd = q;
            for r in 0..n {
                for c in 0..n {
                    qd[(r, c)] *= phases[c];
                }
            }
            let mut vecs = ComplexMatrix::zeros(n);
            for (col, &src) in order.iter().enumerate() {
                for r in 0..n {
                    let mut acc = C64::new(0.0, 0.0);
                    for t in 0..n {
                        let zt = z[t * n + src];
                        if zt != 0.0 {
                            acc += qd[(r, t)] * zt;
                        }
                    }
                    vecs[(r, col)] = acc;
                }
                normalize_phase(&mut vecs, col);
            }
            let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
            (sorted, Some(vecs))
        }
    }
}

/// Rotates column `col` so that its first non-negligible component is real positive.
fn normalize_phase(v: &mut ComplexMatrix, col: usize) {
    let n = v.dim();
    let scale = (0..n).map(|r| v[(r, col)].norm()).fold(0.0, f64::max);
    if let Some(r0) = (0..n).find(|&r| v[(r, col)].norm() > 1e-8 * scale) {
        let z = v[(r0, col)];
        let rot = z.conj() / z.norm();
        for r in 0..n {
            v[(r, col)] *= rot;
        }
        v[(r0, col)] = C64::new(v[(r0, col)].re, 0.0);
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[i]` between rows i and i+1 (`e[n-1]` ignored). On return `d`
/// holds the eigenvalues (unsorted); `z`, if given, is multiplied on the right
/// by the accumulated rotations (row-major n×n).
pub(crate) fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    break;
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk1 = z[k * n + i + 1];
                            let zk = z[k * n + i];
                            z[k * n + i + 1] = s * zk + c * zk1;
                            z[k * n + i] = c * zk - s * zk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_complex() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = ComplexMatrix::from_entries(
            2,
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        )
        .unwrap();
        let s = hermitian_eigensystem(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-14);
        assert!(s.vector(0)[0].im == 0.0 && s.vector(0)[0].re > 0.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(hermitian_eigensystem(&m).is_err());
    }

    #[test]
    fn diagonal_input_passes_through() {
        let m = ComplexMatrix::diagonal(&[3.0, -1.0, 2.0]);
        let s = hermitian_eigensystem(&m).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0, 3.0]);
    }
}
