//! Real dense kernels for the interior-point solver. Matrices are row-major `n×n`
//! slices unless stated otherwise.

use crate::linalg::tql2;

/// C ← α·A·B + β·C for row-major A (m×k), B (k×n), C (m×n).
pub fn gemm(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
    if m == 0 || n == 0 {
        return;
    }
    // SAFETY: bounds asserted above; the three slices are distinct borrows.
    unsafe {
        matrixmultiply::dgemm(
            m, k, n, alpha,
            a.as_ptr(), k as isize, 1,
            b.as_ptr(), n as isize, 1,
            beta,
            c.as_mut_ptr(), n as isize, 1,
        );
    }
}

/// A·B for square n×n matrices.
pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    gemm(n, n, n, 1.0, a, b, 0.0, &mut c);
    c
}

/// Aᵀ·B for square n×n matrices.
pub fn matmul_tn(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    if n == 0 {
        return c;
    }
    // SAFETY: all slices hold n×n elements; Aᵀ is read through swapped strides.
    unsafe {
        matrixmultiply::dgemm(
            n, n, n, 1.0,
            a.as_ptr(), 1, n as isize,
            b.as_ptr(), n as isize, 1,
            0.0,
            c.as_mut_ptr(), n as isize, 1,
        );
    }
    c
}

/// A·Bᵀ for square n×n matrices.
pub fn matmul_nt(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    if n == 0 {
        return c;
    }
    // SAFETY: all slices hold n×n elements; Bᵀ is read through swapped strides.
    unsafe {
        matrixmultiply::dgemm(
            n, n, n, 1.0,
            a.as_ptr(), n as isize, 1,
            b.as_ptr(), 1, n as isize,
            0.0,
            c.as_mut_ptr(), n as isize, 1,
        );
    }
    c
}

/// Aᵀ·M·A
pub fn congruence_t(a: &[f64], m: &[f64], n: usize) -> Vec<f64> {
    let ma = matmul(m, a, n);
    let mut out = matmul_tn(a, &ma, n);
    symmetrize(&mut out, n);
    out
}

/// A·M·Aᵀ
pub fn congruence(a: &[f64], m: &[f64], n: usize) -> Vec<f64> {
    let am = matmul(a, m, n);
    let mut out = matmul_nt(&am, a, n);
    symmetrize(&mut out, n);
    out
}

pub fn symmetrize(a: &mut [f64], n: usize) {
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = v;
            a[j * n + i] = v;
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn identity(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = 1.0;
    }
    a
}

/// Unblocked in-place lower Cholesky on rows/cols `lo..hi` of an `n`-wide buffer,
/// assuming earlier columns have already been eliminated. Pivots below
/// `floor` are replaced by a huge value, which removes that direction from
/// subsequent solves. Returns the number of replaced pivots, or `None` if a
/// pivot is not finite.
fn cholesky_diag_block(a: &mut [f64], n: usize, lo: usize, hi: usize, floor: f64) -> Option<usize> {
    let mut fixed = 0;
    for j in lo..hi {
        let mut d = a[j * n + j];
        for p in lo..j {
            d -= a[j * n + p] * a[j * n + p];
        }
        if !d.is_finite() {
            return None;
        }
        let ljj = if d <= floor {
            fixed += 1;
            1e64
        } else {
            d.sqrt()
        };
        a[j * n + j] = ljj;
        for i in j + 1..hi {
            let mut s = a[i * n + j];
            for p in lo..j {
                s -= a[i * n + p] * a[j * n + p];
            }
            a[i * n + j] = s / ljj;
        }
    }
    Some(fixed)
}

/// In-place lower Cholesky factorisation A = L Lᵀ (only the lower triangle is
/// read and written). Tiny pivots (≤ `rel_floor`·max diag) are neutralised; the
/// count of such pivots is returned.
pub fn cholesky(a: &mut [f64], n: usize, rel_floor: f64) -> Option<usize> {
    const NB: usize = 96;
    let maxdiag = (0..n).map(|i| a[i * n + i].abs()).fold(0.0, f64::max);
    let floor = rel_floor * maxdiag.max(f64::MIN_POSITIVE);
    let mut fixed = 0;
    let mut k0 = 0;
    while k0 < n {
        let k1 = (k0 + NB).min(n);
        fixed += cholesky_diag_block(a, n, k0, k1, floor)?;
        // Panel: L21 = A21 L11^{-T}
        for i in k1..n {
            for j in k0..k1 {
                let mut s = a[i * n + j];
                for p in k0..j {
                    s -= a[i * n + p] * a[j * n + p];
                }
                a[i * n + j] = s / a[j * n + j];
            }
        }
        // Trailing lower update A22 −= L21 L21ᵀ, one block row at a time.
        let base = a.as_mut_ptr();
        let mut r0 = k1;
        while r0 < n {
            let r1 = (r0 + NB).min(n);
            // SAFETY: the read regions (columns k0..k1) and the written region
            // (rows r0..r1, columns k1..r1) are disjoint parts of `a`.
            unsafe {
                matrixmultiply::dgemm(
                    r1 - r0, k1 - k0, r1 - k1, -1.0,
                    base.add(r0 * n + k0), n as isize, 1,
                    base.add(k1 * n + k0), 1, n as isize,
                    1.0,
                    base.add(r0 * n + k1), n as isize, 1,
                );
            }
            r0 = r1;
        }
        k0 = k1;
    }
    Some(fixed)
}

/// Solves L Lᵀ x = b in place with the factor from [`cholesky`].
pub fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        let row = &l[i * n..i * n + i];
        for (p, lv) in row.iter().enumerate() {
            s -= lv * b[p];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for p in i + 1..n {
            s -= l[p * n + i] * b[p];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Plain lower Cholesky of a small positive definite matrix; `None` if not PD.
pub fn cholesky_strict(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for p in 0..j {
            d -= l[j * n + p] * l[j * n + p];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let ljj = d.sqrt();
        l[j * n + j] = ljj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for p in 0..j {
                s -= l[i * n + p] * l[j * n + p];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Some(l)
}

/// One-sided Jacobi SVD of a square matrix A = U Σ Vᵀ. Returns (σ, V) with V
/// row-major and columns matching σ.
pub fn jacobi_svd(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    // Work column-major so column rotations touch contiguous memory.
    let mut u = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            u[j * n + i] = a[i * n + j];
        }
    }
    let mut v = identity(n); // column-major as well (identity is symmetric)
    let tol = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let cp = &u[p * n..(p + 1) * n];
                    let cq = &u[q * n..(q + 1) * n];
                    (dot(cp, cp), dot(cq, cq), dot(cp, cq))
                };
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut u, n, p, q, c, s);
                rotate_columns(&mut v, n, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<f64> = (0..n).map(|j| dot(&u[j * n..(j + 1) * n], &u[j * n..(j + 1) * n]).sqrt()).collect();
    let mut vr = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            vr[i * n + j] = v[j * n + i];
        }
    }
    (sigma, vr)
}

fn rotate_columns(m: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = m.split_at_mut(q * n);
    let cp = &mut head[p * n..(p + 1) * n];
    let cq = &mut tail[..n];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

/// Eigenvalues (ascending) of a real symmetric matrix.
pub fn sym_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    // Householder reduction to tridiagonal form.
    for k in 0..n.saturating_sub(2) {
        let alpha = (k + 1..n).map(|i| m[i * n + k] * m[i * n + k]).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = m[(k + 1) * n + k];
        let sign = if x0 >= 0.0 { 1.0 } else { -1.0 };
        let mut v: Vec<f64> = (k + 1..n).map(|i| m[i * n + k]).collect();
        v[0] += sign * alpha;
        let vn2 = dot(&v, &v);
        if vn2 == 0.0 {
            continue;
        }
        let h = 2.0 / vn2;
        let off = k + 1;
        let len = n - off;
        let mut p = vec![0.0; len];
        for i in 0..len {
            let row = &m[(off + i) * n + off..(off + i) * n + n];
            p[i] = h * dot(row, &v);
        }
        let kk = 0.5 * h * dot(&v, &p);
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk * vi).collect();
        for i in 0..len {
            let row = &mut m[(off + i) * n + off..(off + i) * n + n];
            for j in 0..len {
                row[j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        m[(k + 1) * n + k] = -sign * alpha;
        for i in k + 2..n {
            m[i * n + k] = 0.0;
        }
    }
    for i in 0..n {
        d[i] = m[i * n + i];
        if i + 1 < n {
            e[i] = m[(i + 1) * n + i];
        }
    }
    tql2(&mut d, &mut e, None);
    d.sort_by(|x, y| x.partial_cmp(y).unwrap());
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spd(n: usize) -> Vec<f64> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = 1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { n as f64 } else { 0.0 };
            }
        }
        a
    }

    #[test]
    fn blocked_cholesky_matches_solve() {
        let n = 250;
        let a = spd(n);
        let mut l = a.clone();
        assert_eq!(cholesky(&mut l, n, 1e-14), Some(0));
        let x: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let mut b = vec![0.0; n];
        for i in 0..n {
            b[i] = dot(&a[i * n..(i + 1) * n], &x);
        }
        cholesky_solve(&l, n, &mut b);
        let err = b.iter().zip(&x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn jacobi_svd_reconstructs() {
        let n = 7;
        let a: Vec<f64> = (0..n * n).map(|k| ((k * 7919) % 13) as f64 - 6.0).collect();
        let (s, v) = jacobi_svd(&a, n);
        // ‖A v_j‖ = σ_j and V orthogonal.
        let av = matmul(&a, &v, n);
        for j in 0..n {
            let col: f64 = (0..n).map(|i| av[i * n + j].powi(2)).sum::<f64>().sqrt();
            assert!((col - s[j]).abs() < 1e-12);
        }
        let vtv = matmul_tn(&v, &v, n);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[i * n + j] - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn symmetric_eigenvalues_of_path_graph() {
        let n = 6;
        let mut a = vec![0.0; n * n];
        for i in 0..n - 1 {
            a[i * n + i + 1] = 1.0;
            a[(i + 1) * n + i] = 1.0;
        }
        let ev = sym_eigenvalues(&a, n);
        for (k, l) in ev.iter().enumerate() {
            let want = 2.0 * (std::f64::consts::PI * (n - k) as f64 / (n + 1) as f64).cos();
            assert!((l - want).abs() < 1e-13);
        }
    }
}
