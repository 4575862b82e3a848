//! Dense helpers for the tiny matrices that show up per quadrature node.
//!
//! Matrices are row-major slices; `m` is the (square) size. Nothing here
//! allocates except the eigenvalue routine, which is off the hot path.

use nalgebra::DMatrix;

/// Determinant by Gaussian elimination with partial pivoting. Clobbers `a`.
pub fn det_in_place(m: usize, a: &mut [f64]) -> f64 {
    debug_assert_eq!(a.len(), m * m);
    match m {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => {
            let mut det = 1.0;
            for col in 0..m {
                let pivot = (col..m).max_by(|&i, &j| a[i * m + col].abs().total_cmp(&a[j * m + col].abs())).unwrap();
                if a[pivot * m + col] == 0.0 {
                    return 0.0;
                }
                if pivot != col {
                    for k in 0..m {
                        a.swap(pivot * m + k, col * m + k);
                    }
                    det = -det;
                }
                let p = a[col * m + col];
                det *= p;
                for row in col + 1..m {
                    let f = a[row * m + col] / p;
                    if f != 0.0 {
                        for k in col..m {
                            a[row * m + k] -= f * a[col * m + k];
                        }
                    }
                }
            }
            det
        }
    }
}

/// Solves `a x = b` in place (`b` becomes `x`). Returns `false` when singular.
pub fn solve_in_place(m: usize, a: &mut [f64], b: &mut [f64]) -> bool {
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i * m + col].abs().total_cmp(&a[j * m + col].abs())).unwrap();
        let p = a[pivot * m + col];
        if p == 0.0 || !p.is_finite() {
            return false;
        }
        if pivot != col {
            for k in 0..m {
                a.swap(pivot * m + k, col * m + k);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..m {
            let f = a[row * m + col] / p;
            if f != 0.0 {
                for k in col..m {
                    a[row * m + k] -= f * a[col * m + k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    for col in (0..m).rev() {
        let mut s = b[col];
        for k in col + 1..m {
            s -= a[col * m + k] * b[k];
        }
        b[col] = s / a[col * m + col];
    }
    b.iter().all(|v| v.is_finite())
}

/// `JᵀJ` for a row-major `d × m` Jacobian.
pub fn gram(d: usize, m: usize, jac: &[f64], out: &mut [f64]) {
    for a in 0..m {
        for b in a..m {
            let mut s = 0.0;
            for k in 0..d {
                s += jac[k * m + a] * jac[k * m + b];
            }
            out[a * m + b] = s;
            out[b * m + a] = s;
        }
    }
}

/// Unnormalised normal of the column span of a `d × (d-1)` Jacobian, as the
/// vector of signed maximal minors (the generalised cross product).
pub fn cross_normal(d: usize, jac: &[f64], out: &mut [f64]) {
    let m = d - 1;
    let mut minor = [0.0; 64];
    assert!(m * m <= minor.len(), "ambient dimension too large");
    for k in 0..d {
        let mut r = 0;
        for row in 0..d {
            if row == k {
                continue;
            }
            minor[r * m..(r + 1) * m].copy_from_slice(&jac[row * m..(row + 1) * m]);
            r += 1;
        }
        let det = det_in_place(m, &mut minor[..m * m]);
        out[k] = if k % 2 == 0 { det } else { -det };
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn sym_eigenvalues(m: usize, a: &[f64]) -> Vec<f64> {
    let mat = DMatrix::from_row_slice(m, m, a);
    let mut ev: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of the symmetric pencil `(b, a)`, i.e. of `a⁻¹b` with `a`
/// positive definite, ascending. `None` if `a` is not positive definite.
pub fn generalized_sym_eigenvalues(m: usize, b: &[f64], a: &[f64]) -> Option<Vec<f64>> {
    let a = DMatrix::from_row_slice(m, m, a);
    let b = DMatrix::from_row_slice(m, m, b);
    let chol = a.cholesky()?;
    let l = chol.l();
    let linv = l.clone().try_inverse()?;
    let c = &linv * b * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = c.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Some(ev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_matches_closed_forms() {
        let mut a = [2.0, 1.0, 0.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 0.0, 4.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        // block triangular: det = (2*3 - 1*1) * 4 * 1 = 20
        assert!((det_in_place(4, &mut a) - 20.0).abs() < 1e-12);
        let mut b = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(det_in_place(2, &mut b), -2.0);
    }

    #[test]
    fn solve_recovers_known_solution() {
        let mut a = [4.0, 1.0, 2.0, 1.0, 3.0, 0.0, 2.0, 0.0, 5.0];
        let x = [1.0, -2.0, 0.5];
        let mut b = [4.0 * x[0] + x[1] + 2.0 * x[2], x[0] + 3.0 * x[1], 2.0 * x[0] + 5.0 * x[2]];
        assert!(solve_in_place(3, &mut a, &mut b));
        for i in 0..3 {
            assert!((b[i] - x[i]).abs() < 1e-14);
        }
        let mut s = [1.0, 2.0, 2.0, 4.0];
        let mut r = [1.0, 1.0];
        assert!(!solve_in_place(2, &mut s, &mut r));
    }

    #[test]
    fn cross_normal_is_orthogonal_to_columns() {
        // d = 4, columns of a random-ish 4x3 matrix
        let jac = [1.0, 0.3, -0.2, 0.5, 1.1, 0.4, -0.7, 0.2, 0.9, 0.1, -0.6, 1.3];
        let mut n = [0.0; 4];
        cross_normal(4, &jac, &mut n);
        for a in 0..3 {
            let s: f64 = (0..4).map(|k| jac[k * 3 + a] * n[k]).sum();
            assert!(s.abs() < 1e-13);
        }
        assert!(norm(&n) > 0.1);
    }

    #[test]
    fn generalized_eigenvalues_of_scaled_identity() {
        let a = [2.0, 0.0, 0.0, 2.0];
        let b = [6.0, 0.0, 0.0, 2.0];
        let ev = generalized_sym_eigenvalues(2, &b, &a).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
