//! Small dense complex-matrix routines shared across the crate.
//!
//! Registers never exceed a few qubits, so everything here is written for
//! matrices of dimension at most a few dozen; no external LAPACK backend is
//! required.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Kronecker product of two complex matrices.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two complex vectors.
pub fn kron_vec(a: &Array1<C64>, b: &Array1<C64>) -> Array1<C64> {
    let mut out = Array1::zeros(a.len() * b.len());
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    let (r, c) = a.dim();
    Array2::from_shape_fn((c, r), |(i, j)| a[(j, i)].conj())
}

/// Largest absolute entry of `a - a†`.
pub fn hermiticity_defect(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations,
/// returned in ascending order. The input is assumed Hermitian; only the
/// Hermitian part of rounding noise survives the sweeps.
pub fn hermitian_eigenvalues(a: &Array2<C64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigenvalues of a non-square matrix");
    if n == 1 {
        return vec![a[(0, 0)].re];
    }
    let mut m = a.clone();
    let scale: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let tol = 1e-14 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() < tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let abs_apq = apq.norm();
                if abs_apq < 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Phase factor making the pivot real, then a real Jacobi angle.
                let phase = apq / abs_apq;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Column rotation: columns p, q of M <- M · V with
                // V = [[c, s], [-s·e^{-iβ}, c·e^{-iβ}]] in the (p,q) plane.
                let e_neg = phase.conj();
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * e_neg * s;
                    m[(k, q)] = mkp * s + mkq * e_neg * c;
                }
                // Row rotation with the conjugate factors: M <- V† · M.
                let e_pos = phase;
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * e_pos * s;
                    m[(q, k)] = mpk * s + mqk * e_pos * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }

    let mut eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &Array2<C64>) -> f64 {
    hermitian_eigenvalues(a)[0]
}

/// Singular values (ascending) via the eigenvalues of A†A.
pub fn singular_values(a: &Array2<C64>) -> Vec<f64> {
    let ata = dagger(a).dot(a);
    hermitian_eigenvalues(&ata)
        .into_iter()
        .map(|ev| ev.max(0.0).sqrt())
        .collect()
}

/// Trace distance ½‖a − b‖₁ between two Hermitian matrices.
pub fn trace_distance(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    let diff = a - b;
    0.5 * hermitian_eigenvalues(&diff).iter().map(|ev| ev.abs()).sum::<f64>()
}

/// Solves the real symmetric positive-definite system `a x = b` by Cholesky
/// factorization. Returns `None` when `a` is not positive definite, which the
/// callers treat as a rank-deficient design.
pub fn solve_spd(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // forward then back substitution
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = array![
            [c(3.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-1.0, 0.0)]
        ];
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let m = array![
            [c(0.0, 0.0), c(0.0, -1.0)],
            [c(0.0, 1.0), c(0.0, 0.0)]
        ];
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-12);
        assert!((ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_match_trace_and_det_3x3() {
        // Hermitian 3x3 with complex off-diagonals.
        let m = array![
            [c(2.0, 0.0), c(1.0, 1.0), c(0.0, -2.0)],
            [c(1.0, -1.0), c(0.5, 0.0), c(3.0, 0.0)],
            [c(0.0, 2.0), c(3.0, 0.0), c(-1.0, 0.0)]
        ];
        let ev = hermitian_eigenvalues(&m);
        let trace: f64 = ev.iter().sum();
        assert!((trace - 1.5).abs() < 1e-10, "trace {trace}");
        // determinant of m computed by cofactor expansion
        let det = {
            let a = m[(0, 0)];
            let b = m[(0, 1)];
            let cc = m[(0, 2)];
            let d = m[(1, 0)];
            let e = m[(1, 1)];
            let f = m[(1, 2)];
            let g = m[(2, 0)];
            let h = m[(2, 1)];
            let i = m[(2, 2)];
            (a * (e * i - f * h) - b * (d * i - f * g) + cc * (d * h - e * g)).re
        };
        let prod: f64 = ev.iter().product();
        assert!((prod - det).abs() < 1e-8 * det.abs().max(1.0), "det {det} vs {prod}");
    }

    #[test]
    fn singular_values_of_scaled_flip() {
        let m = array![
            [c(0.0, 0.0), c(0.7, 0.0)],
            [c(0.7, 0.0), c(0.0, 0.0)]
        ];
        let sv = singular_values(&m);
        assert!((sv[0] - 0.7).abs() < 1e-12);
        assert!((sv[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn spd_solve_roundtrip() {
        let a = vec![
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, -0.2],
            vec![0.5, -0.2, 2.0],
        ];
        let x_true = [1.0, -2.0, 0.25];
        let b: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| a[i][j] * x_true[j]).sum())
            .collect();
        let x = solve_spd(&a, &b).unwrap();
        for (xi, ti) in x.iter().zip(x_true.iter()) {
            assert!((xi - ti).abs() < 1e-12);
        }
    }

    #[test]
    fn spd_solve_rejects_indefinite() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(solve_spd(&a, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn trace_distance_of_orthogonal_projectors() {
        let p0 = array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
        let p1 = array![[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!((trace_distance(&p0, &p1) - 1.0).abs() < 1e-12);
    }
}
