//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot element `a_pq` with a
//! diagonal unitary, then applies a real plane rotation that annihilates it.
//! The accumulated product of these unitaries is the eigenvector matrix.
//!
//! Exact zeros are never rotated, so block-diagonal inputs stay exactly
//! block-diagonal and every block converges on its own scale.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
const CONVERGENCE_RELATIVE: f64 = 1e-12;

/// Real ascending eigenvalues plus the unitary matrix of matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V diag(E) V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()).sum())
    }

    /// Applies a real function to the spectrum: V diag(f(E)) V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped = HermitianEigenDecomposition {
            eigenvalues: self.eigenvalues.iter().map(|&e| f(e)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        };
        mapped.reconstruct()
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOLERANCE) {
        return Err(Error::NonHermitianInput { asymmetry: defect });
    }
    let n = m.dim();
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            0.5 * (m[(i, j)] + m[(j, i)].conj())
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = if scale > 0.0 { CONVERGENCE_RELATIVE * scale } else { 0.0 };

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                if rotate(&mut a, &mut v, p, q) {
                    rotated = true;
                }
            }
        }
        sweeps += 1;
        let off = a.off_diagonal_norm();
        if !rotated || off == 0.0 {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            if off <= threshold {
                break;
            }
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigenDecomposition { eigenvalues, eigenvectors })
}

/// One Jacobi rotation on the (p, q) plane. Returns false when the pivot is negligible.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return false;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Pivot below half an ulp of both diagonal entries cannot move them.
    if g <= 0.5 * f64::EPSILON * app.abs().min(aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return true;
    }
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t =
        if theta.is_infinite() { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // U = diag(1, conj(phase)) · [[c, s], [-s, c]] restricted to (p, q).
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -s * phase.conj();
    let u_qq = c * phase.conj();

    let n = a.rows();
    // A ← A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A ← U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);
    // V ← V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    true
}

/// V† ρ V.
pub fn to_eigenbasis(rho: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_basis(rho, v)?;
    v.adjoint().try_mul(rho)?.try_mul(v)
}

/// V ρ̃ V†, the inverse of [`to_eigenbasis`].
pub fn from_eigenbasis(rho: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_basis(rho, v)?;
    v.try_mul(rho)?.try_mul(&v.adjoint())
}

fn check_basis(rho: &ComplexMatrix, v: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::DimensionMismatch { expected: rho.rows(), found: rho.cols() });
    }
    if !v.is_square() || v.rows() != rho.rows() {
        return Err(Error::DimensionMismatch { expected: rho.rows(), found: v.rows() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::frobenius_distance;

    fn assert_decomposition(m: &ComplexMatrix, d: &HermitianEigenDecomposition) {
        let n = m.dim();
        let vv = &d.eigenvectors.adjoint() * &d.eigenvectors;
        assert!(frobenius_distance(&vv, &ComplexMatrix::identity(n)).unwrap() < 1e-10);
        assert!(frobenius_distance(&d.reconstruct(), m).unwrap() < 1e-10 * m.frobenius_norm().max(1.0));
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let d = hermitian_eigen(&m).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(d.eigenvectors, ComplexMatrix::identity(3));
    }

    #[test]
    fn pauli_x() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let d = hermitian_eigen(&m).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-15);
        let v0 = d.eigenvectors.column(0);
        let r = 0.5f64.sqrt();
        // (1, -1)/√2 up to a global phase
        assert!(((v0[0] * v0[1].conj()).re + 0.5).abs() < 1e-14);
        assert!((v0[0].norm() - r).abs() < 1e-14);
        assert_decomposition(&m, &d);
    }

    #[test]
    fn tridiagonal_sqrt2() {
        // characteristic polynomial μ(μ² − 4)
        let s = 2f64.sqrt();
        let m = ComplexMatrix::from_real_rows(&[&[0.0, s, 0.0], &[s, 0.0, s], &[0.0, s, 0.0]]);
        let d = hermitian_eigen(&m).unwrap();
        for (got, want) in d.eigenvalues.iter().zip([-2.0, 0.0, 2.0]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
        assert_decomposition(&m, &d);
    }

    #[test]
    fn complex_hermitian() {
        let i = Complex64::i();
        let m = ComplexMatrix::from_row_major(
            3,
            3,
            vec![2.0.into(), 1.0 + i, 0.5 * i, 1.0 - i, (-1.0).into(), 3.0.into(), -0.5 * i, 3.0.into(), 0.25.into()],
        );
        let d = hermitian_eigen(&m).unwrap();
        assert_decomposition(&m, &d);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let d = hermitian_eigen(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0; 3]);
        let d = hermitian_eigen(&ComplexMatrix::zeros(0, 0)).unwrap();
        assert!(d.eigenvalues.is_empty());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NonHermitianInput { .. })));
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn basis_change_examples() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]);
        let v = hermitian_eigen(&m).unwrap().eigenvectors;
        let id = ComplexMatrix::identity(2);
        assert!(frobenius_distance(&to_eigenbasis(&id, &v).unwrap(), &id).unwrap() < 1e-14);
        let rho = ComplexMatrix::from_fn(2, 2, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64));
        assert_eq!(to_eigenbasis(&rho, &id).unwrap(), rho);
        let back = from_eigenbasis(&to_eigenbasis(&rho, &v).unwrap(), &v).unwrap();
        assert!(frobenius_distance(&back, &rho).unwrap() < 1e-12);
        assert!(matches!(to_eigenbasis(&rho, &ComplexMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }
}
