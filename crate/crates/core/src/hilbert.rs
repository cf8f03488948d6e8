//! Composite space qubit ⊗ qubit ⊗ truncated Fock.
//!
//! Qubit level `a` maps to index 0 and `b` to index 1, so the two-qubit
//! block is ordered |aa⟩, |ab⟩, |ba⟩, |bb⟩. The Fock index varies fastest:
//! `index(q1, q2, n) = (2·q1 + q2)·(n_max + 1) + n`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    A,
    B,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::A => 0,
            Level::B => 1,
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(Level::A),
            "b" | "B" => Ok(Level::B),
            other => Err(Error::InvalidLevel(other.to_string())),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::A => "a",
            Level::B => "b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ion {
    First,
    Second,
}

impl TryFrom<u32> for Ion {
    type Error = Error;

    fn try_from(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Ion::First),
            2 => Ok(Ion::Second),
            other => Err(Error::InvalidIon(other)),
        }
    }
}

/// Which qubit a partial transpose acts on.
pub type Subsystem = Ion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceLayout {
    n_max: usize,
}

impl SpaceLayout {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim_fock(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim_total(&self) -> usize {
        4 * self.dim_fock()
    }

    pub fn index(&self, q1: Level, q2: Level, n: usize) -> usize {
        debug_assert!(n <= self.n_max);
        (2 * q1.index() + q2.index()) * self.dim_fock() + n
    }

    /// Inverse of [`index`](Self::index).
    pub fn decompose(&self, idx: usize) -> (Level, Level, usize) {
        let pair = idx / self.dim_fock();
        let level = |bit: usize| if bit == 0 { Level::A } else { Level::B };
        (level(pair / 2), level(pair % 2), idx % self.dim_fock())
    }

    /// Number state |q1, q2, n⟩ as a column vector.
    pub fn basis_vector(&self, q1: Level, q2: Level, n: usize) -> Vec<Complex64> {
        let mut v = vec![ZERO; self.dim_total()];
        v[self.index(q1, q2, n)] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn fock_identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.dim_fock())
    }

    /// Lifts a Fock-space operator to the full space.
    pub fn embed_fock(&self, op: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::identity(4).kron(op)
    }
}

/// Bare (n_max + 1)-dimensional ladder operator with ⟨n−1|â|n⟩ = √n.
pub fn annihilation_op(layout: SpaceLayout) -> ComplexMatrix {
    let d = layout.dim_fock();
    ComplexMatrix::from_fn(d, d, |i, j| if j == i + 1 { Complex64::new((j as f64).sqrt(), 0.0) } else { ZERO })
}

/// Bare Fock-space number operator â†â.
pub fn number_op(layout: SpaceLayout) -> ComplexMatrix {
    let d = layout.dim_fock();
    ComplexMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(i as f64, 0.0) } else { ZERO })
}

/// |l⟩⟨m| on a single qubit.
pub fn qubit_op(l: Level, m: Level) -> ComplexMatrix {
    let mut op = ComplexMatrix::zeros(2, 2);
    op[(l.index(), m.index())] = Complex64::new(1.0, 0.0);
    op
}

/// S_lm on the named ion, identity on the other ion and the phonon mode.
pub fn ion_op(l: Level, m: Level, ion: Ion, layout: SpaceLayout) -> ComplexMatrix {
    let s = qubit_op(l, m);
    let id2 = ComplexMatrix::identity(2);
    let qubits = match ion {
        Ion::First => s.kron(&id2),
        Ion::Second => id2.kron(&s),
    };
    qubits.kron(&layout.fock_identity())
}

/// Kronecker product A ⊗ B, with A's index major.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Traces out the phonon mode, leaving the 4×4 two-qubit state.
pub fn partial_trace_fock(rho: &ComplexMatrix, layout: SpaceLayout) -> Result<ComplexMatrix> {
    let dim = layout.dim_total();
    if !rho.is_square() || rho.rows() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho.rows() });
    }
    let df = layout.dim_fock();
    Ok(ComplexMatrix::from_fn(4, 4, |i, j| (0..df).map(|n| rho[(i * df + n, j * df + n)]).sum()))
}

/// Transposes the indices of one qubit of a 4×4 two-qubit matrix.
pub fn partial_transpose(rho4: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if rho4.rows() != 4 || rho4.cols() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho4.rows() });
    }
    Ok(ComplexMatrix::from_fn(4, 4, |i, j| {
        let (i1, i2) = (i / 2, i % 2);
        let (j1, j2) = (j / 2, j % 2);
        let (r, c) = match subsystem {
            Ion::First => (2 * j1 + i2, 2 * i1 + j2),
            Ion::Second => (2 * i1 + j2, 2 * j1 + i2),
        };
        rho4[(r, c)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{frobenius_distance, hermitian_eigen};

    #[test]
    fn index_is_a_bijection() {
        let layout = SpaceLayout::new(3);
        let mut seen = vec![false; layout.dim_total()];
        for q1 in [Level::A, Level::B] {
            for q2 in [Level::A, Level::B] {
                for n in 0..=3 {
                    let i = layout.index(q1, q2, n);
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(layout.decompose(i), (q1, q2, n));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(layout.index(Level::A, Level::B, 2), 6);
    }

    #[test]
    fn annihilation_entries() {
        let a1 = annihilation_op(SpaceLayout::new(1));
        assert_eq!(a1[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(a1[(0, 0)], ZERO);
        assert_eq!(a1[(1, 0)], ZERO);
        assert_eq!(a1[(1, 1)], ZERO);
        let a2 = annihilation_op(SpaceLayout::new(2));
        assert!((a2[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert!(a2.column(0).iter().all(|z| *z == ZERO));
    }

    #[test]
    fn ion_operator_algebra() {
        let layout = SpaceLayout::new(2);
        for ion in [Ion::First, Ion::Second] {
            let aa = ion_op(Level::A, Level::A, ion, layout);
            let bb = ion_op(Level::B, Level::B, ion, layout);
            let ab = ion_op(Level::A, Level::B, ion, layout);
            let ba = ion_op(Level::B, Level::A, ion, layout);
            assert_eq!(&aa + &bb, ComplexMatrix::identity(layout.dim_total()));
            assert_eq!(ab.adjoint(), ba);
            assert_eq!(&ab * &ba, aa);
        }
        // S_ba on ion 2 maps |a,a,n⟩ to |a,b,n⟩
        let ba2 = ion_op(Level::B, Level::A, Ion::Second, layout);
        let v = ba2.apply(&layout.basis_vector(Level::A, Level::A, 1));
        assert_eq!(v, layout.basis_vector(Level::A, Level::B, 1));
    }

    #[test]
    fn level_and_ion_parsing() {
        assert_eq!("a".parse::<Level>().unwrap(), Level::A);
        assert_eq!("b".parse::<Level>().unwrap(), Level::B);
        assert!(matches!("c".parse::<Level>(), Err(Error::InvalidLevel(_))));
        assert!(matches!(Ion::try_from(3), Err(Error::InvalidIon(3))));
    }

    #[test]
    fn partial_trace_of_products() {
        let layout = SpaceLayout::new(2);
        let rho_q = ComplexMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new([0.1, 0.2, 0.3, 0.4][i], 0.0)
            } else if i < j {
                Complex64::new(0.01 * (i + j) as f64, 0.02)
            } else {
                Complex64::new(0.01 * (i + j) as f64, -0.02)
            }
        });
        let vac = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        assert_eq!(partial_trace_fock(&tensor(&rho_q, &vac), layout).unwrap(), rho_q);
        let mixed = ComplexMatrix::from_real_diagonal(&[0.5, 0.3, 0.2]);
        let r = partial_trace_fock(&tensor(&rho_q, &mixed), layout).unwrap();
        assert!(frobenius_distance(&r, &rho_q).unwrap() < 1e-12);
    }

    #[test]
    fn partial_trace_kills_coherence_between_fock_levels() {
        let layout = SpaceLayout::new(2);
        let s = 0.5f64.sqrt();
        let psi: Vec<Complex64> = layout
            .basis_vector(Level::A, Level::B, 0)
            .iter()
            .zip(layout.basis_vector(Level::B, Level::B, 2))
            .map(|(x, y)| (x + y) * s)
            .collect();
        let r = partial_trace_fock(&ComplexMatrix::outer(&psi, &psi), layout).unwrap();
        let diag: Vec<f64> = r.diagonal().iter().map(|z| z.re).collect();
        for (d, want) in diag.iter().zip([0.0, 0.5, 0.0, 0.5]) {
            assert!((d - want).abs() < 1e-15);
        }
        assert_eq!(r[(1, 3)], ZERO);
        assert_eq!(r[(3, 1)], ZERO);
    }

    #[test]
    fn partial_trace_rejects_wrong_dimension() {
        let layout = SpaceLayout::new(2);
        let err = partial_trace_fock(&ComplexMatrix::identity(8), layout);
        assert!(matches!(err, Err(Error::DimensionMismatch { expected: 12, found: 8 })));
    }

    #[test]
    fn partial_transpose_examples() {
        let prod = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(partial_transpose(&prod, Ion::Second).unwrap(), prod);

        let s = 0.5f64.sqrt();
        let bell = [ZERO, Complex64::new(s, 0.0), Complex64::new(s, 0.0), ZERO];
        let rho = ComplexMatrix::outer(&bell, &bell);
        for sub in [Ion::First, Ion::Second] {
            let pt = partial_transpose(&rho, sub).unwrap();
            let ev = hermitian_eigen(&pt).unwrap().eigenvalues;
            for (e, want) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
                assert!((e - want).abs() < 1e-12);
            }
            assert_eq!(partial_transpose(&pt, sub).unwrap(), rho);
        }
        assert!(matches!(
            partial_transpose(&ComplexMatrix::identity(3), Ion::Second),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
