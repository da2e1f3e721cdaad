//! Dense `2^n × 2^n` complex matrices used to check the symbolic pipeline.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliPolynomial, PauliString};

/// Largest qubit count realized densely.
pub const NORM_QUBIT_CAP: usize = 10;
/// Largest qubit count for Choi matrices (which live on `4^n` dimensions).
pub const CHOI_QUBIT_CAP: usize = 6;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
}

fn check_cap(n_qubits: usize, cap: usize, what: &'static str) -> Result<()> {
    if n_qubits > cap {
        return Err(Error::DimensionCap {
            n_qubits,
            cap,
            what,
        });
    }
    Ok(())
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument(
                "operator matrix must be square".into(),
            ));
        }
        Ok(DenseOperator { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn mul(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn add(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &DenseOperator) -> DenseOperator {
        DenseOperator {
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scale(&self, c: Complex64) -> DenseOperator {
        DenseOperator {
            matrix: &self.matrix * c,
        }
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self^power` by repeated squaring.
    pub fn pow(&self, mut power: u64) -> DenseOperator {
        let mut result = DenseOperator::identity(self.dim());
        let mut base = self.clone();
        while power > 0 {
            if power & 1 == 1 {
                result = result.mul(&base);
            }
            power >>= 1;
            if power > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.matrix
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        if self.hermiticity_defect() <= HERMITIAN_TOLERANCE * self.max_abs().max(1.0) {
            let eig = SymmetricEigen::new(self.matrix.clone());
            return eig.eigenvalues.iter().map(|e| e.abs()).sum();
        }
        self.matrix.singular_values().iter().sum()
    }
}

/// Dense realization of a Pauli string, qubit 0 as the most significant tensor factor.
pub fn pauli_dense(p: &PauliString) -> Result<DenseOperator> {
    let n = p.n_qubits();
    check_cap(n, NORM_QUBIT_CAP, "dense operators")?;
    let dim = 1usize << n;
    let (mut xmask, mut zmask, mut n_y) = (0usize, 0usize, 0u32);
    for (q, letter) in p.letters().enumerate() {
        let bit = 1usize << (n - 1 - q);
        use crate::pauli::Letter::*;
        match letter {
            I => {}
            X => xmask |= bit,
            Z => zmask |= bit,
            Y => {
                xmask |= bit;
                zmask |= bit;
                n_y += 1;
            }
        }
    }
    let y_phase = Complex64::i().powu(n_y);
    let mut m = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        let sign = if (zmask & b).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        m[(b ^ xmask, b)] = y_phase * sign;
    }
    Ok(DenseOperator { matrix: m })
}

/// Linear extension of [`pauli_dense`].
pub fn poly_dense(p: &PauliPolynomial) -> Result<DenseOperator> {
    let n = p.n_qubits();
    check_cap(n, NORM_QUBIT_CAP, "dense operators")?;
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (s, c) in p.iter() {
        m += pauli_dense(s)?.matrix * *c;
    }
    Ok(DenseOperator { matrix: m })
}

/// `exp(λ h)` for Hermitian `h`, through its eigendecomposition.
pub fn exp_hamiltonian(h: &DenseOperator, lambda: Complex64) -> Result<DenseOperator> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOLERANCE * h.max_abs().max(1.0) {
        return Err(Error::NonHermitian { deviation: defect });
    }
    let eig = SymmetricEigen::new(h.matrix.clone());
    let q = &eig.eigenvectors;
    let mut scaled = q.clone();
    for (j, e) in eig.eigenvalues.iter().enumerate() {
        let f = (lambda * *e).exp();
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= f;
        }
    }
    Ok(DenseOperator {
        matrix: scaled * q.adjoint(),
    })
}

/// `exp(θ P) = cosh(θ)·I + sinh(θ)·P` for a Pauli string `P`.
pub fn exp_pauli(p: &PauliString, theta: Complex64) -> Result<DenseOperator> {
    let pm = pauli_dense(p)?;
    let dim = pm.dim();
    Ok(DenseOperator {
        matrix: DMatrix::identity(dim, dim) * theta.cosh() + pm.matrix * theta.sinh(),
    })
}

/// Choi matrix `Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)` of the mixed-unitary channel
/// `ρ ↦ Σ p U ρ U†`; a unitary channel gives trace `dim`.
pub fn choi(channel: &[(f64, DenseOperator)]) -> Result<DenseOperator> {
    let dim = channel
        .first()
        .map(|(_, u)| u.dim())
        .ok_or_else(|| Error::InvalidArgument("empty channel".into()))?;
    check_cap(
        dim.trailing_zeros() as usize,
        CHOI_QUBIT_CAP,
        "Choi matrices",
    )?;
    let mut j = DMatrix::zeros(dim * dim, dim * dim);
    for (p, u) in channel {
        if *p < 0.0 {
            return Err(Error::InvalidArgument(format!("negative probability {p}")));
        }
        if u.dim() != dim {
            return Err(Error::SizeMismatch {
                left: dim,
                right: u.dim(),
            });
        }
        // v_{(i,a)} = U_{a,i}: column-major storage of U is exactly this ordering.
        let v = nalgebra::DVector::from_column_slice(u.matrix.as_slice());
        j += (&v * v.adjoint()) * Complex64::new(*p, 0.0);
    }
    Ok(DenseOperator { matrix: j })
}

/// `choi(channel) − choi([(1, V)])` formed from the differences `Δ = U − V`, so that
/// no O(1) terms cancel: with `B = Σ p Δ` it equals
/// `vec(B)vec(V)† + vec(V)vec(B)† + Σ p vec(Δ)vec(Δ)†` for probabilities summing to one.
pub fn choi_difference(
    v: &DenseOperator,
    channel: &[(f64, DenseOperator)],
) -> Result<DenseOperator> {
    let dim = v.dim();
    check_cap(
        dim.trailing_zeros() as usize,
        CHOI_QUBIT_CAP,
        "Choi matrices",
    )?;
    let mut b = DMatrix::zeros(dim, dim);
    let mut j = DMatrix::zeros(dim * dim, dim * dim);
    for (p, u) in channel {
        if *p < 0.0 {
            return Err(Error::InvalidArgument(format!("negative probability {p}")));
        }
        if u.dim() != dim {
            return Err(Error::SizeMismatch {
                left: dim,
                right: u.dim(),
            });
        }
        let delta = &u.matrix - &v.matrix;
        let w = nalgebra::DVector::from_column_slice(delta.as_slice());
        j += (&w * w.adjoint()) * Complex64::new(*p, 0.0);
        b += delta * Complex64::new(*p, 0.0);
    }
    let vb = nalgebra::DVector::from_column_slice(b.as_slice());
    let vv = nalgebra::DVector::from_column_slice(v.matrix.as_slice());
    let cross = &vb * vv.adjoint();
    j += &cross + cross.adjoint();
    Ok(DenseOperator { matrix: j })
}

/// Column-stacking superoperator `Σ p conj(U) ⊗ U` of a mixed-unitary channel.
pub fn superoperator(channel: &[(f64, DenseOperator)]) -> Result<DenseOperator> {
    let dim = channel
        .first()
        .map(|(_, u)| u.dim())
        .ok_or_else(|| Error::InvalidArgument("empty channel".into()))?;
    check_cap(
        dim.trailing_zeros() as usize,
        CHOI_QUBIT_CAP,
        "superoperators",
    )?;
    let mut s = DMatrix::zeros(dim * dim, dim * dim);
    for (p, u) in channel {
        s += u.matrix.map(|c| c.conj()).kronecker(&u.matrix) * Complex64::new(*p, 0.0);
    }
    Ok(DenseOperator { matrix: s })
}

/// Reshuffles a column-stacking superoperator into its Choi matrix.
pub fn choi_from_superoperator(s: &DenseOperator) -> DenseOperator {
    let d2 = s.dim();
    let d = (d2 as f64).sqrt().round() as usize;
    let mut j = DMatrix::zeros(d2, d2);
    for i in 0..d {
        for a in 0..d {
            for jj in 0..d {
                for b in 0..d {
                    j[(i * d + a, jj * d + b)] = s.matrix[(b * d + a, jj * d + i)];
                }
            }
        }
    }
    DenseOperator { matrix: j }
}
