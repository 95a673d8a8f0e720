//! Dense state algebra over small registers of polarization qubits.
//!
//! Conventions, fixed once and asserted by tests:
//! * qubit 0 is the most significant bit of a basis index;
//! * |H⟩ maps to bit 0, |V⟩ to bit 1, so σz|H⟩ = +|H⟩;
//! * wavelength and path labels are bookkeeping only and never enter the
//!   amplitudes.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance for exact algebraic identities.
pub const TOL_EXACT: f64 = 1e-12;
/// Tolerance for reconstructed or accumulated quantities.
pub const TOL_ACCUM: f64 = 1e-10;
/// Lower bound accepted for density-matrix eigenvalues.
pub const TOL_PSD: f64 = -1e-8;

pub const NM_520: u32 = 520;
pub const NM_1560: u32 = 1560;

/// Polarization basis state of a single qubit.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn bit(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

/// Wavelength and path metadata carried by each qubit of a register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitLabel {
    pub wavelength_nm: u32,
    pub path: String,
}

impl QubitLabel {
    pub fn new(wavelength_nm: u32, path: impl Into<String>) -> Self {
        Self { wavelength_nm, path: path.into() }
    }
}

fn check_labels(labels: &[QubitLabel]) -> Result<()> {
    for (i, a) in labels.iter().enumerate() {
        for b in labels.iter().skip(i + 1) {
            if a.path == b.path {
                return Err(Error::DuplicatePath(a.path.clone()));
            }
        }
    }
    Ok(())
}

fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(Error::QubitOutOfRange { index: t, n_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(Error::RepeatedTarget);
        }
    }
    Ok(())
}

/// Scatter `rest` bits into the non-target positions and `pattern` bits into
/// the target positions of an `n`-qubit basis index. Bit j of `pattern`
/// (MSB-first) lands on qubit `targets[j]`.
fn compose_index(rest: usize, pattern: usize, targets: &[usize], n: usize) -> usize {
    let k = targets.len();
    let mut idx = 0usize;
    let mut rest_bits = rest;
    for q in (0..n).rev() {
        if !targets.contains(&q) {
            if rest_bits & 1 == 1 {
                idx |= 1 << (n - 1 - q);
            }
            rest_bits >>= 1;
        }
    }
    for (j, &q) in targets.iter().enumerate() {
        if (pattern >> (k - 1 - j)) & 1 == 1 {
            idx |= 1 << (n - 1 - q);
        }
    }
    idx
}

/// Applies a `2^k × 2^k` matrix to the `targets` qubits of an amplitude
/// vector, identity elsewhere. No normalization is performed.
fn apply_kernel(op: &Array2<C64>, amps: &Array1<C64>, targets: &[usize], n: usize) -> Array1<C64> {
    let k = targets.len();
    let m = 1usize << k;
    let mut out = Array1::zeros(amps.len());
    let mut idx = vec![0usize; m];
    for rest in 0..(1usize << (n - k)) {
        for (t, slot) in idx.iter_mut().enumerate() {
            *slot = compose_index(rest, t, targets, n);
        }
        for t_out in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for t_in in 0..m {
                acc += op[(t_out, t_in)] * amps[idx[t_in]];
            }
            out[idx[t_out]] = acc;
        }
    }
    out
}

/// A matrix acting on a declared number of qubits: unitary for lossless
/// elements, sub-unitary (singular values ≤ 1) for lossy or post-selected
/// ones.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    matrix: Array2<C64>,
    arity: usize,
    unitary: bool,
}

impl ModeOperator {
    /// Wraps a unitary matrix; rejects matrices with U†U ≠ I beyond 1e-12.
    pub fn unitary(matrix: Array2<C64>) -> Result<Self> {
        let arity = Self::arity_for(&matrix)?;
        let gram = linalg::dagger(&matrix).dot(&matrix);
        let d = matrix.nrows();
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                if (gram[(i, j)] - expect).norm() > TOL_EXACT {
                    return Err(Error::InvalidOperator(format!(
                        "U†U deviates from identity by {:.3e} at ({i},{j})",
                        (gram[(i, j)] - expect).norm()
                    )));
                }
            }
        }
        Ok(Self { matrix, arity, unitary: true })
    }

    /// Wraps a sub-unitary (contraction) matrix; singular values may not
    /// exceed 1 + 1e-12.
    pub fn sub_unitary(matrix: Array2<C64>) -> Result<Self> {
        let arity = Self::arity_for(&matrix)?;
        let top = linalg::singular_values(&matrix).last().copied().unwrap_or(0.0);
        if top > 1.0 + TOL_EXACT {
            return Err(Error::InvalidOperator(format!(
                "largest singular value {top} exceeds 1"
            )));
        }
        Ok(Self { matrix, arity, unitary: false })
    }

    fn arity_for(matrix: &Array2<C64>) -> Result<usize> {
        let (r, c) = matrix.dim();
        if r != c || r == 0 || !r.is_power_of_two() {
            return Err(Error::InvalidOperator(format!("shape {r}×{c} is not 2^k square")));
        }
        Ok(r.trailing_zeros() as usize)
    }

    pub fn identity(arity: usize) -> Self {
        Self { matrix: Array2::eye(1 << arity), arity, unitary: true }
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Kronecker product of two operators; the left factor acts on the more
    /// significant qubits.
    pub fn kron(&self, other: &ModeOperator) -> ModeOperator {
        ModeOperator {
            matrix: linalg::kron(&self.matrix, &other.matrix),
            arity: self.arity + other.arity,
            unitary: self.unitary && other.unitary,
        }
    }

    /// k-fold tensor power.
    pub fn kron_power(&self, k: usize) -> ModeOperator {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = out.kron(self);
        }
        out
    }

    /// Largest absolute entry of M − M†.
    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }
}

pub fn pauli_x() -> ModeOperator {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    ModeOperator::unitary(ndarray::array![[zero, one], [one, zero]]).unwrap()
}

pub fn pauli_y() -> ModeOperator {
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    ModeOperator::unitary(ndarray::array![[zero, -i], [i, zero]]).unwrap()
}

pub fn pauli_z() -> ModeOperator {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    ModeOperator::unitary(ndarray::array![[one, zero], [zero, -one]]).unwrap()
}

/// Complex amplitudes over an ordered register of labeled polarization
/// qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    amplitudes: Array1<C64>,
    labels: Vec<QubitLabel>,
}

impl StateVector {
    pub fn new(amplitudes: Array1<C64>, labels: Vec<QubitLabel>) -> Result<Self> {
        let expected = 1usize << labels.len();
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { left: amplitudes.len(), right: expected });
        }
        check_labels(&labels)?;
        Ok(Self { amplitudes, labels })
    }

    /// Computational basis state |b₀b₁…⟩ with the given per-qubit labels.
    pub fn basis(bits: &[Polarization], labels: Vec<QubitLabel>) -> Result<Self> {
        if bits.len() != labels.len() {
            return Err(Error::DimensionMismatch { left: bits.len(), right: labels.len() });
        }
        let n = bits.len();
        let mut idx = 0usize;
        for (j, b) in bits.iter().enumerate() {
            idx |= b.bit() << (n - 1 - j);
        }
        let mut amplitudes = Array1::zeros(1 << n);
        amplitudes[idx] = C64::new(1.0, 0.0);
        Self::new(amplitudes, labels)
    }

    /// Single-qubit basis state.
    pub fn single(pol: Polarization, label: QubitLabel) -> Self {
        Self::basis(&[pol], vec![label]).unwrap()
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn label_mut(&mut self, qubit: usize) -> &mut QubitLabel {
        &mut self.labels[qubit]
    }

    /// Index of the qubit carrying the given path label.
    pub fn index_of_path(&self, path: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.path == path)
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Renormalizes, returning the squared norm that was divided out.
    pub fn into_normalized(mut self) -> (Self, f64) {
        let n2 = self.norm_sq();
        if n2 > 0.0 {
            let inv = C64::new(1.0 / n2.sqrt(), 0.0);
            self.amplitudes.mapv_inplace(|a| a * inv);
        }
        (self, n2)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Kronecker product; label lists are concatenated and must stay free of
    /// duplicate path identifiers.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_labels(&labels)?;
        Ok(StateVector {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
            labels,
        })
    }

    /// Applies `op` to the target qubits, identity elsewhere. No
    /// renormalization is performed.
    pub fn apply(&self, op: &ModeOperator, targets: &[usize]) -> Result<StateVector> {
        if op.arity() != targets.len() {
            return Err(Error::ArityMismatch { arity: op.arity(), targets: targets.len() });
        }
        check_targets(targets, self.n_qubits())?;
        Ok(StateVector {
            amplitudes: apply_kernel(op.matrix(), &self.amplitudes, targets, self.n_qubits()),
            labels: self.labels.clone(),
        })
    }

    /// |ψ⟩⟨ψ| as a density matrix. The state must be normalized.
    pub fn to_density(&self) -> DensityMatrix {
        let d = self.dim();
        let mat = Array2::from_shape_fn((d, d), |(i, j)| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityMatrix { matrix: mat, labels: self.labels.clone() }
    }
}

/// Hermitian, positive-semidefinite, unit-trace matrix over a labeled
/// register.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: Array2<C64>,
    labels: Vec<QubitLabel>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before wrapping.
    pub fn new(matrix: Array2<C64>, labels: Vec<QubitLabel>) -> Result<Self> {
        let expected = 1usize << labels.len();
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch { left: matrix.nrows(), right: expected });
        }
        check_labels(&labels)?;
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > TOL_ACCUM {
            return Err(Error::InvalidDensityMatrix(format!(
                "Hermiticity defect {defect:.3e}"
            )));
        }
        let trace: C64 = (0..matrix.nrows()).map(|i| matrix[(i, i)]).sum();
        if (trace - C64::new(1.0, 0.0)).norm() > TOL_ACCUM {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let min_ev = linalg::min_eigenvalue(&matrix);
        if min_ev < TOL_PSD {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {min_ev:.3e}"
            )));
        }
        Ok(Self { matrix, labels })
    }

    /// Internal constructor for matrices already known to satisfy the
    /// invariants (e.g. unitary images of valid states).
    pub(crate) fn from_parts_unchecked(matrix: Array2<C64>, labels: Vec<QubitLabel>) -> Self {
        Self { matrix, labels }
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn label_mut(&mut self, qubit: usize) -> &mut QubitLabel {
        &mut self.labels[qubit]
    }

    pub fn index_of_path(&self, path: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.path == path)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.matrix)
    }

    /// Convex mixture Σ wᵢ ρᵢ. Weights must sum to 1 for the result to be a
    /// state; this is the caller's responsibility and is checked by `new`.
    pub fn mix(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts.first().expect("mix of nothing");
        let d = first.1.dim();
        let mut mat = Array2::zeros((d, d));
        for (w, rho) in parts {
            if rho.dim() != d {
                return Err(Error::DimensionMismatch { left: rho.dim(), right: d });
            }
            mat = mat + rho.matrix() * C64::new(*w, 0.0);
        }
        DensityMatrix::new(mat, first.1.labels.clone())
    }

    /// (1−w)·ρ + w·I/d.
    pub fn depolarized(&self, w: f64) -> DensityMatrix {
        let d = self.dim();
        let mut mat = &self.matrix * C64::new(1.0 - w, 0.0);
        for i in 0..d {
            mat[(i, i)] += C64::new(w / d as f64, 0.0);
        }
        DensityMatrix { matrix: mat, labels: self.labels.clone() }
    }

    /// A ρ A† on the target qubits. Sub-unitary operators shrink the trace;
    /// no renormalization is performed.
    pub fn apply(&self, op: &ModeOperator, targets: &[usize]) -> Result<DensityMatrix> {
        if op.arity() != targets.len() {
            return Err(Error::ArityMismatch { arity: op.arity(), targets: targets.len() });
        }
        check_targets(targets, self.n_qubits())?;
        let n = self.n_qubits();
        let d = self.dim();
        // Left action on the row index, conjugate action on the column index.
        let mut cols = Array2::zeros((d, d));
        for j in 0..d {
            let col = Array1::from_iter((0..d).map(|i| self.matrix[(i, j)]));
            let new_col = apply_kernel(op.matrix(), &col, targets, n);
            for i in 0..d {
                cols[(i, j)] = new_col[i];
            }
        }
        let conj_op = op.matrix().mapv(|z| z.conj());
        let mut out = Array2::zeros((d, d));
        for i in 0..d {
            let row = Array1::from_iter((0..d).map(|j| cols[(i, j)]));
            let new_row = apply_kernel(&conj_op, &row, targets, n);
            for j in 0..d {
                out[(i, j)] = new_row[j];
            }
        }
        Ok(DensityMatrix { matrix: out, labels: self.labels.clone() })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_labels(&labels)?;
        Ok(DensityMatrix { matrix: linalg::kron(&self.matrix, &other.matrix), labels })
    }

    /// Reduced state on the kept qubits, ordered as listed in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        check_targets(keep, self.n_qubits())?;
        let n = self.n_qubits();
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let dk = 1usize << keep.len();
        let dt = 1usize << traced.len();
        let mut out = Array2::zeros((dk, dk));
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = C64::new(0.0, 0.0);
                for t in 0..dt {
                    let i = scatter_bits(a, keep, n) | scatter_bits(t, &traced, n);
                    let j = scatter_bits(b, keep, n) | scatter_bits(t, &traced, n);
                    acc += self.matrix[(i, j)];
                }
                out[(a, b)] = acc;
            }
        }
        let labels = keep.iter().map(|&q| self.labels[q].clone()).collect();
        Ok(DensityMatrix { matrix: out, labels })
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized pure state ψ.
    pub fn fidelity_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: psi.dim() });
        }
        if (psi.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "psi",
                message: format!("state is not normalized (norm {})", psi.norm()),
            });
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += psi.amplitudes()[i].conj() * self.matrix[(i, j)] * psi.amplitudes()[j];
            }
        }
        Ok(acc.re)
    }

    /// Tr(ρ·M) for a Hermitian observable; the vanishing imaginary part is
    /// discarded.
    pub fn expectation(&self, obs: &ModeOperator) -> Result<f64> {
        if obs.matrix().nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: obs.matrix().nrows(),
            });
        }
        let defect = obs.hermiticity_defect();
        if defect > TOL_ACCUM {
            return Err(Error::NonHermitianObservable(defect));
        }
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.matrix[(i, j)] * obs.matrix()[(j, i)];
            }
        }
        debug_assert!(acc.im.abs() < TOL_ACCUM);
        Ok(acc.re)
    }
}

/// Places the bits of `value` (MSB-first) onto the listed qubit positions of
/// an `n`-qubit index.
fn scatter_bits(value: usize, positions: &[usize], n: usize) -> usize {
    let k = positions.len();
    let mut idx = 0usize;
    for (j, &q) in positions.iter().enumerate() {
        if (value >> (k - 1 - j)) & 1 == 1 {
            idx |= 1 << (n - 1 - q);
        }
    }
    idx
}

/// (|H…H⟩ + |V…V⟩)/√2 over `n` qubits with the given labels.
pub fn ghz_state(labels: Vec<QubitLabel>) -> Result<StateVector> {
    let n = labels.len();
    let d = 1usize << n;
    let mut amplitudes = Array1::zeros(d);
    let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = a;
    amplitudes[d - 1] = a;
    StateVector::new(amplitudes, labels)
}

/// Standard three-photon GHZ target on 520 nm paths A, B', C'.
pub fn ghz3_target() -> StateVector {
    ghz_state(vec![
        QubitLabel::new(NM_520, "A"),
        QubitLabel::new(NM_520, "B'"),
        QubitLabel::new(NM_520, "C'"),
    ])
    .unwrap()
}

/// (|HH⟩ + |VV⟩)/√2 on 520 nm paths A, A'.
pub fn bell_phi_plus_target() -> StateVector {
    ghz_state(vec![QubitLabel::new(NM_520, "A"), QubitLabel::new(NM_520, "A'")]).unwrap()
}
