//! Dense complex linear algebra for small qubit registers.
//!
//! Conventions used throughout the crate:
//!
//! * qubit 0 is the most significant bit of a computational-basis index, so
//!   for `n` qubits the bit of qubit `q` in index `i` is `(i >> (n - 1 - q)) & 1`;
//! * entropies are reported in bits unless a [`LogBase`] says otherwise;
//! * eigenvalues in `[-1e-10, 0)` are treated as zero before any `log` or `sqrt`.

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Largest tolerated deviation of a state norm from one.
pub const NORM_TOL: f64 = 1e-8;
/// Largest tolerated entrywise deviation from Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Largest tolerated deviation of a density-matrix trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` are accepted as non-negative.
pub const PSD_TOL: f64 = 1e-10;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Unit of the logarithm used for entropies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    /// Bits.
    #[default]
    Two,
    /// Nats.
    E,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }

    /// Factor converting an entropy measured in bits into this unit.
    #[inline]
    pub fn from_bits(self) -> f64 {
        match self {
            LogBase::Two => 1.0,
            LogBase::E => std::f64::consts::LN_2,
        }
    }
}

/// Returns `n` such that `dim == 2^n`.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Pure state of an `n`-qubit register.
///
/// The amplitudes are not required to be normalized at construction; the
/// operations that need a physical state check the norm themselves.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        qubit_count(amps.len())?;
        Ok(Self { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| c(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    /// Equal superposition over all `2^n` basis states.
    pub fn uniform(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let a = (dim as f64).sqrt().recip();
        Self {
            amps: vec![c(a, 0.0); dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
        self
    }

    pub fn check_normalized(&self) -> Result<()> {
        let dev = (self.norm() - 1.0).abs();
        if dev > NORM_TOL || !dev.is_finite() {
            return Err(Error::NotNormalized(dev));
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`; `self` holds the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        StateVector { amps }
    }

    pub fn as_column(&self) -> CMatrix {
        CMatrix::from_column_slice(self.dim(), 1, &self.amps)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_hermitian(&m)?;
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne(tr));
        }
        let eigs = hermitian_eigvals(&m)?;
        let min = eigs.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix that is a density matrix by construction.
    pub(crate) fn trusted(m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        Self { m }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim) / c(dim as f64, 0.0),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρρ) = Σ_ij |ρ_ij|² for Hermitian ρ.
        self.m.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Dephased state `ρ_diag` in the current basis.
    pub fn dephased(&self) -> DensityMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = c(self.m[(i, i)].re, 0.0);
        }
        DensityMatrix { m }
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    /// Eigenvalues in descending order.
    pub fn eigvals(&self) -> Vec<f64> {
        sorted_eigh(&self.m, false).0
    }
}

/// Subsystem selection for partial traces: the qubits listed in `kept`
/// survive, all others are traced out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    n_qubits: usize,
    kept: Vec<usize>,
}

impl Bipartition {
    pub fn new(n_qubits: usize, kept: Vec<usize>) -> Result<Self> {
        if kept.is_empty() {
            return Err(Error::InvalidBipartition("kept set is empty".into()));
        }
        if kept.len() >= n_qubits {
            return Err(Error::InvalidBipartition(format!(
                "kept set of size {} is not a proper subset of {} qubits",
                kept.len(),
                n_qubits
            )));
        }
        if kept.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidBipartition(
                "kept indices must be strictly increasing".into(),
            ));
        }
        if let Some(&q) = kept.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidBipartition(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, kept })
    }

    pub fn single(n_qubits: usize, qubit: usize) -> Result<Self> {
        Self::new(n_qubits, vec![qubit])
    }

    /// Keeps two qubits, given in any order.
    pub fn pair(n_qubits: usize, a: usize, b: usize) -> Result<Self> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Self::new(n_qubits, vec![lo, hi])
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn traced(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|q| !self.kept.contains(q))
            .collect()
    }

    pub fn complement(&self) -> Bipartition {
        Bipartition {
            n_qubits: self.n_qubits,
            kept: self.traced(),
        }
    }

    /// Full-register indices of every kept-subsystem index, and likewise for
    /// the traced subsystem. The full index is `kept[a] | traced[b]`.
    fn scatter_tables(&self) -> (Vec<usize>, Vec<usize>) {
        (
            scatter(self.n_qubits, &self.kept),
            scatter(self.n_qubits, &self.traced()),
        )
    }
}

fn scatter(n: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|a| {
            qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                let bit = (a >> (k - 1 - j)) & 1;
                acc | (bit << (n - 1 - q))
            })
        })
        .collect()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `|ψ⟩⟨ψ|`.
pub fn outer(psi: &StateVector) -> Result<DensityMatrix> {
    psi.check_normalized()?;
    let d = psi.dim();
    let a = psi.amplitudes();
    let m = CMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj());
    Ok(DensityMatrix { m })
}

/// Traces out every qubit not kept by `part`.
pub fn partial_trace(rho: &DensityMatrix, part: &Bipartition) -> Result<DensityMatrix> {
    let expected = 1usize << part.n_qubits;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: rho.dim(),
        });
    }
    let (kept, traced) = part.scatter_tables();
    let m = &rho.m;
    let out = CMatrix::from_fn(kept.len(), kept.len(), |a, a2| {
        traced.iter().map(|&b| m[(kept[a] | b, kept[a2] | b)]).sum()
    });
    Ok(DensityMatrix { m: out })
}

/// Reduced state of a pure state; equal to `partial_trace(outer(psi), part)`
/// without forming the full density matrix.
pub fn reduced_state(psi: &StateVector, part: &Bipartition) -> Result<DensityMatrix> {
    let expected = 1usize << part.n_qubits;
    if psi.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: psi.dim(),
        });
    }
    psi.check_normalized()?;
    let (kept, traced) = part.scatter_tables();
    let amps = psi.amplitudes();
    let dk = kept.len();
    let mut out = CMatrix::zeros(dk, dk);
    for &b in &traced {
        for a in 0..dk {
            let x = amps[kept[a] | b];
            for a2 in 0..=a {
                out[(a, a2)] += x * amps[kept[a2] | b].conj();
            }
        }
    }
    for a in 0..dk {
        for a2 in 0..a {
            out[(a2, a)] = out[(a, a2)].conj();
        }
    }
    Ok(DensityMatrix { m: out })
}

/// Amplitudes of a pure state reshaped to `kept × traced`, so that
/// `reduced_state = M M†`.
pub fn coefficient_matrix(psi: &StateVector, part: &Bipartition) -> Result<CMatrix> {
    let expected = 1usize << part.n_qubits;
    if psi.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: psi.dim(),
        });
    }
    let (kept, traced) = part.scatter_tables();
    let amps = psi.amplitudes();
    Ok(CMatrix::from_fn(kept.len(), traced.len(), |a, b| {
        amps[kept[a] | traced[b]]
    }))
}

pub fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if dev > HERMITIAN_TOL || !dev.is_finite() {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

fn sorted_eigh(m: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = m.nrows();
    if n == 1 {
        return (
            vec![m[(0, 0)].re],
            want_vectors.then(|| CMatrix::identity(1, 1)),
        );
    }
    let sym = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors =
        want_vectors.then(|| CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]));
    (values, vectors)
}

/// Real eigenvalues of a Hermitian matrix, in descending order.
pub fn hermitian_eigvals(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(sorted_eigh(m, false).0)
}

/// Eigenvalues (descending) and the matching orthonormal eigenvectors as
/// columns.
pub fn hermitian_eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m)?;
    let (values, vectors) = sorted_eigh(m, true);
    Ok((values, vectors.expect("eigenvectors requested")))
}

/// Shannon entropy of a spectrum; values are clamped to `[0, 1]` and
/// `0 log 0 = 0`.
pub fn spectrum_entropy(values: &[f64], base: LogBase) -> f64 {
    values
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * base.log(p))
        .sum::<f64>()
        .max(0.0)
}

/// `H(p) = -p log p - (1-p) log(1-p)`.
pub fn binary_entropy(p: f64, base: LogBase) -> f64 {
    let p = p.clamp(0.0, 1.0);
    spectrum_entropy(&[p, 1.0 - p], base)
}

pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> f64 {
    spectrum_entropy(&rho.eigvals(), base)
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

/// `σ_y ⊗ σ_y`, which is real.
pub fn sigma_yy() -> CMatrix {
    let y = pauli_y();
    kron(&y, &y)
}

/// Spin-flipped state `(σ_y⊗σ_y) ρ* (σ_y⊗σ_y)` of a two-qubit density matrix.
pub fn spin_flip(rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let yy = sigma_yy();
    let m = &yy * rho.m.conjugate() * &yy;
    Ok(DensityMatrix { m })
}

/// `½ Σ |eig(ρ - σ)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let diff = &rho.m - &sigma.m;
    Ok(0.5
        * sorted_eigh(&diff, false)
            .0
            .iter()
            .map(|e| e.abs())
            .sum::<f64>())
}

/// Trace distance between two pure states, `sqrt(1 - |⟨a|b⟩|²)`.
pub fn trace_distance_pure(a: &StateVector, b: &StateVector) -> Result<f64> {
    a.check_normalized()?;
    b.check_normalized()?;
    let ov = a.inner(b)?.norm_sqr();
    Ok((1.0 - ov).max(0.0).sqrt())
}
