//! Entanglement entropy, tangle, Wootters concurrence and entanglement of
//! formation, with the closed forms that hold along the analog search
//! trajectory on the uniform register (`x = 1/sqrt(N)`).

use nalgebra::SVD;

use crate::analog_search::{evolve_closed_form, SearchParams};
use crate::error::{Error, Result};
use crate::qmath::{
    binary_entropy, c, coefficient_matrix, hermitian_eigh, outer, reduced_state, sigma_yy,
    spectrum_entropy, Bipartition, CMatrix, DensityMatrix, LogBase, StateVector, PSD_TOL,
};

/// Eigenvalues of a two-qubit density matrix below this are indistinguishable
/// from eigensolver roundoff and are dropped from its square-root factor.
pub const RANK_FLOOR: f64 = 1e-14;

fn require_uniform(p: &SearchParams) -> Result<()> {
    if !p.is_uniform() {
        return Err(Error::NotUniform);
    }
    Ok(())
}

fn require_qubits(p: &SearchParams, what: &'static str, min: usize) -> Result<()> {
    if p.n_qubits() < min {
        return Err(Error::TooFewQubits {
            what,
            min,
            got: p.n_qubits(),
        });
    }
    Ok(())
}

/// `2Et/sqrt(N)`, the argument shared by every entanglement closed form.
#[inline]
fn double_phase(p: &SearchParams, t: f64) -> f64 {
    2.0 * p.phase(t)
}

/// Closed-form reduced state of one qubit of the embedded search state.
///
/// With `q = (N-2)|β|²/(2N-2)` and the marked bit of `qubit` equal to zero,
/// `ρ = [[|α|² + q, αβ*/sqrt(N-1) + q], [α*β/sqrt(N-1) + q, N|β|²/(2N-2)]]`.
/// A marked bit equal to one swaps the two basis states.
pub fn single_qubit_rdm_closed(p: &SearchParams, t: f64, qubit: usize) -> Result<DensityMatrix> {
    require_uniform(p)?;
    require_qubits(p, "single-qubit reduced state", 2)?;
    if qubit >= p.n_qubits() {
        return Err(Error::InvalidBipartition(format!(
            "qubit {qubit} out of range for {} qubits",
            p.n_qubits()
        )));
    }
    let s = evolve_closed_form(p, t)?;
    let n = p.dim() as f64;
    let b2 = s.beta.norm_sqr();
    let shared = (n - 2.0) * b2 / (2.0 * n - 2.0);
    let diag0 = s.alpha.norm_sqr() + shared;
    let diag1 = n * b2 / (2.0 * n - 2.0);
    let off = s.alpha * s.beta.conj() / (n - 1.0).sqrt() + shared;
    let marked_bit = (p.marked() >> (p.n_qubits() - 1 - qubit)) & 1;
    let m = if marked_bit == 0 {
        CMatrix::from_row_slice(2, 2, &[c(diag0, 0.0), off, off.conj(), c(diag1, 0.0)])
    } else {
        CMatrix::from_row_slice(2, 2, &[c(diag1, 0.0), off.conj(), off, c(diag0, 0.0)])
    };
    Ok(DensityMatrix::trusted(m))
}

/// Closed-form eigenvalues `(λ+, λ-)` of any single-qubit reduced state:
/// `(2N ± sqrt(N((N-2) cos(4Et/sqrt(N)) + 3N + 2))) / 4N`.
pub fn rdm_eigvals_closed(p: &SearchParams, t: f64) -> Result<(f64, f64)> {
    require_uniform(p)?;
    crate::analog_search::check_time(t)?;
    let n = p.dim() as f64;
    let arg = 2.0 * double_phase(p, t);
    let root = (n * ((n - 2.0) * arg.cos() + 3.0 * n + 2.0))
        .max(0.0)
        .sqrt();
    Ok(((2.0 * n + root) / (4.0 * n), (2.0 * n - root) / (4.0 * n)))
}

/// Reduced state on whichever side of the cut is smaller.
fn smaller_side(psi: &StateVector, part: &Bipartition) -> Result<DensityMatrix> {
    if psi.n_qubits() != part.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << part.n_qubits(),
            got: psi.dim(),
        });
    }
    if 2 * part.kept().len() <= part.n_qubits() {
        reduced_state(psi, part)
    } else {
        reduced_state(psi, &part.complement())
    }
}

/// Von Neumann entropy of either reduced state of a pure state.
pub fn entanglement_entropy(psi: &StateVector, part: &Bipartition, base: LogBase) -> Result<f64> {
    let rho = smaller_side(psi, part)?;
    Ok(spectrum_entropy(&rho.eigvals(), base))
}

/// Largest smaller-side dimension for which the tangle is taken from minors
/// rather than from the purity.
const MAX_MINOR_DIM: usize = 32;

/// `τ = 2(1 - Tr ρ_A²)` for a pure state.
///
/// Evaluated as `4 Σ |det R_{ij,ab}|²` over the 2×2 minors of the triangular
/// factor of `M† = QR`, where `M` is the coefficient matrix of the smaller
/// side, so `M M† = R†R`. Unlike `1 - Tr ρ²` this keeps relative precision
/// near product states. Large cuts fall back to the purity.
pub fn tangle(psi: &StateVector, part: &Bipartition) -> Result<f64> {
    if psi.n_qubits() != part.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << part.n_qubits(),
            got: psi.dim(),
        });
    }
    let small_dim = 1usize << part.kept().len().min(part.n_qubits() - part.kept().len());
    if small_dim > MAX_MINOR_DIM {
        let rho = smaller_side(psi, part)?;
        return Ok((2.0 * (1.0 - rho.purity())).max(0.0));
    }
    psi.check_normalized()?;
    let small = if 2 * part.kept().len() <= part.n_qubits() {
        part.clone()
    } else {
        part.complement()
    };
    let r = coefficient_matrix(psi, &small)?.adjoint().qr().r();
    let d = r.nrows().min(r.ncols());
    let mut sum = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            for a in 0..r.ncols() {
                for b in a + 1..r.ncols() {
                    sum += (r[(i, a)] * r[(j, b)] - r[(i, b)] * r[(j, a)]).norm_sqr();
                }
            }
        }
    }
    Ok(4.0 * sum / psi.norm().powi(4))
}

/// Concurrence across a cut of a pure state, `sqrt(τ)`.
pub fn concurrence_across(psi: &StateVector, part: &Bipartition) -> Result<f64> {
    Ok(tangle(psi, part)?.sqrt())
}

/// One qubit against the rest: `sqrt((N-2)/(2N)) |sin(2Et/sqrt(N))|`.
/// A single qubit has no cut, and the prefactor makes that case zero.
pub fn concurrence_one_vs_rest_closed(p: &SearchParams, t: f64) -> Result<f64> {
    require_uniform(p)?;
    crate::analog_search::check_time(t)?;
    let n = p.dim() as f64;
    Ok(((n - 2.0) / (2.0 * n)).sqrt() * double_phase(p, t).sin().abs())
}

/// `(E sqrt(2(N-2)) / N) cos(2Et/sqrt(N))`, the time derivative of the signed
/// one-vs-rest concurrence `sqrt((N-2)/(2N)) sin(2Et/sqrt(N))`.
pub fn concurrence_rate_closed(p: &SearchParams, t: f64) -> Result<f64> {
    require_uniform(p)?;
    crate::analog_search::check_time(t)?;
    let n = p.dim() as f64;
    Ok(p.energy() * (2.0 * (n - 2.0)).sqrt() / n * double_phase(p, t).cos())
}

/// Large-register approximation of the rate at `t = 0`, `E sqrt(2/N)`.
pub fn concurrence_rate_asymptotic(p: &SearchParams) -> f64 {
    p.energy() * (2.0 / p.dim() as f64).sqrt()
}

/// Descending square roots of the eigenvalues of `ργ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairEigs {
    pub lambdas: [f64; 4],
}

impl PairEigs {
    /// `max(λ1 - λ2 - λ3 - λ4, 0)`.
    pub fn concurrence(&self) -> f64 {
        let [l1, l2, l3, l4] = self.lambdas;
        (l1 - l2 - l3 - l4).max(0.0)
    }
}

/// Wootters λ's of a two-qubit state.
///
/// Writing `ρ = B B†` with `B = V sqrt(Λ)` from the eigendecomposition, the
/// eigenvalues of `ργ` are the squared singular values of the complex
/// symmetric `T = Bᵀ (σy⊗σy) B`; taking singular values directly avoids a
/// square root of roundoff-level eigenvalues.
pub fn wootters_lambdas(rho: &DensityMatrix) -> Result<PairEigs> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let (mu, v) = hermitian_eigh(rho.matrix())?;
    if let Some(&min) = mu.last() {
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
    }
    let b = CMatrix::from_fn(4, 4, |i, j| {
        let m = mu[j];
        if m > RANK_FLOOR {
            v[(i, j)] * m.sqrt()
        } else {
            c(0.0, 0.0)
        }
    });
    let t = b.transpose() * sigma_yy() * &b;
    let mut sv: Vec<f64> = SVD::new(t, false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(PairEigs {
        lambdas: [sv[0], sv[1], sv[2], sv[3]],
    })
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    Ok(wootters_lambdas(rho)?.concurrence())
}

/// Concurrence of the reduced state of qubits `a` and `b`.
pub fn pair_concurrence(psi: &StateVector, a: usize, b: usize) -> Result<f64> {
    if psi.n_qubits() == 2 && a != b && a.max(b) < 2 {
        return wootters_concurrence(&outer(psi)?);
    }
    let part = Bipartition::pair(psi.n_qubits(), a, b)?;
    wootters_concurrence(&reduced_state(psi, &part)?)
}

/// Any two qubits of the embedded search state: `|sin(2Et/sqrt(N))| / sqrt(N)`.
pub fn pair_concurrence_closed(p: &SearchParams, t: f64) -> Result<f64> {
    require_uniform(p)?;
    require_qubits(p, "pair concurrence", 2)?;
    crate::analog_search::check_time(t)?;
    Ok(double_phase(p, t).sin().abs() / (p.dim() as f64).sqrt())
}

/// Closed-form Wootters λ's of any pair:
/// `((sqrt(N) ± 2) / (4 sqrt(N))) |sin(2Et/sqrt(N))|` and two zeros.
pub fn pair_lambdas_closed(p: &SearchParams, t: f64) -> Result<PairEigs> {
    require_uniform(p)?;
    require_qubits(p, "pair concurrence", 2)?;
    crate::analog_search::check_time(t)?;
    let rn = (p.dim() as f64).sqrt();
    let s = double_phase(p, t).sin().abs();
    Ok(PairEigs {
        lambdas: [
            (rn + 2.0) / (4.0 * rn) * s,
            (rn - 2.0) / (4.0 * rn) * s,
            0.0,
            0.0,
        ],
    })
}

/// Two-qubit entanglement of formation, `H((1 + sqrt(1 - C²)) / 2)` in bits.
pub fn eof_from_concurrence(concurrence: f64) -> Result<f64> {
    if !concurrence.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&concurrence) {
        return Err(Error::ConcurrenceOutOfRange(concurrence));
    }
    let cc = concurrence.clamp(0.0, 1.0);
    let arg = 0.5 * (1.0 + (1.0 - cc * cc).max(0.0).sqrt());
    Ok(binary_entropy(arg, LogBase::Two))
}
