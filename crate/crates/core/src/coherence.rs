//! l1-norm and relative-entropy coherence.
//!
//! Two reference bases show up: the `{|w⟩, |r⟩}` plane, where both monotones
//! are bounded by one and depend on the state only through `P`, and the full
//! computational basis of the register, where the uniform start state is
//! maximally coherent with l1 coherence `N - 1`.

use crate::analog_search::{check_time, SearchParams};
use crate::error::{Error, Result};
use crate::qmath::{
    binary_entropy, spectrum_entropy, von_neumann_entropy, DensityMatrix, LogBase, StateVector,
};

/// Slack allowed on probabilities that come out of floating-point formulas.
const PROB_SLACK: f64 = 1e-12;

/// Sum of the moduli of all off-diagonal entries.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = rho.dim();
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// l1 coherence of `|ψ⟩⟨ψ|` without forming it: `(Σ|ψ_i|)² - Σ|ψ_i|²`.
pub fn l1_coherence_pure(psi: &StateVector) -> Result<f64> {
    psi.check_normalized()?;
    let (sum, sum_sq) = psi
        .amplitudes()
        .iter()
        .fold((0.0, 0.0), |(s, q), a| (s + a.norm(), q + a.norm_sqr()));
    Ok((sum * sum - sum_sq).max(0.0))
}

/// `S(ρ_diag) - S(ρ)`.
pub fn rel_ent_coherence(rho: &DensityMatrix, base: LogBase) -> f64 {
    let diag = spectrum_entropy(&rho.populations(), base);
    (diag - von_neumann_entropy(rho, base)).max(0.0)
}

/// Relative-entropy coherence of a pure state, which is the Shannon entropy
/// of its populations.
pub fn rel_ent_coherence_pure(psi: &StateVector, base: LogBase) -> Result<f64> {
    psi.check_normalized()?;
    let pops: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    Ok(spectrum_entropy(&pops, base))
}

fn check_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-PROB_SLACK..=1.0 + PROB_SLACK).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `2 sqrt(P(1 - P))`.
pub fn l1_from_probability(p: f64) -> Result<f64> {
    let p = check_probability(p)?;
    Ok(2.0 * (p * (1.0 - p)).max(0.0).sqrt())
}

/// Binary entropy `H(P)`.
pub fn rel_ent_from_probability(p: f64, base: LogBase) -> Result<f64> {
    let p = check_probability(p)?;
    Ok(binary_entropy(p, base))
}

/// Both monotones at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coherence {
    pub l1: f64,
    pub rel_ent: f64,
}

/// Coherence of the evolved state in the `{|w⟩, |r⟩}` basis, evaluated as
/// functions of `t`:
///
/// `C_l1 = 2 |cos(Ext)| sqrt((1 - x²)(x² cos²(Ext) + sin²(Ext)))` and
/// `C_r = -a log a - b log b` with `a = (1 - x²) cos²(Ext)`, `b = x² cos²(Ext) + sin²(Ext)`.
pub fn coherence_closed_form(p: &SearchParams, t: f64, base: LogBase) -> Result<Coherence> {
    check_time(t)?;
    let (sin, cos) = p.phase(t).sin_cos();
    let x2 = p.overlap_sq();
    let cos2 = cos * cos;
    let unmarked = ((1.0 - x2) * cos2).max(0.0);
    let marked = (x2 * cos2 + sin * sin).max(0.0);
    let l1 = 2.0 * cos.abs() * ((1.0 - x2) * marked).max(0.0).sqrt();
    let xlogx = |v: f64| if v > 0.0 { -v * base.log(v) } else { 0.0 };
    Ok(Coherence {
        l1,
        rel_ent: (xlogx(unmarked) + xlogx(marked)).max(0.0),
    })
}

/// Full computational-basis l1 coherence of the embedded state,
/// `(|α| + sqrt(N - 1)|β|)² - 1`.
pub fn full_basis_l1_closed(p: &SearchParams, t: f64) -> Result<f64> {
    let s = crate::analog_search::evolve_closed_form(p, t)?;
    let spread = ((p.dim() - 1) as f64).sqrt() * s.beta.norm();
    Ok(((s.alpha.norm() + spread).powi(2) - 1.0).max(0.0))
}
