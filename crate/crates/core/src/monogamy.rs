//! CKW monogamy of squared concurrence and of squared entanglement of
//! formation, one anchor qubit against every other qubit.

use crate::analog_search::{check_time, SearchParams};
use crate::entanglement::{eof_from_concurrence, pair_concurrence, tangle};
use crate::error::{Error, Result};
use crate::qmath::{Bipartition, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct MonogamyReport {
    pub t: f64,
    /// `C²(A|rest)`, the tangle of the anchor against everything else.
    pub c_sq_one_vs_rest: f64,
    /// `Σ_j C²(ρ_Aj)`.
    pub sum_pair_c_sq: f64,
    pub delta_c: f64,
    /// `E_f²(A|rest) - Σ_j E_f²(ρ_Aj)`.
    pub delta_eof_sq: f64,
    /// `C(A|rest) - Σ_j C(ρ_Aj)`, which is not a monotone bound and may be negative.
    pub delta_c_unsquared: f64,
}

impl MonogamyReport {
    pub fn at(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

/// CKW check with `anchor` as party A.
pub fn ckw_check(psi: &StateVector, anchor: usize) -> Result<MonogamyReport> {
    let n = psi.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits {
            what: "monogamy check",
            min: 2,
            got: n,
        });
    }
    let tau = tangle(psi, &Bipartition::single(n, anchor)?)?;
    let c_rest = tau.sqrt();
    let eof_rest = eof_from_concurrence(c_rest.min(1.0))?;
    let (mut sum_c, mut sum_c_sq, mut sum_eof_sq) = (0.0, 0.0, 0.0);
    for j in (0..n).filter(|&j| j != anchor) {
        let cc = pair_concurrence(psi, anchor, j)?;
        sum_c += cc;
        sum_c_sq += cc * cc;
        sum_eof_sq += eof_from_concurrence(cc.min(1.0))?.powi(2);
    }
    Ok(MonogamyReport {
        t: 0.0,
        c_sq_one_vs_rest: tau,
        sum_pair_c_sq: sum_c_sq,
        delta_c: tau - sum_c_sq,
        delta_eof_sq: eof_rest * eof_rest - sum_eof_sq,
        delta_c_unsquared: c_rest - sum_c,
    })
}

/// `((N-2)/(2N) - log2(N/2)/N) sin²(2Et/sqrt(N))`.
pub fn monogamy_score_closed(p: &SearchParams, t: f64) -> Result<f64> {
    if !p.is_uniform() {
        return Err(Error::NotUniform);
    }
    if p.n_qubits() < 2 {
        return Err(Error::TooFewQubits {
            what: "monogamy score",
            min: 2,
            got: p.n_qubits(),
        });
    }
    check_time(t)?;
    let n = p.dim() as f64;
    let pref = (n - 2.0) / (2.0 * n) - (p.n_qubits() - 1) as f64 / n;
    Ok(pref * (2.0 * p.phase(t)).sin().powi(2))
}

/// Squared-EoF monogamy score with qubit 0 as the anchor.
pub fn monogamy_score_eof_sq(psi: &StateVector) -> Result<f64> {
    Ok(ckw_check(psi, 0)?.delta_eof_sq)
}
