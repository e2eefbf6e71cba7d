//! Per-time records of every diagnostic and the column sets of each figure.

use rayon::prelude::*;

use super::table::Table;
use crate::analog_search::{closed_form_state, success_probability, success_rate, SearchParams};
use crate::coherence::coherence_closed_form;
use crate::entanglement::{
    concurrence_one_vs_rest_closed, concurrence_rate_closed, pair_concurrence_closed,
    rdm_eigvals_closed,
};
use crate::error::Result;
use crate::grover_discrete::grover_trace;
use crate::monogamy::{ckw_check, monogamy_score_closed};
use crate::qmath::{spectrum_entropy, LogBase};

pub const SWEEP_COLUMNS: [&str; 10] = [
    "t",
    "P",
    "C_l1",
    "C_r",
    "S_ent",
    "C_1_rest",
    "dC_dt",
    "C_pair",
    "delta_C",
    "delta_EoF2",
];

/// Entanglement fields are `None` unless the start state is uniform and the
/// register has at least two qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub t: f64,
    pub p: f64,
    pub c_l1: f64,
    pub c_r: f64,
    pub s_ent: Option<f64>,
    pub c_1_rest: Option<f64>,
    pub dc_dt: Option<f64>,
    pub c_pair: Option<f64>,
    pub delta_c: Option<f64>,
    pub delta_eof2: Option<f64>,
}

impl SweepRecord {
    pub fn values(&self) -> [Option<f64>; 10] {
        [
            Some(self.t),
            Some(self.p),
            Some(self.c_l1),
            Some(self.c_r),
            self.s_ent,
            self.c_1_rest,
            self.dc_dt,
            self.c_pair,
            self.delta_c,
            self.delta_eof2,
        ]
    }

    pub fn get(&self, column: &str) -> Option<f64> {
        let j = SWEEP_COLUMNS.iter().position(|c| *c == column)?;
        self.values()[j]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Applies to `C_r` and `S_ent`; entanglement of formation stays in bits.
    pub log_base: LogBase,
    /// Report `C(A|rest) - Σ C(AB)` instead of the squared score.
    pub unsquared_monogamy: bool,
}

pub fn has_register_picture(p: &SearchParams) -> bool {
    p.is_uniform() && p.n_qubits() >= 2
}

pub fn sweep_record(p: &SearchParams, t: f64, opts: &SweepOptions) -> Result<SweepRecord> {
    let coh = coherence_closed_form(p, t, opts.log_base)?;
    let mut rec = SweepRecord {
        t,
        p: success_probability(p, t)?,
        c_l1: coh.l1,
        c_r: coh.rel_ent,
        s_ent: None,
        c_1_rest: None,
        dc_dt: None,
        c_pair: None,
        delta_c: None,
        delta_eof2: None,
    };
    if !has_register_picture(p) {
        return Ok(rec);
    }
    let (lp, lm) = rdm_eigvals_closed(p, t)?;
    let c1 = concurrence_one_vs_rest_closed(p, t)?;
    let cp = pair_concurrence_closed(p, t)?;
    rec.s_ent = Some(spectrum_entropy(&[lp, lm], opts.log_base));
    rec.c_1_rest = Some(c1);
    rec.dc_dt = Some(concurrence_rate_closed(p, t)?);
    rec.c_pair = Some(cp);
    rec.delta_c = Some(if opts.unsquared_monogamy {
        c1 - (p.n_qubits() - 1) as f64 * cp
    } else {
        monogamy_score_closed(p, t)?
    });
    rec.delta_eof2 = Some(ckw_check(&closed_form_state(p, t)?, 0)?.delta_eof_sq);
    Ok(rec)
}

/// Records for every time, computed in parallel and returned in input order.
pub fn sweep(p: &SearchParams, times: &[f64], opts: &SweepOptions) -> Result<Vec<SweepRecord>> {
    times
        .par_iter()
        .map(|&t| sweep_record(p, t, opts))
        .collect()
}

pub fn sweep_table(records: &[SweepRecord]) -> Table {
    let mut table = Table::new(SWEEP_COLUMNS);
    for r in records {
        table.push(r.values().to_vec());
    }
    table
}

/// Picks `columns` out of the records; `dP_dt` is the analytic derivative.
pub fn select(p: &SearchParams, records: &[SweepRecord], columns: &[&str]) -> Result<Table> {
    let mut table = Table::new(columns.iter().copied());
    for r in records {
        let mut row = Vec::with_capacity(columns.len());
        for &col in columns {
            row.push(match col {
                "dP_dt" => Some(success_rate(p, r.t)?),
                other => r.get(other),
            });
        }
        table.push(row);
    }
    Ok(table)
}

pub const DISCRETE_COLUMNS: [&str; 4] = ["k", "P", "C_1_rest", "dC"];

/// Discrete Grover rows with the forward difference `C(k+1) - C(k)`; the last
/// row has no difference.
pub fn discrete_table(p: &SearchParams, k_max: usize) -> Result<Table> {
    let trace = grover_trace(p, k_max)?;
    let rate = trace.rate();
    let mut table = Table::new(DISCRETE_COLUMNS);
    for (i, row) in trace.rows.iter().enumerate() {
        table.push(vec![
            Some(row.k as f64),
            Some(row.success_prob),
            Some(row.concurrence),
            rate.get(i).map(|r| r.1),
        ]);
    }
    Ok(table)
}
