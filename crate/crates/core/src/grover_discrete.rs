//! Circuit-model Grover iteration (oracle sign flip, then inversion about the
//! mean) and its one-vs-rest concurrence per iteration.

use crate::analog_search::SearchParams;
use crate::entanglement::concurrence_across;
use crate::error::{Error, Result};
use crate::qmath::{Bipartition, StateVector};

/// One oracle-then-diffusion iteration: `ψ_w → -ψ_w`, then `ψ → 2⟨s|ψ⟩|s⟩ - ψ`.
pub fn grover_step(psi: &StateVector, marked: usize) -> Result<StateVector> {
    let dim = psi.dim();
    if marked >= dim {
        return Err(Error::MarkedOutOfRange { marked, dim });
    }
    let mut amps = psi.amplitudes().to_vec();
    amps[marked] = -amps[marked];
    let mean = amps.iter().sum::<crate::qmath::C64>() / dim as f64;
    for a in &mut amps {
        *a = mean * 2.0 - *a;
    }
    StateVector::new(amps)
}

/// `arcsin(1/sqrt(N))`, the rotation half-angle per iteration.
pub fn rotation_angle(n_qubits: usize) -> f64 {
    (1.0 / ((1usize << n_qubits) as f64).sqrt()).asin()
}

/// `⟨w|ψ_k⟩ = sin((2k+1)θ)`.
pub fn marked_amplitude_closed(n_qubits: usize, k: usize) -> f64 {
    ((2 * k + 1) as f64 * rotation_angle(n_qubits)).sin()
}

/// `round(π sqrt(N)/4 - 1/2)`.
pub fn optimal_iterations(n_qubits: usize) -> usize {
    let n = (1usize << n_qubits) as f64;
    (std::f64::consts::PI * n.sqrt() / 4.0 - 0.5)
        .round()
        .max(0.0) as usize
}

/// One-vs-rest concurrence after `k` iterations:
/// `sqrt(2N(N-2))/(N-1) |cos Θ sin(Θ - θ)|` with `Θ = (2k+1)θ`.
pub fn discrete_concurrence_closed(n_qubits: usize, k: usize) -> f64 {
    let n = (1usize << n_qubits) as f64;
    let theta = rotation_angle(n_qubits);
    let big = (2 * k + 1) as f64 * theta;
    (2.0 * n * (n - 2.0)).sqrt() / (n - 1.0) * (big.cos() * (big - theta).sin()).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct GroverRow {
    pub k: usize,
    pub success_prob: f64,
    pub concurrence: f64,
    pub marked_amplitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroverTrace {
    pub rows: Vec<GroverRow>,
}

impl GroverTrace {
    /// `ΔC(k) = C(k+1) - C(k)` for every `k` but the last.
    pub fn rate(&self) -> Vec<(usize, f64)> {
        self.rows
            .windows(2)
            .map(|w| (w[0].k, w[1].concurrence - w[0].concurrence))
            .collect()
    }
}

/// Iterates from the uniform state `k_max` times. Concurrence is qubit 0
/// against the rest and is zero for a single qubit.
pub fn grover_trace(p: &SearchParams, k_max: usize) -> Result<GroverTrace> {
    if k_max == 0 {
        return Err(Error::InvalidParams("k_max must be at least 1".into()));
    }
    if !p.is_uniform() {
        return Err(Error::NotUniform);
    }
    let n = p.n_qubits();
    let cut = if n >= 2 {
        Some(Bipartition::single(n, 0)?)
    } else {
        None
    };
    let mut psi = StateVector::uniform(n);
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            psi = grover_step(&psi, p.marked())?;
        }
        let amp = psi.amplitude(p.marked());
        let concurrence = match &cut {
            Some(cut) => concurrence_across(&psi, cut)?,
            None => 0.0,
        };
        rows.push(GroverRow {
            k,
            success_prob: amp.norm_sqr().min(1.0),
            concurrence,
            marked_amplitude: amp.re,
        });
    }
    Ok(GroverTrace { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::C64;
    use proptest::prelude::*;

    #[test]
    fn four_items_in_one_step() {
        let s = StateVector::uniform(2);
        let out = grover_step(&s, 0).unwrap();
        assert!((out.amplitude(0).norm_sqr() - 1.0).abs() < 1e-15);
        let out = grover_step(&s, 3).unwrap();
        assert!((out.amplitude(3).norm_sqr() - 1.0).abs() < 1e-15);
        assert!(grover_step(&s, 4).is_err());
    }

    #[test]
    fn trace_examples() {
        let p = SearchParams::uniform(2, 1.0).unwrap();
        let tr = grover_trace(&p, 6).unwrap();
        assert_eq!(tr.rows[0].success_prob, 0.25);
        assert!(tr.rows[0].concurrence < 1e-15);
        assert!((tr.rows[1].success_prob - 1.0).abs() < 1e-15);
        assert!(tr.rows[1].concurrence <= 1e-10);
        let c: Vec<f64> = tr.rows.iter().map(|r| r.concurrence).collect();
        assert!((c[2] - 1.0).abs() < 1e-12 && c[3] < 1e-10);
        assert!((tr.rows[2].success_prob - 0.25).abs() < 1e-12);
        assert!(grover_trace(&p, 0).is_err());
        let skew = SearchParams::with_overlap(2, 1.0, 0.1).unwrap();
        assert!(grover_trace(&skew, 2).is_err());
        let single = grover_trace(&SearchParams::uniform(1, 1.0).unwrap(), 3).unwrap();
        assert!(single.rows.iter().all(|r| r.concurrence == 0.0));
    }

    #[test]
    fn amplitude_follows_rotation() {
        for n in 1..=10 {
            let p = SearchParams::uniform(n, 1.0)
                .unwrap()
                .with_marked((1 << n) - 1)
                .unwrap();
            let tr = grover_trace(&p, 3 * optimal_iterations(n) + 3).unwrap();
            for r in &tr.rows {
                assert!(
                    (r.marked_amplitude - marked_amplitude_closed(n, r.k)).abs() < 1e-10,
                    "n={n} k={}",
                    r.k
                );
            }
        }
    }

    #[test]
    fn optimal_count_succeeds() {
        for n in 1..=12 {
            let k = optimal_iterations(n);
            let p = SearchParams::uniform(n, 1.0).unwrap();
            let tr = grover_trace(&p, k.max(1)).unwrap();
            let nn = (1usize << n) as f64;
            assert!(
                tr.rows[k].success_prob >= 1.0 - 1.0 / nn - 1e-12,
                "n={n} k={k}"
            );
        }
        assert_eq!(optimal_iterations(2), 1);
        assert_eq!(optimal_iterations(10), 25);
    }

    #[test]
    fn concurrence_matches_discrete_closed_form() {
        for n in 2..=9 {
            let p = SearchParams::uniform(n, 1.0).unwrap();
            let tr = grover_trace(&p, 2 * optimal_iterations(n) + 2).unwrap();
            for r in &tr.rows {
                assert!(
                    (r.concurrence - discrete_concurrence_closed(n, r.k)).abs() < 1e-10,
                    "n={n} k={}",
                    r.k
                );
            }
        }
    }

    #[test]
    fn rate_changes_sign_at_peak() {
        for n in 2..=10 {
            let p = SearchParams::uniform(n, 1.0).unwrap();
            let ks = optimal_iterations(n);
            let tr = grover_trace(&p, ks + 2).unwrap();
            let rate = tr.rate();
            let peak = tr
                .rows
                .iter()
                .take(ks + 2)
                .max_by(|a, b| a.success_prob.total_cmp(&b.success_prob))
                .unwrap()
                .k;
            assert_eq!(peak, ks);
            assert!(rate[ks - 1].1 <= 1e-10, "n={n} {rate:?}");
            assert!(rate[ks].1 > 0.0, "n={n} {rate:?}");
        }
    }

    #[test]
    fn analog_rate_has_the_same_sign_pattern() {
        use crate::analog_search::peak_time;
        use crate::entanglement::concurrence_rate_closed;
        for n in 2..=8 {
            let p = SearchParams::uniform(n, 1.0).unwrap();
            let tm = peak_time(&p);
            let slope = |t: f64| {
                (2.0 * p.phase(t)).sin().signum() * concurrence_rate_closed(&p, t).unwrap()
            };
            assert!(slope(0.9 * tm) < 0.0 && slope(1.1 * tm) > 0.0);
            assert!(slope(0.01 * tm) > 0.0);
            let rate = grover_trace(&p, optimal_iterations(n) + 1).unwrap().rate();
            let ks = optimal_iterations(n);
            assert!(rate[ks - 1].1 <= 1e-10 && rate[ks].1 > 0.0);
        }
    }

    #[test]
    fn iterates_stay_in_the_search_plane() {
        let p = SearchParams::uniform(6, 1.0)
            .unwrap()
            .with_marked(17)
            .unwrap();
        let mut psi = StateVector::uniform(6);
        for _ in 0..20 {
            psi = grover_step(&psi, 17).unwrap();
            let other = psi.amplitude(0);
            for (i, a) in psi.amplitudes().iter().enumerate() {
                if i != p.marked() {
                    assert!((a - other).norm() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn step_preserves_norm(
            v in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
            w in 0usize..16,
        ) {
            let s = StateVector::new(v.into_iter().map(|(r, i)| C64::new(r, i)).collect()).unwrap();
            prop_assume!(s.norm() > 1e-3);
            let s = s.normalized();
            let out = grover_step(&s, w).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        }
    }
}
