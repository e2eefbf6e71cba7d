//! Continuous-time search under `H = E|w⟩⟨w| + E|s⟩⟨s|`.
//!
//! The dynamics never leave the plane spanned by the marked state `|w⟩` and
//! `|r⟩ = (|s⟩ - x|w⟩)/sqrt(1 - x²)`, which is the uniform superposition of
//! every unmarked basis state. [`evolve_closed_form`] works in that plane;
//! [`NumericPropagator`] integrates the Schrödinger equation in the full
//! `2^n`-dimensional register and serves as an independent check.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::{c, CMatrix, DensityMatrix, StateVector, C64, I, NORM_TOL, ZERO};

/// Largest register the library will allocate.
pub const MAX_QUBITS: usize = 24;

/// Step used by the numeric propagator when none is given, in units of `1/E`.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Upper bound on `dt * E * sqrt(N)` accepted by the numeric propagator.
pub const MAX_STEP_BOUND: f64 = 0.1;

/// One search problem: register size, energy scale, overlap `x = ⟨s|w⟩` and
/// the marked index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchParams {
    n_qubits: usize,
    energy: f64,
    overlap: f64,
    #[serde(skip)]
    overlap_sq: f64,
    marked: usize,
    #[serde(skip)]
    uniform: bool,
}

impl SearchParams {
    /// Uniform start state over `N = 2^n` items, so `x = 1/sqrt(N)`, with the
    /// all-zeros string marked.
    pub fn uniform(n_qubits: usize, energy: f64) -> Result<Self> {
        check_register(n_qubits)?;
        check_energy(energy)?;
        let inv_dim = 1.0 / (1usize << n_qubits) as f64;
        Ok(Self {
            n_qubits,
            energy,
            overlap: inv_dim.sqrt(),
            overlap_sq: inv_dim,
            marked: 0,
            uniform: true,
        })
    }

    /// Arbitrary overlap `x` in `(0, 1]`. An overlap within `1e-12` of
    /// `1/sqrt(N)` is treated as the uniform start state.
    pub fn with_overlap(n_qubits: usize, energy: f64, overlap: f64) -> Result<Self> {
        let uniform = Self::uniform(n_qubits, energy)?;
        if !overlap.is_finite() || overlap <= 0.0 || overlap > 1.0 {
            return Err(Error::InvalidParams(format!(
                "overlap must lie in (0, 1], got {overlap}"
            )));
        }
        if (overlap - uniform.overlap).abs() <= 1e-12 {
            return Ok(uniform);
        }
        Ok(Self {
            overlap,
            overlap_sq: overlap * overlap,
            uniform: false,
            ..uniform
        })
    }

    pub fn with_marked(mut self, marked: usize) -> Result<Self> {
        if marked >= self.dim() {
            return Err(Error::MarkedOutOfRange {
                marked,
                dim: self.dim(),
            });
        }
        self.marked = marked;
        Ok(self)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    #[inline]
    pub fn energy(&self) -> f64 {
        self.energy
    }

    #[inline]
    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    /// `x²`; exactly `1/N` for the uniform start state.
    #[inline]
    pub fn overlap_sq(&self) -> f64 {
        self.overlap_sq
    }

    #[inline]
    pub fn marked(&self) -> usize {
        self.marked
    }

    /// Whether `x = 1/sqrt(N)`, i.e. the register picture applies.
    #[inline]
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// `sqrt(1 - x²)`.
    #[inline]
    pub fn complement(&self) -> f64 {
        (1.0 - self.overlap_sq).max(0.0).sqrt()
    }

    /// `E x t`, the rotation angle of the two-level dynamics.
    #[inline]
    pub fn phase(&self, t: f64) -> f64 {
        self.energy * self.overlap * t
    }
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidParams(format!(
            "number of qubits must lie in [1, {MAX_QUBITS}], got {n_qubits}"
        )));
    }
    Ok(())
}

fn check_energy(energy: f64) -> Result<()> {
    if !energy.is_finite() || energy <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "energy must be positive and finite, got {energy}"
        )));
    }
    Ok(())
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidTime(t));
    }
    Ok(())
}

/// Coefficients of `|w⟩` and `|r⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevelState {
    pub alpha: C64,
    pub beta: C64,
}

impl TwoLevelState {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let dev = (alpha.norm_sqr() + beta.norm_sqr()).sqrt() - 1.0;
        if dev.abs() > NORM_TOL || !dev.is_finite() {
            return Err(Error::NotNormalized(dev.abs()));
        }
        Ok(Self { alpha, beta })
    }

    /// `|α|²`.
    pub fn success_probability(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Density matrix in the `{|w⟩, |r⟩}` basis.
    pub fn density_matrix(&self) -> DensityMatrix {
        let (a, b) = (self.alpha, self.beta);
        DensityMatrix::trusted(CMatrix::from_row_slice(
            2,
            2,
            &[
                c(a.norm_sqr(), 0.0),
                a * b.conj(),
                a.conj() * b,
                c(b.norm_sqr(), 0.0),
            ],
        ))
    }
}

/// Start state `|s⟩ = x|w⟩ + sqrt(1 - x²)|r⟩`; the uniform superposition when
/// `x = 1/sqrt(N)`.
pub fn start_state(p: &SearchParams) -> StateVector {
    if p.is_uniform() {
        return StateVector::uniform(p.n_qubits());
    }
    let rest = p.complement() / ((p.dim() - 1) as f64).sqrt();
    let mut amps = vec![c(rest, 0.0); p.dim()];
    amps[p.marked()] = c(p.overlap(), 0.0);
    StateVector::new(amps).expect("power-of-two register")
}

/// Dense `N×N` Hamiltonian `E|w⟩⟨w| + E|s⟩⟨s|`.
pub fn hamiltonian_full(p: &SearchParams) -> CMatrix {
    let s = start_state(p);
    let a = s.amplitudes();
    let e = p.energy();
    let mut h = CMatrix::from_fn(p.dim(), p.dim(), |i, j| a[i] * a[j].conj() * e);
    h[(p.marked(), p.marked())] += c(e, 0.0);
    h
}

/// Hamiltonian restricted to the `{|w⟩, |r⟩}` plane.
pub fn hamiltonian_2d(p: &SearchParams) -> CMatrix {
    let (x2, e) = (p.overlap_sq(), p.energy());
    let off = p.overlap() * p.complement();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            c(e * (1.0 + x2), 0.0),
            c(e * off, 0.0),
            c(e * off, 0.0),
            c(e * (1.0 - x2), 0.0),
        ],
    )
}

/// `N×2` isometry whose columns are `|w⟩` and `|r⟩`.
pub fn two_level_embedding(p: &SearchParams) -> CMatrix {
    let n = p.dim();
    let r = ((n - 1) as f64).sqrt().recip();
    CMatrix::from_fn(n, 2, |i, j| match (j, i == p.marked()) {
        (0, true) => c(1.0, 0.0),
        (1, false) => c(r, 0.0),
        _ => ZERO,
    })
}

/// Closed-form state at time `t`, global phase `e^{-iEt}` included:
/// `α = e^{-iEt}(x cos(Ext) - i sin(Ext))`, `β = e^{-iEt} sqrt(1-x²) cos(Ext)`.
pub fn evolve_closed_form(p: &SearchParams, t: f64) -> Result<TwoLevelState> {
    check_time(t)?;
    let (sin, cos) = p.phase(t).sin_cos();
    let global = (-I * (p.energy() * t)).exp();
    Ok(TwoLevelState {
        alpha: global * c(p.overlap() * cos, -sin),
        beta: global * c(p.complement() * cos, 0.0),
    })
}

/// `P(t) = sin²(Ext) + x² cos²(Ext)`.
pub fn success_probability(p: &SearchParams, t: f64) -> Result<f64> {
    check_time(t)?;
    let (sin, cos) = p.phase(t).sin_cos();
    Ok(sin * sin + p.overlap_sq() * cos * cos)
}

/// `dP/dt = (1 - x²) E x sin(2Ext)`.
pub fn success_rate(p: &SearchParams, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok((1.0 - p.overlap_sq()) * p.energy() * p.overlap() * (2.0 * p.phase(t)).sin())
}

/// First time at which the success probability reaches one, `π/(2Ex)`.
pub fn peak_time(p: &SearchParams) -> f64 {
    PI / (2.0 * p.energy() * p.overlap())
}

/// Period of `P(t)`, `π/(Ex)`.
pub fn period(p: &SearchParams) -> f64 {
    2.0 * peak_time(p)
}

/// Maps `α|w⟩ + β|r⟩` into the `2^n`-dimensional register.
pub fn embed_full(s: &TwoLevelState, p: &SearchParams) -> Result<StateVector> {
    let s = TwoLevelState::new(s.alpha, s.beta)?;
    let rest = s.beta / ((p.dim() - 1) as f64).sqrt();
    let mut amps = vec![rest; p.dim()];
    amps[p.marked()] = s.alpha;
    StateVector::new(amps)
}

/// Embedded closed-form state at `t`.
pub fn closed_form_state(p: &SearchParams, t: f64) -> Result<StateVector> {
    embed_full(&evolve_closed_form(p, t)?, p)
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy_expectation(p: &SearchParams, psi: &StateVector) -> Result<f64> {
    if psi.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: psi.dim(),
        });
    }
    let s = start_state(p);
    let ov = s.inner(psi)?;
    Ok(p.energy() * (psi.amplitude(p.marked()).norm_sqr() + ov.norm_sqr()))
}

/// Fixed-step fourth-order Runge-Kutta integration of `i dψ/dt = Hψ` from
/// `|s⟩`, applying `H` as the rank-two operator `E(|w⟩⟨w| + |s⟩⟨s|)`.
#[derive(Clone, Debug)]
pub struct NumericPropagator {
    params: SearchParams,
    start: Vec<C64>,
    dt: f64,
    fault: f64,
}

impl NumericPropagator {
    /// Fails with [`Error::StepTooLarge`] when `dt * E * sqrt(N) > 0.1`.
    pub fn new(params: SearchParams, dt: f64) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "integration step must be positive, got {dt}"
            )));
        }
        let bound = dt * params.energy() * (params.dim() as f64).sqrt();
        if bound > MAX_STEP_BOUND {
            return Err(Error::StepTooLarge { dt, bound });
        }
        Ok(Self {
            params,
            start: start_state(&params).into_amplitudes(),
            dt,
            fault: 0.0,
        })
    }

    /// Step `min(1e-3, 0.05/sqrt(N)) / E`.
    pub fn with_default_step(params: SearchParams) -> Self {
        let scaled = DEFAULT_STEP.min(0.5 * MAX_STEP_BOUND / (params.dim() as f64).sqrt());
        Self::new(params, scaled / params.energy()).expect("default step is within bounds")
    }

    /// Scales every step increment by `1 + fault`. Only meant for negative
    /// controls of the verification suite.
    #[doc(hidden)]
    pub fn with_fault(mut self, fault: f64) -> Self {
        self.fault = fault;
        self
    }

    pub fn step(&self) -> f64 {
        self.dt
    }

    /// States at each of `times`, which must be non-negative and
    /// non-decreasing. Every requested time is hit exactly.
    pub fn run(&self, times: &[f64]) -> Result<Vec<StateVector>> {
        let n = self.params.dim();
        let mut psi = self.start.clone();
        let mut scratch = Scratch::new(n);
        let mut now = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            check_time(t)?;
            if t < now {
                return Err(Error::InvalidTime(t));
            }
            let span = t - now;
            if span > 0.0 {
                let steps = (span / self.dt).ceil().max(1.0) as usize;
                let h = span / steps as f64;
                for _ in 0..steps {
                    self.rk4_step(&mut psi, h, &mut scratch);
                }
            }
            now = t;
            out.push(StateVector::new(psi.clone())?);
        }
        Ok(out)
    }

    /// `out = -i H psi`.
    fn derivative(&self, psi: &[C64], out: &mut [C64]) {
        let e = self.params.energy();
        let ov: C64 = self.start.iter().zip(psi).map(|(s, a)| s.conj() * a).sum();
        let coef = -I * e * ov;
        for (o, s) in out.iter_mut().zip(&self.start) {
            *o = coef * s;
        }
        let w = self.params.marked();
        out[w] += -I * e * psi[w];
    }

    fn rk4_step(&self, psi: &mut [C64], h: f64, s: &mut Scratch) {
        let half = c(0.5 * h, 0.0);
        let full = c(h, 0.0);
        self.derivative(psi, &mut s.k1);
        axpy(&mut s.tmp, psi, half, &s.k1);
        self.derivative(&s.tmp, &mut s.k2);
        axpy(&mut s.tmp, psi, half, &s.k2);
        self.derivative(&s.tmp, &mut s.k3);
        axpy(&mut s.tmp, psi, full, &s.k3);
        self.derivative(&s.tmp, &mut s.k4);
        let w = h / 6.0 * (1.0 + self.fault);
        for (i, a) in psi.iter_mut().enumerate() {
            *a += (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]) * w;
        }
    }
}

struct Scratch {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            k1: vec![ZERO; n],
            k2: vec![ZERO; n],
            k3: vec![ZERO; n],
            k4: vec![ZERO; n],
            tmp: vec![ZERO; n],
        }
    }
}

#[inline]
fn axpy(out: &mut [C64], x: &[C64], a: C64, y: &[C64]) {
    for ((o, xi), yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

/// Numerically integrated state at time `t` with step at most `dt`.
pub fn evolve_numeric(p: &SearchParams, t: f64, dt: f64) -> Result<StateVector> {
    let mut states = NumericPropagator::new(*p, dt)?.run(&[t])?;
    Ok(states.pop().expect("one time requested"))
}

/// `count` evenly spaced points on `[0, t_max]`, endpoints included.
pub fn time_grid(t_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let step = t_max / (count - 1) as f64;
            (0..count)
                .map(|k| {
                    if k + 1 == count {
                        t_max
                    } else {
                        k as f64 * step
                    }
                })
                .collect()
        }
    }
}
