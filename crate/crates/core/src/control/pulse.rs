//! Piecewise-constant control pulses and their unitaries.

use crate::control::gates::{GateSequence, NamedGate};
use crate::device::{hamiltonian, required_coupling_ratio, timings, ControlSettings, CouplingVariant, DeviceParams};
use crate::error::{Error, Result};
use crate::qmath::{expm_hermitian, CMatrix};
use crate::scalar::Real;

/// Tolerance on `E_L/E_J_eff` against `√15` for the two-qubit gate.
pub const COUPLING_RATIO_TOL: f64 = 1e-6;

/// One set of control values held for `duration` ns. Settings changes between
/// segments are taken as instantaneous.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSegment<T: Real> {
    pub settings: ControlSettings<T>,
    pub duration: T,
}

impl<T: Real> PulseSegment<T> {
    pub fn new(settings: ControlSettings<T>, duration: T) -> Result<Self> {
        if !(duration >= T::zero()) {
            return Err(Error::ParameterOutOfRange {
                name: "duration".into(),
                value: duration.as_f64(),
                range: "[0, inf)".into(),
            });
        }
        Ok(Self { settings, duration })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence<T: Real> {
    pub segments: Vec<PulseSegment<T>>,
    pub label: String,
}

impl<T: Real> PulseSequence<T> {
    pub fn new(segments: Vec<PulseSegment<T>>, label: impl Into<String>) -> Self {
        Self { segments, label: label.into() }
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().fold(T::zero(), |acc, s| acc + s.duration)
    }

    pub fn append(&mut self, other: PulseSequence<T>) {
        self.segments.extend(other.segments);
        self.label = if self.label.is_empty() || self.label == "I" {
            other.label
        } else {
            format!("{}{}", other.label, self.label)
        };
    }
}

/// `exp(-2πi·H·t)` for one segment.
pub fn evolve_segment<T: Real>(p: &DeviceParams<T>, seg: &PulseSegment<T>) -> Result<CMatrix<T>> {
    let h = hamiltonian(p, &seg.settings)?;
    if seg.duration == T::zero() {
        return Ok(CMatrix::identity(h.dim()));
    }
    expm_hermitian(&h, T::TAU() * seg.duration)
}

/// Product of segment unitaries, first segment rightmost.
pub fn compose<T: Real>(p: &DeviceParams<T>, w: &PulseSequence<T>) -> Result<CMatrix<T>> {
    let mut u = CMatrix::identity(p.dim());
    for seg in &w.segments {
        u = &evolve_segment(p, seg)? * &u;
    }
    Ok(u)
}

/// Checks the device can run `U(τ)` as a single constant segment.
pub fn check_two_qubit_gate<T: Real>(p: &DeviceParams<T>) -> Result<()> {
    if p.coupling == CouplingVariant::ChiXX {
        return Err(Error::Unsupported(
            "U(t) is defined for the common-inductor yy coupling; the xx coupling variant has no U(t) schedule".into(),
        ));
    }
    let required = required_coupling_ratio::<f64>();
    let actual = (p.e_l / p.e_j_eff).as_f64();
    if (actual - required).abs() > COUPLING_RATIO_TOL {
        return Err(Error::CouplingRatio { required, actual });
    }
    p.tau_flux().map(|_| ())
}

/// The segment realizing one gate; uninvolved qubits sit at `n_g = 1/2`,
/// flux `1/2`, where their Hamiltonian vanishes.
pub fn gate_segment<T: Real>(p: &DeviceParams<T>, g: NamedGate) -> Result<PulseSegment<T>> {
    g.check(p.n_qubits)?;
    let t = timings(p);
    let mut s = ControlSettings::idle(p.n_qubits);
    let duration = match g {
        NamedGate::X(l) => {
            s.flux[l] = T::zero();
            t.t_x
        }
        NamedGate::Z(l) => {
            s.n_g[l] = T::zero();
            t.t_z_quarter
        }
        NamedGate::Z3Q(l) => {
            s.n_g[l] = T::zero();
            T::lit(3.0) * t.t_z_quarter
        }
        NamedGate::UTau(a, b) => {
            check_two_qubit_gate(p)?;
            let f = p.tau_flux()?;
            s.flux[a] = f;
            s.flux[b] = f;
            t.tau
        }
    };
    PulseSegment::new(s, duration)
}

/// The pulse schedule for a single gate.
pub fn gate_schedule<T: Real>(p: &DeviceParams<T>, g: NamedGate) -> Result<PulseSequence<T>> {
    Ok(PulseSequence::new(vec![gate_segment(p, g)?], g.to_string()))
}

/// The pulse schedule for a gate sequence, segments in execution order.
pub fn sequence_schedule<T: Real>(p: &DeviceParams<T>, seq: &GateSequence) -> Result<PulseSequence<T>> {
    let segments = seq.gates().iter().map(|&g| gate_segment(p, g)).collect::<Result<Vec<_>>>()?;
    Ok(PulseSequence::new(segments, seq.label()))
}

/// Physical unitary of a gate sequence on the device.
pub fn sequence_unitary<T: Real>(p: &DeviceParams<T>, seq: &GateSequence) -> Result<CMatrix<T>> {
    compose(p, &sequence_schedule(p, seq)?)
}
