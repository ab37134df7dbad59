//! Device parameters, unit conversion, Hamiltonians and pulse timings.
//!
//! Units: energies are frequencies `E/h` in GHz, times are ns, so a segment of
//! duration `t` under energy coefficient `E` accumulates phase `2π·E·t`.
//!
//! Flux is the dimensionless ratio `Φ_x/Φ₀`. The Josephson energy
//! `E_J(Φ) = 2E_J⁰cos(πΦ_x/Φ₀)` vanishes at flux `1/2`, which is the
//! "switch off" setting for a qubit.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qmath::{pauli_sum, CMatrix, Pauli, PauliWord};
use crate::scalar::{cos_pi, Real};

/// Boltzmann constant over Planck constant, GHz per kelvin.
pub const GHZ_PER_KELVIN: f64 = 20.836;
/// Elementary charge over Planck constant, GHz per microelectronvolt.
pub const GHZ_PER_MICRO_EV: f64 = 0.24180;

/// Ratio `E_L/E_J` required for the `U(τ)` gate with `φ' = π/4`, `θ' = π`.
pub fn required_coupling_ratio<T: Real>() -> T {
    T::lit(15.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    Kelvin,
    MilliKelvin,
    MicroElectronVolt,
    GigaHertz,
}

impl FromStr for EnergyUnit {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "K" => Ok(EnergyUnit::Kelvin),
            "mK" => Ok(EnergyUnit::MilliKelvin),
            "ueV" | "μeV" | "µeV" => Ok(EnergyUnit::MicroElectronVolt),
            "GHz" => Ok(EnergyUnit::GigaHertz),
            other => Err(Error::Parse(format!("unknown energy unit `{other}` (K, mK, ueV, GHz)"))),
        }
    }
}

impl fmt::Display for EnergyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnergyUnit::Kelvin => "K",
            EnergyUnit::MilliKelvin => "mK",
            EnergyUnit::MicroElectronVolt => "ueV",
            EnergyUnit::GigaHertz => "GHz",
        })
    }
}

/// Converts an energy to GHz (`E/h`).
pub fn convert_energy<T: Real>(value: T, unit: EnergyUnit) -> T {
    match unit {
        EnergyUnit::Kelvin => value * T::lit(GHZ_PER_KELVIN),
        EnergyUnit::MilliKelvin => value * T::lit(GHZ_PER_KELVIN / 1000.0),
        EnergyUnit::MicroElectronVolt => value * T::lit(GHZ_PER_MICRO_EV),
        EnergyUnit::GigaHertz => value,
    }
}

/// How qubit pairs couple in the multi-qubit Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingVariant {
    /// Common inductor: `-E_int σ_y⊗σ_y` with `E_int = E_J E_J / E_L`.
    InductorYY,
    /// Alternate model: `+χ σ_x⊗σ_x` with `χ = E_int`.
    ChiXX,
}

impl FromStr for CouplingVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inductor_yy" => Ok(CouplingVariant::InductorYY),
            "chi_xx" => Ok(CouplingVariant::ChiXX),
            other => Err(Error::Parse(format!("unknown coupling variant `{other}`"))),
        }
    }
}

impl fmt::Display for CouplingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CouplingVariant::InductorYY => "inductor_yy",
            CouplingVariant::ChiXX => "chi_xx",
        })
    }
}

/// Physical parameters of an array of nominally identical charge qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceParams<T: Real> {
    pub n_qubits: usize,
    /// Single-electron charging energy `E_C`, GHz.
    pub e_c: T,
    /// Junction Josephson energy `E_J⁰`, GHz.
    pub e_j0: T,
    /// Inductive coupling scale `E_L`, GHz.
    pub e_l: T,
    /// Josephson energy used for the two-qubit gate time `τ = ħπ√15/4E_J`.
    ///
    /// Defaults to `E_J⁰`. The reference value τ ≈ 2.32e-10 s only follows from
    /// `E_J = E_J⁰`; reading `E_J` as `E_J(0) = 2E_J⁰` halves it. The gate
    /// itself runs at the flux where `E_J(Φ)` equals this value, so pulses and
    /// timing reports agree under either convention.
    pub e_j_eff: T,
    pub coupling: CouplingVariant,
    /// Optional per-qubit `E_J⁰` values for robustness studies.
    pub e_j0_per_qubit: Option<Vec<T>>,
}

impl<T: Real> DeviceParams<T> {
    /// Identical qubits with `E_J_eff = E_J⁰` and `E_L = √15 E_J_eff`.
    pub fn new(n_qubits: usize, e_c: T, e_j0: T) -> Result<Self> {
        let p = Self {
            n_qubits,
            e_c,
            e_j0,
            e_l: required_coupling_ratio::<T>() * e_j0,
            e_j_eff: e_j0,
            coupling: CouplingVariant::InductorYY,
            e_j0_per_qubit: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_e_l(mut self, e_l: T) -> Result<Self> {
        self.e_l = e_l;
        self.validate()?;
        Ok(self)
    }

    /// Sets `E_J_eff` and keeps `E_L = √15 E_J_eff`.
    pub fn with_tau_energy(mut self, e_j_eff: T) -> Result<Self> {
        self.e_j_eff = e_j_eff;
        self.e_l = required_coupling_ratio::<T>() * e_j_eff;
        self.validate()?;
        Ok(self)
    }

    pub fn with_coupling(mut self, coupling: CouplingVariant) -> Self {
        self.coupling = coupling;
        self
    }

    pub fn with_qubit_count(mut self, n: usize) -> Result<Self> {
        self.n_qubits = n;
        self.validate()?;
        Ok(self)
    }

    pub fn with_per_qubit_e_j0(mut self, values: Vec<T>) -> Result<Self> {
        self.e_j0_per_qubit = Some(values);
        self.validate()?;
        Ok(self)
    }

    /// `E_J⁰ = 100 mK`, `E_C = 1 K`.
    pub fn preset_1(n_qubits: usize) -> Result<Self> {
        Self::new(
            n_qubits,
            convert_energy(T::one(), EnergyUnit::Kelvin),
            convert_energy(T::lit(100.0), EnergyUnit::MilliKelvin),
        )
    }

    /// `2E_J⁰ = 45 μeV`, `4E_C = 580 μeV`.
    pub fn preset_2(n_qubits: usize) -> Result<Self> {
        Self::new(
            n_qubits,
            convert_energy(T::lit(580.0 / 4.0), EnergyUnit::MicroElectronVolt),
            convert_energy(T::lit(45.0 / 2.0), EnergyUnit::MicroElectronVolt),
        )
    }

    /// `2E_J⁰/h = 13.0 GHz`, `4E_C/h = 149.1 GHz`.
    pub fn preset_3(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, T::lit(149.1 / 4.0), T::lit(13.0 / 2.0))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > 4 {
            return Err(Error::InvalidDevice(format!("n_qubits = {} outside 1..=4", self.n_qubits)));
        }
        for (name, v) in [("E_C", self.e_c), ("E_J0", self.e_j0), ("E_L", self.e_l), ("E_J_eff", self.e_j_eff)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidDevice(format!("{name} = {v} must be positive and finite")));
            }
        }
        if let Some(per) = &self.e_j0_per_qubit {
            if per.len() != self.n_qubits {
                return Err(Error::InvalidDevice(format!(
                    "{} per-qubit E_J0 values for {} qubits",
                    per.len(),
                    self.n_qubits
                )));
            }
            if per.iter().any(|&v| !(v > T::zero())) {
                return Err(Error::InvalidDevice("per-qubit E_J0 must be positive".into()));
            }
        }
        if self.e_c <= self.e_j0 {
            log::warn!(
                "E_C = {} GHz is not above E_J0 = {} GHz; the two-level charge model assumes E_C >> E_J",
                self.e_c,
                self.e_j0
            );
        }
        Ok(())
    }

    pub fn e_j0_of(&self, qubit: usize) -> T {
        self.e_j0_per_qubit.as_ref().map_or(self.e_j0, |v| v[qubit])
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Flux at which `E_J(Φ) = E_J_eff`, the working point of `U(τ)`.
    pub fn tau_flux(&self) -> Result<T> {
        let ratio = self.e_j_eff / (T::lit(2.0) * self.e_j0);
        if ratio > T::one() {
            return Err(Error::InvalidDevice(format!(
                "E_J_eff = {} exceeds the maximum Josephson energy 2E_J0 = {}",
                self.e_j_eff,
                T::lit(2.0) * self.e_j0
            )));
        }
        Ok(ratio.acos() / T::PI())
    }
}

/// Gate charge and flux for every qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSettings<T: Real> {
    pub n_g: Vec<T>,
    pub flux: Vec<T>,
}

impl<T: Real> ControlSettings<T> {
    pub fn new(n_g: Vec<T>, flux: Vec<T>) -> Result<Self> {
        if n_g.len() != flux.len() {
            return Err(Error::DimensionMismatch { expected: n_g.len(), actual: flux.len() });
        }
        Ok(Self { n_g, flux })
    }

    /// Every qubit at the degeneracy point with its SQUID switched off, so the
    /// Hamiltonian vanishes.
    pub fn idle(n: usize) -> Self {
        Self { n_g: vec![T::lit(0.5); n], flux: vec![T::lit(0.5); n] }
    }

    pub fn len(&self) -> usize {
        self.n_g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_g.is_empty()
    }
}

/// `δE_ch(n_g) = 4E_C(1 - 2n_g)`.
pub fn charge_energy<T: Real>(p: &DeviceParams<T>, n_g: T) -> T {
    T::lit(4.0) * p.e_c * (T::one() - T::lit(2.0) * n_g)
}

/// `E_J(Φ) = 2E_J⁰ cos(πΦ_x/Φ₀)`, exactly zero at flux 1/2.
pub fn josephson_energy<T: Real>(p: &DeviceParams<T>, flux: T) -> T {
    T::lit(2.0) * p.e_j0 * cos_pi(flux)
}

fn josephson_energy_of<T: Real>(p: &DeviceParams<T>, qubit: usize, flux: T) -> T {
    T::lit(2.0) * p.e_j0_of(qubit) * cos_pi(flux)
}

/// `E_int = E_J(Φ₁)E_J(Φ₂)/E_L`.
pub fn interaction_energy<T: Real>(p: &DeviceParams<T>, flux1: T, flux2: T) -> T {
    josephson_energy(p, flux1) * josephson_energy(p, flux2) / p.e_l
}

/// The multi-qubit Hamiltonian in GHz.
pub fn hamiltonian<T: Real>(p: &DeviceParams<T>, s: &ControlSettings<T>) -> Result<CMatrix<T>> {
    let n = p.n_qubits;
    if s.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: s.len() });
    }
    let half = T::lit(0.5);
    let mut terms: Vec<(PauliWord, T)> = Vec::with_capacity(n * 2 + n * (n - 1) / 2);
    let ej: Vec<T> = (0..n).map(|l| josephson_energy_of(p, l, s.flux[l])).collect();
    for l in 0..n {
        terms.push((PauliWord::single(n, l, Pauli::Z), -half * charge_energy(p, s.n_g[l])));
        terms.push((PauliWord::single(n, l, Pauli::X), -half * ej[l]));
    }
    for l in 0..n {
        for k in l + 1..n {
            let e_int = ej[l] * ej[k] / p.e_l;
            let mut w = vec![Pauli::I; n];
            match p.coupling {
                CouplingVariant::InductorYY => {
                    w[l] = Pauli::Y;
                    w[k] = Pauli::Y;
                    terms.push((PauliWord::new(w), -e_int));
                }
                CouplingVariant::ChiXX => {
                    w[l] = Pauli::X;
                    w[k] = Pauli::X;
                    terms.push((PauliWord::new(w), e_int));
                }
            }
        }
    }
    Ok(pauli_sum(n, terms.iter().map(|(w, c)| (w, *c))))
}

/// Pulse durations in ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timings<T: Real> {
    /// `π/2` rotation about x at the degeneracy point, `ħπ/4E_J⁰`.
    pub t_x: T,
    /// `π/2` rotation about z with the SQUID off, `ħπ/8E_C`.
    pub t_z_quarter: T,
    /// The z–x–z composite that turns a `|1⟩⟨1|` readout into `σ_x`.
    pub t_y_total: T,
    /// Two-qubit gate time `ħπ√15/4E_J_eff`.
    pub tau: T,
}

pub fn timings<T: Real>(p: &DeviceParams<T>) -> Timings<T> {
    let t_x = T::one() / (T::lit(8.0) * p.e_j0);
    let t_z_quarter = T::one() / (T::lit(16.0) * p.e_c);
    Timings {
        t_x,
        t_z_quarter,
        t_y_total: t_z_quarter + t_x + T::lit(3.0) * t_z_quarter,
        tau: tau_for(p.e_j_eff),
    }
}

/// `τ = √15/(8 E_J)` ns for `E_J` in GHz.
pub fn tau_for<T: Real>(e_j: T) -> T {
    required_coupling_ratio::<T>() / (T::lit(8.0) * e_j)
}
