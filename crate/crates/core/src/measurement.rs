//! Single-qubit `|1⟩⟨1|` readout: exact probabilities and seeded shot sampling.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::control::{sequence_schedule, sequence_unitary, GateSequence};
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::qmath::CMatrix;
use crate::scalar::{re, Real};

/// Probabilities within this distance outside `[0, 1]` are clamped.
pub const CLAMP_WINDOW: f64 = 1e-10;

/// A gate sequence followed by readout of one qubit, with its unitary
/// compiled once.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting<T: Real> {
    pub sequence: GateSequence,
    pub readout_qubit: usize,
    pub label: String,
    pub unitary: CMatrix<T>,
    /// Pulse time before readout, ns.
    pub duration: T,
}

impl<T: Real> MeasurementSetting<T> {
    /// Compiles `sequence` into physical pulses on the device.
    pub fn new(p: &DeviceParams<T>, sequence: GateSequence, readout_qubit: usize) -> Result<Self> {
        check_qubit(p.n_qubits, readout_qubit)?;
        let unitary = sequence_unitary(p, &sequence)?;
        let duration = sequence_schedule(p, &sequence)?.total_duration();
        Ok(Self { label: setting_label(&sequence, readout_qubit), sequence, readout_qubit, unitary, duration })
    }

    /// Uses the ideal gate unitaries; durations are zero.
    pub fn ideal(n_qubits: usize, sequence: GateSequence, readout_qubit: usize) -> Result<Self> {
        check_qubit(n_qubits, readout_qubit)?;
        let unitary = sequence.ideal_unitary(n_qubits)?;
        Ok(Self { label: setting_label(&sequence, readout_qubit), sequence, readout_qubit, unitary, duration: T::zero() })
    }

    pub fn n_qubits(&self) -> usize {
        self.unitary.num_qubits()
    }
}

/// `"<sequence>@q<l>"` with a 1-based qubit.
pub fn setting_label(sequence: &GateSequence, readout_qubit: usize) -> String {
    format!("{}@q{}", sequence.label(), readout_qubit + 1)
}

fn check_qubit(n: usize, l: usize) -> Result<()> {
    if l >= n {
        Err(Error::QubitOutOfRange { index: l + 1, n_qubits: n })
    } else {
        Ok(())
    }
}

/// Outcome counts for one setting.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub label: String,
    pub readout_qubit: usize,
    pub ideal_probability: f64,
    pub shots: u64,
    pub ones: u64,
    pub seed: u64,
}

impl MeasurementRecord {
    /// Empirical frequency of outcome 1, or the exact probability when no
    /// shots were taken.
    pub fn frequency(&self) -> f64 {
        if self.shots == 0 {
            self.ideal_probability
        } else {
            self.ones as f64 / self.shots as f64
        }
    }
}

/// `I ⊗ … ⊗ |1⟩⟨1| ⊗ … ⊗ I` with the projector on qubit `l`.
pub fn projector_one<T: Real>(n: usize, l: usize) -> Result<CMatrix<T>> {
    check_qubit(n, l)?;
    let bit = 1 << (n - 1 - l);
    let diag: Vec<T> = (0..1usize << n).map(|i| if i & bit != 0 { T::one() } else { T::zero() }).collect();
    Ok(CMatrix::from_real_diagonal(&diag))
}

/// `Tr[W ρ W† (|1⟩⟨1|)_l]`.
pub fn probability<T: Real>(rho: &CMatrix<T>, s: &MeasurementSetting<T>) -> Result<f64> {
    probability_of(rho, &s.unitary, s.readout_qubit)
}

/// Probability for an explicit unitary and readout qubit.
pub fn probability_of<T: Real>(rho: &CMatrix<T>, w: &CMatrix<T>, l: usize) -> Result<f64> {
    if rho.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: w.dim(), actual: rho.dim() });
    }
    let n = rho.num_qubits();
    check_qubit(n, l)?;
    let bit = 1 << (n - 1 - l);
    let rotated = &(w * rho) * &w.adjoint();
    let p = (0..rho.dim())
        .filter(|i| i & bit != 0)
        .fold(T::zero(), |acc, i| acc + rotated[(i, i)].re)
        .as_f64();
    clamp_probability(p)
}

pub fn clamp_probability(p: f64) -> Result<f64> {
    if !(-CLAMP_WINDOW..=1.0 + CLAMP_WINDOW).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Number of `1` outcomes in `shots` independent draws with probability `p`.
///
/// Each shot compares one 64-bit ChaCha8 output against `⌊p·2⁶⁴⌋`, so the
/// count is an integer function of `(p, shots, seed)`.
pub fn sample(p: f64, shots: u64, seed: u64) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p == 0.0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(shots);
    }
    let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots).filter(|_| rng.next_u64() < threshold).count() as u64)
}

/// Per-setting seed from the run seed and the setting label.
pub fn derive_seed(master_seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, then a splitmix64 finalizer over the mix
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = h ^ master_seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sampling options for a batch of settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    /// Shots per setting; 0 records exact probabilities.
    pub shots: u64,
    pub master_seed: u64,
    /// Symmetric probability that a classical outcome is flipped.
    pub readout_error: f64,
}

impl SamplingOptions {
    pub fn exact() -> Self {
        Self { shots: 0, master_seed: 0, readout_error: 0.0 }
    }

    pub fn shots(shots: u64, master_seed: u64) -> Self {
        Self { shots, master_seed, readout_error: 0.0 }
    }
}

/// Records for every setting on the state `rho`. `prefix` namespaces the
/// seeds when several states share a run seed.
pub fn simulate_records<T: Real>(
    rho: &CMatrix<T>,
    settings: &[MeasurementSetting<T>],
    opts: SamplingOptions,
    prefix: &str,
) -> Result<Vec<MeasurementRecord>> {
    if !(0.0..=0.5).contains(&opts.readout_error) {
        return Err(Error::ParameterOutOfRange {
            name: "readout_error".into(),
            value: opts.readout_error,
            range: "[0, 0.5]".into(),
        });
    }
    settings
        .iter()
        .map(|s| {
            let ideal = probability(rho, s)?;
            let seed = derive_seed(opts.master_seed, &format!("{prefix}{}", s.label));
            let e = opts.readout_error;
            let observed = ideal * (1.0 - e) + (1.0 - ideal) * e;
            let ones = if opts.shots == 0 { 0 } else { sample(observed.clamp(0.0, 1.0), opts.shots, seed)? };
            Ok(MeasurementRecord {
                label: s.label.clone(),
                readout_qubit: s.readout_qubit,
                ideal_probability: ideal,
                shots: opts.shots,
                ones,
                seed,
            })
        })
        .collect()
}

/// `|ψ⟩⟨ψ|` for a normalized state vector given by real amplitudes.
pub fn pure_state<T: Real>(amplitudes: &[T]) -> CMatrix<T> {
    let v: Vec<_> = amplitudes.iter().map(|&a| re(a)).collect();
    CMatrix::outer(&v)
}
