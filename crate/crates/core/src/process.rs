//! Single-qubit channels and process tomography in the `(I, σ_x, σ_y, σ_z)`
//! operator basis, `E(ρ) = Σ_mn χ_mn σ_m ρ σ_n`.

use std::fmt;
use std::str::FromStr;

use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::measurement::{simulate_records, MeasurementSetting, SamplingOptions};
use crate::qmath::{eigenvalues_hermitian, CMatrix, Pauli};
use crate::scalar::{c, re, Real, C};
use crate::tomography::{reconstruct, schedule_1q, ReconstructionResult};

/// Trace-preservation tolerance on `Σ K†K`.
pub const TP_TOL: f64 = 1e-10;

pub const CHI_BASIS_LABEL: &str = "I,X,Y,Z";

#[derive(Debug, Clone, PartialEq)]
pub struct Channel<T: Real> {
    pub kraus: Vec<CMatrix<T>>,
    pub label: String,
}

impl<T: Real> Channel<T> {
    /// Validates equal dimensions and `Σ K†K = I`.
    pub fn new(kraus: Vec<CMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidDevice("channel needs at least one Kraus operator".into()))?;
        let dim = first.dim();
        let mut sum = CMatrix::zeros(dim);
        for k in &kraus {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: k.dim() });
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let residual = sum.max_abs_diff(&CMatrix::identity(dim)).as_f64();
        if residual > TP_TOL || residual.is_nan() {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(Self { kraus, label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }
}

/// Textbook single-qubit channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StandardChannel {
    Identity,
    BitFlip(f64),
    Dephasing(f64),
    AmplitudeDamping(f64),
}

impl FromStr for StandardChannel {
    type Err = Error;

    /// `identity`, `bit_flip(p)`, `dephasing(p)`, `amplitude_damping(g)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "identity" {
            return Ok(StandardChannel::Identity);
        }
        let bad = || Error::Parse(format!("unknown channel `{s}`"));
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') {
            return Err(bad());
        }
        let arg: f64 = s[open + 1..s.len() - 1].trim().parse().map_err(|_| bad())?;
        match &s[..open] {
            "bit_flip" => Ok(StandardChannel::BitFlip(arg)),
            "dephasing" => Ok(StandardChannel::Dephasing(arg)),
            "amplitude_damping" => Ok(StandardChannel::AmplitudeDamping(arg)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StandardChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardChannel::Identity => write!(f, "identity"),
            StandardChannel::BitFlip(p) => write!(f, "bit_flip({p})"),
            StandardChannel::Dephasing(p) => write!(f, "dephasing({p})"),
            StandardChannel::AmplitudeDamping(g) => write!(f, "amplitude_damping({g})"),
        }
    }
}

fn unit_param(name: &str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::ParameterOutOfRange { name: name.into(), value: v, range: "[0, 1]".into() })
    }
}

/// Kraus sets: bit flip `√(1-p)I, √p X`; dephasing `√(1-p/2)I, √(p/2)Z`;
/// amplitude damping `diag(1, √(1-γ)), √γ|0⟩⟨1|`.
pub fn standard_channel<T: Real>(kind: StandardChannel) -> Result<Channel<T>> {
    let pm = |p: Pauli, w: f64| p.matrix::<T>().scale_real(T::lit(w.sqrt()));
    let kraus = match kind {
        StandardChannel::Identity => vec![CMatrix::identity(2)],
        StandardChannel::BitFlip(p) => {
            let p = unit_param("p", p)?;
            vec![pm(Pauli::I, 1.0 - p), pm(Pauli::X, p)]
        }
        StandardChannel::Dephasing(p) => {
            let p = unit_param("p", p)?;
            vec![pm(Pauli::I, 1.0 - p / 2.0), pm(Pauli::Z, p / 2.0)]
        }
        StandardChannel::AmplitudeDamping(g) => {
            let g = unit_param("gamma", g)?;
            let k0 = CMatrix::from_real_diagonal(&[T::one(), T::lit((1.0 - g).sqrt())]);
            let mut k1 = CMatrix::zeros(2);
            k1[(0, 1)] = re(T::lit(g.sqrt()));
            vec![k0, k1]
        }
    };
    Channel::new(kraus, kind.to_string())
}

/// `Σ K ρ K†`.
pub fn apply_channel<T: Real>(ch: &Channel<T>, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
    if rho.dim() != ch.dim() {
        return Err(Error::DimensionMismatch { expected: ch.dim(), actual: rho.dim() });
    }
    let mut out = CMatrix::zeros(rho.dim());
    for k in &ch.kraus {
        out = &out + &(&(k * rho) * &k.adjoint());
    }
    Ok(out)
}

/// `|0⟩`, `|1⟩`, `(|0⟩+|1⟩)/√2`, `(|0⟩+i|1⟩)/√2` as density matrices.
pub fn input_states<T: Real>() -> Vec<CMatrix<T>> {
    let h = T::FRAC_1_SQRT_2();
    let vecs: [[C<T>; 2]; 4] = [
        [re(T::one()), re(T::zero())],
        [re(T::zero()), re(T::one())],
        [re(h), re(h)],
        [re(h), c(T::zero(), h)],
    ];
    vecs.iter().map(|v| CMatrix::outer(v)).collect()
}

/// A 4×4 process matrix in the `(I, σ_x, σ_y, σ_z)` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix<T: Real> {
    pub entries: CMatrix<T>,
    pub basis_label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiDiagnostics {
    pub hermitian_deviation: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    /// `max |Σ_mn χ_mn σ_n σ_m - I|`.
    pub tp_residual: f64,
}

impl<T: Real> ChiMatrix<T> {
    /// `Σ_mn χ_mn σ_m ρ σ_n`.
    pub fn apply(&self, rho: &CMatrix<T>) -> Result<CMatrix<T>> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, actual: rho.dim() });
        }
        let p: Vec<CMatrix<T>> = Pauli::ALL.iter().map(|q| q.matrix()).collect();
        let mut out = CMatrix::zeros(2);
        for m in 0..4 {
            let left = &p[m] * rho;
            for n in 0..4 {
                let x = self.entries[(m, n)];
                if x != C::new(T::zero(), T::zero()) {
                    out = &out + &(&left * &p[n]).scale(x);
                }
            }
        }
        Ok(out)
    }

    pub fn diagnostics(&self) -> Result<ChiDiagnostics> {
        let p: Vec<CMatrix<T>> = Pauli::ALL.iter().map(|q| q.matrix()).collect();
        let mut tp = CMatrix::zeros(2);
        for m in 0..4 {
            for n in 0..4 {
                tp = &tp + &(&p[n] * &p[m]).scale(self.entries[(m, n)]);
            }
        }
        let min_eigenvalue = eigenvalues_hermitian(&self.entries.hermitian_part())?[0].as_f64();
        Ok(ChiDiagnostics {
            hermitian_deviation: self.entries.hermitian_deviation().as_f64(),
            trace: self.entries.trace().re.as_f64(),
            min_eigenvalue,
            tp_residual: tp.max_abs_diff(&CMatrix::identity(2)).as_f64(),
        })
    }
}

/// Linear inversion of the four channel outputs (for [`input_states`]) into χ.
///
/// The outputs give `E(|0⟩⟨0|)`, `E(|1⟩⟨1|)` and, by linearity,
/// `E(|0⟩⟨1|) = ρ₃ + iρ₄ - (1+i)(ρ₁+ρ₂)/2` and
/// `E(|1⟩⟨0|) = ρ₃ - iρ₄ - (1-i)(ρ₁+ρ₂)/2`. These form the Choi matrix
/// `C = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, and `χ_mn = ⟨v_m|C|v_n⟩/4` with
/// `v_m = Σ_ij (σ_m)_{ji}|i⟩|j⟩`.
pub fn chi_from_outputs<T: Real>(outputs: &[CMatrix<T>]) -> Result<ChiMatrix<T>> {
    if outputs.len() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, actual: outputs.len() });
    }
    if let Some(o) = outputs.iter().find(|o| o.dim() != 2) {
        return Err(Error::Unsupported(format!("process tomography is single-qubit only; got dimension {}", o.dim())));
    }
    let half = T::lit(0.5);
    let sum12 = (&outputs[0] + &outputs[1]).scale_real(half);
    let i = c(T::zero(), T::one());
    let e01 = &(&outputs[2] + &outputs[3].scale(i)) - &sum12.scale(c(T::one(), T::one()));
    let e10 = &(&outputs[2] - &outputs[3].scale(i)) - &sum12.scale(c(T::one(), -T::one()));
    let blocks = [[&outputs[0], &e01], [&e10, &outputs[1]]];
    let choi = CMatrix::from_fn(4, |r, col| blocks[r / 2][col / 2][(r % 2, col % 2)]);
    let paulis: Vec<CMatrix<T>> = Pauli::ALL.iter().map(|q| q.matrix()).collect();
    let v: Vec<Vec<C<T>>> = paulis.iter().map(|s| (0..4).map(|k| s[(k % 2, k / 2)]).collect()).collect();
    let quarter = T::lit(0.25);
    let entries = CMatrix::from_fn(4, |m, n| {
        let mut acc = C::new(T::zero(), T::zero());
        for a in 0..4 {
            for b in 0..4 {
                acc += v[m][a].conj() * choi[(a, b)] * v[n][b];
            }
        }
        acc * quarter
    });
    Ok(ChiMatrix { entries, basis_label: CHI_BASIS_LABEL.to_string() })
}

/// Exact χ of a channel, from its outputs on the four inputs.
pub fn chi_exact<T: Real>(ch: &Channel<T>) -> Result<ChiMatrix<T>> {
    let outs = input_states().iter().map(|r| apply_channel(ch, r)).collect::<Result<Vec<_>>>()?;
    chi_from_outputs(&outs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessResult<T: Real> {
    pub chi: ChiMatrix<T>,
    /// Per input state, the state reconstruction of the channel output.
    pub outputs: Vec<ReconstructionResult<T>>,
}

/// Runs single-qubit state tomography on each channel output and inverts to χ.
/// With `project` set, each reconstructed output is projected to a physical
/// state before inversion.
pub fn process_tomography<T: Real>(
    p: &DeviceParams<T>,
    ch: &Channel<T>,
    opts: SamplingOptions,
    project: bool,
) -> Result<ProcessResult<T>> {
    if ch.dim() != 2 {
        return Err(Error::Unsupported(format!(
            "process tomography is single-qubit only; channel acts on dimension {}",
            ch.dim()
        )));
    }
    let schedule = schedule_1q(p)?;
    let settings: Vec<MeasurementSetting<T>> = schedule.settings().cloned().collect();
    let mut outputs = Vec::with_capacity(4);
    for (k, rho_in) in input_states::<T>().iter().enumerate() {
        let rho_out = apply_channel(ch, rho_in)?;
        let records = simulate_records(&rho_out, &settings, opts, &format!("in{}/", k + 1))?;
        outputs.push(reconstruct(&schedule, &records)?);
    }
    let states: Vec<CMatrix<T>> = outputs.iter().map(|r| r.state(project).clone()).collect();
    Ok(ProcessResult { chi: chi_from_outputs(&states)?, outputs })
}
