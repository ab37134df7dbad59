//! Linear inversion of measured probabilities into Pauli coefficients and
//! density matrices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::measurement::{probability_of, MeasurementRecord};
use crate::qmath::{eigenvalues_hermitian, pauli_assemble, CMatrix, PauliString, PauliWord};
use crate::scalar::Real;
use crate::tomography::physical::project_physical;
use crate::tomography::schedule::TomographySchedule;

/// Resolves every coefficient in schedule order. Returns all `4ⁿ` words in
/// lexicographic order with `r_{0…0} = 1`.
pub fn solve<T: Real>(schedule: &TomographySchedule<T>, records: &[MeasurementRecord]) -> Result<Vec<PauliString<T>>> {
    if records.len() < schedule.len() {
        let i = records.len();
        return Err(Error::MissingRecord { index: i, label: schedule.entries[i].setting.label.clone() });
    }
    let n = schedule.n_qubits;
    let mut known: HashMap<PauliWord, f64> = HashMap::new();
    known.insert(PauliWord::identity(n), 1.0);
    for (i, (entry, rec)) in schedule.entries.iter().zip(records).enumerate() {
        if rec.label != entry.setting.label {
            return Err(Error::MissingRecord { index: i, label: entry.setting.label.clone() });
        }
        let rel = &entry.relation;
        let c_target = rel.target_coefficient()?;
        let mut rest = 0.0;
        for w in rel.dependencies() {
            let r = known.get(w).ok_or_else(|| Error::UnresolvedDependencies {
                target: rel.target.to_string(),
                missing: vec![w.to_string()],
            })?;
            let c = rel.coefficients.iter().find(|(x, _)| x == w).map(|(_, c)| *c).unwrap_or(0.0);
            rest += c * r;
        }
        known.insert(rel.target.clone(), (rec.frequency() - 0.5 - rest) / c_target);
    }
    PauliWord::all(n)
        .map(|w| {
            let r = known.get(&w).copied().ok_or_else(|| Error::IncompleteCoefficients(format!("no relation for {w}")))?;
            Ok(PauliString::new(w, T::lit(r)))
        })
        .collect()
}

/// `(1/2ⁿ) Σ r_w P_w`.
pub fn assemble<T: Real>(coefficients: &[PauliString<T>]) -> Result<CMatrix<T>> {
    pauli_assemble(coefficients)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Smallest eigenvalue of the linear-inversion estimate.
    pub min_eigenvalue_raw: f64,
    /// Per setting, observed frequency minus the probability predicted by the
    /// reported (projected or raw) state.
    pub residuals: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult<T: Real> {
    pub raw: CMatrix<T>,
    pub physical: CMatrix<T>,
    pub coefficients: Vec<PauliString<T>>,
    pub diagnostics: Diagnostics,
}

impl<T: Real> ReconstructionResult<T> {
    /// The state handed to downstream consumers.
    pub fn state(&self, projected: bool) -> &CMatrix<T> {
        if projected {
            &self.physical
        } else {
            &self.raw
        }
    }
}

/// Solve, assemble and project.
pub fn reconstruct<T: Real>(schedule: &TomographySchedule<T>, records: &[MeasurementRecord]) -> Result<ReconstructionResult<T>> {
    let coefficients = solve(schedule, records)?;
    let raw = assemble(&coefficients)?;
    let physical = project_physical(&raw)?;
    let min_eigenvalue_raw = eigenvalues_hermitian(&raw)?[0].as_f64();
    let residuals = schedule
        .entries
        .iter()
        .zip(records)
        .map(|(e, r)| {
            let predicted = probability_of(&physical, &e.setting.unitary, e.setting.readout_qubit)?;
            Ok((r.label.clone(), r.frequency() - predicted))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReconstructionResult { raw, physical, coefficients, diagnostics: Diagnostics { min_eigenvalue_raw, residuals } })
}
