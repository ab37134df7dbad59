//! Closed-form two-qubit evolution and the equivalent-measurement algebra.

use crate::control::gates::complex_pauli_sum;
use crate::control::pulse::{compose, PulseSequence};
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::qmath::{conjugate_observable, pauli_matrix, trace_with_pauli, CMatrix, Pauli, PauliString, PauliWord};
use crate::scalar::{c, Real};

/// Coefficients below this magnitude are dropped from equivalent measurements.
pub const TERM_CUTOFF: f64 = 1e-12;

/// Evolution under `H' = -½E_J(σ_1x + σ_2x) - E_int σ_1y σ_2y` for `t` ns,
/// assembled from its five-term Pauli expansion.
///
/// With `φ' = 2πtE_int`, `a = E_J/E_int` and `θ' = 2πtE_int√(1+a²)`:
///
/// `U = ½(cos φ' + cos θ')I + i n_z sin θ'/2 (σ_1x + σ_2x)
///    + i (sin φ' - n_x sin θ')/2 σ_1zσ_2z + i (sin φ' + n_x sin θ')/2 σ_1yσ_2y
///    - (cos φ' - cos θ')/2 σ_1xσ_2x`.
///
/// At `E_L = √15 E_J`, `t = τ` the angles are `φ' = π/4`, `θ' = π`.
pub fn u_closed_form<T: Real>(e_j: T, e_int: T, t: T) -> Result<CMatrix<T>> {
    if e_int == T::zero() {
        return Err(Error::ZeroInteraction);
    }
    let a = e_j / e_int;
    let root = (T::one() + a * a).sqrt();
    let (n_z, n_x) = (a / root, T::one() / root);
    let phi = T::TAU() * t * e_int;
    let theta = phi * root;
    let half = T::lit(0.5);
    let (sp, cp, st, ct) = (phi.sin(), phi.cos(), theta.sin(), theta.cos());
    let word = |s: &str| s.parse::<PauliWord>().expect("static word");
    let terms = [
        (word("00"), c(half * (cp + ct), T::zero())),
        (word("x0"), c(T::zero(), half * n_z * st)),
        (word("0x"), c(T::zero(), half * n_z * st)),
        (word("zz"), c(T::zero(), half * (sp - n_x * st))),
        (word("yy"), c(T::zero(), half * (sp + n_x * st))),
        (word("xx"), c(-half * (cp - ct), T::zero())),
    ];
    Ok(complex_pauli_sum(2, &terms))
}

/// `(1/2√2)[(1-√2)I - (1+√2)σ_1xσ_2x + iσ_1yσ_2y + iσ_1zσ_2z]`.
pub fn u_tau_matrix<T: Real>() -> CMatrix<T> {
    crate::control::gates::NamedGate::UTau(0, 1).ideal_unitary(2).expect("two-qubit gate on two qubits")
}

/// Pauli coefficients `d_w` of `W†σ_lz W = Σ d_w P_w`, nonzero terms only,
/// in lexicographic word order.
pub fn equivalent_observable<T: Real>(w: &CMatrix<T>, readout_qubit: usize) -> Result<Vec<PauliString<T>>> {
    let n = w.num_qubits();
    if readout_qubit >= n {
        return Err(Error::QubitOutOfRange { index: readout_qubit + 1, n_qubits: n });
    }
    let z = pauli_matrix::<T>(&PauliWord::single(n, readout_qubit, Pauli::Z));
    let o = conjugate_observable(w, &z)?;
    let norm = T::one() / T::from_usize(1 << n).unwrap();
    let cutoff = T::lit(TERM_CUTOFF);
    let mut out = Vec::new();
    for word in PauliWord::all(n) {
        let tr = trace_with_pauli(&o, &word);
        let d = tr.re * norm;
        if tr.im.abs() * norm > T::lit(1e-10) {
            return Err(Error::Invariant(format!(
                "equivalent observable has imaginary coefficient {:e} on {word}",
                (tr.im * norm).as_f64()
            )));
        }
        if d.abs() > cutoff {
            out.push(PauliString::new(word, d));
        }
    }
    Ok(out)
}

/// Equivalent measurement of a pulse sequence followed by readout of one qubit.
pub fn equivalent_measurement<T: Real>(
    p: &DeviceParams<T>,
    w: &PulseSequence<T>,
    readout_qubit: usize,
) -> Result<Vec<PauliString<T>>> {
    equivalent_observable(&compose(p, w)?, readout_qubit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::gates::{GateSequence, NamedGate};
    use crate::control::pulse::{gate_schedule, sequence_schedule};
    use crate::qmath::expm_hermitian;
    use proptest::prelude::*;

    fn w(s: &str) -> CMatrix<f64> {
        pauli_matrix(&s.parse::<PauliWord>().unwrap())
    }

    fn reduced_hamiltonian(e_j: f64, e_int: f64) -> CMatrix<f64> {
        &(&w("x0") + &w("0x")).scale_real(-0.5 * e_j) - &w("yy").scale_real(e_int)
    }

    fn terms(v: &[PauliString<f64>]) -> Vec<(String, f64)> {
        v.iter().map(|t| (t.word.to_string(), t.coefficient)).collect()
    }

    #[test]
    fn closed_form_at_zero_time_is_identity() {
        let u = u_closed_form(3.0, 0.7, 0.0).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(4)) < 1e-15);
        assert_eq!(u_closed_form(1.0, 0.0, 1.0), Err(Error::ZeroInteraction));
    }

    #[test]
    fn closed_form_at_tau_is_the_two_qubit_gate() {
        let e_j = 2.0836;
        let e_int = e_j / 15f64.sqrt();
        let tau = 15f64.sqrt() / (8.0 * e_j);
        let u = u_closed_form(e_j, e_int, tau).unwrap();
        assert!(u.max_abs_diff(&u_tau_matrix()) < 1e-14);
        assert!(u_tau_matrix::<f64>().unitarity_deviation() < 1e-15);
    }

    #[test]
    fn physical_gate_matches_closed_form_matrix() {
        let p = DeviceParams::<f64>::preset_1(2).unwrap();
        let u = compose(&p, &gate_schedule(&p, NamedGate::UTau(0, 1)).unwrap()).unwrap();
        assert!(u.phase_aligned_diff(&u_tau_matrix()) < 1e-10);
    }

    #[test]
    fn empty_sequence_measures_sigma_z() {
        let eq = equivalent_observable(&CMatrix::<f64>::identity(4), 0).unwrap();
        assert_eq!(terms(&eq), vec![("z0".to_string(), 1.0)]);
    }

    #[test]
    fn x_rotation_turns_z_readout_into_minus_y() {
        let x = NamedGate::X(0).ideal_unitary::<f64>(1).unwrap();
        let o = conjugate_observable(&x, &w("z")).unwrap();
        assert!(o.max_abs_diff(&w("y").scale_real(-1.0)) < 1e-15);
    }

    #[test]
    fn two_qubit_gate_equivalent_measurements() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = DeviceParams::<f64>::preset_1(2).unwrap();
        let check = |label: &str, l: usize, expect: &[(&str, f64)]| {
            let seq: GateSequence = label.parse().unwrap();
            let eq = equivalent_measurement(&p, &sequence_schedule(&p, &seq).unwrap(), l).unwrap();
            assert_eq!(eq.len(), expect.len(), "{label}: {:?}", terms(&eq));
            for (t, (word, coef)) in eq.iter().zip(expect) {
                assert_eq!(t.word.to_string(), *word);
                assert!((t.coefficient - coef).abs() < 1e-10, "{label}: {:?}", terms(&eq));
            }
        };
        check("U(t)", 0, &[("xy", -s), ("z0", -s)]);
        check("U(t)Z1", 1, &[("0z", -s), ("xx", s)]);
        check("U(t)Z1", 0, &[("yy", -s), ("z0", -s)]);
    }

    #[test]
    fn readout_out_of_range() {
        assert!(matches!(
            equivalent_observable(&CMatrix::<f64>::identity(2), 1),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn closed_form_matches_exponential(
            e_j in 0.05f64..10.0,
            e_int in prop_oneof![-5.0f64..-0.01, 0.01f64..5.0],
            t in 0.0f64..2.0,
        ) {
            let u = u_closed_form(e_j, e_int, t).unwrap();
            let v = expm_hermitian(&reduced_hamiltonian(e_j, e_int), std::f64::consts::TAU * t).unwrap();
            prop_assert!(u.phase_aligned_diff(&v) < 1e-10);
            prop_assert!(u.max_abs_diff(&v) < 1e-10);
        }

        #[test]
        fn equivalent_measurement_has_unit_norm(gates in proptest::collection::vec(0usize..5, 0..5), l in 0usize..2) {
            let alphabet = [NamedGate::X(0), NamedGate::X(1), NamedGate::Z(0), NamedGate::Z(1), NamedGate::UTau(0, 1)];
            let seq = GateSequence::new(gates.iter().map(|&i| alphabet[i]).collect());
            let eq = equivalent_observable(&seq.ideal_unitary::<f64>(2).unwrap(), l).unwrap();
            let norm: f64 = eq.iter().map(|t| t.coefficient * t.coefficient).sum();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }
}
