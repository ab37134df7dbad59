//! Property tests over randomly generated inputs.

mod common;

use charge_tomo::control::{equivalent_observable, sequence_unitary, GateSequence, NamedGate};
use charge_tomo::control::tables::all_rows;
use charge_tomo::device::{hamiltonian, timings, ControlSettings, DeviceParams};
use charge_tomo::measurement::{derive_seed, probability, probability_of, sample, MeasurementSetting};
use charge_tomo::process::{apply_channel, chi_exact, Channel};
use charge_tomo::qmath::{
    conjugate_observable, eigenvalues_hermitian, expm_hermitian, pauli_assemble, pauli_decompose, pauli_matrix, trace_distance, CMatrix,
    HermitianEigen, PauliWord,
};
use charge_tomo::tomography::{project_physical, schedule_nq};
use charge_tomo::C;
use common::{random_hermitian_trace_one, random_state, rng, uniform};
use proptest::prelude::*;

fn random_hermitian(seed: u64, dim: usize) -> CMatrix<f64> {
    let mut r = rng(seed);
    CMatrix::from_fn(dim, |_, _| C::new(2.0 * uniform(&mut r) - 1.0, 2.0 * uniform(&mut r) - 1.0)).hermitian_part()
}

fn det(m: &CMatrix<f64>) -> C<f64> {
    // Gaussian elimination with partial pivoting
    let n = m.dim();
    let mut a: Vec<Vec<C<f64>>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut d = C::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].norm().partial_cmp(&a[y][k].norm()).unwrap()).unwrap();
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    d
}

const ALPHABET: [NamedGate; 5] = [NamedGate::X(0), NamedGate::X(1), NamedGate::Z(0), NamedGate::Z(1), NamedGate::UTau(0, 1)];

#[test]
fn pauli_words_are_orthogonal() {
    for n in 1..=2 {
        let words: Vec<PauliWord> = PauliWord::all(n).collect();
        for a in &words {
            for b in &words {
                let t = (&pauli_matrix::<f64>(a) * &pauli_matrix(b)).trace();
                let want = if a == b { (1 << n) as f64 } else { 0.0 };
                assert!((t - C::new(want, 0.0)).norm() < 1e-15);
            }
        }
    }
}

#[test]
fn every_table_row_has_two_terms_of_weight_one_over_root_two() {
    for row in all_rows() {
        let w = row.sequence().ideal_unitary::<f64>(2).unwrap();
        let eq = equivalent_observable(&w, row.readout_qubit()).unwrap();
        assert_eq!(eq.len(), 2, "{}", row.operation);
        for t in eq {
            assert!((t.coefficient.abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }
}

#[test]
fn three_qubit_schedule_is_triangular_and_complete() {
    let s = schedule_nq(&DeviceParams::<f64>::preset_1(3).unwrap(), 4).unwrap();
    assert_eq!(s.len(), 63);
    s.validate().unwrap();
    let two = schedule_nq(&DeviceParams::<f64>::preset_1(2).unwrap(), 4).unwrap();
    assert_eq!(two.len(), 15);
    assert!(schedule_nq(&DeviceParams::<f64>::preset_1(2).unwrap(), 0).is_err());
}

#[test]
fn sampling_concentrates() {
    let mut inside = 0;
    for seed in 0..1000u64 {
        let k = sample(0.5, 1_000_000, derive_seed(seed, "c")).unwrap();
        if (k as f64 / 1e6 - 0.5).abs() <= 0.002 {
            inside += 1;
        }
    }
    assert!(inside >= 990, "{inside}");
}

#[test]
fn timings_scale_inversely() {
    let p = DeviceParams::<f64>::preset_1(1).unwrap();
    let q = DeviceParams::<f64>::new(1, 2.0 * p.e_c, 2.0 * p.e_j0).unwrap();
    let (a, b) = (timings(&p), timings(&q));
    assert_eq!(b.t_x, a.t_x / 2.0);
    assert_eq!(b.t_z_quarter, a.t_z_quarter / 2.0);
    assert_eq!(b.tau, a.tau / 2.0);
    assert_eq!(b.t_y_total, a.t_y_total / 2.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decompose_and_assemble_are_inverse(seed in any::<u64>(), n in 1usize..=3) {
        let m = random_hermitian(seed, 1 << n);
        let coeffs = pauli_decompose(&m).unwrap();
        let back = pauli_assemble(&coeffs).unwrap();
        prop_assert!(back.max_abs_diff(&m) < 1e-12);
        let again = pauli_decompose(&back).unwrap();
        for (a, b) in coeffs.iter().zip(&again) {
            prop_assert!((a.coefficient - b.coefficient).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_is_unitary(seed in any::<u64>(), scale in -5.0f64..5.0) {
        let u = expm_hermitian(&random_hermitian(seed, 4), scale).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-12);
        prop_assert!((det(&u).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugation_preserves_spectrum(seed in any::<u64>(), angle in -3.0f64..3.0) {
        let o = random_hermitian(seed, 4);
        let w = expm_hermitian(&random_hermitian(seed ^ 0xabcdef, 4), angle).unwrap();
        let c = conjugate_observable(&w, &o).unwrap();
        prop_assert!(c.hermitian_deviation() < 1e-12);
        let (a, b) = (eigenvalues_hermitian(&o).unwrap(), eigenvalues_hermitian(&c).unwrap());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn hamiltonian_is_hermitian_and_charge_symmetric(ng in 0.0f64..1.0, f1 in 0.0f64..1.0, f2 in 0.0f64..1.0) {
        let p = DeviceParams::<f64>::preset_1(2).unwrap();
        let h = hamiltonian(&p, &ControlSettings::new(vec![ng, 0.5], vec![f1, f2]).unwrap()).unwrap();
        prop_assert_eq!(h.hermitian_deviation(), 0.0);
        let g = hamiltonian(&p, &ControlSettings::new(vec![1.0 - ng, 0.5], vec![f1, f2]).unwrap()).unwrap();
        let a = pauli_decompose(&h).unwrap();
        let b = pauli_decompose(&g).unwrap();
        for (x, y) in a.iter().zip(&b) {
            if x.word.to_string() == "z0" {
                prop_assert!((x.coefficient + y.coefficient).abs() < 1e-12);
            } else {
                prop_assert!((x.coefficient - y.coefficient).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn switched_off_qubit_stays_factorized(seed in any::<u64>(), ng in 0.0f64..1.0, f in 0.0f64..1.0, t in 0.0f64..1.0) {
        let p = DeviceParams::<f64>::preset_1(2).unwrap();
        let h = hamiltonian(&p, &ControlSettings::new(vec![ng, 0.5], vec![f, 0.5]).unwrap()).unwrap();
        let u = expm_hermitian(&h, std::f64::consts::TAU * t).unwrap();
        let mut r = rng(seed);
        let a = random_state(&mut r, 2, 1);
        let b = random_state(&mut r, 2, 2);
        let out = conjugate_observable(&u.adjoint(), &a.kron(&b)).unwrap();
        // reduced state of the switched-off qubit is untouched
        let reduced = CMatrix::from_fn(2, |i, j| out[(i, j)] + out[(2 + i, 2 + j)]);
        prop_assert!(reduced.max_abs_diff(&b) < 1e-10);
        let first = CMatrix::from_fn(2, |i, j| out[(2 * i, 2 * j)] + out[(2 * i + 1, 2 * j + 1)]);
        prop_assert!(first.kron(&b).max_abs_diff(&out) < 1e-10);
    }

    #[test]
    fn sequences_are_unitary_with_unit_norm_measurements(gates in proptest::collection::vec(0usize..5, 0..6), l in 0usize..2) {
        let p = DeviceParams::<f64>::preset_1(2).unwrap();
        let seq = GateSequence::new(gates.iter().map(|&i| ALPHABET[i]).collect());
        let u = sequence_unitary(&p, &seq).unwrap();
        prop_assert!(u.unitarity_deviation() < 1e-12);
        let norm: f64 = equivalent_observable(&u, l).unwrap().iter().map(|t| t.coefficient * t.coefficient).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn probability_is_linear_and_complementary(seed in any::<u64>(), alpha in 0.0f64..1.0, gates in proptest::collection::vec(0usize..5, 0..4), l in 0usize..2) {
        let p = DeviceParams::<f64>::preset_1(2).unwrap();
        let s = MeasurementSetting::new(&p, GateSequence::new(gates.iter().map(|&i| ALPHABET[i]).collect()), l).unwrap();
        let mut r = rng(seed);
        let (a, b) = (random_state(&mut r, 4, 1), random_state(&mut r, 4, 3));
        let mix = &a.scale_real(alpha) + &b.scale_real(1.0 - alpha);
        let lin = alpha * probability(&a, &s).unwrap() + (1.0 - alpha) * probability(&b, &s).unwrap();
        prop_assert!((probability(&mix, &s).unwrap() - lin).abs() < 1e-12);
        // |0⟩⟨0| on qubit l, computed independently
        let evolved = conjugate_observable(&s.unitary.adjoint(), &mix).unwrap();
        let p0: f64 = (0..4).filter(|i| (i >> (1 - l)) & 1 == 0).map(|i| evolved[(i, i)].re).sum();
        prop_assert!((p0 + probability_of(&mix, &s.unitary, l).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_is_deterministic(prob in 0.0f64..1.0, shots in 0u64..5000, seed in any::<u64>()) {
        let a = sample(prob, shots, seed).unwrap();
        prop_assert_eq!(a, sample(prob, shots, seed).unwrap());
        prop_assert!(a <= shots);
    }

    #[test]
    fn projection_keeps_eigenvectors(seed in any::<u64>()) {
        let m = random_hermitian_trace_one(&mut rng(seed), 4);
        let p = project_physical(&m).unwrap();
        prop_assert!((p.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(eigenvalues_hermitian(&p).unwrap()[0] >= -1e-12);
        // p commutes with m when they share eigenvectors
        let comm = &(&p * &m) - &(&m * &p);
        prop_assert!(comm.frobenius_norm() < 1e-9);
        // no state with the same eigenvectors is closer
        let eig = HermitianEigen::new(&m).unwrap();
        let d_best = (&p - &m).frobenius_norm();
        let mut r = rng(seed ^ 1);
        for _ in 0..20 {
            let mut w: Vec<f64> = (0..4).map(|_| uniform(&mut r)).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let cand = eig.reconstruct(|l| {
                let k = eig.values.iter().position(|v| *v == l).unwrap();
                C::new(w[k], 0.0)
            });
            prop_assert!((&cand - &m).frobenius_norm() >= d_best - 1e-12);
        }
    }

    #[test]
    fn chi_of_random_channels_is_a_valid_process(seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng(seed);
        let raw: Vec<CMatrix<f64>> = (0..k)
            .map(|_| CMatrix::from_fn(2, |_, _| C::new(2.0 * uniform(&mut r) - 1.0, 2.0 * uniform(&mut r) - 1.0)))
            .collect();
        let s = raw.iter().fold(CMatrix::zeros(2), |acc, a| &acc + &(&a.adjoint() * a));
        let inv_sqrt = HermitianEigen::new(&s).unwrap().reconstruct(|l| C::new(1.0 / l.sqrt(), 0.0));
        let kraus: Vec<CMatrix<f64>> = raw.iter().map(|a| a * &inv_sqrt).collect();
        let ch = Channel::new(kraus, "random").unwrap();
        let chi = chi_exact(&ch).unwrap();
        let d = chi.diagnostics().unwrap();
        prop_assert!(d.hermitian_deviation < 1e-10);
        prop_assert!(d.min_eigenvalue >= -1e-10);
        prop_assert!((d.trace - 1.0).abs() < 1e-10);
        for _ in 0..10 {
            let rho = random_state(&mut r, 2, 1);
            prop_assert!(trace_distance(&chi.apply(&rho).unwrap(), &apply_channel(&ch, &rho).unwrap()).unwrap() < 1e-9);
        }
    }
}
