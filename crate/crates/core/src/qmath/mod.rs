//! Dense complex linear algebra and Pauli-basis algebra for `2^n`-dimensional
//! operators, `n ≤ 4`.

pub mod eigen;
pub mod matrix;
pub mod pauli;

pub use eigen::{eigenvalues_hermitian, expm_hermitian, trace_distance, HermitianEigen};
pub use matrix::{conjugate_observable, kron, CMatrix, HERMITIAN_TOL};
pub use pauli::{pauli_assemble, pauli_decompose, pauli_matrix, pauli_sum, trace_with_pauli, Pauli, PauliString, PauliWord};
