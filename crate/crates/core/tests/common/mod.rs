#![allow(dead_code)]

use std::io::Write;

use charge_tomo::qmath::CMatrix;
use charge_tomo::C;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// `AA†/Tr(AA†)` with `A` a `dim × rank` matrix of uniform complex entries.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize, rank: usize) -> CMatrix<f64> {
    let a: Vec<C<f64>> = (0..dim * rank).map(|_| C::new(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0)).collect();
    let m = CMatrix::from_fn(dim, |i, j| (0..rank).fold(C::new(0.0, 0.0), |acc, k| acc + a[i * rank + k] * a[j * rank + k].conj()));
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Random Hermitian trace-one matrix that may have negative eigenvalues.
pub fn random_hermitian_trace_one(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix<f64> {
    let a = CMatrix::from_fn(dim, |_, _| C::new(2.0 * uniform(rng) - 1.0, 2.0 * uniform(rng) - 1.0));
    let h = a.hermitian_part();
    let shift = (1.0 - h.trace().re) / dim as f64;
    &h + &CMatrix::identity(dim).scale_real(shift)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// One status line per criterion. Written straight to stderr so it shows
/// even when the harness captures test output.
pub fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let line = format!("acceptance criterion {criterion:>2} [{name}]: {} :: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}
