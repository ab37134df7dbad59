//! Named gates and gate sequences.
//!
//! Qubit indices are 0-based in code and 1-based in labels. A sequence is
//! stored in execution order; its label is written in matrix-product order,
//! so `"X1U(t)Z1"` means `Z1` runs first and `X1` last.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qmath::{CMatrix, Pauli, PauliWord};
use crate::scalar::{c, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedGate {
    /// `exp(iπσ_x/4)` on one qubit.
    X(usize),
    /// `exp(iπσ_z/4)` on one qubit.
    Z(usize),
    /// `exp(3iπσ_z/4)` on one qubit, part of the z–x–z composite.
    Z3Q(usize),
    /// The two-qubit gate `U(τ)` on a pair, first index smaller.
    UTau(usize, usize),
}

impl NamedGate {
    /// `U(τ)` on an unordered pair.
    pub fn u_tau(a: usize, b: usize) -> Self {
        NamedGate::UTau(a.min(b), a.max(b))
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            NamedGate::X(l) | NamedGate::Z(l) | NamedGate::Z3Q(l) => vec![l],
            NamedGate::UTau(a, b) => vec![a, b],
        }
    }

    pub fn check(&self, n_qubits: usize) -> Result<()> {
        if let NamedGate::UTau(a, b) = *self {
            if a == b {
                return Err(Error::Parse(format!("U(t) needs two distinct qubits, got {}{}", a + 1, b + 1)));
            }
        }
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q + 1, n_qubits });
            }
        }
        Ok(())
    }

    /// The gate's target unitary on an `n`-qubit register.
    pub fn ideal_unitary<T: Real>(&self, n: usize) -> Result<CMatrix<T>> {
        self.check(n)?;
        let (cq, sq) = (T::FRAC_1_SQRT_2(), T::FRAC_1_SQRT_2());
        let terms: Vec<(PauliWord, C<T>)> = match *self {
            NamedGate::X(l) => vec![
                (PauliWord::identity(n), c(cq, T::zero())),
                (PauliWord::single(n, l, Pauli::X), c(T::zero(), sq)),
            ],
            NamedGate::Z(l) => vec![
                (PauliWord::identity(n), c(cq, T::zero())),
                (PauliWord::single(n, l, Pauli::Z), c(T::zero(), sq)),
            ],
            NamedGate::Z3Q(l) => vec![
                (PauliWord::identity(n), c(-cq, T::zero())),
                (PauliWord::single(n, l, Pauli::Z), c(T::zero(), sq)),
            ],
            NamedGate::UTau(a, b) => {
                let pair = |p: Pauli| {
                    let mut w = vec![Pauli::I; n];
                    w[a] = p;
                    w[b] = p;
                    PauliWord::new(w)
                };
                let s2 = T::SQRT_2();
                let k = T::one() / (T::lit(2.0) * s2);
                vec![
                    (PauliWord::identity(n), c(k * (T::one() - s2), T::zero())),
                    (pair(Pauli::X), c(-k * (T::one() + s2), T::zero())),
                    (pair(Pauli::Y), c(T::zero(), k)),
                    (pair(Pauli::Z), c(T::zero(), k)),
                ]
            }
        };
        Ok(complex_pauli_sum(n, &terms))
    }
}

/// `Σ c_w P_w` with complex coefficients.
pub fn complex_pauli_sum<T: Real>(n: usize, terms: &[(PauliWord, C<T>)]) -> CMatrix<T> {
    let re = crate::qmath::pauli_sum(n, terms.iter().map(|(w, z)| (w, z.re)));
    let im = crate::qmath::pauli_sum(n, terms.iter().map(|(w, z)| (w, z.im)));
    &re + &im.scale(c(T::zero(), T::one()))
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NamedGate::X(l) => write!(f, "X{}", l + 1),
            NamedGate::Z(l) => write!(f, "Z{}", l + 1),
            NamedGate::Z3Q(l) => write!(f, "Z3Q{}", l + 1),
            NamedGate::UTau(0, 1) => write!(f, "U(t)"),
            NamedGate::UTau(a, b) => write!(f, "U{}{}(t)", a + 1, b + 1),
        }
    }
}

/// Gates in execution order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GateSequence {
    gates: Vec<NamedGate>,
}

impl GateSequence {
    pub fn new(execution_order: Vec<NamedGate>) -> Self {
        Self { gates: execution_order }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from a product written left to right, `W = G_k ⋯ G_1`.
    pub fn from_matrix_order(mut product: Vec<NamedGate>) -> Self {
        product.reverse();
        Self { gates: product }
    }

    pub fn gates(&self) -> &[NamedGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The same gates executed in the opposite order.
    pub fn reversed(&self) -> Self {
        let mut g = self.gates.clone();
        g.reverse();
        Self { gates: g }
    }

    pub fn then(&self, gate: NamedGate) -> Self {
        let mut g = self.gates.clone();
        g.push(gate);
        Self { gates: g }
    }

    pub fn check(&self, n_qubits: usize) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.check(n_qubits))
    }

    /// `W = G_k ⋯ G_1` from ideal gates.
    pub fn ideal_unitary<T: Real>(&self, n: usize) -> Result<CMatrix<T>> {
        let mut w = CMatrix::identity(1 << n);
        for g in &self.gates {
            w = &g.ideal_unitary(n)? * &w;
        }
        Ok(w)
    }

    /// Label in matrix-product order; `"I"` for the empty sequence.
    pub fn label(&self) -> String {
        if self.gates.is_empty() {
            return "I".to_string();
        }
        self.gates.iter().rev().map(|g| g.to_string()).collect()
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for GateSequence {
    type Err = Error;

    /// Parses a matrix-order label such as `"X1 U(τ) Z1"`, `"U13(t)Z1U(t)"`
    /// or `"I"`. Whitespace and `·` separators are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|ch| !ch.is_whitespace() && *ch != '·' && *ch != '*').collect();
        let bad = |why: &str| Error::Parse(format!("invalid gate sequence `{s}`: {why}"));
        if chars.is_empty() {
            return Err(bad("empty"));
        }
        if chars.len() == 1 && chars[0] == 'I' {
            return Ok(Self::empty());
        }
        let digit = |i: usize| -> Result<usize> {
            match chars.get(i).and_then(|ch| ch.to_digit(10)) {
                Some(d) if d >= 1 => Ok(d as usize - 1),
                _ => Err(bad("expected a 1-based qubit index")),
            }
        };
        let mut product = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            match chars[i] {
                'X' => {
                    product.push(NamedGate::X(digit(i + 1)?));
                    i += 2;
                }
                'Z' if chars.get(i + 1) == Some(&'3') && chars.get(i + 2) == Some(&'Q') => {
                    product.push(NamedGate::Z3Q(digit(i + 3)?));
                    i += 4;
                }
                'Z' => {
                    product.push(NamedGate::Z(digit(i + 1)?));
                    i += 2;
                }
                'U' => {
                    i += 1;
                    let (a, b) = if chars.get(i).is_some_and(|ch| ch.is_ascii_digit()) {
                        let pair = (digit(i)?, digit(i + 1)?);
                        i += 2;
                        pair
                    } else {
                        (0, 1)
                    };
                    if chars.get(i) == Some(&'(') {
                        let close = chars[i..].iter().position(|&ch| ch == ')').ok_or_else(|| bad("unclosed `(`"))?;
                        let arg: String = chars[i + 1..i + close].iter().collect();
                        if !matches!(arg.as_str(), "t" | "τ" | "tau") {
                            return Err(bad("U takes only the argument t"));
                        }
                        i += close + 1;
                    }
                    if a == b {
                        return Err(bad("U needs two distinct qubits"));
                    }
                    product.push(NamedGate::u_tau(a, b));
                }
                other => return Err(bad(&format!("unexpected `{other}`"))),
            }
        }
        Ok(Self::from_matrix_order(product))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{expm_hermitian, pauli_matrix};

    fn w(s: &str) -> CMatrix<f64> {
        pauli_matrix(&s.parse::<PauliWord>().unwrap())
    }

    #[test]
    fn label_round_trip() {
        for s in ["I", "X1", "Z3Q1X1Z1", "U(t)", "X1U(t)Z1X1", "U13(t)Z1U(t)", "U24(t)X4"] {
            let seq: GateSequence = s.parse().unwrap();
            assert_eq!(seq.label(), s);
        }
        let seq: GateSequence = "X1 U(τ) Z1".parse().unwrap();
        assert_eq!(seq.gates(), &[NamedGate::Z(0), NamedGate::UTau(0, 1), NamedGate::X(0)]);
        assert!("X0".parse::<GateSequence>().is_err());
        assert!("U11".parse::<GateSequence>().is_err());
        assert!("Y1".parse::<GateSequence>().is_err());
    }

    #[test]
    fn single_qubit_gates_are_quarter_turns() {
        let x = NamedGate::X(0).ideal_unitary::<f64>(1).unwrap();
        let expect = expm_hermitian(&w("x"), -std::f64::consts::FRAC_PI_4).unwrap();
        assert!(x.max_abs_diff(&expect) < 1e-15);
        let z3 = NamedGate::Z3Q(1).ideal_unitary::<f64>(2).unwrap();
        let expect = expm_hermitian(&w("0z"), -3.0 * std::f64::consts::FRAC_PI_4).unwrap();
        assert!(z3.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn u_tau_is_exponential_of_reduced_hamiltonian() {
        // exp(-i·(π√15/4)·[-(σ1x+σ2x)/2 - σ1yσ2y/√15])
        let s15 = 15f64.sqrt();
        let h = &(&w("x0") + &w("0x")).scale_real(-0.5) - &w("yy").scale_real(1.0 / s15);
        let expect = expm_hermitian(&h, std::f64::consts::PI * s15 / 4.0).unwrap();
        let u = NamedGate::UTau(0, 1).ideal_unitary::<f64>(2).unwrap();
        assert!(u.max_abs_diff(&expect) < 1e-14);
        assert!(u.unitarity_deviation() < 1e-15);
    }

    #[test]
    fn z_x_z_composite_is_y_rotation() {
        // quarter z turn first
        let u = "Z3Q1X1Z1".parse::<GateSequence>().unwrap().ideal_unitary::<f64>(1).unwrap();
        let expect = expm_hermitian(&w("y"), -std::f64::consts::FRAC_PI_4).unwrap();
        assert!(u.phase_aligned_diff(&expect) < 1e-14);
        // product order, three-quarter z turn first
        let u = "Z1X1Z3Q1".parse::<GateSequence>().unwrap().ideal_unitary::<f64>(1).unwrap();
        let expect = expm_hermitian(&w("y"), std::f64::consts::FRAC_PI_4).unwrap();
        assert!(u.phase_aligned_diff(&expect) < 1e-14);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(matches!(
            NamedGate::X(2).ideal_unitary::<f64>(2),
            Err(Error::QubitOutOfRange { index: 3, n_qubits: 2 })
        ));
    }
}
