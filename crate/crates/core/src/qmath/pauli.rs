//! Pauli words, the `σ_{l₁}⊗…⊗σ_{lₙ}` basis, and decomposition into it.
//!
//! Basis convention: `|0⟩` is the +1 eigenstate of `σ_z`; qubit 1 is the
//! leftmost tensor factor (most significant bit of the basis index).

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qmath::matrix::CMatrix;
use crate::scalar::{c, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => '0',
            Pauli::X => 'x',
            Pauli::Y => 'y',
            Pauli::Z => 'z',
        }
    }

    pub fn from_symbol(ch: char) -> Option<Self> {
        match ch {
            '0' | 'I' | 'i' => Some(Pauli::I),
            'x' | 'X' => Some(Pauli::X),
            'y' | 'Y' => Some(Pauli::Y),
            'z' | 'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix<T: Real>(self) -> CMatrix<T> {
        let (o, z) = (C::<T>::one(), C::<T>::zero());
        let i = c(T::zero(), T::one());
        let data = match self {
            Pauli::I => vec![o, z, z, o],
            Pauli::X => vec![z, o, o, z],
            Pauli::Y => vec![z, -i, i, z],
            Pauli::Z => vec![o, z, z, -o],
        };
        CMatrix::from_vec(2, data).expect("2x2")
    }
}

/// A word over `{0, x, y, z}`, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliWord(Vec<Pauli>);

impl PauliWord {
    pub fn new(letters: Vec<Pauli>) -> Self {
        assert!(!letters.is_empty(), "Pauli word must be nonempty");
        Self(letters)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    /// Single non-identity letter `p` on qubit `l` (0-based).
    pub fn single(n: usize, l: usize, p: Pauli) -> Self {
        let mut w = vec![Pauli::I; n];
        w[l] = p;
        Self::new(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Position in the lexicographic `(0, x, y, z)` enumeration.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &p| acc * 4 + p as usize)
    }

    pub fn from_index(n: usize, mut idx: usize) -> Self {
        let mut letters = vec![Pauli::I; n];
        for slot in letters.iter_mut().rev() {
            *slot = Pauli::ALL[idx % 4];
            idx /= 4;
        }
        Self::new(letters)
    }

    /// All `4^n` words in lexicographic order, identity first.
    pub fn all(n: usize) -> impl Iterator<Item = PauliWord> {
        (0..1usize << (2 * n)).map(move |i| PauliWord::from_index(n, i))
    }

    /// Bit masks `(x_mask, z_mask, y_count)` for the signed-permutation form.
    fn masks(&self) -> (usize, usize, usize) {
        let n = self.0.len();
        let (mut xm, mut zm, mut ny) = (0, 0, 0);
        for (q, &p) in self.0.iter().enumerate() {
            let bit = 1 << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => xm |= bit,
                Pauli::Y => {
                    xm |= bit;
                    zm |= bit;
                    ny += 1;
                }
                Pauli::Z => zm |= bit,
            }
        }
        (xm, zm, ny)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    /// Accepts `xz0` or `(x,z,0)`.
    fn from_str(s: &str) -> Result<Self> {
        let letters: Option<Vec<Pauli>> = s
            .chars()
            .filter(|ch| !matches!(ch, '(' | ')' | ',' | ' '))
            .map(Pauli::from_symbol)
            .collect();
        match letters {
            Some(l) if !l.is_empty() => Ok(Self(l)),
            _ => Err(Error::Parse(format!("invalid Pauli word `{s}`"))),
        }
    }
}

/// A Pauli word with its real coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString<T: Real> {
    pub word: PauliWord,
    pub coefficient: T,
}

impl<T: Real> PauliString<T> {
    pub fn new(word: PauliWord, coefficient: T) -> Self {
        Self { word, coefficient }
    }
}

/// Dense matrix of `σ_{l₁}⊗…⊗σ_{lₙ}`.
pub fn pauli_matrix<T: Real>(word: &PauliWord) -> CMatrix<T> {
    let mut letters = word.letters().iter();
    let first = letters.next().expect("nonempty word").matrix::<T>();
    letters.fold(first, |acc, p| acc.kron(&p.matrix()))
}

/// `Tr(m · P_w)` via the signed-permutation structure of `P_w`, O(dim).
pub fn trace_with_pauli<T: Real>(m: &CMatrix<T>, word: &PauliWord) -> C<T> {
    let (xm, zm, ny) = word.masks();
    let phase = match ny % 4 {
        0 => C::one(),
        1 => c(T::zero(), T::one()),
        2 => -C::<T>::one(),
        _ => c(T::zero(), -T::one()),
    };
    let mut acc = C::<T>::zero();
    for col in 0..m.dim() {
        // P[row][col] with row = col ^ xm; Tr(mP) = Σ_col m[col][row] P[row][col]
        let row = col ^ xm;
        let sign = if (col & zm).count_ones() % 2 == 1 { -T::one() } else { T::one() };
        acc += m[(col, row)] * sign;
    }
    acc * phase
}

/// Coefficients `r_w = Tr(m P_w)` for all `4^n` words, lexicographic order.
pub fn pauli_decompose<T: Real>(m: &CMatrix<T>) -> Result<Vec<PauliString<T>>> {
    m.ensure_hermitian()?;
    let n = m.num_qubits();
    Ok(PauliWord::all(n).map(|w| {
        let r = trace_with_pauli(m, &w).re;
        PauliString::new(w, r)
    }).collect())
}

/// `(1/2^n) Σ r_w P_w`, the inverse of [`pauli_decompose`].
///
/// Requires exactly one coefficient per word, the identity word included.
pub fn pauli_assemble<T: Real>(coefficients: &[PauliString<T>]) -> Result<CMatrix<T>> {
    let n = coefficients
        .first()
        .map(|t| t.word.len())
        .ok_or_else(|| Error::IncompleteCoefficients("empty coefficient list".into()))?;
    let full = 1usize << (2 * n);
    let mut seen = vec![false; full];
    for t in coefficients {
        if t.word.len() != n {
            return Err(Error::IncompleteCoefficients(format!("word {} has wrong length", t.word)));
        }
        if std::mem::replace(&mut seen[t.word.index()], true) {
            return Err(Error::IncompleteCoefficients(format!("duplicate word {}", t.word)));
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::IncompleteCoefficients(format!(
            "{} of {} words present; first missing {}",
            coefficients.len(),
            full,
            PauliWord::from_index(n, missing)
        )));
    }
    Ok(pauli_sum(n, coefficients.iter().map(|t| (&t.word, t.coefficient))).scale_real(
        T::one() / T::from_usize(1 << n).unwrap(),
    ))
}

/// `Σ c_w P_w` over an arbitrary (possibly sparse) term list.
pub fn pauli_sum<'a, T: Real>(
    n: usize,
    terms: impl IntoIterator<Item = (&'a PauliWord, T)>,
) -> CMatrix<T> {
    let dim = 1 << n;
    let mut out = CMatrix::zeros(dim);
    for (w, coef) in terms {
        if coef == T::zero() {
            continue;
        }
        let (xm, zm, ny) = w.masks();
        let phase = match ny % 4 {
            0 => C::one(),
            1 => c(T::zero(), T::one()),
            2 => -C::<T>::one(),
            _ => c(T::zero(), -T::one()),
        };
        for col in 0..dim {
            let row = col ^ xm;
            let sign = if (col & zm).count_ones() % 2 == 1 { -T::one() } else { T::one() };
            out[(row, col)] += phase * (sign * coef);
        }
    }
    out
}
