//! Measurement schedules: which settings to run and how each probability
//! determines one Pauli coefficient.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::control::closed_form::equivalent_observable;
use crate::control::pulse::check_two_qubit_gate;
use crate::control::tables::{TableRow, QUBIT1_TABLE, QUBIT2_TABLE};
use crate::control::{GateSequence, NamedGate};
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::measurement::MeasurementSetting;
use crate::qmath::{conjugate_observable, pauli_decompose, pauli_matrix, CMatrix, PauliWord};
use crate::scalar::Real;

/// Relation coefficients below this are treated as zero.
pub const COEFFICIENT_CUTOFF: f64 = 1e-9;

/// Default gate budget for the generic schedule search up to three qubits.
pub const DEFAULT_BUDGET: usize = 4;

/// Smallest budget at which the greedy search completes for `n` qubits on
/// the default alphabet.
pub fn default_budget(n: usize) -> usize {
    if n >= 4 {
        6
    } else {
        DEFAULT_BUDGET
    }
}

/// `p = ½ + Σ_w c_w r_w` for one setting, solved for `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub target: PauliWord,
    /// Nonzero `c_w` in lexicographic word order, target included.
    pub coefficients: Vec<(PauliWord, f64)>,
}

impl Relation {
    /// Builds the relation of an ideal unitary `w` read on qubit `l`.
    ///
    /// From `p = ½ - ½Tr[ρ W†σ_lz W]` and `W†σ_lz W = Σ d_w P_w` the
    /// coefficients are `c_w = -d_w/2`.
    pub fn from_unitary(w: &CMatrix<f64>, l: usize, target: PauliWord) -> Result<Self> {
        let coefficients = equivalent_observable(w, l)?
            .into_iter()
            .filter(|t| t.coefficient.abs() > COEFFICIENT_CUTOFF)
            .map(|t| (t.word, -0.5 * t.coefficient))
            .collect();
        let r = Self { target, coefficients };
        r.target_coefficient()?;
        Ok(r)
    }

    pub fn target_coefficient(&self) -> Result<f64> {
        match self.coefficients.iter().find(|(w, _)| *w == self.target) {
            Some(&(_, c)) if c.abs() > COEFFICIENT_CUTOFF => Ok(c),
            _ => Err(Error::MalformedRelation {
                target: self.target.to_string(),
                reason: "target has zero coefficient".into(),
            }),
        }
    }

    /// Words other than the target.
    pub fn dependencies(&self) -> impl Iterator<Item = &PauliWord> {
        self.coefficients.iter().map(|(w, _)| w).filter(move |w| **w != self.target)
    }

    /// `"p = 1/2 + c·r_w + …"` with words in compact form.
    pub fn describe(&self) -> String {
        let mut s = String::from("p = 1/2");
        for (w, c) in &self.coefficients {
            let sign = if *c < 0.0 { '-' } else { '+' };
            s += &format!(" {sign} {:.6}·r_{w}", c.abs());
        }
        s
    }
}

/// One setting with the coefficient it resolves.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry<T: Real> {
    pub setting: MeasurementSetting<T>,
    pub relation: Relation,
}

/// Settings in solve order; each resolves one word from earlier ones.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographySchedule<T: Real> {
    pub n_qubits: usize,
    pub entries: Vec<ScheduleEntry<T>>,
}

impl<T: Real> TomographySchedule<T> {
    /// Checks one relation per non-identity word and a triangular order.
    pub fn validate(&self) -> Result<()> {
        let full = (1usize << (2 * self.n_qubits)) - 1;
        let mut resolved: HashSet<PauliWord> = HashSet::new();
        resolved.insert(PauliWord::identity(self.n_qubits));
        for e in &self.entries {
            let r = &e.relation;
            r.target_coefficient()?;
            let missing: Vec<String> = r.dependencies().filter(|w| !resolved.contains(*w)).map(|w| w.to_string()).collect();
            if !missing.is_empty() {
                return Err(Error::UnresolvedDependencies { target: r.target.to_string(), missing });
            }
            if !resolved.insert(r.target.clone()) {
                return Err(Error::MalformedRelation { target: r.target.to_string(), reason: "resolved twice".into() });
            }
        }
        if resolved.len() - 1 != full {
            let unresolved: Vec<String> = PauliWord::all(self.n_qubits)
                .filter(|w| !resolved.contains(w))
                .map(|w| w.to_string())
                .collect();
            return Err(Error::RankDeficient { rank: resolved.len() - 1, full, unresolved });
        }
        Ok(())
    }

    pub fn settings(&self) -> impl Iterator<Item = &MeasurementSetting<T>> {
        self.entries.iter().map(|e| &e.setting)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest pulse time before readout, ns.
    pub fn max_duration(&self) -> T {
        self.entries.iter().map(|e| e.setting.duration).fold(T::zero(), T::max)
    }
}

fn entry<T: Real>(p: &DeviceParams<T>, seq: GateSequence, l: usize, target: PauliWord) -> Result<ScheduleEntry<T>> {
    let ideal = seq.ideal_unitary::<f64>(p.n_qubits)?;
    let relation = Relation::from_unitary(&ideal, l, target)?;
    Ok(ScheduleEntry { setting: MeasurementSetting::new(p, seq, l)?, relation })
}

/// The three single-qubit settings for qubit `l`, targets `z`, `y`, `x`:
/// direct readout, `X_l`, and the z–x–z composite `Z_l X_l Z3Q_l` (the
/// `3π/4` z turn runs first, so the composite is `exp(-iπσ_y/4)`).
fn single_qubit_entries<T: Real>(p: &DeviceParams<T>, l: usize) -> Result<Vec<ScheduleEntry<T>>> {
    use crate::qmath::Pauli;
    let n = p.n_qubits;
    let seqs = [
        (GateSequence::empty(), Pauli::Z),
        (GateSequence::new(vec![NamedGate::X(l)]), Pauli::Y),
        (GateSequence::new(vec![NamedGate::Z3Q(l), NamedGate::X(l), NamedGate::Z(l)]), Pauli::X),
    ];
    seqs.into_iter().map(|(s, pauli)| entry(p, s, l, PauliWord::single(n, l, pauli))).collect()
}

/// Three settings: `p₁ = (1 - r_z)/2`, `p₂ = (1 + r_y)/2`, `p₃ = (1 + r_x)/2`.
pub fn schedule_1q<T: Real>(p: &DeviceParams<T>) -> Result<TomographySchedule<T>> {
    let dev = if p.n_qubits == 1 { p.clone() } else { p.clone().with_qubit_count(1)? };
    let s = TomographySchedule { n_qubits: 1, entries: single_qubit_entries(&dev, 0)? };
    s.validate()?;
    Ok(s)
}

/// Which readout qubit resolves the nine two-qubit correlators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Readout on qubit 1 for every correlator.
    Qubit1,
    /// Readout on qubit 2 for every correlator.
    Qubit2,
    /// Per correlator, whichever readout needs fewer gates (qubit 1 on ties).
    #[default]
    Shortest,
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubit1" => Ok(Route::Qubit1),
            "qubit2" => Ok(Route::Qubit2),
            "shortest" => Ok(Route::Shortest),
            other => Err(Error::Parse(format!("unknown route `{other}` (qubit1, qubit2, shortest)"))),
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Qubit1 => "qubit1",
            Route::Qubit2 => "qubit2",
            Route::Shortest => "shortest",
        })
    }
}

/// Table rows used for the nine correlators on a route.
pub fn route_rows(route: Route) -> Vec<&'static TableRow> {
    match route {
        Route::Qubit1 => QUBIT1_TABLE.iter().collect(),
        Route::Qubit2 => QUBIT2_TABLE.iter().collect(),
        Route::Shortest => QUBIT1_TABLE
            .iter()
            .map(|a| {
                let b = QUBIT2_TABLE.iter().find(|b| b.target == a.target).expect("both tables cover all nine");
                if b.sequence().len() < a.sequence().len() {
                    b
                } else {
                    a
                }
            })
            .collect(),
    }
}

/// Fifteen settings: six single-qubit ones, then nine correlators from the
/// route's table rows.
pub fn schedule_2q<T: Real>(p: &DeviceParams<T>, route: Route) -> Result<TomographySchedule<T>> {
    if p.n_qubits != 2 {
        return Err(Error::InvalidDevice(format!("two-qubit schedule needs a 2-qubit device, got {}", p.n_qubits)));
    }
    check_two_qubit_gate(p)?;
    let mut entries = single_qubit_entries(p, 0)?;
    entries.extend(single_qubit_entries(p, 1)?);
    for row in route_rows(route) {
        entries.push(entry(p, row.sequence(), row.readout_qubit(), row.target_word())?);
    }
    let s = TomographySchedule { n_qubits: 2, entries };
    s.validate()?;
    Ok(s)
}

/// One setting resolving `target` on a three-qubit device, given the words
/// already resolved.
///
/// `xzy` uses `W = U₁₃(τ)Z₁U₁₂(τ)` read on qubit 1, whose relation is
/// `r_xzy = 4(p - ½) + r_z00 + r_xy0 + r_y0y`. Other targets come from the
/// generic search.
pub fn schedule_3q_coefficient<T: Real>(
    p: &DeviceParams<T>,
    target: &PauliWord,
    resolved: &[PauliWord],
) -> Result<ScheduleEntry<T>> {
    if p.n_qubits != 3 || target.len() != 3 {
        return Err(Error::InvalidDevice("three-qubit coefficient needs a 3-qubit device and word".into()));
    }
    check_two_qubit_gate(p)?;
    let known: HashSet<&PauliWord> = resolved.iter().collect();
    let e = if target.to_string() == "xzy" {
        entry(p, "U13(t)Z1U(t)".parse()?, 0, target.clone())?
    } else {
        let found = search_setting(3, target, &known, DEFAULT_BUDGET)?;
        match found {
            Some((seq, l)) => entry(p, seq, l, target.clone())?,
            None => {
                return Err(Error::RankDeficient { rank: 0, full: 1, unresolved: vec![target.to_string()] });
            }
        }
    };
    let missing: Vec<String> = e
        .relation
        .dependencies()
        .filter(|w| !w.is_identity() && !known.contains(w))
        .map(|w| w.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnresolvedDependencies { target: target.to_string(), missing });
    }
    Ok(e)
}

/// `[X_1..X_n, Z_1..Z_n, U_ab for a < b]`.
pub fn gate_alphabet(n: usize) -> Vec<NamedGate> {
    let mut a: Vec<NamedGate> = (0..n).map(NamedGate::X).collect();
    a.extend((0..n).map(NamedGate::Z));
    for i in 0..n {
        for j in i + 1..n {
            a.push(NamedGate::UTau(i, j));
        }
    }
    a
}

/// Conjugation `P ↦ g†Pg` of every Pauli word by every alphabet gate, stored
/// as sparse rows over word indices.
struct Propagator {
    words: Vec<PauliWord>,
    maps: Vec<Vec<Vec<(usize, f64)>>>,
}

impl Propagator {
    fn new(n: usize, alphabet: &[NamedGate]) -> Result<Self> {
        let words: Vec<PauliWord> = PauliWord::all(n).collect();
        let maps = alphabet
            .iter()
            .map(|g| {
                let u = g.ideal_unitary::<f64>(n)?;
                words
                    .iter()
                    .map(|w| {
                        let image = equivalent_observable_of(&u, &pauli_matrix(w))?;
                        Ok(image.into_iter().map(|t| (t.word.index(), t.coefficient)).collect())
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { words, maps })
    }

    /// Support of `W†σ_lz W` for `W` executing `seq` in order, identity
    /// excluded.
    fn support(&self, seq: &[usize], l: usize, buf: &mut (Vec<f64>, Vec<f64>)) -> Vec<PauliWord> {
        let n = self.words[0].len();
        let (cur, next) = buf;
        cur.iter_mut().for_each(|x| *x = 0.0);
        cur[PauliWord::single(n, l, crate::qmath::Pauli::Z).index()] = 1.0;
        for &g in seq.iter().rev() {
            next.iter_mut().for_each(|x| *x = 0.0);
            for (i, &v) in cur.iter().enumerate() {
                if v != 0.0 {
                    for &(j, c) in &self.maps[g][i] {
                        next[j] += c * v;
                    }
                }
            }
            std::mem::swap(cur, next);
        }
        cur.iter()
            .enumerate()
            .skip(1)
            .filter(|(_, v)| v.abs() > COEFFICIENT_CUTOFF)
            .map(|(i, _)| self.words[i].clone())
            .collect()
    }
}

/// `U†OU` expanded over Pauli words.
fn equivalent_observable_of(u: &CMatrix<f64>, o: &CMatrix<f64>) -> Result<Vec<crate::qmath::PauliString<f64>>> {
    let image = conjugate_observable(u, o)?;
    Ok(pauli_decompose(&image)?.into_iter().filter(|t| t.coefficient.abs() > 1e-14).collect())
}

/// Depth-first walk over sequences up to `budget` gates in increasing length,
/// execution-order lexicographic, readout qubit innermost. Calls `visit` with
/// the support of each candidate's equivalent measurement until it returns
/// `true`.
fn walk_candidates(
    n: usize,
    budget: usize,
    mut visit: impl FnMut(&[NamedGate], &[PauliWord], usize) -> Result<bool>,
) -> Result<bool> {
    let alphabet = gate_alphabet(n);
    let prop = Propagator::new(n, &alphabet)?;
    let mut buf = (vec![0.0; 1 << (2 * n)], vec![0.0; 1 << (2 * n)]);
    let k = alphabet.len();
    for len in 0..=budget {
        // odometer over index vectors, first gate most significant
        let mut idx = vec![0usize; len];
        loop {
            let seq: Vec<NamedGate> = idx.iter().map(|&i| alphabet[i]).collect();
            for l in 0..n {
                let sup = prop.support(&idx, l, &mut buf);
                if visit(&seq, &sup, l)? {
                    return Ok(true);
                }
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(false)
}

/// First candidate whose support outside `known` is exactly `{target}`.
fn search_setting(
    n: usize,
    target: &PauliWord,
    known: &HashSet<&PauliWord>,
    budget: usize,
) -> Result<Option<(GateSequence, usize)>> {
    let mut found = None;
    walk_candidates(n, budget, |seq, sup, l| {
        let mut fresh = sup.iter().filter(|x| !known.contains(x));
        if fresh.next() == Some(target) && fresh.next().is_none() {
            found = Some((GateSequence::new(seq.to_vec()), l));
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

/// Greedy schedule for `n ≤ 4` qubits over sequences of at most `budget`
/// gates.
///
/// Candidates are scanned in a fixed order and a candidate is kept when
/// exactly one word of its equivalent measurement is still unknown. Scans
/// repeat until every word is resolved or a full scan adds nothing. The
/// result is triangular by construction.
pub fn schedule_nq<T: Real>(p: &DeviceParams<T>, budget: usize) -> Result<TomographySchedule<T>> {
    let n = p.n_qubits;
    let full = (1usize << (2 * n)) - 1;
    if n >= 2 {
        check_two_qubit_gate(p)?;
    }
    let mut resolved: HashSet<PauliWord> = HashSet::new();
    let mut plan: Vec<(GateSequence, usize, PauliWord)> = Vec::new();
    loop {
        let before = resolved.len();
        walk_candidates(n, budget, |seq, sup, l| {
            let fresh: Vec<&PauliWord> = sup.iter().filter(|x| !resolved.contains(*x)).collect();
            if fresh.len() == 1 {
                let t = fresh[0].clone();
                plan.push((GateSequence::new(seq.to_vec()), l, t.clone()));
                resolved.insert(t);
            }
            Ok(resolved.len() == full)
        })?;
        if resolved.len() == full || resolved.len() == before {
            break;
        }
    }
    if resolved.len() < full {
        let unresolved = PauliWord::all(n).skip(1).filter(|w| !resolved.contains(w)).map(|w| w.to_string()).collect();
        return Err(Error::RankDeficient { rank: resolved.len(), full, unresolved });
    }
    let entries = plan.into_iter().map(|(seq, l, t)| entry(p, seq, l, t)).collect::<Result<Vec<_>>>()?;
    let s = TomographySchedule { n_qubits: n, entries };
    s.validate()?;
    Ok(s)
}
