//! Reference tables of two-qubit equivalent measurements and their check.
//!
//! Each row names a target correlator `σ_1i σ_2j`, a gate product `W` and the
//! expected `-√2 W†σ_lz W` as a two-term combination. The checker builds `W`
//! from physical pulses, reading the product as a matrix product (rightmost
//! gate runs first). Rows that fail are retried with the opposite order, and a
//! search reports a short gate sequence that does reproduce the listed
//! combination.

use std::fmt;

use crate::control::closed_form::equivalent_observable;
use crate::control::gates::{GateSequence, NamedGate};
use crate::control::pulse::{check_two_qubit_gate, sequence_unitary};
use crate::device::DeviceParams;
use crate::error::Result;
use crate::qmath::{CMatrix, PauliWord};
use crate::scalar::Real;

/// Agreement required for a row to hold.
pub const TABLE_TOL: f64 = 1e-10;

/// One reference row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    /// 1 for readout on qubit 1, 2 for readout on qubit 2.
    pub table: u8,
    pub row: u8,
    pub target: &'static str,
    /// Gate product in matrix order.
    pub operation: &'static str,
    /// `-√2 W†σ_lz W` as `(word, ±1)` pairs.
    pub expected: [(&'static str, f64); 2],
}

impl TableRow {
    pub fn readout_qubit(&self) -> usize {
        self.table as usize - 1
    }

    pub fn sequence(&self) -> GateSequence {
        self.operation.parse().expect("table operations are valid labels")
    }

    pub fn target_word(&self) -> PauliWord {
        self.target.parse().expect("table targets are valid words")
    }

    /// The single-qubit term accompanying the target.
    pub fn partner_word(&self) -> PauliWord {
        let t = self.target_word();
        self.expected
            .iter()
            .map(|(w, _)| w.parse::<PauliWord>().expect("valid word"))
            .find(|w| *w != t)
            .expect("two distinct terms")
    }
}

const fn row(table: u8, row: u8, target: &'static str, operation: &'static str, expected: [(&'static str, f64); 2]) -> TableRow {
    TableRow { table, row, target, operation, expected }
}

/// Readout on qubit 1.
pub const QUBIT1_TABLE: [TableRow; 9] = [
    row(1, 1, "xy", "U(t)", [("z0", 1.0), ("xy", 1.0)]),
    row(1, 2, "xz", "X1U(t)", [("y0", -1.0), ("xz", 1.0)]),
    row(1, 3, "xx", "U(t)Z2", [("z0", 1.0), ("xx", -1.0)]),
    row(1, 4, "yy", "U(t)Z1", [("z0", 1.0), ("yy", 1.0)]),
    row(1, 5, "yz", "X1U(t)Z1", [("x0", 1.0), ("yz", 1.0)]),
    row(1, 6, "yx", "U(t)Z1Z2", [("z0", 1.0), ("yx", -1.0)]),
    row(1, 7, "zy", "U(t)Z1X1", [("y0", -1.0), ("zy", 1.0)]),
    row(1, 8, "zz", "X1U(t)Z1X1", [("x0", 1.0), ("zz", 1.0)]),
    row(1, 9, "zx", "U(t)Z1Z2X1", [("y0", -1.0), ("zx", -1.0)]),
];

/// Readout on qubit 2.
pub const QUBIT2_TABLE: [TableRow; 9] = [
    row(2, 1, "xx", "U(t)Z1", [("0z", 1.0), ("xx", -1.0)]),
    row(2, 2, "yx", "U(t)", [("0z", 1.0), ("yx", 1.0)]),
    row(2, 3, "zx", "U(t)X1", [("0y", -1.0), ("zx", 1.0)]),
    row(2, 4, "xy", "U(t)Z1Z2", [("0z", 1.0), ("xy", -1.0)]),
    row(2, 5, "yy", "U(t)Z2", [("0z", 1.0), ("yy", 1.0)]),
    row(2, 6, "zy", "U(t)X1Z2", [("0x", 1.0), ("zy", 1.0)]),
    row(2, 7, "xz", "U(t)Z1Z2X2", [("0y", -1.0), ("xz", -1.0)]),
    row(2, 8, "yz", "U(t)Z2X2", [("0y", -1.0), ("yz", 1.0)]),
    row(2, 9, "zz", "U(t)X1Z2X2", [("0x", 1.0), ("zz", 1.0)]),
];

pub fn all_rows() -> impl Iterator<Item = &'static TableRow> {
    QUBIT1_TABLE.iter().chain(QUBIT2_TABLE.iter())
}

/// Product order under which a row holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOrder {
    /// Rightmost factor executes first.
    Matrix,
    /// Leftmost factor executes first.
    Reversed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowReport {
    pub row: TableRow,
    /// Largest coefficient deviation with the matrix-order reading.
    pub matrix_deviation: f64,
    /// Largest coefficient deviation with the reversed reading.
    pub reversed_deviation: f64,
    /// The computed `-√2 W†σ_lz W` under the matrix-order reading.
    pub computed: Vec<(PauliWord, f64)>,
    pub order: Option<ProductOrder>,
    /// A sequence (matrix order) reproducing the listed combination, when the
    /// listed one does not.
    pub correction: Option<String>,
    /// Whether the listed `W` still isolates the target with weight `±1/√2`
    /// next to a single-qubit term, so the row can resolve its coefficient.
    pub resolves_target: bool,
}

impl RowReport {
    pub fn holds(&self) -> bool {
        self.order == Some(ProductOrder::Matrix)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.holds()).count()
    }

    pub fn all_hold(&self) -> bool {
        self.rows.iter().all(RowReport::holds)
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.matrix_deviation).fold(0.0, f64::max)
    }

    /// Fixed-width text report, one line per row.
    pub fn render(&self) -> String {
        let mut s = String::from("table row target operation       order     deviation  status  note\n");
        for r in &self.rows {
            let order = match r.order {
                Some(ProductOrder::Matrix) => "matrix",
                Some(ProductOrder::Reversed) => "reversed",
                None => "neither",
            };
            let note = match &r.correction {
                Some(c) => format!("listed combination reproduced by {c}"),
                None if !r.holds() => "no sequence found".to_string(),
                None => String::new(),
            };
            s += &format!(
                "{:>5} {:>3} {:>6} {:<16} {:<9} {:>9.3e}  {:<6}  {}\n",
                r.row.table,
                r.row.row,
                r.row.target,
                r.row.operation,
                order,
                r.matrix_deviation,
                if r.holds() { "PASS" } else { "FAIL" },
                note
            );
        }
        s += &format!(
            "{}/{} rows hold under the matrix-product reading (rightmost gate executes first)\n",
            self.passed(),
            self.rows.len()
        );
        s
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `-√2` times the equivalent observable, as a dense coefficient list.
fn scaled_observable<T: Real>(w: &CMatrix<T>, l: usize) -> Result<Vec<(PauliWord, f64)>> {
    let s2 = std::f64::consts::SQRT_2;
    Ok(equivalent_observable(w, l)?
        .into_iter()
        .map(|t| (t.word, -s2 * t.coefficient.as_f64()))
        .collect())
}

fn deviation(computed: &[(PauliWord, f64)], expected: &[(&str, f64); 2]) -> f64 {
    let exp: Vec<(PauliWord, f64)> = expected.iter().map(|(w, c)| (w.parse().expect("valid word"), *c)).collect();
    let mut worst: f64 = 0.0;
    for (w, c) in computed {
        let e = exp.iter().find(|(x, _)| x == w).map_or(0.0, |(_, c)| *c);
        worst = worst.max((c - e).abs());
    }
    for (w, e) in &exp {
        if !computed.iter().any(|(x, _)| x == w) {
            worst = worst.max(e.abs());
        }
    }
    worst
}

fn resolves(computed: &[(PauliWord, f64)], target: &PauliWord) -> bool {
    computed.len() == 2
        && computed.iter().all(|(_, c)| (c.abs() - 1.0).abs() < 1e-9)
        && computed.iter().any(|(w, _)| w == target)
        && computed.iter().any(|(w, _)| w.weight() == 1)
}

/// Shortest sequence over `{X1, X2, Z1, Z2}` with one `U(τ)`, at most four
/// gates, whose ideal equivalent measurement matches the row.
pub fn search_correction(row: &TableRow) -> Option<GateSequence> {
    let alphabet = [NamedGate::X(0), NamedGate::X(1), NamedGate::Z(0), NamedGate::Z(1), NamedGate::UTau(0, 1)];
    let l = row.readout_qubit();
    for len in 1..=4usize {
        let total = alphabet.len().pow(len as u32);
        for code in 0..total {
            let mut k = code;
            let mut gates = Vec::with_capacity(len);
            for _ in 0..len {
                gates.push(alphabet[k % alphabet.len()]);
                k /= alphabet.len();
            }
            if gates.iter().filter(|g| matches!(g, NamedGate::UTau(..))).count() != 1 {
                continue;
            }
            let seq = GateSequence::new(gates);
            let w = seq.ideal_unitary::<f64>(2).ok()?;
            let comp = scaled_observable(&w, l).ok()?;
            if deviation(&comp, &row.expected) < TABLE_TOL {
                return Some(seq);
            }
        }
    }
    None
}

pub fn verify_row<T: Real>(p: &DeviceParams<T>, row: &TableRow) -> Result<RowReport> {
    let seq = row.sequence();
    let l = row.readout_qubit();
    let computed = scaled_observable(&sequence_unitary(p, &seq)?, l)?;
    let reversed = scaled_observable(&sequence_unitary(p, &seq.reversed())?, l)?;
    let matrix_deviation = deviation(&computed, &row.expected);
    let reversed_deviation = deviation(&reversed, &row.expected);
    let order = if matrix_deviation < TABLE_TOL {
        Some(ProductOrder::Matrix)
    } else if reversed_deviation < TABLE_TOL {
        Some(ProductOrder::Reversed)
    } else {
        None
    };
    let correction = if order == Some(ProductOrder::Matrix) {
        None
    } else {
        search_correction(row).map(|s| s.label())
    };
    let resolves_target = resolves(&computed, &row.target_word());
    Ok(RowReport { row: *row, matrix_deviation, reversed_deviation, computed, order, correction, resolves_target })
}

/// Checks all eighteen rows on a two-qubit (or larger) device.
pub fn verify_tables<T: Real>(p: &DeviceParams<T>) -> Result<TableReport> {
    check_two_qubit_gate(p)?;
    let dev = if p.n_qubits == 2 { p.clone() } else { p.clone().with_qubit_count(2)? };
    let rows = all_rows().map(|r| verify_row(&dev, r)).collect::<Result<Vec<_>>>()?;
    Ok(TableReport { rows })
}
