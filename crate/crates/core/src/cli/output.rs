//! Byte-stable file formats: complex-matrix JSON and small CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::measurement::MeasurementRecord;
use crate::qmath::{CMatrix, PauliString};
use crate::tomography::TomographySchedule;

/// 17 significant digits, enough for an exact `f64` round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_array(values: impl Iterator<Item = f64>) -> String {
    let items: Vec<String> = values.map(fmt_f64).collect();
    format!("[{}]", items.join(", "))
}

/// `{"dim": d, "re": [row-major], "im": [row-major]}` plus optional string
/// fields written before the numbers.
pub fn matrix_to_json(m: &CMatrix<f64>, extra: &[(&str, &str)]) -> String {
    let mut s = String::from("{");
    for (k, v) in extra {
        let _ = write!(s, "{}: {}, ", Value::from(*k), Value::from(*v));
    }
    let _ = writeln!(
        s,
        "\"dim\": {}, \"re\": {}, \"im\": {}}}",
        m.dim(),
        json_array(m.as_slice().iter().map(|c| c.re)),
        json_array(m.as_slice().iter().map(|c| c.im))
    );
    s
}

fn number_array(v: &Value, key: &str) -> Result<Vec<f64>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("matrix JSON lacks array `{key}`")))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| Error::Parse(format!("non-numeric entry in `{key}`"))))
        .collect()
}

pub fn matrix_from_value(v: &Value) -> Result<CMatrix<f64>> {
    let dim = v
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("matrix JSON lacks integer `dim`".into()))? as usize;
    let re = number_array(v, "re")?;
    let im = number_array(v, "im")?;
    if re.len() != dim * dim || im.len() != dim * dim {
        return Err(Error::Parse(format!("matrix JSON with dim {dim} needs {} entries per part", dim * dim)));
    }
    CMatrix::from_parts(dim, &re, &im)
}

pub fn matrix_from_json(text: &str) -> Result<CMatrix<f64>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
    matrix_from_value(&v)
}

pub fn read_matrix(path: &Path) -> Result<CMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    matrix_from_json(&text)
}

/// `{"kraus": [matrix, …]}`.
pub fn read_kraus(path: &Path) -> Result<Vec<CMatrix<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("Kraus JSON: {e}")))?;
    v.get("kraus")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("Kraus JSON lacks array `kraus`".into()))?
        .iter()
        .map(matrix_from_value)
        .collect()
}

/// `i,j,re,im` for every element, row-major, 0-based indices.
pub fn barchart_csv(m: &CMatrix<f64>) -> String {
    let mut s = String::from("i,j,re,im\n");
    let d = m.dim();
    for i in 0..d {
        for j in 0..d {
            let c = m[(i, j)];
            let _ = writeln!(s, "{i},{j},{},{}", fmt_f64(c.re), fmt_f64(c.im));
        }
    }
    s
}

pub fn coefficients_csv(coefficients: &[PauliString<f64>]) -> String {
    let mut s = String::from("word,coefficient\n");
    for c in coefficients {
        let _ = writeln!(s, "{},{}", c.word, fmt_f64(c.coefficient));
    }
    s
}

pub fn records_csv(records: &[MeasurementRecord]) -> String {
    let mut s = String::from("index,label,readout_qubit,ideal_probability,shots,ones,frequency,seed\n");
    for (i, r) in records.iter().enumerate() {
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{},{},{}",
            r.label,
            r.readout_qubit + 1,
            fmt_f64(r.ideal_probability),
            r.shots,
            r.ones,
            fmt_f64(r.frequency()),
            r.seed
        );
    }
    s
}

/// Per setting: gate label, readout qubit, duration and the solved relation.
pub fn schedule_csv(schedule: &TomographySchedule<f64>) -> String {
    let mut s = String::from("index,sequence,readout_qubit,duration_ns,target,relation\n");
    for (i, e) in schedule.entries.iter().enumerate() {
        let _ = writeln!(
            s,
            "{i},{},{},{},{},{}",
            e.setting.sequence.label(),
            e.setting.readout_qubit + 1,
            fmt_f64(e.setting.duration),
            e.relation.target,
            e.relation.describe()
        );
    }
    s
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
