//! Flat `key = value` run configuration with dotted keys.
//!
//! ```text
//! # device
//! device.preset = 1
//! device.n_qubits = 2
//! device.E_J0.value = 100
//! device.E_J0.unit = mK
//! state.preset = bell
//! shots = 10000
//! seed = 7
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::device::{convert_energy, CouplingVariant, DeviceParams, EnergyUnit};
use crate::error::{Error, Result};
use crate::process::StandardChannel;
use crate::tomography::Route;

/// Keys accepted in a config file. Energy keys take `.value` and `.unit`.
const SCALAR_KEYS: &[&str] = &[
    "task",
    "device.preset",
    "device.n_qubits",
    "device.coupling",
    "device.E_J0.per_qubit",
    "state.preset",
    "state.file",
    "channel.preset",
    "channel.kraus_file",
    "shots",
    "seed",
    "route",
    "project",
    "out",
    "timing.t2_budget_ns",
    "readout_error",
    "schedule.budget",
];
const ENERGY_KEYS: &[&str] = &["E_C", "E_J0", "E_L", "E_J_eff"];

/// Parses the text into an ordered map, rejecting unknown or repeated keys.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !known_key(k) {
            return Err(Error::Config(format!("line {}: unknown key `{k}`", i + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("line {}: duplicate key `{k}`", i + 1)));
        }
    }
    Ok(map)
}

fn known_key(k: &str) -> bool {
    if SCALAR_KEYS.contains(&k) {
        return true;
    }
    match k.strip_prefix("device.").and_then(|r| r.rsplit_once('.')) {
        Some((name, field)) => ENERGY_KEYS.contains(&name) && (field == "value" || field == "unit"),
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Timing,
    VerifyTables,
    Simulate,
    TomoState,
    TomoProcess,
}

impl std::str::FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "timing" => Ok(Task::Timing),
            "verify-tables" => Ok(Task::VerifyTables),
            "simulate" => Ok(Task::Simulate),
            "tomo-state" => Ok(Task::TomoState),
            "tomo-process" => Ok(Task::TomoProcess),
            _ => Err(Error::Config(format!("unknown task `{s}`"))),
        }
    }
}

/// Named input states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatePreset {
    /// Single qubit with Bloch vector `(1/2, √3/2, 0)`.
    Fig3,
    /// `(|00⟩ + e^{iπ/3}|11⟩)/√2`.
    Fig4,
    /// `I/2ⁿ` on the device's qubit count.
    Mixed,
    /// `|0…0⟩` on the device's qubit count.
    Ground,
    Bell,
    Ghz,
}

impl std::str::FromStr for StatePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig3" => Ok(StatePreset::Fig3),
            "fig4" => Ok(StatePreset::Fig4),
            "mixed" => Ok(StatePreset::Mixed),
            "ground" => Ok(StatePreset::Ground),
            "bell" => Ok(StatePreset::Bell),
            "ghz" => Ok(StatePreset::Ghz),
            _ => Err(Error::Config(format!("unknown state preset `{s}` (fig3, fig4, mixed, ground, bell, ghz)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Preset(StatePreset),
    /// Complex-matrix JSON file.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Standard(StandardChannel),
    /// JSON `{"kraus": [matrix, …]}`.
    KrausFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Option<Task>,
    pub device: DeviceParams<f64>,
    /// Whether `device.n_qubits` was given explicitly.
    pub n_qubits_explicit: bool,
    pub state: Option<StateSpec>,
    pub channel: Option<ChannelSpec>,
    pub shots: u64,
    pub seed: u64,
    pub route: Route,
    pub project: bool,
    pub out: PathBuf,
    pub t2_budget_ns: f64,
    pub readout_error: f64,
    /// Gate budget for the generic schedule search; `None` picks the
    /// smallest one that completes for the qubit count.
    pub budget: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            task: None,
            device: DeviceParams::preset_1(2).expect("preset is valid"),
            n_qubits_explicit: false,
            state: None,
            channel: None,
            shots: 0,
            seed: 0,
            route: Route::default(),
            project: false,
            out: PathBuf::from("out"),
            t2_budget_ns: 5.0,
            readout_error: 0.0,
            budget: None,
        }
    }
}

fn parse_num<N: std::str::FromStr>(key: &str, v: &str) -> Result<N> {
    v.parse().map_err(|_| Error::Config(format!("`{key}` has invalid value `{v}`")))
}

pub fn parse_on_off(v: &str) -> Result<bool> {
    match v {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("expected on/off, got `{v}`"))),
    }
}

impl RunConfig {
    /// Relative file paths in the config resolve against `base`.
    pub fn from_text(text: &str, base: &Path) -> Result<Self> {
        let kv = parse_key_values(text)?;
        let get = |k: &str| kv.get(k).map(String::as_str);
        let mut cfg = RunConfig::default();
        if let Some(t) = get("task") {
            cfg.task = Some(t.parse()?);
        }
        let n: usize = match get("device.n_qubits") {
            Some(v) => {
                cfg.n_qubits_explicit = true;
                parse_num("device.n_qubits", v)?
            }
            None => 2,
        };
        let mut dev = match get("device.preset").unwrap_or("1") {
            "1" => DeviceParams::preset_1(n),
            "2" => DeviceParams::preset_2(n),
            "3" => DeviceParams::preset_3(n),
            other => return Err(Error::Config(format!("unknown device preset `{other}` (1, 2, 3)"))),
        }?;
        let energy = |name: &str| -> Result<Option<f64>> {
            let vk = format!("device.{name}.value");
            let uk = format!("device.{name}.unit");
            match (get(&vk), get(&uk)) {
                (None, None) => Ok(None),
                (Some(v), u) => {
                    let unit: EnergyUnit = u.unwrap_or("GHz").parse().map_err(|e: Error| Error::Config(format!("`{uk}`: {e}")))?;
                    Ok(Some(convert_energy(parse_num::<f64>(&vk, v)?, unit)))
                }
                (None, Some(_)) => Err(Error::Config(format!("`{uk}` given without `{vk}`"))),
            }
        };
        if let Some(e) = energy("E_C")? {
            dev.e_c = e;
        }
        if let Some(e) = energy("E_J0")? {
            dev.e_j0 = e;
            dev.e_j_eff = e;
        }
        if let Some(e) = energy("E_J_eff")? {
            dev.e_j_eff = e;
        }
        dev.e_l = match energy("E_L")? {
            Some(e) => e,
            None => crate::device::required_coupling_ratio::<f64>() * dev.e_j_eff,
        };
        if let Some(c) = get("device.coupling") {
            dev = dev.with_coupling(match c {
                "inductor_yy" => CouplingVariant::InductorYY,
                "chi_xx" => CouplingVariant::ChiXX,
                _ => return Err(Error::Config(format!("unknown coupling `{c}` (inductor_yy, chi_xx)"))),
            });
        }
        if let Some(list) = get("device.E_J0.per_qubit") {
            let vals = list
                .split(',')
                .map(|s| parse_num::<f64>("device.E_J0.per_qubit", s.trim()))
                .collect::<Result<Vec<_>>>()?;
            dev = dev.with_per_qubit_e_j0(vals)?;
        }
        dev.validate()?;
        cfg.device = dev;
        cfg.state = match (get("state.preset"), get("state.file")) {
            (Some(_), Some(_)) => return Err(Error::Config("give either state.preset or state.file".into())),
            (Some(p), None) => Some(StateSpec::Preset(p.parse()?)),
            (None, Some(f)) => Some(StateSpec::File(base.join(f))),
            (None, None) => None,
        };
        cfg.channel = match (get("channel.preset"), get("channel.kraus_file")) {
            (Some(_), Some(_)) => return Err(Error::Config("give either channel.preset or channel.kraus_file".into())),
            (Some(p), None) => {
                let kind: StandardChannel = p.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
                crate::process::standard_channel::<f64>(kind)?;
                Some(ChannelSpec::Standard(kind))
            }
            (None, Some(f)) => Some(ChannelSpec::KrausFile(base.join(f))),
            (None, None) => None,
        };
        if let Some(v) = get("shots") {
            cfg.shots = parse_num("shots", v)?;
        }
        if let Some(v) = get("seed") {
            cfg.seed = parse_num("seed", v)?;
        }
        if let Some(v) = get("route") {
            cfg.route = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
        }
        if let Some(v) = get("project") {
            cfg.project = parse_on_off(v)?;
        }
        if let Some(v) = get("out") {
            cfg.out = base.join(v);
        }
        if let Some(v) = get("timing.t2_budget_ns") {
            cfg.t2_budget_ns = parse_num("timing.t2_budget_ns", v)?;
            if cfg.t2_budget_ns.is_nan() || cfg.t2_budget_ns < 0.0 {
                return Err(Error::Config("timing.t2_budget_ns must be non-negative".into()));
            }
        }
        if let Some(v) = get("readout_error") {
            cfg.readout_error = parse_num("readout_error", v)?;
        }
        if let Some(v) = get("schedule.budget") {
            cfg.budget = Some(parse_num("schedule.budget", v)?);
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_text(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_energies_with_units() {
        let cfg = RunConfig::from_text(
            "device.E_J0.value = 100\ndevice.E_J0.unit = mK  # comment\ndevice.E_C.value = 86\ndevice.E_C.unit = ueV\nshots=5\n",
            Path::new("."),
        )
        .unwrap();
        assert!((cfg.device.e_j0 - 2.0836).abs() < 1e-12);
        assert!((cfg.device.e_c - 86.0 * 0.2418).abs() < 1e-12);
        assert_eq!(cfg.device.e_j_eff, cfg.device.e_j0);
        assert!((cfg.device.e_l / cfg.device.e_j_eff - 15f64.sqrt()).abs() < 1e-12);
        assert_eq!(cfg.shots, 5);
    }

    #[test]
    fn presets_and_defaults() {
        let cfg = RunConfig::from_text("device.preset = 3\nstate.preset = fig3\nroute = qubit2\n", Path::new("/tmp")).unwrap();
        assert!((cfg.device.e_j0 - 6.5).abs() < 1e-12);
        assert_eq!(cfg.state, Some(StateSpec::Preset(StatePreset::Fig3)));
        assert_eq!(cfg.route, Route::Qubit2);
        assert_eq!(cfg.t2_budget_ns, 5.0);
        assert!(!cfg.project);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "nonsense",
            "device.E_X.value = 1",
            "shots = -3",
            "shots = 1\nshots = 2",
            "device.E_C.unit = K",
            "device.E_C.value = 1\ndevice.E_C.unit = furlong",
            "state.preset = cat",
            "channel.preset = bit_flip(2)",
            "route = qubit3",
            "device.preset = 9",
            "device.E_J0.value = -1",
        ] {
            let r = RunConfig::from_text(text, Path::new("."));
            assert!(r.is_err(), "{text}");
        }
    }

    #[test]
    fn out_of_range_channel_parameter_is_caught_on_build() {
        let cfg = RunConfig::from_text("channel.preset = bit_flip(0.5)", Path::new(".")).unwrap();
        assert_eq!(cfg.channel, Some(ChannelSpec::Standard(StandardChannel::BitFlip(0.5))));
    }
}
