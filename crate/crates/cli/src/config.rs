//! Experiment configuration: JSON schema with strict field checking, plus the
//! flag-string parsers shared by the subcommands.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use pressure_core::dynamics::{CircleMap, IntervalMap, Potential, State, SystemSpec};
use pressure_core::pseudo_orbit::{ScaleFunction, ScaledMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteKind {
    Bowen,
    Fk,
    Po,
    Ppo,
    Fkpo,
    Scaled,
    Fkdist,
    Verify,
    Report,
}

impl std::fmt::Display for RouteKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RouteKind::Bowen => "bowen",
            RouteKind::Fk => "fk",
            RouteKind::Po => "po",
            RouteKind::Ppo => "ppo",
            RouteKind::Fkpo => "fkpo",
            RouteKind::Scaled => "scaled",
            RouteKind::Fkdist => "fkdist",
            RouteKind::Verify => "verify",
            RouteKind::Report => "report",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub n: Vec<usize>,
    pub epsilon: Vec<f64>,
    pub alpha: Vec<f64>,
    pub delta: Option<f64>,
    pub n_delta: Option<usize>,
    pub scale: Option<ScaleFunction>,
    pub scaled_mode: Option<ScaledMode>,
    pub net_resolution: Option<f64>,
    pub cells: Option<usize>,
    pub pool_resolution: Option<f64>,
    pub tail_length: Option<usize>,
    /// state literals for the fkdist route ("0.5", "0110", "2")
    pub states: Vec<String>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub pool: usize,
    pub determinization: usize,
    pub enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            pool: 4096,
            determinization: 200_000,
            enumeration: 1 << 22,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
}

fn default_tail_fraction() -> f64 {
    0.3
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemSpec,
    #[serde(default = "default_potential")]
    pub potential: Potential,
    pub route: RouteKind,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default)]
    pub output: OutputSpec,
    /// verify-route suite name
    #[serde(default)]
    pub suite: Option<String>,
}

fn default_potential() -> Potential {
    Potential::Zero
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.caps.pool == 0 || self.caps.determinization == 0 || self.caps.enumeration == 0 {
            return Err("caps must be positive".into());
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err("tail_fraction must be in (0, 1]".into());
        }
        match self.route {
            RouteKind::Verify => {}
            RouteKind::Fkdist => {
                if self.grid.states.len() != 2 {
                    return Err("fkdist needs exactly two states in grid.states".into());
                }
                if self.grid.n.is_empty() {
                    return Err("grid.n must be nonempty".into());
                }
            }
            _ => {
                if self.grid.n.is_empty() {
                    return Err("grid.n must be nonempty".into());
                }
            }
        }
        Ok(())
    }
}

/// "doubling", "tent", "tent:3.0", "logistic:4.0", "rotation",
/// "rotation:0.33", "full-shift", "full-shift:3", "golden-mean".
pub fn parse_system(s: &str) -> Result<SystemSpec, String> {
    let (name, arg) = match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num = |d: f64| -> Result<f64, String> {
        match arg {
            None => Ok(d),
            Some(v) => v.parse().map_err(|_| format!("bad parameter in '{s}'")),
        }
    };
    match name {
        "doubling" => Ok(SystemSpec::Circle { map: CircleMap::Doubling }),
        "rotation" => Ok(SystemSpec::Circle {
            map: CircleMap::Rotation { theta: num(0.6180339887)? },
        }),
        "tent" => Ok(SystemSpec::Interval {
            map: IntervalMap::Tent { slope: num(2.0)? },
        }),
        "logistic" => Ok(SystemSpec::Interval {
            map: IntervalMap::Logistic { r: num(4.0)? },
        }),
        "full-shift" => Ok(SystemSpec::FullShift {
            symbols: num(2.0)? as usize,
        }),
        "golden-mean" => Ok(SystemSpec::golden_mean()),
        _ => Err(format!("unknown system '{s}'")),
    }
}

/// "zero", "symbols:0,1", "poly:0.5,-1".
pub fn parse_potential(s: &str) -> Result<Potential, String> {
    let (name, arg) = match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let values = || -> Result<Vec<f64>, String> {
        arg.ok_or_else(|| format!("'{name}' needs a value list"))?
            .split(',')
            .map(|v| v.trim().parse().map_err(|_| format!("bad number in '{s}'")))
            .collect()
    };
    match name {
        "zero" => Ok(Potential::Zero),
        "symbols" => Ok(Potential::SymbolValues { values: values()? }),
        "poly" => Ok(Potential::Polynomial { coefficients: values()? }),
        _ => Err(format!("unknown potential '{s}'")),
    }
}

/// "4..12" (inclusive), "4..=12", or "4,6,8".
pub fn parse_n_spec(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("bad n spec '{s}'");
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo..=hi).collect())
    } else {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|_| bad()))
            .collect()
    }
}

/// State literal against the space: coordinate, symbol word, or index.
pub fn parse_state(sys: &SystemSpec, s: &str) -> Result<State, String> {
    let state = match sys {
        SystemSpec::Circle { .. } | SystemSpec::Interval { .. } => State::Point(
            s.parse().map_err(|_| format!("bad coordinate '{s}'"))?,
        ),
        SystemSpec::FullShift { .. } | SystemSpec::Sft { .. } => {
            let digits: Option<Vec<u8>> =
                s.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
            State::word(digits.ok_or_else(|| format!("bad word '{s}'"))?)
        }
        SystemSpec::Finite { .. } => {
            State::Index(s.parse().map_err(|_| format!("bad index '{s}'"))?)
        }
    };
    sys.check_state(&state).map_err(|e| e.to_string())?;
    Ok(state)
}
