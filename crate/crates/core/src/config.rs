//! Configuration ingestion: strict JSON parsing with documented defaults.
//!
//! Every key is optional; absent keys take the documented defaults. Unknown
//! keys are rejected outright so a typo cannot silently fall back to a
//! default.

use std::path::Path;

use serde::Deserialize;

use crate::eos::{EosKind, EosParams};
use crate::equilibrium::{GridSpec, SolidModel, Tolerances};
use crate::error::{Error, Result};

/// Fully validated configuration with all defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub eos: EosParams,
    pub solid: SolidModel,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub chi_e: f64,
    pub chi_m: f64,
    pub e0: f64,
    pub u0: f64,
    /// Sector potentials nu_k (commodity counts vary only along explicitly
    /// supplied paths).
    pub sectors: Vec<f64>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            eos: EosParams::reduced(),
            solid: SolidModel::default(),
            grid: GridSpec::default(),
            tolerances: Tolerances::default(),
            chi_e: 0.0,
            chi_m: 0.0,
            e0: 0.0,
            u0: 0.0,
            sectors: Vec::new(),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    eos: Option<RawEos>,
    solid: Option<RawSolid>,
    grid: Option<RawGrid>,
    tolerances: Option<RawTolerances>,
    fields: Option<RawFields>,
    offsets: Option<RawOffsets>,
    sectors: Option<Vec<RawSector>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEos {
    kind: Option<String>,
    a: Option<f64>,
    b: Option<f64>,
    #[serde(rename = "R")]
    r: Option<f64>,
    c: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolid {
    #[serde(rename = "I_t")]
    i_t: Option<f64>,
    #[serde(rename = "L_melt")]
    l_melt: Option<f64>,
    #[serde(rename = "dQ_melt")]
    dq_melt: Option<f64>,
    #[serde(rename = "L_sub")]
    l_sub: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    n_increase_decrease: Option<usize>,
    n_boom_crisis: Option<usize>,
    n_recovery_recession: Option<usize>,
    #[serde(rename = "I_min")]
    i_min: Option<f64>,
    #[serde(rename = "I_max")]
    i_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    root: Option<f64>,
    area: Option<f64>,
    ode: Option<f64>,
    boundary: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    chi_e: Option<f64>,
    chi_m: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOffsets {
    #[serde(rename = "E0")]
    e0: Option<f64>,
    #[serde(rename = "U0")]
    u0: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSector {
    nu: f64,
}

/// Loads and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    config_from_str(&text)
}

/// Parses and validates a config from JSON text.
pub fn config_from_str(text: &str) -> Result<Config> {
    // Syntax first, then schema, so malformed JSON and unknown keys get
    // distinct errors.
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::ConfigParse(e.to_string()))?;
    let raw: RawConfig = serde_json::from_value(value).map_err(|e| {
        let msg = e.to_string();
        if msg.contains("unknown field") {
            Error::ConfigUnknownKey(msg)
        } else {
            Error::ConfigParse(msg)
        }
    })?;
    validate(raw)
}

fn validate(raw: RawConfig) -> Result<Config> {
    let defaults = Config::default();

    let eos = {
        let raw_eos = raw.eos.unwrap_or_default();
        let kind = match raw_eos.kind.as_deref() {
            None | Some("van_der_waals") => EosKind::VanDerWaals,
            Some("ideal") => EosKind::Ideal,
            Some(other) => {
                return Err(Error::ConfigInvalid(format!(
                    "eos.kind must be \"van_der_waals\" or \"ideal\", got {other:?}"
                )))
            }
        };
        let r = raw_eos.r.unwrap_or(defaults.eos.r);
        let c = raw_eos.c.unwrap_or(defaults.eos.c);
        match kind {
            EosKind::VanDerWaals => {
                let a = raw_eos.a.unwrap_or(defaults.eos.a);
                let b = raw_eos.b.unwrap_or(defaults.eos.b);
                EosParams::van_der_waals(a, b, r, c)
                    .map_err(|e| Error::ConfigInvalid(format!("eos: {e}")))?
            }
            EosKind::Ideal => {
                if raw_eos.a.is_some_and(|a| a != 0.0) || raw_eos.b.is_some_and(|b| b != 0.0) {
                    return Err(Error::ConfigInvalid(
                        "eos: the ideal model forces a = 0 and b = 0".into(),
                    ));
                }
                EosParams::ideal(r, c).map_err(|e| Error::ConfigInvalid(format!("eos: {e}")))?
            }
        }
    };

    let solid = {
        let raw_solid = raw.solid.unwrap_or_default();
        SolidModel {
            i_t: raw_solid.i_t.unwrap_or(defaults.solid.i_t),
            l_melt: raw_solid.l_melt.unwrap_or(defaults.solid.l_melt),
            dq_melt: raw_solid.dq_melt.unwrap_or(defaults.solid.dq_melt),
            l_sub: raw_solid.l_sub.unwrap_or(defaults.solid.l_sub),
        }
    };
    solid
        .validate(&eos)
        .map_err(|e| Error::ConfigInvalid(format!("solid: {e}")))?;

    let grid = {
        let raw_grid = raw.grid.unwrap_or_default();
        let grid = GridSpec {
            n_increase_decrease: raw_grid
                .n_increase_decrease
                .unwrap_or(defaults.grid.n_increase_decrease),
            n_boom_crisis: raw_grid.n_boom_crisis.unwrap_or(defaults.grid.n_boom_crisis),
            n_recovery_recession: raw_grid
                .n_recovery_recession
                .unwrap_or(defaults.grid.n_recovery_recession),
            i_min: raw_grid.i_min.unwrap_or(defaults.grid.i_min),
            i_max: raw_grid.i_max.unwrap_or(defaults.grid.i_max),
        };
        for (name, n) in [
            ("grid.n_increase_decrease", grid.n_increase_decrease),
            ("grid.n_boom_crisis", grid.n_boom_crisis),
            ("grid.n_recovery_recession", grid.n_recovery_recession),
        ] {
            if n < 2 {
                return Err(Error::ConfigInvalid(format!("{name} must be >= 2, got {n}")));
            }
        }
        if grid.i_min <= 0.0 || grid.i_min >= solid.i_t || grid.i_min.is_nan() {
            return Err(Error::ConfigInvalid(format!(
                "grid.I_min must satisfy 0 < I_min < I_t, got {}",
                grid.i_min
            )));
        }
        if grid.i_max <= solid.i_t || grid.i_max.is_nan() {
            return Err(Error::ConfigInvalid(format!(
                "grid.I_max must be > I_t, got {}",
                grid.i_max
            )));
        }
        grid
    };

    let tolerances = {
        let raw_tol = raw.tolerances.unwrap_or_default();
        let tol = Tolerances {
            root: raw_tol.root.unwrap_or(defaults.tolerances.root),
            area: raw_tol.area.unwrap_or(defaults.tolerances.area),
            ode: raw_tol.ode.unwrap_or(defaults.tolerances.ode),
            boundary: raw_tol.boundary.unwrap_or(defaults.tolerances.boundary),
        };
        for (name, v) in [
            ("tolerances.root", tol.root),
            ("tolerances.area", tol.area),
            ("tolerances.ode", tol.ode),
            ("tolerances.boundary", tol.boundary),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::ConfigInvalid(format!("{name} must be > 0, got {v}")));
            }
        }
        tol
    };

    let raw_fields = raw.fields.unwrap_or_default();
    let chi_e = raw_fields.chi_e.unwrap_or(defaults.chi_e);
    let chi_m = raw_fields.chi_m.unwrap_or(defaults.chi_m);
    for (name, chi) in [("fields.chi_e", chi_e), ("fields.chi_m", chi_m)] {
        if chi < 0.0 || !chi.is_finite() {
            return Err(Error::ConfigInvalid(format!(
                "{name} must be finite and >= 0, got {chi}"
            )));
        }
    }

    let raw_offsets = raw.offsets.unwrap_or_default();
    let e0 = raw_offsets.e0.unwrap_or(defaults.e0);
    let u0 = raw_offsets.u0.unwrap_or(defaults.u0);
    for (name, v) in [("offsets.E0", e0), ("offsets.U0", u0)] {
        if !v.is_finite() {
            return Err(Error::ConfigInvalid(format!("{name} must be finite, got {v}")));
        }
    }

    let sectors: Vec<f64> = raw
        .sectors
        .unwrap_or_default()
        .into_iter()
        .map(|s| s.nu)
        .collect();
    if sectors.iter().any(|nu| !nu.is_finite()) {
        return Err(Error::ConfigInvalid("sectors.nu must be finite".into()));
    }

    Ok(Config {
        eos,
        solid,
        grid,
        tolerances,
        chi_e,
        chi_m,
        e0,
        u0,
        sectors,
    })
}

impl Config {
    /// Potential model with the configured offsets applied.
    pub fn potential_model(&self) -> crate::potentials::PotentialModel {
        crate::potentials::PotentialModel::with_offsets(self.eos, self.e0, self.u0)
    }
}
