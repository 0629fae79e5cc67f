//! Domain vocabulary: state points, phase labels, the thermodynamics-to-
//! economics dictionary, and point classification over a built diagram.

use serde::{Deserialize, Serialize};

use crate::eos::{self, EosParams};
use crate::equilibrium::{CurveKind, PhaseDiagram};
use crate::error::{Error, Result};

/// A point of the economic state space with its derived price level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomicState {
    /// Internal politics stability (> 0).
    pub i: f64,
    /// Price level, derived from the active equation of state.
    pub p: f64,
    /// Output volume (> b of the active model).
    pub q: f64,
}

impl EconomicState {
    pub fn new(params: &EosParams, i: f64, q: f64) -> Result<Self> {
        let p = eos::price_level(params, i, q)?;
        if !p.is_finite() {
            return Err(Error::Domain(format!(
                "price level not finite at I = {i}, Q = {q}"
            )));
        }
        Ok(Self { i, p, q })
    }
}

/// Stable region of the I-P diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    /// Solid analog: low stability and high price level.
    Inflation,
    /// Fluid analog: "monetary policy as liquidity".
    Liquidity,
    /// Gas analog: high stability and low price level.
    Income,
    /// The region beyond the critical point, where liquidity and income are
    /// indistinguishable.
    Supercritical,
}

impl Phase {
    pub fn display_name(&self) -> &'static str {
        match self {
            Phase::Inflation => "inflation",
            Phase::Liquidity => "monetary policy as liquidity",
            Phase::Income => "income",
            Phase::Supercritical => "supercritical",
        }
    }
}

/// Classification of one (I, P) point: a region, or a named curve when the
/// point sits on a boundary within the configured tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Phase(Phase),
    Boundary(CurveKind),
}

impl PointClass {
    pub fn display_name(&self) -> String {
        match self {
            PointClass::Phase(p) => p.display_name().to_string(),
            PointClass::Boundary(c) => format!("boundary: {}", c.slug()),
        }
    }
}

/// Region of (I, P) by the strict geometry rules, ignoring the boundary band.
///
/// For I below the triple stability the sublimation-analog curve separates
/// inflation from income; between the triple and critical stabilities the
/// melting- and saturation-analog curves stack inflation over liquidity over
/// income; at and beyond the critical stability only the critical price level
/// distinguishes supercritical from income.
pub(crate) fn strict_region(diagram: &PhaseDiagram, i: f64, p: f64) -> Result<Phase> {
    let (min, max) = (diagram.i_min(), diagram.i_max());
    let slack = 1e-12 * max.max(1.0);
    if i < min - slack || i > max + slack {
        return Err(Error::StabilityRange { i, min, max });
    }
    let i_t = diagram.triple.i;
    let i_c = diagram.critical.i;
    Ok(if i < i_t {
        if p > diagram.sublimation_price(i) {
            Phase::Inflation
        } else {
            Phase::Income
        }
    } else if i < i_c {
        if p > diagram.melting_price(i) {
            Phase::Inflation
        } else if p > diagram.saturation_price(i)? {
            Phase::Liquidity
        } else {
            Phase::Income
        }
    } else if p > diagram.critical.p {
        Phase::Supercritical
    } else {
        Phase::Income
    })
}

/// Classifies an (I, P) point over a built diagram.
///
/// Points within the boundary tolerance of a curve report the curve itself
/// (coexistence is a state of its own); everything else gets its region.
/// Deterministic: ties between curves resolve in the fixed order
/// increase-decrease, recovery-recession, boom-crisis.
pub fn classify_phase(diagram: &PhaseDiagram, i: f64, p: f64) -> Result<PointClass> {
    let region = strict_region(diagram, i, p)?;
    let tol = diagram.tolerances.boundary;
    let i_t = diagram.triple.i;
    let i_c = diagram.critical.i;
    let near = |target: f64| (p - target).abs() <= tol * target.abs().max(1.0);

    if (i_t..=i_c).contains(&i) {
        if near(diagram.saturation_price(i)?) {
            return Ok(PointClass::Boundary(CurveKind::IncreaseDecrease));
        }
        if i < i_c && near(diagram.melting_price(i)) {
            return Ok(PointClass::Boundary(CurveKind::RecoveryRecession));
        }
    }
    if i <= i_t && near(diagram.sublimation_price(i)) {
        return Ok(PointClass::Boundary(CurveKind::BoomCrisis));
    }
    Ok(PointClass::Phase(region))
}

/// Direction of a dictionary lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LookupDirection {
    ThermoToEcon,
    EconToThermo,
}

/// One row of the thermodynamics-economics dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryEntry {
    pub thermo_symbol: String,
    pub thermo_name: String,
    pub econ_symbol: String,
    pub econ_name: String,
}

impl DictionaryEntry {
    fn new(ts: &str, tn: &str, es: &str, en: &str) -> Self {
        Self {
            thermo_symbol: ts.into(),
            thermo_name: tn.into(),
            econ_symbol: es.into(),
            econ_name: en.into(),
        }
    }

    /// Economic name with any parenthetical gloss stripped, for axis labels.
    pub fn econ_short_name(&self) -> &str {
        match self.econ_name.find(" (") {
            Some(idx) => &self.econ_name[..idx],
            None => &self.econ_name,
        }
    }
}

/// The built-in dictionary plus optional user extensions. Built-ins can be
/// extended but never overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    entries: Vec<DictionaryEntry>,
}

impl Dictionary {
    /// The built-in table: the state variables of the isomorphism and the two
    /// process variables (wealth and production of goods).
    pub fn builtin() -> Self {
        Self {
            entries: vec![
                DictionaryEntry::new("U", "internal energy", "G", "growth potential"),
                DictionaryEntry::new("T", "temperature", "I", "internal politics stability"),
                DictionaryEntry::new("S", "entropy", "E", "entropy"),
                DictionaryEntry::new("P", "pressure", "P", "price level (inflation)"),
                DictionaryEntry::new("V", "volume", "Q", "volume, structure, quality"),
                DictionaryEntry::new("W", "mechanical works", "W", "wealth of the system"),
                DictionaryEntry::new("Q", "heat", "q", "production of goods"),
            ],
        }
    }

    /// Built-ins plus user extensions; rejects any extension whose symbols
    /// collide with an existing row.
    pub fn with_extensions(extra: Vec<DictionaryEntry>) -> Result<Self> {
        let mut dict = Self::builtin();
        for entry in extra {
            let clash = dict.entries.iter().any(|e| {
                e.thermo_symbol == entry.thermo_symbol || e.econ_symbol == entry.econ_symbol
            });
            if clash {
                return Err(Error::Argument(format!(
                    "dictionary extension {:?}/{:?} collides with a built-in entry",
                    entry.thermo_symbol, entry.econ_symbol
                )));
            }
            dict.entries.push(entry);
        }
        Ok(dict)
    }

    pub fn entries(&self) -> &[DictionaryEntry] {
        &self.entries
    }

    pub fn lookup(&self, symbol: &str, direction: LookupDirection) -> Result<&DictionaryEntry> {
        if symbol.is_empty() {
            return Err(Error::Argument("dictionary symbol must be non-empty".into()));
        }
        let found = self.entries.iter().find(|e| match direction {
            LookupDirection::ThermoToEcon => e.thermo_symbol == symbol,
            LookupDirection::EconToThermo => e.econ_symbol == symbol,
        });
        found.ok_or_else(|| {
            let (dir, available) = match direction {
                LookupDirection::ThermoToEcon => (
                    "thermodynamic",
                    self.entries
                        .iter()
                        .map(|e| e.thermo_symbol.as_str())
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
                LookupDirection::EconToThermo => (
                    "economic",
                    self.entries
                        .iter()
                        .map(|e| e.econ_symbol.as_str())
                        .collect::<Vec<_>>()
                        .join(", "),
                ),
            };
            Error::UnknownSymbol {
                symbol: symbol.into(),
                direction: dir,
                available,
            }
        })
    }

    /// CSV dump with header, rows sorted by thermo_symbol. Fields containing
    /// commas are quoted.
    pub fn to_csv(&self) -> String {
        fn field(s: &str) -> String {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        }
        let mut rows: Vec<&DictionaryEntry> = self.entries.iter().collect();
        rows.sort_by(|a, b| a.thermo_symbol.cmp(&b.thermo_symbol));
        let mut out = String::from("thermo_symbol,thermo_name,econ_symbol,econ_name\n");
        for e in rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                field(&e.thermo_symbol),
                field(&e.thermo_name),
                field(&e.econ_symbol),
                field(&e.econ_name)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_examples() {
        let dict = Dictionary::builtin();
        let t = dict.lookup("T", LookupDirection::ThermoToEcon).unwrap();
        assert_eq!(t.econ_name, "internal politics stability");
        let s = dict.lookup("S", LookupDirection::ThermoToEcon).unwrap();
        assert_eq!(s.econ_name, "entropy");
        let err = dict.lookup("Z", LookupDirection::ThermoToEcon).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Z") && msg.contains("T") && msg.contains("available"));
    }

    #[test]
    fn round_trip_through_both_directions() {
        let dict = Dictionary::builtin();
        for entry in dict.entries() {
            let by_econ = dict
                .lookup(&entry.econ_symbol, LookupDirection::EconToThermo)
                .unwrap();
            let back = dict
                .lookup(&by_econ.thermo_symbol, LookupDirection::ThermoToEcon)
                .unwrap();
            assert_eq!(back, entry);
        }
    }

    #[test]
    fn symbols_unique_per_column() {
        let dict = Dictionary::builtin();
        for (k, e) in dict.entries().iter().enumerate() {
            for other in &dict.entries()[k + 1..] {
                assert_ne!(e.thermo_symbol, other.thermo_symbol);
                assert_ne!(e.econ_symbol, other.econ_symbol);
            }
        }
    }

    #[test]
    fn extensions_cannot_override_builtins() {
        let clash = DictionaryEntry::new("T", "temperature", "X", "whatever");
        assert!(Dictionary::with_extensions(vec![clash]).is_err());
        let fine = DictionaryEntry::new("F", "Helmholtz energy", "A", "austerity potential");
        let dict = Dictionary::with_extensions(vec![fine]).unwrap();
        assert!(dict.lookup("F", LookupDirection::ThermoToEcon).is_ok());
    }

    #[test]
    fn csv_is_sorted_and_quoted() {
        let csv = Dictionary::builtin().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "thermo_symbol,thermo_name,econ_symbol,econ_name");
        let symbols: Vec<&str> = lines[1..]
            .iter()
            .map(|l| l.split(',').next().unwrap())
            .collect();
        let mut sorted = symbols.clone();
        sorted.sort();
        assert_eq!(symbols, sorted);
        assert!(csv.contains("\"volume, structure, quality\""));
    }

    #[test]
    fn econ_short_name_strips_gloss() {
        let dict = Dictionary::builtin();
        let p = dict.lookup("P", LookupDirection::ThermoToEcon).unwrap();
        assert_eq!(p.econ_short_name(), "price level");
        let t = dict.lookup("T", LookupDirection::ThermoToEcon).unwrap();
        assert_eq!(t.econ_short_name(), "internal politics stability");
    }
}
