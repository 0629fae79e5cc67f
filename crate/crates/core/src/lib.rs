//! Phase-equilibrium computation engine for Roegenian economic systems.
//!
//! Given an economic equation of state in the variables (price level P,
//! output volume Q, internal politics stability I), the crate computes the
//! critical point, the three phase-boundary curves, the triple point,
//! thermodynamic-style potentials with their law checks, and simulates
//! quasi-static paths through the I-P phase diagram. Deterministic JSON, CSV
//! and SVG emitters turn a built diagram into files.

pub mod config;
pub mod eos;
pub mod equilibrium;
pub mod error;
pub mod fields;
pub mod model;
pub mod numeric;
pub mod output;
pub mod potentials;
pub mod simulate;
pub mod svg;

pub use config::Config;
pub use eos::{EosKind, EosParams};
pub use equilibrium::{
    BoundaryCurve, CoexistencePoint, CriticalPoint, CurveKind, GridSpec, PhaseDiagram, SolidModel,
    Tolerances, TriplePoint,
};
pub use error::{Error, Result};
pub use fields::{FieldPath, FieldState};
pub use model::{Dictionary, DictionaryEntry, EconomicState, LookupDirection, Phase, PointClass};
pub use potentials::{
    PotentialModel, PotentialState, QuasiStaticPath, SecondLawVerdict, SectorState,
    ThirdLawReport, ThirdLawVerdict,
};
pub use simulate::{SimulationReport, TransitionEvent};
