//! Benchmark-only crate; see the `benches/` directory.

use roegen_core::eos::EosParams;
use roegen_core::equilibrium::{build_diagram, GridSpec, PhaseDiagram, SolidModel, Tolerances};

/// Default diagram shared by the benchmarks.
pub fn default_diagram() -> PhaseDiagram {
    build_diagram(
        &EosParams::reduced(),
        &SolidModel::default(),
        &GridSpec::default(),
        &Tolerances::default(),
    )
    .expect("default diagram builds")
}
