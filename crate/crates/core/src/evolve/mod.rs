//! Characteristic (double-null) evolution of the 1+1 reduced equations with
//! energy, Morawetz-bulk, r^p-flux, extraction, and decay-fit diagnostics.

mod fit;
mod grid;
mod profile;
mod scheme;

pub use fit::{fit_decay, DecayFit, TAIL_FLOOR};
pub use grid::GridSpec;
pub use profile::{InitialProfile, ProfileMode};
pub use scheme::{
    convergence_study, ConvergenceReport, DiagnosticsSpec, EnergyReport, EvolveJob, EvolveOutput,
    ExtractionSeries, RowFluxes,
};
