//! Search Hamiltonians, interpolation schedules, instantaneous spectra and
//! adiabatic runtime estimates.

mod problem;
mod runtime;
mod schedule;
mod spectrum;

pub use problem::SearchProblem;
pub use runtime::{
    action_integral, adiabatic_rate, adiabatic_t_min, integrate_action, local_schedule,
    runtime_report, AdiabaticCriterion, RuntimeReport, ACTION_NODES, MIN_RESOLVABLE_GAP,
};
pub(crate) use spectrum::grid;
pub use schedule::{Schedule, ScheduleKind, DIFF_STEP};
pub use spectrum::{
    min_gap, spectral_point, spectrum_trace, GapMinimum, SpectralPoint, DEGENERACY_TOL,
    REFINE_TOL,
};
