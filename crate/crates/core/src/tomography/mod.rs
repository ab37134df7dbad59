//! Measurement schedules, coefficient solving, density-matrix assembly and
//! physicality projection.

pub mod physical;
pub mod schedule;
pub mod solve;

pub use physical::{project_physical, project_simplex};
pub use schedule::{
    schedule_1q, schedule_2q, schedule_3q_coefficient, schedule_nq, default_budget, Relation, Route, ScheduleEntry, TomographySchedule,
    DEFAULT_BUDGET,
};
pub use solve::{assemble, reconstruct, solve, Diagnostics, ReconstructionResult};
