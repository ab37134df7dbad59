//! Pulse segments, named gates, sequence composition, the closed-form
//! two-qubit evolution and the equivalent-measurement tables.

pub mod closed_form;
pub mod gates;
pub mod pulse;
pub mod tables;

pub use closed_form::{equivalent_measurement, equivalent_observable, u_closed_form, u_tau_matrix};
pub use gates::{GateSequence, NamedGate};
pub use pulse::{compose, evolve_segment, gate_schedule, sequence_schedule, sequence_unitary, PulseSegment, PulseSequence};
pub use tables::{verify_tables, ProductOrder, RowReport, TableReport, TableRow};
