//! Single-photon scattering in semi-infinite coupled-resonator waveguides
//! joined by mechanical modes.
//!
//! Two or three tight-binding photon waveguides meet at a node where their
//! end cavities couple to shared mechanical modes; one coupling edge carries
//! a tunable synthetic phase that breaks time-reversal symmetry. This crate
//! computes the exact single-photon scattering matrices of that node,
//! solves the closed-form design conditions for nonreciprocal frequency
//! converters and circulators, and verifies everything against two
//! independent backends (a boundary-condition solver and a time-domain
//! wavepacket simulation).
//!
//! Everything is expressed in units of the a/b-arm hopping strength. The
//! `examples/` directory walks through each capability; the `crw` binary
//! exposes single-point queries, parameter sweeps, design solvers, dataset
//! regeneration and the verification suites.
//!
//! ```
//! use crw_transport::prelude::*;
//! use std::f64::consts::PI;
//!
//! // A perfect three-port circulator designed at phi = pi/2, k = pi/4:
//! let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
//! let result = design.evaluate().unwrap();
//! assert!((result.flow(Channel::C, Channel::A) - 1.0).abs() < 1e-10);
//! ```

pub mod channel;
pub mod config;
pub mod error;
pub mod figures;
pub mod node;
pub mod oracle;
pub mod output;
pub mod scattering;
pub mod sweep;
pub mod three_port;
pub mod two_port;
pub mod verify;

pub use channel::{
    channel_status_from_energy, dispersion_energy, group_velocity, Channel, ChannelSpec,
    ChannelStatus, BAND_EDGE_TOL,
};
pub use error::{DesignError, NodeSpecError, ScatterError};
pub use node::{
    CirculatorThreeModeCouplings, CirculatorTwoModeCouplings, CouplingEdge, MechanicalModeSpec,
    ModeLabel, NodeSpec, Topology, TwoPortCouplings, POLE_TOL,
};
pub use scattering::{flow_column, smatrix, ScatteringResult};
pub use three_port::{
    circulation_direction, design_circulator_three_modes_at_k,
    design_circulator_three_modes_equal, design_circulator_two_modes, effective_three_port,
    smatrix_three_port, CirculationDirection, CirculatorDesign, DesignCouplings,
    ThreePortEffectiveParams,
};
pub use two_port::{
    effective_two_port, optimal_converter_points, optimal_damping, smatrix_two_port,
    ConverterPoint, DominantConversion, TwoPortEffectiveParams,
};

/// Convenience re-exports for examples and downstream code.
pub mod prelude {
    pub use crate::channel::{
        channel_status_from_energy, dispersion_energy, group_velocity, Channel, ChannelSpec,
        ChannelStatus,
    };
    pub use crate::node::{
        CirculatorThreeModeCouplings, CirculatorTwoModeCouplings, MechanicalModeSpec, ModeLabel,
        NodeSpec, Topology, TwoPortCouplings,
    };
    pub use crate::oracle::{
        solve_boundary_system, wavepacket_transmission, LatticeScenario,
    };
    pub use crate::scattering::{smatrix, ScatteringResult};
    pub use crate::sweep::{run_sweep, IncidentSelection, SweepSpec, SweepVariable};
    pub use crate::three_port::{
        design_circulator_three_modes_at_k, design_circulator_three_modes_equal,
        design_circulator_two_modes, smatrix_three_port, CirculationDirection,
    };
    pub use crate::two_port::{optimal_converter_points, optimal_damping, smatrix_two_port};
}
