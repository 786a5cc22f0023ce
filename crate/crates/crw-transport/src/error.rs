//! Error types shared across the scattering backends.

use crate::channel::Channel;
use crate::node::ModeLabel;
use thiserror::Error;

/// Physics-domain failures: the request was well-formed but the scattering
/// problem is not defined (or not solvable) at the given point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    #[error("wavenumber {0} is at or beyond the band edge (requires 0 < k < pi)")]
    WavenumberOutOfBand(f64),

    #[error("channel {0} is at a band edge where the group velocity vanishes")]
    BandEdge(Channel),

    #[error("group velocity is undefined for a non-propagating channel")]
    VelocityUndefined,

    #[error("incident channel {channel} is not propagating at energy {energy}")]
    IncidentNotPropagating { channel: Channel, energy: f64 },

    #[error("energy {energy} hits the undamped mechanical resonance of {mode}; use the boundary solver at this point")]
    PoleAtMechanicalResonance { mode: ModeLabel, energy: f64 },

    #[error("node matrix is numerically singular (|det| = {det_mag:.3e})")]
    SingularNodeMatrix { det_mag: f64 },

    #[error("boundary system is numerically singular")]
    SingularBoundarySystem,

    #[error("channel {0} is not part of this scenario")]
    UnknownChannel(Channel),

    #[error("invalid lattice scenario: {0}")]
    InvalidScenario(String),

    #[error("wavepacket not cleared: far-boundary population {0:.3e} exceeds 1e-3 at measurement time")]
    PacketNotCleared(f64),

    #[error("integrator norm drift {0:.3e} exceeds the 1e-9 budget")]
    NormDrift(f64),

    #[error("time-domain oracle requires every mechanical damping to vanish")]
    DampedModeInTimeDomain,
}

/// Rejections of design-solver inputs (map to CLI exit code 2).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("converter/circulator design is defined only for phi in {{pi/2, 3pi/2}} and k in {{pi/4, 3pi/4}}")]
    UnsupportedDesignPoint,

    #[error("phase phi = n*pi leaves the design wavenumber degenerate")]
    DegeneratePhase,

    #[error("k = {0} out of design range (0, pi/4) U (3pi/4, pi)")]
    KOutOfDesignRange(f64),

    #[error("negative radicand in the coupling design equations at k = {0}")]
    NegativeRadicand(f64),
}

/// Structural problems in a node/channel description.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NodeSpecError {
    #[error("channel {0}: hopping strength must be positive, got {1}")]
    NonPositiveHopping(Channel, f64),

    #[error("mode {0}: damping must be non-negative, got {1}")]
    NegativeDamping(ModeLabel, f64),

    #[error("coupling ({0}, {1}): strength must be non-negative, got {2}")]
    NegativeCoupling(Channel, ModeLabel, f64),

    #[error("topology {topology}: expected modes {expected:?}")]
    WrongModes {
        topology: &'static str,
        expected: Vec<ModeLabel>,
    },

    #[error("topology {topology}: expected exactly the coupling edges {expected:?}")]
    WrongEdges {
        topology: &'static str,
        expected: Vec<(Channel, ModeLabel)>,
    },

    #[error("the synthetic phase must sit on the (b, d1) edge and nowhere else")]
    MisplacedPhase,

    #[error("topology {0}: mechanical damping must vanish on every mode")]
    DampedCirculator(&'static str),

    #[error("phase must be finite, got {0}")]
    NonFinitePhase(f64),
}
