//! The quantum node joining the waveguides: mechanical modes, coupling edges
//! and the synthetic phase.
//!
//! Detuning sign convention: a mode with detuning `delta` and damping `gamma`
//! responds to a photon of energy `E` through the factor `1 / (E + delta +
//! i gamma)`, i.e. the photon-phonon resonance sits at `E = -delta`. This is
//! the convention of the detuning axes used by every dataset this crate
//! regenerates.

use crate::channel::Channel;
use crate::error::NodeSpecError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

/// Absolute tolerance (in reference-hopping units) around an undamped
/// mechanical resonance inside which the closed-form backends refuse to
/// evaluate; the boundary solver remains valid there.
pub const POLE_TOL: f64 = 1e-9;

/// Mechanical-mode identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeLabel {
    D1,
    D2,
    D3,
}

impl ModeLabel {
    pub fn index(self) -> usize {
        match self {
            ModeLabel::D1 => 0,
            ModeLabel::D2 => 1,
            ModeLabel::D3 => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModeLabel::D1 => "d1",
            ModeLabel::D2 => "d2",
            ModeLabel::D3 => "d3",
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModeLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "d1" | "1" => Ok(ModeLabel::D1),
            "d2" | "2" => Ok(ModeLabel::D2),
            "d3" | "3" => Ok(ModeLabel::D3),
            other => Err(format!("unknown mode '{other}' (expected d1, d2 or d3)")),
        }
    }
}

/// One mechanical mode of the node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanicalModeSpec {
    pub label: ModeLabel,
    /// Detuning; the mode resonates with photons at `E = -delta`.
    pub delta: f64,
    /// Damping rate, `>= 0`.
    pub gamma: f64,
}

impl MechanicalModeSpec {
    pub fn new(label: ModeLabel, delta: f64, gamma: f64) -> Result<Self, NodeSpecError> {
        if gamma < 0.0 || !gamma.is_finite() || !delta.is_finite() {
            return Err(NodeSpecError::NegativeDamping(label, gamma));
        }
        Ok(MechanicalModeSpec {
            label,
            delta,
            gamma,
        })
    }

    pub fn lossless(label: ModeLabel, delta: f64) -> Self {
        MechanicalModeSpec {
            label,
            delta,
            gamma: 0.0,
        }
    }

    /// Complex response denominator `E + delta + i gamma`.
    pub fn response_denominator(&self, energy: f64) -> Complex64 {
        Complex64::new(energy + self.delta, self.gamma)
    }

    /// True when the closed forms would divide by (nearly) zero here.
    pub fn at_pole(&self, energy: f64) -> bool {
        self.gamma == 0.0 && (energy + self.delta).abs() <= POLE_TOL
    }
}

/// An optomechanical coupling edge between an end cavity and a mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingEdge {
    pub channel: Channel,
    pub mode: ModeLabel,
    /// Coupling strength `J >= 0`.
    pub strength: f64,
    /// Exactly one edge per node carries the synthetic phase: (b, d1).
    pub carries_phase: bool,
}

/// The coupling graph variants treated by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Two waveguides (a, b) joined by modes d1, d2.
    TwoPort,
    /// Three waveguides; CRW-c attaches to d2 only.
    CirculatorTwoModes,
    /// Three waveguides joined pairwise by modes d1 (a-b), d2 (a-c), d3 (b-c).
    CirculatorThreeModes,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::TwoPort => "two-port",
            Topology::CirculatorTwoModes => "circulator-two-modes",
            Topology::CirculatorThreeModes => "circulator-three-modes",
        }
    }

    pub fn n_channels(self) -> usize {
        match self {
            Topology::TwoPort => 2,
            _ => 3,
        }
    }

    pub fn n_modes(self) -> usize {
        match self {
            Topology::CirculatorThreeModes => 3,
            _ => 2,
        }
    }

    pub fn mode_labels(self) -> &'static [ModeLabel] {
        match self {
            Topology::CirculatorThreeModes => &[ModeLabel::D1, ModeLabel::D2, ModeLabel::D3],
            _ => &[ModeLabel::D1, ModeLabel::D2],
        }
    }

    /// The exact coupling-edge set the topology requires, in canonical order.
    pub fn edge_set(self) -> &'static [(Channel, ModeLabel)] {
        use Channel::*;
        use ModeLabel::*;
        match self {
            Topology::TwoPort => &[(A, D1), (B, D1), (A, D2), (B, D2)],
            Topology::CirculatorTwoModes => &[(A, D1), (B, D1), (A, D2), (B, D2), (C, D2)],
            Topology::CirculatorThreeModes => {
                &[(A, D1), (B, D1), (A, D2), (C, D2), (B, D3), (C, D3)]
            }
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Named couplings for the two-port converter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortCouplings {
    pub j_a1: f64,
    pub j_b1: f64,
    pub j_a2: f64,
    pub j_b2: f64,
}

/// Named couplings for the two-mode circulator (CRW-c on d2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculatorTwoModeCouplings {
    pub j_a1: f64,
    pub j_b1: f64,
    pub j_a2: f64,
    pub j_b2: f64,
    pub j_c2: f64,
}

/// Named couplings for the three-mode circulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculatorThreeModeCouplings {
    pub j_a1: f64,
    pub j_b1: f64,
    pub j_a2: f64,
    pub j_c2: f64,
    pub j_b3: f64,
    pub j_c3: f64,
}

/// A validated quantum node: topology, modes, coupling edges and phase.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    topology: Topology,
    modes: Vec<MechanicalModeSpec>,
    edges: Vec<CouplingEdge>,
    phi: f64,
}

impl NodeSpec {
    /// Validates a node description against its topology's invariants.
    pub fn new(
        topology: Topology,
        modes: Vec<MechanicalModeSpec>,
        edges: Vec<CouplingEdge>,
        phi: f64,
    ) -> Result<Self, NodeSpecError> {
        if !phi.is_finite() {
            return Err(NodeSpecError::NonFinitePhase(phi));
        }
        let expected_modes = topology.mode_labels();
        if modes.len() != expected_modes.len()
            || modes
                .iter()
                .zip(expected_modes)
                .any(|(m, want)| m.label != *want)
        {
            return Err(NodeSpecError::WrongModes {
                topology: topology.name(),
                expected: expected_modes.to_vec(),
            });
        }
        for m in &modes {
            if m.gamma < 0.0 || !m.gamma.is_finite() || !m.delta.is_finite() {
                return Err(NodeSpecError::NegativeDamping(m.label, m.gamma));
            }
            if topology != Topology::TwoPort && m.gamma != 0.0 {
                return Err(NodeSpecError::DampedCirculator(topology.name()));
            }
        }
        let expected_edges = topology.edge_set();
        if edges.len() != expected_edges.len()
            || expected_edges
                .iter()
                .any(|want| !edges.iter().any(|e| (e.channel, e.mode) == *want))
        {
            return Err(NodeSpecError::WrongEdges {
                topology: topology.name(),
                expected: expected_edges.to_vec(),
            });
        }
        for e in &edges {
            if e.strength < 0.0 || !e.strength.is_finite() {
                return Err(NodeSpecError::NegativeCoupling(
                    e.channel, e.mode, e.strength,
                ));
            }
            let is_phase_edge = (e.channel, e.mode) == (Channel::B, ModeLabel::D1);
            if e.carries_phase != is_phase_edge {
                return Err(NodeSpecError::MisplacedPhase);
            }
        }
        Ok(NodeSpec {
            topology,
            modes,
            edges,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// Two-port converter node.
    pub fn two_port(
        couplings: TwoPortCouplings,
        modes: [MechanicalModeSpec; 2],
        phi: f64,
    ) -> Result<Self, NodeSpecError> {
        let c = couplings;
        NodeSpec::new(
            Topology::TwoPort,
            modes.to_vec(),
            vec![
                edge(Channel::A, ModeLabel::D1, c.j_a1),
                phase_edge(c.j_b1),
                edge(Channel::A, ModeLabel::D2, c.j_a2),
                edge(Channel::B, ModeLabel::D2, c.j_b2),
            ],
            phi,
        )
    }

    /// T-shaped node with two modes; every mode must be lossless.
    pub fn circulator_two_modes(
        couplings: CirculatorTwoModeCouplings,
        deltas: [f64; 2],
        phi: f64,
    ) -> Result<Self, NodeSpecError> {
        let c = couplings;
        NodeSpec::new(
            Topology::CirculatorTwoModes,
            vec![
                MechanicalModeSpec::lossless(ModeLabel::D1, deltas[0]),
                MechanicalModeSpec::lossless(ModeLabel::D2, deltas[1]),
            ],
            vec![
                edge(Channel::A, ModeLabel::D1, c.j_a1),
                phase_edge(c.j_b1),
                edge(Channel::A, ModeLabel::D2, c.j_a2),
                edge(Channel::B, ModeLabel::D2, c.j_b2),
                edge(Channel::C, ModeLabel::D2, c.j_c2),
            ],
            phi,
        )
    }

    /// T-shaped node with three modes; every mode must be lossless.
    pub fn circulator_three_modes(
        couplings: CirculatorThreeModeCouplings,
        deltas: [f64; 3],
        phi: f64,
    ) -> Result<Self, NodeSpecError> {
        let c = couplings;
        NodeSpec::new(
            Topology::CirculatorThreeModes,
            vec![
                MechanicalModeSpec::lossless(ModeLabel::D1, deltas[0]),
                MechanicalModeSpec::lossless(ModeLabel::D2, deltas[1]),
                MechanicalModeSpec::lossless(ModeLabel::D3, deltas[2]),
            ],
            vec![
                edge(Channel::A, ModeLabel::D1, c.j_a1),
                phase_edge(c.j_b1),
                edge(Channel::A, ModeLabel::D2, c.j_a2),
                edge(Channel::C, ModeLabel::D2, c.j_c2),
                edge(Channel::B, ModeLabel::D3, c.j_b3),
                edge(Channel::C, ModeLabel::D3, c.j_c3),
            ],
            phi,
        )
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn modes(&self) -> &[MechanicalModeSpec] {
        &self.modes
    }

    pub fn edges(&self) -> &[CouplingEdge] {
        &self.edges
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Coupling strength on edge (channel, mode); absent edges couple with 0.
    pub fn coupling(&self, channel: Channel, mode: ModeLabel) -> f64 {
        self.edges
            .iter()
            .find(|e| e.channel == channel && e.mode == mode)
            .map_or(0.0, |e| e.strength)
    }

    /// Phase factor on the phonon-creation side of the edge:
    /// `e^{i phi}` on (b, d1), unity elsewhere.
    pub fn phase_plus(&self, channel: Channel, mode: ModeLabel) -> Complex64 {
        if (channel, mode) == (Channel::B, ModeLabel::D1) {
            Complex64::from_polar(1.0, self.phi)
        } else {
            Complex64::ONE
        }
    }

    /// Returns a copy with the detuning of one mode replaced.
    pub fn with_delta(&self, mode: ModeLabel, delta: f64) -> NodeSpec {
        let mut node = self.clone();
        for m in &mut node.modes {
            if m.label == mode {
                m.delta = delta;
            }
        }
        node
    }

    /// Returns a copy with the phase replaced (normalised into [0, 2 pi)).
    pub fn with_phi(&self, phi: f64) -> NodeSpec {
        let mut node = self.clone();
        node.phi = phi.rem_euclid(TAU);
        node
    }

    /// Returns a copy with one coupling strength replaced.
    pub fn with_coupling(&self, channel: Channel, mode: ModeLabel, strength: f64) -> NodeSpec {
        let mut node = self.clone();
        for e in &mut node.edges {
            if e.channel == channel && e.mode == mode {
                e.strength = strength;
            }
        }
        node
    }

    /// First mode at its undamped resonance at this energy, if any.
    pub fn pole_at(&self, energy: f64) -> Option<ModeLabel> {
        self.modes
            .iter()
            .find(|m| m.at_pole(energy))
            .map(|m| m.label)
    }
}

fn edge(channel: Channel, mode: ModeLabel, strength: f64) -> CouplingEdge {
    CouplingEdge {
        channel,
        mode,
        strength,
        carries_phase: false,
    }
}

fn phase_edge(strength: f64) -> CouplingEdge {
    CouplingEdge {
        channel: Channel::B,
        mode: ModeLabel::D1,
        strength,
        carries_phase: true,
    }
}
