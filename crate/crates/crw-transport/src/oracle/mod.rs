//! Independent verification backends: a direct boundary-condition solver and
//! a time-domain wavepacket simulator. Neither shares code with the
//! closed-form scattering paths they cross-check.

pub mod boundary;
pub mod wavepacket;

pub use boundary::{solve_boundary_system, BoundarySystem, Unknown};
pub use wavepacket::{wavepacket_transmission, LatticeScenario, WavepacketFlows};
