//! Waveguide channels: dispersion relation, propagation status and group
//! velocity of a semi-infinite coupled-resonator waveguide (CRW).
//!
//! Each CRW is a chain of identical cavities with nearest-neighbour hopping
//! `xi > 0`; a single photon of wavenumber `k` in `(0, pi)` carries energy
//! `E = -2 xi cos k` in the rotating frame. Energies outside the band
//! `(-2 xi, 2 xi)` only support evanescent (exponentially decaying) waves.

use crate::error::{NodeSpecError, ScatterError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Relative tolerance for band-edge classification: `|E|` within
/// `BAND_EDGE_TOL * xi` of `2 xi` counts as sitting on the edge, where the
/// group velocity vanishes and scattering flows are undefined.
pub const BAND_EDGE_TOL: f64 = 1e-9;

/// Channel identifiers in the fixed ordering used by every matrix and file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    A,
    B,
    C,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::A, Channel::B, Channel::C];

    /// Position in the fixed (a, b, c) ordering.
    pub fn index(self) -> usize {
        match self {
            Channel::A => 0,
            Channel::B => 1,
            Channel::C => 2,
        }
    }

    pub fn from_index(i: usize) -> Option<Channel> {
        Channel::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            Channel::A => "a",
            Channel::B => "b",
            Channel::C => "c",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Channel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Channel::A),
            "b" => Ok(Channel::B),
            "c" => Ok(Channel::C),
            other => Err(format!("unknown channel '{other}' (expected a, b or c)")),
        }
    }
}

/// One semi-infinite waveguide: its label and hopping strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub label: Channel,
    /// Nearest-neighbour hopping, in units of the reference hopping.
    pub xi: f64,
}

impl ChannelSpec {
    pub fn new(label: Channel, xi: f64) -> Result<Self, NodeSpecError> {
        if xi <= 0.0 || !xi.is_finite() {
            return Err(NodeSpecError::NonPositiveHopping(label, xi));
        }
        Ok(ChannelSpec { label, xi })
    }
}

/// Whether a channel carries flux at a given energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelStatus {
    /// In-band: real wavenumber `k` in `(0, pi)`.
    Propagating { k: f64 },
    /// Out-of-band: the outgoing amplitude factor `z = e^{ik}` is real with
    /// `|z| < 1`, so the wave decays into the arm and carries no flux.
    Evanescent { amplitude_factor: f64 },
    /// `|E| = 2 xi` within tolerance; group velocity vanishes.
    BandEdge,
}

impl ChannelStatus {
    pub fn is_propagating(&self) -> bool {
        matches!(self, ChannelStatus::Propagating { .. })
    }

    /// The outgoing-wave factor `e^{ik}` entering the plane-wave ansatz.
    pub fn outgoing_factor(&self) -> Option<Complex64> {
        match *self {
            ChannelStatus::Propagating { k } => Some(Complex64::new(k.cos(), k.sin())),
            ChannelStatus::Evanescent { amplitude_factor } => {
                Some(Complex64::new(amplitude_factor, 0.0))
            }
            ChannelStatus::BandEdge => None,
        }
    }

    /// Imaginary part of the wavenumber, `-ln |e^{ik}| > 0`, for an
    /// evanescent channel.
    pub fn decay_rate(&self) -> Option<f64> {
        match *self {
            ChannelStatus::Evanescent { amplitude_factor } => Some(-amplitude_factor.abs().ln()),
            _ => None,
        }
    }

    pub fn kind_label(&self) -> &'static str {
        match self {
            ChannelStatus::Propagating { .. } => "propagating",
            ChannelStatus::Evanescent { .. } => "evanescent",
            ChannelStatus::BandEdge => "band_edge",
        }
    }
}

/// Dispersion relation of a semi-infinite CRW: `E = -2 xi cos k`.
pub fn dispersion_energy(k: f64, xi: f64) -> Result<f64, ScatterError> {
    debug_assert!(xi > 0.0);
    if !k.is_finite() || k <= 0.0 || k >= std::f64::consts::PI {
        return Err(ScatterError::WavenumberOutOfBand(k));
    }
    Ok(-2.0 * xi * k.cos())
}

/// Inverts the dispersion relation at a shared scattering energy.
///
/// In-band energies give the principal wavenumber branch in `(0, pi)`;
/// out-of-band energies give the decaying root of
/// `xi (z + 1/z) = -E` with `|z| < 1`.
pub fn channel_status_from_energy(energy: f64, xi: f64) -> ChannelStatus {
    debug_assert!(xi > 0.0);
    let edge = 2.0 * xi;
    if (energy.abs() - edge).abs() <= BAND_EDGE_TOL * xi {
        return ChannelStatus::BandEdge;
    }
    if energy.abs() < edge {
        ChannelStatus::Propagating {
            k: (-energy / edge).acos(),
        }
    } else {
        // z^2 + (E/xi) z + 1 = 0; the two real roots multiply to 1.
        // Take the magnitude-stable large root and invert it.
        let u = energy / xi;
        let big = (u.abs() + (u * u - 4.0).sqrt()) / 2.0;
        ChannelStatus::Evanescent {
            amplitude_factor: -u.signum() / big,
        }
    }
}

/// Group velocity `xi sin k` of a propagating channel.
pub fn group_velocity(k: f64, xi: f64) -> Result<f64, ScatterError> {
    debug_assert!(xi > 0.0);
    let energy = dispersion_energy(k, xi).map_err(|_| ScatterError::VelocityUndefined)?;
    match channel_status_from_energy(energy, xi) {
        ChannelStatus::Propagating { k } => Ok(xi * k.sin()),
        _ => Err(ScatterError::VelocityUndefined),
    }
}
