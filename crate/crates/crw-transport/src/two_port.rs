//! Closed-form two-port frequency-converter scattering and the optimal
//! nonreciprocity conditions.
//!
//! Eliminating the mechanical amplitudes turns the node into an effective
//! beam splitter with complex, energy-dependent couplings `J_ab != J_ba`
//! (the asymmetry is the nonreciprocity mechanism) and complex frequency
//! shifts on the end cavities. The scattering amplitudes then follow in
//! closed form.

use crate::channel::{Channel, ChannelSpec};
use crate::error::ScatterError;
use crate::node::{NodeSpec, Topology};
use crate::scattering::{energy_and_statuses, ScatteringResult};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Effective node parameters induced by the mechanical modes at energy `E`.
///
/// With every damping zero and `phi = n pi` both couplings are equal and
/// real; in general `j_ab(phi) = j_ba(-phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortEffectiveParams {
    pub j_ab: Complex64,
    pub j_ba: Complex64,
    pub delta_a: Complex64,
    pub delta_b: Complex64,
    pub energy: f64,
}

/// Sums each mode's contribution `J_a J_b e^{+-i phi} / (E + delta + i gamma)`
/// into the effective couplings and shifts.
///
/// Refuses energies within `POLE_TOL` of an undamped mechanical resonance;
/// the boundary solver handles those points.
pub fn effective_two_port(
    energy: f64,
    node: &NodeSpec,
) -> Result<TwoPortEffectiveParams, ScatterError> {
    debug_assert_eq!(node.topology(), Topology::TwoPort);
    if let Some(mode) = node.pole_at(energy) {
        return Err(ScatterError::PoleAtMechanicalResonance { mode, energy });
    }
    let mut p = TwoPortEffectiveParams {
        j_ab: Complex64::ZERO,
        j_ba: Complex64::ZERO,
        delta_a: Complex64::ZERO,
        delta_b: Complex64::ZERO,
        energy,
    };
    for mode in node.modes() {
        let den = mode.response_denominator(energy);
        let j_a = node.coupling(Channel::A, mode.label);
        let j_b = node.coupling(Channel::B, mode.label);
        let phase = node.phase_plus(Channel::B, mode.label);
        p.j_ab += j_a * j_b * phase / den;
        p.j_ba += j_a * j_b * phase.conj() / den;
        p.delta_a += j_a * j_a / den;
        p.delta_b += j_b * j_b / den;
    }
    Ok(p)
}

/// Two-port scattering amplitudes and flows at the energy fixed by the
/// incident channel's wavenumber.
///
/// The partner channel may be propagating or evanescent; for an evanescent
/// partner the decaying root replaces `e^{ik}` throughout and the flow into
/// it is exactly zero.
pub fn smatrix_two_port(
    incident_k: f64,
    incident: Channel,
    node: &NodeSpec,
    channels: &[ChannelSpec; 2],
) -> Result<ScatteringResult, ScatterError> {
    debug_assert_eq!(node.topology(), Topology::TwoPort);
    let (energy, statuses) = energy_and_statuses(incident_k, incident, channels)?;
    let p = effective_two_port(energy, node)?;

    let z_a = statuses[0].outgoing_factor().expect("band edge rejected");
    let z_b = statuses[1].outgoing_factor().expect("band edge rejected");
    let xi_a = channels[0].xi;
    let xi_b = channels[1].xi;

    // a_plus = xi e^{ik} + Delta, a_minus = xi e^{-ik} + Delta; for an
    // evanescent channel e^{-ik} is the growing root 1/z, not a conjugate.
    let a_plus = xi_a * z_a + p.delta_a;
    let a_minus = xi_a / z_a + p.delta_a;
    let b_plus = xi_b * z_b + p.delta_b;
    let b_minus = xi_b / z_b + p.delta_b;
    let jj = p.j_ab * p.j_ba;
    let det = a_minus * b_minus - jj;
    // scale-invariant singularity test against the Hadamard row-norm bound
    let hadamard = (a_minus.norm_sqr() + p.j_ab.norm_sqr()).sqrt()
        * (b_minus.norm_sqr() + p.j_ba.norm_sqr()).sqrt();
    if det.norm() <= 1e-12 * hadamard.max(f64::MIN_POSITIVE) {
        return Err(ScatterError::SingularNodeMatrix {
            det_mag: det.norm(),
        });
    }

    // 2i sin k as (z - 1/z), valid for complex wavenumbers too.
    let two_i_sin_a = z_a - 1.0 / z_a;
    let two_i_sin_b = z_b - 1.0 / z_b;

    let mut s = DMatrix::zeros(2, 2);
    s[(0, 0)] = (jj - a_plus * b_minus) / det;
    s[(1, 0)] = p.j_ba * xi_a * two_i_sin_a / det;
    s[(0, 1)] = p.j_ab * xi_b * two_i_sin_b / det;
    s[(1, 1)] = (jj - a_minus * b_plus) / det;

    Ok(ScatteringResult::from_amplitudes(
        energy, channels, &statuses, s,
    ))
}

/// Damping that optimises nonreciprocal conversion:
/// `gamma = xi sqrt(2 (J2/xi)^4 + 2)`.
pub fn optimal_damping(j2: f64, xi: f64) -> f64 {
    debug_assert!(xi > 0.0);
    let r = j2 / xi;
    xi * (2.0 * r.powi(4) + 2.0).sqrt()
}

/// Which conversion direction survives at an optimal operating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominantConversion {
    /// `I_ab` large: photons pass b -> a, the reverse is suppressed.
    BToA,
    /// `I_ba` large: photons pass a -> b, the reverse is suppressed.
    AToB,
}

impl DominantConversion {
    /// Label of the blocked direction, e.g. "a->b suppressed".
    pub fn suppressed_label(self) -> &'static str {
        match self {
            DominantConversion::BToA => "a->b suppressed",
            DominantConversion::AToB => "b->a suppressed",
        }
    }
}

/// One optimal converter operating point (detunings zero, `J1 = xi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverterPoint {
    pub phi: f64,
    pub k: f64,
    pub dominant: DominantConversion,
}

/// The four optimal operating points `{pi/2, 3pi/2} x {pi/4, 3pi/4}` with
/// their dominant directions.
pub fn optimal_converter_points() -> [ConverterPoint; 4] {
    use DominantConversion::*;
    [
        ConverterPoint {
            phi: PI / 2.0,
            k: PI / 4.0,
            dominant: BToA,
        },
        ConverterPoint {
            phi: PI / 2.0,
            k: 3.0 * PI / 4.0,
            dominant: AToB,
        },
        ConverterPoint {
            phi: 3.0 * PI / 2.0,
            k: PI / 4.0,
            dominant: AToB,
        },
        ConverterPoint {
            phi: 3.0 * PI / 2.0,
            k: 3.0 * PI / 4.0,
            dominant: BToA,
        },
    ]
}
