//! Three-port scattering for the T-shaped waveguides and the
//! perfect-circulator design solvers.
//!
//! Both circulator topologies reduce to the same linear problem: eliminating
//! the mechanical amplitudes leaves a 3x3 node system `M S = N` whose
//! diagonal carries `xi_l e^{-+ i k_l} + Delta_l` and whose off-diagonals are
//! the effective inter-channel couplings. `S = M^{-1} N` is obtained by a
//! dense complex solve with partial pivoting.

use crate::channel::{Channel, ChannelSpec, ChannelStatus};
use crate::error::{DesignError, ScatterError};
use crate::node::{
    CirculatorThreeModeCouplings, CirculatorTwoModeCouplings, ModeLabel, NodeSpec, Topology,
};
use crate::scattering::{energy_and_statuses, ScatteringResult};
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Effective node parameters of a T-shaped waveguide at energy `E`.
///
/// `j_ca` and `j_bc` are real because their defining sums carry no phase;
/// the a-b coupling keeps the synthetic phase and is stored as the full
/// complex product `j_ab e^{i phi'}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePortEffectiveParams {
    j_ab_phase: Complex64,
    pub j_ca: f64,
    pub j_bc: f64,
    pub delta_a: f64,
    pub delta_b: f64,
    pub delta_c: f64,
    pub energy: f64,
}

impl ThreePortEffectiveParams {
    /// Magnitude of the effective a-b coupling.
    pub fn j_ab(&self) -> f64 {
        self.j_ab_phase.norm()
    }

    /// Effective phase `phi'` on the a-b coupling; differs from the node
    /// phase in the two-mode topology.
    pub fn phi_prime(&self) -> f64 {
        self.j_ab_phase.arg()
    }

    /// The full complex coupling `j_ab e^{i phi'}`.
    pub fn j_ab_complex(&self) -> Complex64 {
        self.j_ab_phase
    }
}

/// Evaluates the effective couplings and frequency shifts of either
/// circulator topology. Both are lossless, so all shifts are real.
pub fn effective_three_port(
    energy: f64,
    node: &NodeSpec,
) -> Result<ThreePortEffectiveParams, ScatterError> {
    if let Some(mode) = node.pole_at(energy) {
        return Err(ScatterError::PoleAtMechanicalResonance { mode, energy });
    }
    let den = |label: ModeLabel| -> f64 {
        let m = node.modes()[label.index()];
        debug_assert_eq!(m.gamma, 0.0);
        energy + m.delta
    };
    let j = |ch: Channel, m: ModeLabel| node.coupling(ch, m);
    let phase = Complex64::from_polar(1.0, node.phi());

    use Channel::*;
    use ModeLabel::*;
    let p = match node.topology() {
        Topology::CirculatorTwoModes => {
            let d1 = den(D1);
            let d2 = den(D2);
            ThreePortEffectiveParams {
                j_ab_phase: j(A, D1) * j(B, D1) * phase / d1
                    + Complex64::from(j(A, D2) * j(B, D2) / d2),
                j_ca: j(A, D2) * j(C, D2) / d2,
                j_bc: j(B, D2) * j(C, D2) / d2,
                delta_a: j(A, D1).powi(2) / d1 + j(A, D2).powi(2) / d2,
                delta_b: j(B, D1).powi(2) / d1 + j(B, D2).powi(2) / d2,
                delta_c: j(C, D2).powi(2) / d2,
                energy,
            }
        }
        Topology::CirculatorThreeModes => {
            let d1 = den(D1);
            let d2 = den(D2);
            let d3 = den(D3);
            ThreePortEffectiveParams {
                j_ab_phase: j(A, D1) * j(B, D1) * phase / d1,
                j_ca: j(A, D2) * j(C, D2) / d2,
                j_bc: j(B, D3) * j(C, D3) / d3,
                delta_a: j(A, D1).powi(2) / d1 + j(A, D2).powi(2) / d2,
                delta_b: j(B, D1).powi(2) / d1 + j(B, D3).powi(2) / d3,
                delta_c: j(C, D2).powi(2) / d2 + j(C, D3).powi(2) / d3,
                energy,
            }
        }
        Topology::TwoPort => panic!("effective_three_port called on a two-port node"),
    };
    Ok(p)
}

/// Three-port scattering amplitudes and flows, `S = M^{-1} N`.
///
/// Evanescent channels use their decaying root consistently in both `M` and
/// `N`, so closed arms carry no outgoing flux.
pub fn smatrix_three_port(
    incident_k: f64,
    incident: Channel,
    node: &NodeSpec,
    channels: &[ChannelSpec; 3],
) -> Result<ScatteringResult, ScatterError> {
    let (energy, statuses) = energy_and_statuses(incident_k, incident, channels)?;
    smatrix_three_port_at_energy(energy, &statuses, node, channels)
}

pub(crate) fn smatrix_three_port_at_energy(
    energy: f64,
    statuses: &[ChannelStatus],
    node: &NodeSpec,
    channels: &[ChannelSpec; 3],
) -> Result<ScatteringResult, ScatterError> {
    let p = effective_three_port(energy, node)?;
    let z: Vec<Complex64> = statuses
        .iter()
        .map(|st| st.outgoing_factor().expect("band edge rejected"))
        .collect();
    let shifts = [p.delta_a, p.delta_b, p.delta_c];
    let jab = p.j_ab_phase;
    let jba = jab.conj();
    let jca = Complex64::from(p.j_ca);
    let jbc = Complex64::from(p.j_bc);

    let diag = |i: usize, outgoing: bool| -> Complex64 {
        let zi = if outgoing { z[i] } else { 1.0 / z[i] };
        channels[i].xi * zi + shifts[i]
    };
    let m = Matrix3::new(
        diag(0, false), jab, jca,
        jba, diag(1, false), jbc,
        jca, jbc, diag(2, false),
    );
    let n = -Matrix3::new(
        diag(0, true), jab, jca,
        jba, diag(1, true), jbc,
        jca, jbc, diag(2, true),
    );

    let lu = m.lu();
    let det = lu.determinant();
    // Scale-invariant singularity test: |det| against the Hadamard bound
    // (product of row norms). A plain norm^3 comparison misfires on the
    // legitimately ill-scaled matrices that arise next to a mechanical
    // resonance.
    let hadamard: f64 = (0..3).map(|r| m.row(r).norm()).product();
    if det.norm() <= 1e-12 * hadamard.max(f64::MIN_POSITIVE) {
        return Err(ScatterError::SingularNodeMatrix {
            det_mag: det.norm(),
        });
    }
    let s = lu.solve(&n).ok_or(ScatterError::SingularNodeMatrix {
        det_mag: det.norm(),
    })?;

    let amplitudes = DMatrix::from_fn(3, 3, |r, c| s[(r, c)]);
    Ok(ScatteringResult::from_amplitudes(
        energy, channels, statuses, amplitudes,
    ))
}

/// Transfer cycle of a circulator, in terms of where an incident photon
/// exits: `Clockwise` sends a -> b -> c -> a, `Counterclockwise` sends
/// a -> c -> b -> a.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CirculationDirection {
    Clockwise,
    Counterclockwise,
}

impl CirculationDirection {
    pub fn cycle_label(self) -> &'static str {
        match self {
            CirculationDirection::Clockwise => "a->b->c->a",
            CirculationDirection::Counterclockwise => "a->c->b->a",
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            CirculationDirection::Clockwise => CirculationDirection::Counterclockwise,
            CirculationDirection::Counterclockwise => CirculationDirection::Clockwise,
        }
    }
}

impl std::fmt::Display for CirculationDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CirculationDirection::Clockwise => write!(f, "clockwise ({})", self.cycle_label()),
            CirculationDirection::Counterclockwise => {
                write!(f, "counterclockwise ({})", self.cycle_label())
            }
        }
    }
}

/// Classifies the dominant transfer cycle from computed flows by comparing
/// the products of the two cyclic flow triples.
pub fn circulation_direction(result: &ScatteringResult) -> CirculationDirection {
    use Channel::*;
    let cw = result.flow(B, A) * result.flow(C, B) * result.flow(A, C);
    let ccw = result.flow(C, A) * result.flow(B, C) * result.flow(A, B);
    if cw >= ccw {
        CirculationDirection::Clockwise
    } else {
        CirculationDirection::Counterclockwise
    }
}

/// Coupling strengths of a designed circulator, in units of the a/b hopping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignCouplings {
    TwoModes(CirculatorTwoModeCouplings),
    ThreeModes(CirculatorThreeModeCouplings),
}

/// A complete perfect-circulator operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirculatorDesign {
    pub couplings: DesignCouplings,
    /// Hopping of CRW-c, in units of the a/b hopping.
    pub xi_c: f64,
    pub phi: f64,
    /// Operating wavenumber in the a/b arms.
    pub k: f64,
    /// Transfer cycle at (phi, k), derived from the computed flows.
    pub direction: CirculationDirection,
}

impl CirculatorDesign {
    pub fn topology(&self) -> Topology {
        match self.couplings {
            DesignCouplings::TwoModes(_) => Topology::CirculatorTwoModes,
            DesignCouplings::ThreeModes(_) => Topology::CirculatorThreeModes,
        }
    }

    /// The node this design describes (all detunings zero).
    pub fn node_spec(&self) -> NodeSpec {
        match self.couplings {
            DesignCouplings::TwoModes(c) => {
                NodeSpec::circulator_two_modes(c, [0.0, 0.0], self.phi)
                    .expect("designed couplings are valid")
            }
            DesignCouplings::ThreeModes(c) => {
                NodeSpec::circulator_three_modes(c, [0.0, 0.0, 0.0], self.phi)
                    .expect("designed couplings are valid")
            }
        }
    }

    /// Channel specs with unit a/b hopping and the designed `xi_c`.
    pub fn channel_specs(&self) -> [ChannelSpec; 3] {
        [
            ChannelSpec { label: Channel::A, xi: 1.0 },
            ChannelSpec { label: Channel::B, xi: 1.0 },
            ChannelSpec { label: Channel::C, xi: self.xi_c },
        ]
    }

    /// Scattering at the design's own operating point.
    pub fn evaluate(&self) -> Result<ScatteringResult, ScatterError> {
        smatrix_three_port(
            self.k,
            Channel::A,
            &self.node_spec(),
            &self.channel_specs(),
        )
    }
}

fn near(x: f64, target: f64) -> bool {
    (x - target).abs() < 1e-9
}

// Fallbacks for designs whose operating point cannot be evaluated (e.g.
// J2 = 0 parks the c band edge exactly on the operating energy). Both rules
// are asserted against computed flows across the admissible inputs in the
// test suites.
fn two_mode_parity(phi: f64, k: f64) -> CirculationDirection {
    if near(phi, PI / 2.0) == near(k, PI / 4.0) {
        CirculationDirection::Counterclockwise
    } else {
        CirculationDirection::Clockwise
    }
}

fn three_mode_parity(phi: f64, k: f64) -> CirculationDirection {
    // the k < pi/2 branch circulates a->c->b->a exactly when sin(phi) > 0
    if (k < PI / 2.0) == (phi.sin() > 0.0) {
        CirculationDirection::Counterclockwise
    } else {
        CirculationDirection::Clockwise
    }
}

/// Designs the two-mode circulator: given `J2` (in units of the a/b
/// hopping, with `J1` fixed to it), the discrete phase `pi/2` or `3pi/2`
/// and wavenumber `pi/4` or `3pi/4`, returns `J_c2 = sqrt(J2^4 + 1)` and
/// the matching `xi_c`.
pub fn design_circulator_two_modes(
    j2: f64,
    phi: f64,
    k: f64,
) -> Result<CirculatorDesign, DesignError> {
    if !(near(phi, PI / 2.0) || near(phi, 3.0 * PI / 2.0)) {
        return Err(DesignError::UnsupportedDesignPoint);
    }
    if !(near(k, PI / 4.0) || near(k, 3.0 * PI / 4.0)) {
        return Err(DesignError::UnsupportedDesignPoint);
    }
    if j2 < 0.0 || !j2.is_finite() {
        return Err(DesignError::NegativeRadicand(j2));
    }
    let j_c2 = (j2.powi(4) + 1.0).sqrt();
    let couplings = CirculatorTwoModeCouplings {
        j_a1: 1.0,
        j_b1: 1.0,
        j_a2: j2,
        j_b2: j2,
        j_c2,
    };
    let node = NodeSpec::circulator_two_modes(couplings, [0.0, 0.0], phi)
        .expect("designed couplings are valid");
    let energy = -2.0 * k.cos();
    let p = effective_three_port(energy, &node).expect("design energy is off-resonance");
    // xi_c = | J_bc^2 / (e^{-ik} + Delta_a) - Delta_c |
    let e_mik = Complex64::from_polar(1.0, -k);
    let xi_c = (Complex64::from(p.j_bc * p.j_bc) / (e_mik + p.delta_a) - p.delta_c).norm();
    let mut design = CirculatorDesign {
        couplings: DesignCouplings::TwoModes(couplings),
        xi_c,
        phi,
        k,
        direction: CirculationDirection::Clockwise,
    };
    design.direction = match design.evaluate() {
        Ok(result) => circulation_direction(&result),
        Err(_) => two_mode_parity(phi, k),
    };
    Ok(design)
}

/// Designs the three-mode circulator with equal couplings and `xi_c = xi`:
/// `J^2 = 2 (2 - cos phi) / (5 - 4 cos phi)` operates perfectly at
/// `k = arcsin|(4 sin phi - sin 2phi)/(5 - 4 cos phi)| / 2` and at the
/// mirror `pi - k`. Both operating points are returned.
pub fn design_circulator_three_modes_equal(
    phi: f64,
) -> Result<[CirculatorDesign; 2], DesignError> {
    if !phi.is_finite() || phi.sin().abs() < 1e-9 {
        return Err(DesignError::DegeneratePhase);
    }
    let j = (2.0 * (2.0 - phi.cos()) / (5.0 - 4.0 * phi.cos())).sqrt();
    let k = 0.5
        * ((4.0 * phi.sin() - (2.0 * phi).sin()) / (5.0 - 4.0 * phi.cos()))
            .abs()
            .asin();
    let couplings = CirculatorThreeModeCouplings {
        j_a1: j,
        j_b1: j,
        j_a2: j,
        j_c2: j,
        j_b3: j,
        j_c3: j,
    };
    let make = |k: f64| {
        let mut d = CirculatorDesign {
            couplings: DesignCouplings::ThreeModes(couplings),
            xi_c: 1.0,
            phi,
            k,
            direction: CirculationDirection::Clockwise,
        };
        d.direction = match d.evaluate() {
            Ok(result) => circulation_direction(&result),
            Err(_) => three_mode_parity(phi, k),
        };
        d
    };
    Ok([make(k), make(PI - k)])
}

/// Designs the three-mode circulator for an arbitrary wavenumber in
/// `(0, pi/4) U (3pi/4, pi)` at `phi = pi/2` or `3pi/2`; couplings and
/// `xi_c` follow the optimal closed forms. The same device also circulates
/// at the mirror wavenumber `pi - k` in the opposite direction.
pub fn design_circulator_three_modes_at_k(
    k: f64,
    phi: f64,
) -> Result<CirculatorDesign, DesignError> {
    if !(near(phi, PI / 2.0) || near(phi, 3.0 * PI / 2.0)) {
        return Err(DesignError::UnsupportedDesignPoint);
    }
    if !k.is_finite() || k <= 0.0 || k >= PI || (PI / 4.0..=3.0 * PI / 4.0).contains(&k) {
        return Err(DesignError::KOutOfDesignRange(k));
    }
    let sin2k = (2.0 * k).sin().abs();
    let radicand = 2.0 * k.cos().powi(2) - sin2k;
    debug_assert!(radicand >= 0.0, "radicand stays positive in range");
    if radicand < 0.0 {
        return Err(DesignError::NegativeRadicand(k));
    }
    let j1 = sin2k.sqrt();
    let j2 = radicand.sqrt();
    let j3 = k.cos().abs();
    let xi_c = (k.cos() / (radicand / (4.0 * k.cos().abs() * k.sin())).atan().cos()).abs();
    let couplings = CirculatorThreeModeCouplings {
        j_a1: j1,
        j_b1: j1,
        j_a2: j2,
        j_c2: j3,
        j_b3: j2,
        j_c3: j3,
    };
    let mut design = CirculatorDesign {
        couplings: DesignCouplings::ThreeModes(couplings),
        xi_c,
        phi,
        k,
        direction: CirculationDirection::Clockwise,
    };
    design.direction = match design.evaluate() {
        Ok(result) => circulation_direction(&result),
        Err(_) => three_mode_parity(phi, k),
    };
    Ok(design)
}

/// The wavenumber at which the k-designed three-mode circulator degenerates
/// to the equal-coupling one (`J1 = J2 = J3`, `xi_c = xi`): the root of
/// `2 cos^2 k - |sin 2k| = 4 sin^2 k`, found by bisection and pinned against
/// the closed form `arctan(1/2)`. Returns the root and its mirror `pi - k`.
pub fn symmetric_design_wavenumber() -> (f64, f64) {
    let f = |k: f64| 2.0 * k.cos().powi(2) - (2.0 * k).sin().abs() - 4.0 * k.sin().powi(2);
    let (mut lo, mut hi) = (1e-6, PI / 4.0);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    let closed = 0.5_f64.atan();
    assert!(
        (k - closed).abs() < 1e-12,
        "bisection root {k} disagrees with arctan(1/2)"
    );
    (k, PI - k)
}
