//! Cross-backend verification suites behind `crw verify` and the
//! acceptance tests: closed forms against the boundary solver, flux
//! conservation, and the time-domain wavepacket oracle.

use crate::channel::{Channel, ChannelSpec};
use crate::node::{
    CirculatorThreeModeCouplings, CirculatorTwoModeCouplings, MechanicalModeSpec, ModeLabel,
    NodeSpec, Topology, TwoPortCouplings,
};
use crate::oracle::boundary::solve_boundary_system;
use crate::oracle::wavepacket::{wavepacket_transmission, LatticeScenario};
use crate::scattering::smatrix;
use crate::three_port::design_circulator_two_modes;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// One named check with its residual and threshold.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

impl std::fmt::Display for CheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: residual {:.3e} (tolerance {:.1e}) ... {}",
            self.name,
            self.residual,
            self.tolerance,
            if self.passed() { "ok" } else { "FAIL" }
        )
    }
}

/// A randomly drawn admissible scattering problem.
pub struct ScenarioDraw {
    pub node: NodeSpec,
    pub channels: Vec<ChannelSpec>,
    pub incident_k: f64,
}

/// Draws an admissible scenario: couplings in [0.1, 2], detunings in
/// [-2.5, 2.5], hoppings in [0.5, 2] (reference arm fixed at 1), wavenumber
/// away from the band edges, redrawn until no undamped mode sits within
/// 1e-3 of the scattering energy.
pub fn random_scenario(
    topology: Topology,
    lossless: bool,
    rng: &mut ChaCha8Rng,
) -> ScenarioDraw {
    loop {
        let phi = rng.random_range(0.0..2.0 * PI);
        let j = |rng: &mut ChaCha8Rng| rng.random_range(0.1..2.0);
        let delta = |rng: &mut ChaCha8Rng| rng.random_range(-2.5..2.5);
        let gamma = |rng: &mut ChaCha8Rng| {
            if lossless || rng.random_bool(0.5) {
                0.0
            } else {
                rng.random_range(0.0..3.0)
            }
        };
        let node = match topology {
            Topology::TwoPort => NodeSpec::two_port(
                TwoPortCouplings {
                    j_a1: j(rng),
                    j_b1: j(rng),
                    j_a2: j(rng),
                    j_b2: j(rng),
                },
                [
                    MechanicalModeSpec::new(ModeLabel::D1, delta(rng), gamma(rng)).unwrap(),
                    MechanicalModeSpec::new(ModeLabel::D2, delta(rng), gamma(rng)).unwrap(),
                ],
                phi,
            ),
            Topology::CirculatorTwoModes => NodeSpec::circulator_two_modes(
                CirculatorTwoModeCouplings {
                    j_a1: j(rng),
                    j_b1: j(rng),
                    j_a2: j(rng),
                    j_b2: j(rng),
                    j_c2: j(rng),
                },
                [delta(rng), delta(rng)],
                phi,
            ),
            Topology::CirculatorThreeModes => NodeSpec::circulator_three_modes(
                CirculatorThreeModeCouplings {
                    j_a1: j(rng),
                    j_b1: j(rng),
                    j_a2: j(rng),
                    j_c2: j(rng),
                    j_b3: j(rng),
                    j_c3: j(rng),
                },
                [delta(rng), delta(rng), delta(rng)],
                phi,
            ),
        }
        .expect("drawn parameters are structurally valid");

        let mut channels = vec![ChannelSpec { label: Channel::A, xi: 1.0 }];
        for label in &Channel::ALL[1..topology.n_channels()] {
            channels.push(ChannelSpec {
                label: *label,
                xi: rng.random_range(0.5..2.0),
            });
        }
        let incident_k = rng.random_range(0.05 * PI..0.95 * PI);
        let energy = -2.0 * incident_k.cos();

        let near_pole = node
            .modes()
            .iter()
            .any(|m| m.gamma == 0.0 && (energy + m.delta).abs() < 1e-3);
        let near_edge = channels
            .iter()
            .any(|c| (energy.abs() - 2.0 * c.xi).abs() < 1e-6);
        if !near_pole && !near_edge {
            return ScenarioDraw {
                node,
                channels,
                incident_k,
            };
        }
    }
}

const TOPOLOGIES: [Topology; 3] = [
    Topology::TwoPort,
    Topology::CirculatorTwoModes,
    Topology::CirculatorThreeModes,
];

/// Max entrywise |closed - boundary| over `draws` random scenarios per
/// topology; tolerance 1e-10.
pub fn verify_closed_vs_boundary(seed: u64, draws: usize) -> Vec<CheckReport> {
    TOPOLOGIES
        .iter()
        .map(|&topology| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ topology.n_modes() as u64);
            let mut worst: f64 = 0.0;
            for _ in 0..draws {
                let draw = random_scenario(topology, false, &mut rng);
                let closed =
                    smatrix(draw.incident_k, Channel::A, &draw.node, &draw.channels).unwrap();
                let oracle =
                    solve_boundary_system(draw.incident_k, Channel::A, &draw.node, &draw.channels)
                        .unwrap();
                for from in &Channel::ALL[..draw.channels.len()] {
                    if !closed.status(*from).is_propagating() {
                        continue;
                    }
                    for to in &Channel::ALL[..draw.channels.len()] {
                        let diff = (closed.amplitude(*to, *from)
                            - oracle.amplitude(*to, *from))
                        .norm();
                        worst = worst.max(diff);
                    }
                }
            }
            CheckReport {
                name: format!("closed-vs-boundary[{topology}] x{draws}"),
                residual: worst,
                tolerance: 1e-10,
            }
        })
        .collect()
}

/// Max |1 - column sum| over lossless random scenarios per topology;
/// tolerance 1e-9.
pub fn verify_conservation(seed: u64, draws: usize) -> Vec<CheckReport> {
    TOPOLOGIES
        .iter()
        .map(|&topology| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0xC0 + topology.n_modes() as u64));
            let mut worst: f64 = 0.0;
            for _ in 0..draws {
                let draw = random_scenario(topology, true, &mut rng);
                let result =
                    smatrix(draw.incident_k, Channel::A, &draw.node, &draw.channels).unwrap();
                worst = worst.max(result.max_conservation_residual());
            }
            CheckReport {
                name: format!("conservation[{topology}] x{draws}"),
                residual: worst,
                tolerance: 1e-9,
            }
        })
        .collect()
}

/// Time-domain flow estimates against closed-form flows on the reference
/// circulator design and a decoupled node; tolerance 2e-2 at sigma = 20.
pub fn verify_wavepacket(sigma: f64) -> Vec<CheckReport> {
    let mut reports = Vec::new();

    let decoupled = NodeSpec::two_port(
        TwoPortCouplings {
            j_a1: 0.0,
            j_b1: 0.0,
            j_a2: 0.0,
            j_b2: 0.0,
        },
        [
            MechanicalModeSpec::lossless(ModeLabel::D1, 0.0),
            MechanicalModeSpec::lossless(ModeLabel::D2, 0.0),
        ],
        0.0,
    )
    .unwrap();
    let channels = vec![
        ChannelSpec { label: Channel::A, xi: 1.0 },
        ChannelSpec { label: Channel::B, xi: 1.0 },
    ];
    let scenario =
        LatticeScenario::auto(PI / 4.0, sigma, Channel::A, &decoupled, &channels).unwrap();
    match wavepacket_transmission(&scenario, Channel::A, &decoupled, &channels) {
        Ok(flows) => reports.push(CheckReport {
            name: "wavepacket[decoupled reflection]".into(),
            residual: (flows.flow_estimate(Channel::A) - 1.0).abs(),
            tolerance: 2e-2,
        }),
        Err(e) => reports.push(CheckReport {
            name: format!("wavepacket[decoupled reflection] ({e})"),
            residual: f64::INFINITY,
            tolerance: 2e-2,
        }),
    }

    let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
    let node = design.node_spec();
    let channels = design.channel_specs().to_vec();
    let closed = smatrix(design.k, Channel::A, &node, &channels).unwrap();
    for incident in Channel::ALL {
        let k_in = match closed.status(incident) {
            crate::channel::ChannelStatus::Propagating { k } => k,
            _ => continue,
        };
        let scenario =
            LatticeScenario::auto(k_in, sigma, incident, &node, &channels).unwrap();
        match wavepacket_transmission(&scenario, incident, &node, &channels) {
            Ok(flows) => {
                let worst = Channel::ALL
                    .iter()
                    .map(|to| (flows.flow_estimate(*to) - closed.flow(*to, incident)).abs())
                    .fold(0.0, f64::max);
                reports.push(CheckReport {
                    name: format!("wavepacket[circulator, incident {incident}, sigma {sigma}]"),
                    residual: worst,
                    tolerance: 2e-2,
                });
            }
            Err(e) => reports.push(CheckReport {
                name: format!("wavepacket[circulator, incident {incident}] ({e})"),
                residual: f64::INFINITY,
                tolerance: 2e-2,
            }),
        }
    }
    reports
}
