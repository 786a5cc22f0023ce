//! Property-based invariants of the scattering machinery.

use crw_transport::oracle::solve_boundary_system;
use crw_transport::prelude::*;
use crw_transport::ScatterError;
use crw_transport::three_port::circulation_direction;
use crw_transport::two_port::effective_two_port;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn two_port_node(j: [f64; 4], deltas: [f64; 2], gammas: [f64; 2], phi: f64) -> NodeSpec {
    NodeSpec::two_port(
        TwoPortCouplings {
            j_a1: j[0],
            j_b1: j[1],
            j_a2: j[2],
            j_b2: j[3],
        },
        [
            MechanicalModeSpec::new(ModeLabel::D1, deltas[0], gammas[0]).unwrap(),
            MechanicalModeSpec::new(ModeLabel::D2, deltas[1], gammas[1]).unwrap(),
        ],
        phi,
    )
    .unwrap()
}

fn pair(xi_b: f64) -> [ChannelSpec; 2] {
    [
        ChannelSpec { label: Channel::A, xi: 1.0 },
        ChannelSpec { label: Channel::B, xi: xi_b },
    ]
}

/// Parameters kept clear of band edges and undamped mechanical resonances.
fn admissible(k: f64, deltas: &[f64], gammas: &[f64], xis: &[f64]) -> bool {
    let energy = -2.0 * k.cos();
    deltas
        .iter()
        .zip(gammas)
        .all(|(d, g)| *g > 0.0 || (energy + d).abs() > 1e-3)
        && xis.iter().all(|xi| (energy.abs() - 2.0 * xi).abs() > 1e-5)
}

proptest! {
    /// Inverting the dispersion at the dispersed energy recovers the
    /// wavenumber.
    #[test]
    fn dispersion_round_trip(k in 1e-6..(PI - 1e-6), xi in 0.2_f64..3.0) {
        let energy = dispersion_energy(k, xi).unwrap();
        match channel_status_from_energy(energy, xi) {
            ChannelStatus::Propagating { k: back } => {
                prop_assert!((back - k).abs() < 1e-12, "k {k} -> {back}");
            }
            other => prop_assert!(!(1e-4..=PI - 1e-4).contains(&k), "unexpected {other:?}"),
        }
    }

    /// Out-of-band energies always produce the decaying root.
    #[test]
    fn evanescent_root_selection(energy in prop::sample::select(vec![-9.0, -5.0, -2.3, 2.3, 4.0, 8.5]),
                                 xi in 0.3_f64..1.1) {
        match channel_status_from_energy(energy, xi) {
            ChannelStatus::Evanescent { amplitude_factor: z } => {
                prop_assert!(z.abs() < 1.0);
                prop_assert!((xi * (z + 1.0 / z) + energy).abs() < 1e-12);
            }
            other => prop_assert!(false, "expected evanescent, got {other:?}"),
        }
    }

    /// Effective couplings swap under phase reversal.
    #[test]
    fn effective_coupling_duality(
        phi in 0.0..(2.0 * PI),
        j in prop::array::uniform4(0.0_f64..2.0),
        d1 in -2.0_f64..2.0,
        gamma in 0.0_f64..3.0,
        energy in -1.8_f64..1.8,
    ) {
        prop_assume!((energy + d1).abs() > 1e-3);
        let node = two_port_node(j, [d1, 0.3], [0.0, gamma], phi);
        let flipped = node.with_phi(2.0 * PI - phi);
        let p = effective_two_port(energy, &node).unwrap();
        let q = effective_two_port(energy, &flipped).unwrap();
        prop_assert!((p.j_ab - q.j_ba).norm() < 1e-12);
    }

    /// Flows are non-negative wherever defined, and lossless columns sum
    /// to one over the open channels.
    #[test]
    fn flow_positivity_and_lossless_conservation(
        k in 0.05..(0.95 * PI),
        j in prop::array::uniform4(0.0_f64..2.0),
        deltas in prop::array::uniform2(-2.0_f64..2.0),
        phi in 0.0..(2.0 * PI),
        xi_b in 0.5_f64..2.0,
    ) {
        prop_assume!(admissible(k, &deltas, &[0.0, 0.0], &[1.0, xi_b]));
        let node = two_port_node(j, deltas, [0.0, 0.0], phi);
        let res = smatrix_two_port(k, Channel::A, &node, &pair(xi_b)).unwrap();
        let mut column = 0.0;
        for to in [Channel::A, Channel::B] {
            let flow = res.flow(to, Channel::A);
            prop_assert!(flow >= 0.0);
            column += flow;
        }
        prop_assert!((column - 1.0).abs() < 1e-10, "column sum {column}");
    }

    /// phi = 0 or pi restores reciprocity even with damping.
    #[test]
    fn reciprocity_at_trivial_phase(
        k in 0.05..(0.95 * PI),
        j in prop::array::uniform4(0.0_f64..2.0),
        deltas in prop::array::uniform2(-2.0_f64..2.0),
        gammas in prop::array::uniform2(0.0_f64..3.0),
        half_turns in 0_u8..2,
    ) {
        prop_assume!(admissible(k, &deltas, &gammas, &[1.0, 1.0]));
        let node = two_port_node(j, deltas, gammas, half_turns as f64 * PI);
        let res = smatrix_two_port(k, Channel::A, &node, &pair(1.0)).unwrap();
        let diff = (res.flow(Channel::A, Channel::B) - res.flow(Channel::B, Channel::A)).abs();
        prop_assert!(diff < 1e-12, "nonreciprocity {diff} at trivial phase");
    }

    /// I(2pi - phi) is the transpose of I(phi) for arbitrary damping.
    #[test]
    fn two_port_phase_duality(
        k in 0.05..(0.95 * PI),
        j in prop::array::uniform4(0.0_f64..2.0),
        deltas in prop::array::uniform2(-2.0_f64..2.0),
        gammas in prop::array::uniform2(0.0_f64..3.0),
        phi in 0.0..(2.0 * PI),
    ) {
        prop_assume!(admissible(k, &deltas, &gammas, &[1.0, 1.0]));
        let node = two_port_node(j, deltas, gammas, phi);
        let res = smatrix_two_port(k, Channel::A, &node, &pair(1.0)).unwrap();
        let rev = smatrix_two_port(k, Channel::A, &node.with_phi(2.0 * PI - phi), &pair(1.0)).unwrap();
        for to in [Channel::A, Channel::B] {
            for from in [Channel::A, Channel::B] {
                let diff = (rev.flow(to, from) - res.flow(from, to)).abs();
                prop_assert!(diff < 1e-12, "duality off by {diff}");
            }
        }
    }

    /// With damping the outgoing flows never exceed the incident flux.
    #[test]
    fn damped_flows_subunitary(
        k in 0.05..(0.95 * PI),
        j in prop::array::uniform4(0.0_f64..2.0),
        deltas in prop::array::uniform2(-2.0_f64..2.0),
        gammas in prop::array::uniform2(0.0_f64..4.0),
        phi in 0.0..(2.0 * PI),
    ) {
        prop_assume!(admissible(k, &deltas, &gammas, &[1.0, 1.0]));
        let node = two_port_node(j, deltas, gammas, phi);
        let res = smatrix_two_port(k, Channel::A, &node, &pair(1.0)).unwrap();
        let total = res.flow(Channel::A, Channel::A) + res.flow(Channel::B, Channel::A);
        prop_assert!(total <= 1.0 + 1e-12, "total outgoing flow {total}");
    }

    /// Every two-mode circulator design closes: three unit flows, six zeros.
    #[test]
    fn two_mode_design_closure(j2 in 0.1_f64..3.0, flip_phi in any::<bool>(), flip_k in any::<bool>()) {
        let phi = if flip_phi { 3.0 * PI / 2.0 } else { PI / 2.0 };
        let k = if flip_k { 3.0 * PI / 4.0 } else { PI / 4.0 };
        let design = design_circulator_two_modes(j2, phi, k).unwrap();
        let res = design.evaluate().unwrap();
        prop_assert_eq!(circulation_direction(&res), design.direction);
        let mut unit_count = 0;
        for to in Channel::ALL {
            for from in Channel::ALL {
                let flow = res.flow(to, from);
                if (flow - 1.0).abs() <= 1e-10 {
                    unit_count += 1;
                } else {
                    prop_assert!(flow <= 1e-10, "stray flow {flow}");
                }
            }
        }
        prop_assert_eq!(unit_count, 3);
    }

    /// Equal-coupling designs close at both returned operating points.
    #[test]
    fn three_mode_equal_design_closure(raw_phi in 0.05_f64..(PI - 0.05), mirror_phase in any::<bool>()) {
        let phi = if mirror_phase { 2.0 * PI - raw_phi } else { raw_phi };
        let designs = design_circulator_three_modes_equal(phi).unwrap();
        for design in designs {
            let res = design.evaluate().unwrap();
            prop_assert_eq!(circulation_direction(&res), design.direction);
            for to in Channel::ALL {
                for from in Channel::ALL {
                    let flow = res.flow(to, from);
                    let dev = if (flow - 1.0).abs() < 0.5 { (flow - 1.0).abs() } else { flow };
                    prop_assert!(dev <= 1e-10, "closure off by {dev}");
                }
            }
        }
    }

    /// Arbitrary-wavenumber designs close inside the admissible range.
    #[test]
    fn three_mode_k_design_closure(
        base in 0.01_f64..0.24,
        upper in any::<bool>(),
        flip_phi in any::<bool>(),
    ) {
        let k = if upper { PI * (1.0 - base) } else { PI * base };
        let phi = if flip_phi { 3.0 * PI / 2.0 } else { PI / 2.0 };
        let design = design_circulator_three_modes_at_k(k, phi).unwrap();
        let res = design.evaluate().unwrap();
        prop_assert_eq!(circulation_direction(&res), design.direction);
        for to in Channel::ALL {
            for from in Channel::ALL {
                let flow = res.flow(to, from);
                let dev = if (flow - 1.0).abs() < 0.5 { (flow - 1.0).abs() } else { flow };
                prop_assert!(dev <= 1e-10, "closure off by {dev} at k = {k}");
            }
        }
    }
}

/// Dense-grid version of the dispersion round trip. Inside the band-edge
/// tolerance (|E| within 1e-9 xi of 2 xi, i.e. k within ~3e-5 of 0 or pi)
/// the classifier deliberately reports BandEdge instead.
#[test]
fn dispersion_round_trip_dense_grid() {
    let delta = 1e-6;
    let n = 20_000;
    for i in 0..=n {
        let k = delta + (PI - 2.0 * delta) * i as f64 / n as f64;
        let energy = dispersion_energy(k, 1.0).unwrap();
        match channel_status_from_energy(energy, 1.0) {
            ChannelStatus::Propagating { k: back } => {
                assert!((back - k).abs() < 1e-12, "k = {k}: round trip {back}")
            }
            ChannelStatus::BandEdge => {
                assert!(
                    !(5e-5..=PI - 5e-5).contains(&k),
                    "k = {k} misclassified as band edge"
                );
            }
            other => panic!("k = {k}: {other:?}"),
        }
    }
}

/// The velocity-weighted scattering matrix is unitary over open channels.
#[test]
fn velocity_weighted_unitarity_as_matrix() {
    use crw_transport::verify::random_scenario;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for topology in [Topology::CirculatorTwoModes, Topology::CirculatorThreeModes] {
        for _ in 0..200 {
            let draw = random_scenario(topology, true, &mut rng);
            let res = smatrix(draw.incident_k, Channel::A, &draw.node, &draw.channels).unwrap();
            let open: Vec<usize> = res
                .statuses()
                .iter()
                .enumerate()
                .filter(|(_, st)| st.is_propagating())
                .map(|(i, _)| i)
                .collect();
            let velocity = |i: usize| match res.statuses()[i] {
                ChannelStatus::Propagating { k } => draw.channels[i].xi * k.sin(),
                _ => unreachable!(),
            };
            // T = V^{1/2} S V^{-1/2} restricted to open channels
            let m = open.len();
            let mut t = vec![vec![Complex64::ZERO; m]; m];
            for (r, &to) in open.iter().enumerate() {
                for (c, &from) in open.iter().enumerate() {
                    t[r][c] = res.amplitude(Channel::ALL[to], Channel::ALL[from])
                        * (velocity(to) / velocity(from)).sqrt();
                }
            }
            for r in 0..m {
                for c in 0..m {
                    let dot: Complex64 = (0..m).map(|i| t[i][r].conj() * t[i][c]).sum();
                    let expect = if r == c { Complex64::ONE } else { Complex64::ZERO };
                    assert!(
                        (dot - expect).norm() < 1e-10,
                        "T^dag T deviates by {:.2e}",
                        (dot - expect).norm()
                    );
                }
            }
        }
    }
}

/// The detuned converter at (k = pi/4, delta_1 = +2 sqrt 2) mirrors
/// (k = 3pi/4, delta_1 = -2 sqrt 2) with directions swapped.
#[test]
fn detuning_mirror_points() {
    let make = |delta1: f64| {
        two_port_node(
            [1.0, 1.0, 4.0, 4.0],
            [delta1, 0.0],
            [0.0, optimal_damping(4.0, 1.0)],
            PI / 2.0,
        )
    };
    let first = smatrix_two_port(PI / 4.0, Channel::A, &make(2.0 * SQRT_2), &pair(1.0)).unwrap();
    let second =
        smatrix_two_port(3.0 * PI / 4.0, Channel::A, &make(-2.0 * SQRT_2), &pair(1.0)).unwrap();
    for (to, from) in [
        (Channel::A, Channel::A),
        (Channel::A, Channel::B),
        (Channel::B, Channel::A),
        (Channel::B, Channel::B),
    ] {
        let diff = (first.flow(to, from) - second.flow(from, to)).abs();
        assert!(diff < 1e-12, "mirror broken for I_{to}{from}: {diff}");
    }
}

/// Closed forms track the boundary solver through a fine wavenumber scan of
/// the reference circulator (including the detuned beam-splitter region).
#[test]
fn closed_form_matches_boundary_on_scan() {
    let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
    let node = design.node_spec().with_delta(ModeLabel::D1, 1.3);
    let channels = design.channel_specs();
    let mut worst: f64 = 0.0;
    for i in 1..200 {
        let k = PI * i as f64 / 200.0;
        let closed = match smatrix_three_port(k, Channel::A, &node, &channels) {
            Ok(r) => r,
            Err(ScatterError::PoleAtMechanicalResonance { .. }) => continue,
            Err(e) => panic!("k = {k}: {e}"),
        };
        let oracle = solve_boundary_system(k, Channel::A, &node, &channels).unwrap();
        for to in Channel::ALL {
            worst = worst.max(
                (closed.amplitude(to, Channel::A) - oracle.amplitude(to, Channel::A)).norm(),
            );
        }
    }
    assert!(worst < 1e-10, "worst backend disagreement {worst:.2e}");
}
