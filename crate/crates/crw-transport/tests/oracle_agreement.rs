//! Cross-backend agreement: the time-domain wavepacket oracle against the
//! closed forms, and boundary-solver behaviour at points the closed forms
//! refuse.

use crw_transport::oracle::{solve_boundary_system, wavepacket_transmission, LatticeScenario};
use crw_transport::prelude::*;
use crw_transport::ScatterError;
use std::f64::consts::PI;

/// Wavepacket estimates converge on the closed-form flows as the packet
/// narrows in momentum: the error roughly quarters when sigma doubles.
#[test]
fn wavepacket_error_shrinks_with_packet_width() {
    let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
    let node = design.node_spec();
    let channels = design.channel_specs().to_vec();
    let closed = smatrix(design.k, Channel::A, &node, &channels).unwrap();

    let mut errors = Vec::new();
    for sigma in [10.0, 20.0, 40.0] {
        let scenario =
            LatticeScenario::auto(design.k, sigma, Channel::A, &node, &channels).unwrap();
        let flows = wavepacket_transmission(&scenario, Channel::A, &node, &channels).unwrap();
        assert!(flows.norm_drift <= 1e-9, "norm drift {:.2e}", flows.norm_drift);
        assert!(flows.boundary_population <= 1e-3);
        let err = Channel::ALL
            .iter()
            .map(|to| (flows.flow_estimate(*to) - closed.flow(*to, Channel::A)).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    println!("wavepacket errors at sigma 10/20/40: {errors:?}");
    assert!(errors[0] <= 4e-2, "sigma 10 error {:.3e}", errors[0]);
    assert!(errors[1] <= 2e-2, "sigma 20 error {:.3e}", errors[1]);
    assert!(errors[1] <= 0.7 * errors[0], "no improvement 10 -> 20: {errors:?}");
    assert!(errors[2] <= 0.7 * errors[1], "no improvement 20 -> 40: {errors:?}");
}

/// All three incidences of the reference circulator route as designed.
#[test]
fn wavepacket_confirms_circulation_cycle() {
    let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
    let node = design.node_spec();
    let channels = design.channel_specs().to_vec();
    let closed = smatrix(design.k, Channel::A, &node, &channels).unwrap();
    // a -> c, c -> b, b -> a
    for (incident, exit) in [
        (Channel::A, Channel::C),
        (Channel::C, Channel::B),
        (Channel::B, Channel::A),
    ] {
        let k_in = match closed.status(incident) {
            ChannelStatus::Propagating { k } => k,
            other => panic!("{incident} unexpectedly {other:?}"),
        };
        let scenario = LatticeScenario::auto(k_in, 20.0, incident, &node, &channels).unwrap();
        let flows = wavepacket_transmission(&scenario, incident, &node, &channels).unwrap();
        let p_exit = flows.flow_estimate(exit);
        assert!(
            (p_exit - 1.0).abs() <= 2e-2,
            "incident {incident}: exit population at {exit} is {p_exit:.4}"
        );
    }
}

/// Same check on the three-mode circulator at its equal-coupling point.
#[test]
fn wavepacket_three_mode_circulator() {
    let [design, _] = design_circulator_three_modes_equal(PI / 3.0).unwrap();
    let node = design.node_spec();
    let channels = design.channel_specs().to_vec();
    let scenario = LatticeScenario::auto(design.k, 20.0, Channel::A, &node, &channels).unwrap();
    let flows = wavepacket_transmission(&scenario, Channel::A, &node, &channels).unwrap();
    // counterclockwise: incident a exits c
    assert!(
        (flows.flow_estimate(Channel::C) - 1.0).abs() <= 2e-2,
        "P_c = {:.4}",
        flows.flow_estimate(Channel::C)
    );
}

/// The boundary solver stays valid exactly on an undamped mechanical
/// resonance, where the closed form refuses; its result conserves flux.
#[test]
fn boundary_solver_covers_closed_form_poles() {
    let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
    // park the d1 resonance exactly at the operating energy E = -sqrt(2)
    let node = design.node_spec().with_delta(ModeLabel::D1, 2.0_f64.sqrt());
    let channels = design.channel_specs();

    let err = smatrix_three_port(PI / 4.0, Channel::A, &node, &channels).unwrap_err();
    assert!(matches!(err, ScatterError::PoleAtMechanicalResonance { .. }));

    let res = solve_boundary_system(PI / 4.0, Channel::A, &node, &channels).unwrap();
    for from in Channel::ALL {
        let residual = res.conservation_residual(from).unwrap();
        assert!(residual.abs() < 1e-10, "column {from}: residual {residual:.2e}");
    }
    // closed form just outside the guard agrees with the boundary solver
    let nearby = design
        .node_spec()
        .with_delta(ModeLabel::D1, 2.0_f64.sqrt() + 1e-6);
    let closed = smatrix_three_port(PI / 4.0, Channel::A, &nearby, &channels).unwrap();
    let oracle = solve_boundary_system(PI / 4.0, Channel::A, &nearby, &channels).unwrap();
    for to in Channel::ALL {
        let diff = (closed.amplitude(to, Channel::A) - oracle.amplitude(to, Channel::A)).norm();
        assert!(diff < 1e-8, "near-pole disagreement {diff:.2e}");
    }
}

/// Evanescent-arm handling: when the scattering energy leaves the a/b band,
/// a photon incident from the wide c arm reflects totally.
#[test]
fn closed_channel_rule_total_reflection() {
    let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0).unwrap();
    let node = design.node_spec();
    let channels = design.channel_specs();
    // k_c deep below the a/b band: E = -2 xi_c cos(k_c) < -2
    let k_c = 0.2;
    let res = smatrix_three_port(k_c, Channel::C, &node, &channels).unwrap();
    assert!(!res.status(Channel::A).is_propagating());
    assert!(!res.status(Channel::B).is_propagating());
    assert!((res.flow(Channel::C, Channel::C) - 1.0).abs() < 1e-10);
    assert_eq!(res.flow(Channel::A, Channel::C), 0.0);
    // and the boundary solver agrees entrywise on the c column
    let oracle = solve_boundary_system(k_c, Channel::C, &node, &channels).unwrap();
    for to in Channel::ALL {
        let diff = (res.amplitude(to, Channel::C) - oracle.amplitude(to, Channel::C)).norm();
        assert!(diff < 1e-12);
    }
}
