//! Band structure of a semi-infinite coupled-resonator waveguide: dispersion,
//! channel classification at a shared scattering energy, and group velocities.
//!
//! ```bash
//! cargo run --example dispersion
//! ```

use crw_transport::prelude::*;
use std::f64::consts::PI;

fn main() {
    println!("dispersion E = -2 xi cos k (xi = 1):");
    for i in 1..8 {
        let k = i as f64 * PI / 8.0;
        let energy = dispersion_energy(k, 1.0).unwrap();
        let v = group_velocity(k, 1.0).unwrap();
        println!("  k = {:.4} ({}pi/8)  E = {:+.6}  v = {:.6}", k, i, energy, v);
    }

    // Three arms with different bandwidths share one scattering energy.
    let arms = [
        ChannelSpec { label: Channel::A, xi: 1.0 },
        ChannelSpec { label: Channel::B, xi: 1.0 },
        ChannelSpec { label: Channel::C, xi: 0.6 },
    ];
    println!("\nchannel status at shared E = -1.8 (bands: |E| < 2 xi):");
    for arm in arms {
        let status = channel_status_from_energy(-1.8, arm.xi);
        match status {
            ChannelStatus::Propagating { k } => {
                println!("  {} (xi = {}): propagating, k = {:.6}", arm.label, arm.xi, k)
            }
            ChannelStatus::Evanescent { amplitude_factor } => println!(
                "  {} (xi = {}): evanescent, |e^ik| = {:.6}, decay rate {:.6}/site",
                arm.label,
                arm.xi,
                amplitude_factor.abs(),
                status.decay_rate().unwrap()
            ),
            ChannelStatus::BandEdge => println!("  {} (xi = {}): band edge", arm.label, arm.xi),
        }
    }
}
