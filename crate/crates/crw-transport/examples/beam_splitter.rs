//! Detuning the three-mode circulator turns it into a three-way beam
//! splitter: at delta_1 = sqrt(3) xi (or delta_2 = delta_3 = sqrt(3) xi)
//! every incident photon splits evenly over all three arms.
//!
//! ```bash
//! cargo run --example beam_splitter
//! ```

use crw_transport::prelude::*;
use std::f64::consts::PI;

fn main() {
    let [design, _] = design_circulator_three_modes_equal(PI / 3.0).unwrap();
    let channels = design.channel_specs();
    let sqrt3 = 3.0_f64.sqrt();
    #[allow(clippy::approx_constant)] // published rounded operating point
    let k = 0.5236;

    for (label, deltas) in [
        ("delta_1 = sqrt(3), others 0", [sqrt3, 0.0, 0.0]),
        ("delta_2 = delta_3 = sqrt(3), delta_1 = 0", [0.0, sqrt3, sqrt3]),
    ] {
        let mut node = design.node_spec();
        for (mode, delta) in [ModeLabel::D1, ModeLabel::D2, ModeLabel::D3].iter().zip(deltas) {
            node = node.with_delta(*mode, delta);
        }
        let res = smatrix_three_port(k, Channel::A, &node, &channels).unwrap();
        println!("{label}:");
        let mut worst: f64 = 0.0;
        for to in Channel::ALL {
            let row: Vec<String> = Channel::ALL
                .iter()
                .map(|from| {
                    let f = res.flow(to, *from);
                    worst = worst.max((f - 1.0 / 3.0).abs());
                    format!("{f:.6}")
                })
                .collect();
            println!("  to {}: {}", to, row.join("  "));
        }
        println!("  max deviation from 1/3: {worst:.2e}\n");
    }
}
