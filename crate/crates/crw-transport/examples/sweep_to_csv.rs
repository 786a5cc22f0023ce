//! Build a sweep in code and write it as CSV, including the log-scale
//! companion columns. Reproduces the converter transmission curves
//! (flows vs wavenumber at the optimal damping).
//!
//! ```bash
//! cargo run --example sweep_to_csv > converter_scan.csv
//! ```

use crw_transport::output::write_csv;
use crw_transport::prelude::*;
use std::f64::consts::PI;

fn main() {
    let node = NodeSpec::two_port(
        TwoPortCouplings { j_a1: 1.0, j_b1: 1.0, j_a2: 4.0, j_b2: 4.0 },
        [
            MechanicalModeSpec::lossless(ModeLabel::D1, 0.0),
            MechanicalModeSpec {
                label: ModeLabel::D2,
                delta: 0.0,
                gamma: optimal_damping(4.0, 1.0),
            },
        ],
        PI / 2.0,
    )
    .unwrap();
    let spec = SweepSpec {
        node,
        channels: vec![
            ChannelSpec { label: Channel::A, xi: 1.0 },
            ChannelSpec { label: Channel::B, xi: 1.0 },
        ],
        incident: IncidentSelection::All,
        variable: SweepVariable::WaveNumber(Channel::A),
        lo: 0.0,
        hi: PI,
        steps: 256,
        reference_k: None,
        derived_rules: vec![],
    };
    let records = run_sweep(&spec).expect("valid sweep");
    let stdout = std::io::stdout();
    write_csv(&mut stdout.lock(), &spec, &records, true).expect("write CSV");
}
