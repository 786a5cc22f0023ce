//! The three-mode circulator: every pair of arms shares a mechanical mode,
//! which frees the operating wavenumber. Equal couplings pin k through the
//! phase; alternatively any k in (0, pi/4) or (3pi/4, pi) is reachable at
//! phi = pi/2 with tailored couplings.
//!
//! ```bash
//! cargo run --example circulator_three_modes
//! ```

use crw_transport::prelude::*;
use crw_transport::three_port::symmetric_design_wavenumber;
use std::f64::consts::PI;

fn main() {
    // Equal couplings, xi_c = xi: phi fixes both J and the operating k.
    for phi in [PI / 3.0, PI / 2.0, 5.0 * PI / 3.0] {
        let [design, mirror] = design_circulator_three_modes_equal(phi).unwrap();
        let j = match design.couplings {
            crw_transport::DesignCouplings::ThreeModes(c) => c.j_a1,
            _ => unreachable!(),
        };
        println!(
            "phi = {:.4}: J = {:.6}, k = {:.6} ({:.4}pi) {} / mirror {:.4}pi {}",
            phi,
            j,
            design.k,
            design.k / PI,
            design.direction,
            mirror.k / PI,
            mirror.direction
        );
    }

    // The symmetric wavenumber where the k-design degenerates to equal
    // couplings and xi_c = xi.
    let (k_sym, k_mirror) = symmetric_design_wavenumber();
    println!(
        "\nsymmetric design wavenumber: k = {:.6} = {:.4}pi (mirror {:.4}pi)",
        k_sym,
        k_sym / PI,
        k_mirror / PI
    );

    // Arbitrary-wavenumber designs at phi = pi/2.
    println!("\nk-designs at phi = pi/2:");
    for k in [0.1 * PI, 0.2 * PI, k_sym] {
        let d = design_circulator_three_modes_at_k(k, PI / 2.0).unwrap();
        let c = match d.couplings {
            crw_transport::DesignCouplings::ThreeModes(c) => c,
            _ => unreachable!(),
        };
        let res = d.evaluate().unwrap();
        let worst = Channel::ALL
            .iter()
            .flat_map(|to| Channel::ALL.iter().map(move |from| (*to, *from)))
            .map(|(to, from)| {
                let f = res.flow(to, from);
                if f > 0.5 { (f - 1.0).abs() } else { f }
            })
            .fold(0.0, f64::max);
        println!(
            "  k = {:.4}pi: J1 = {:.5}, J2 = {:.5}, J3 = {:.5}, xi_c = {:.5} ({} xi), {}; closure off by {:.1e}",
            k / PI,
            c.j_a1,
            c.j_a2,
            c.j_c2,
            d.xi_c,
            if d.xi_c > 1.0 { ">" } else { "<=" },
            d.direction,
            worst
        );
    }
}
