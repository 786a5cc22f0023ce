//! Canned sweep specifications for the reference figure datasets.
//!
//! Each identifier binds the exact parameter set of one published panel,
//! including the derived quantities (optimal damping, designed couplings,
//! designed `xi_c`). Detuning sweeps run over [-4, 4] times the reference
//! hopping; all grids default to 512 cell-centred points.

use crate::channel::{Channel, ChannelSpec};
use crate::node::{MechanicalModeSpec, ModeLabel, NodeSpec, TwoPortCouplings};
use crate::sweep::{DerivedRule, IncidentSelection, SweepSpec, SweepVariable};
use crate::three_port::{
    design_circulator_three_modes_at_k, design_circulator_three_modes_equal,
    design_circulator_two_modes,
};
use crate::two_port::optimal_damping;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const GRID: usize = 512;
const DETUNING_RANGE: (f64, f64) = (-4.0, 4.0);

/// One figure panel, e.g. `fig5c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FigureId {
    pub family: u8,
    pub panel: char,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown figure id '{0}' (expected fig2a..fig2d, fig3a..fig3d, fig5a..fig5f, fig6a..fig6f, fig8a..fig8f, fig9a..fig9f or fig10a..fig10f)")]
pub struct UnknownFigure(pub String);

impl FigureId {
    fn panel_count(family: u8) -> Option<usize> {
        match family {
            2 | 3 => Some(4),
            5 | 6 | 8 | 9 | 10 => Some(6),
            _ => None,
        }
    }

    fn panel_index(self) -> usize {
        (self.panel as u8 - b'a') as usize
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}{}", self.family, self.panel)
    }
}

impl FromStr for FigureId {
    type Err = UnknownFigure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        let body = lower
            .strip_prefix("fig")
            .ok_or_else(|| UnknownFigure(s.into()))?;
        let panel = body
            .chars()
            .last()
            .filter(char::is_ascii_lowercase)
            .ok_or_else(|| UnknownFigure(s.into()))?;
        let family: u8 = body[..body.len() - 1]
            .parse()
            .map_err(|_| UnknownFigure(s.into()))?;
        let count = FigureId::panel_count(family).ok_or_else(|| UnknownFigure(s.into()))?;
        let id = FigureId { family, panel };
        if id.panel_index() >= count {
            return Err(UnknownFigure(s.into()));
        }
        Ok(id)
    }
}

/// Every figure panel this crate can regenerate, in publication order.
pub fn all_figure_ids() -> Vec<FigureId> {
    let mut ids = Vec::new();
    for family in [2u8, 3, 5, 6, 8, 9, 10] {
        for i in 0..FigureId::panel_count(family).unwrap() {
            ids.push(FigureId {
                family,
                panel: (b'a' + i as u8) as char,
            });
        }
    }
    ids
}

fn unit_pair() -> Vec<ChannelSpec> {
    vec![
        ChannelSpec { label: Channel::A, xi: 1.0 },
        ChannelSpec { label: Channel::B, xi: 1.0 },
    ]
}

fn converter_node(phi: f64, j2: f64, delta1: f64, delta2: f64) -> NodeSpec {
    NodeSpec::two_port(
        TwoPortCouplings {
            j_a1: 1.0,
            j_b1: 1.0,
            j_a2: j2,
            j_b2: j2,
        },
        [
            MechanicalModeSpec::lossless(ModeLabel::D1, delta1),
            MechanicalModeSpec {
                label: ModeLabel::D2,
                delta: delta2,
                gamma: optimal_damping(j2, 1.0),
            },
        ],
        phi,
    )
    .expect("figure parameters are valid")
}

fn k_sweep(
    node: NodeSpec,
    channels: Vec<ChannelSpec>,
    swept: Channel,
    incident: IncidentSelection,
) -> SweepSpec {
    SweepSpec {
        node,
        channels,
        incident,
        variable: SweepVariable::WaveNumber(swept),
        lo: 0.0,
        hi: PI,
        steps: GRID,
        reference_k: None,
        derived_rules: vec![],
    }
}

fn detuning_sweep(
    node: NodeSpec,
    channels: Vec<ChannelSpec>,
    mode: ModeLabel,
    reference_k: f64,
    incident: IncidentSelection,
    derived_rules: Vec<DerivedRule>,
) -> SweepSpec {
    SweepSpec {
        node,
        channels,
        incident,
        variable: SweepVariable::Detuning(mode),
        lo: DETUNING_RANGE.0,
        hi: DETUNING_RANGE.1,
        steps: GRID,
        reference_k: Some((Channel::A, reference_k)),
        derived_rules,
    }
}

/// The exact parameter bindings of one figure panel.
// 0.5236 below is the published rounded operating point of the fig9 panels,
// deliberately not pi/6.
#[allow(clippy::approx_constant)]
pub fn reproduce_figure(id: FigureId) -> SweepSpec {
    let p = id.panel_index();
    let panel_channel = Channel::ALL[p % 3];
    match id.family {
        2 => {
            // flows vs k for phi in {pi/2, 3pi/2} x J2 in {2, 4}
            let phi = if p.is_multiple_of(2) { PI / 2.0 } else { 3.0 * PI / 2.0 };
            let j2 = if p < 2 { 2.0 } else { 4.0 };
            k_sweep(
                converter_node(phi, j2, 0.0, 0.0),
                unit_pair(),
                Channel::A,
                IncidentSelection::All,
            )
        }
        3 => {
            // flows vs detuning at J2 = 4, phi = pi/2; k = pi/4 then 3pi/4
            let k = if p < 2 { PI / 4.0 } else { 3.0 * PI / 4.0 };
            let mode = if p.is_multiple_of(2) { ModeLabel::D1 } else { ModeLabel::D2 };
            detuning_sweep(
                converter_node(PI / 2.0, 4.0, 0.0, 0.0),
                unit_pair(),
                mode,
                k,
                IncidentSelection::All,
                vec![],
            )
        }
        5 => {
            // two-mode circulator, designed couplings; panel channel's k swept
            let phi = if p < 3 { PI / 2.0 } else { 3.0 * PI / 2.0 };
            let design = design_circulator_two_modes(1.2, phi, PI / 4.0)
                .expect("reference design point");
            k_sweep(
                design.node_spec(),
                design.channel_specs().to_vec(),
                panel_channel,
                IncidentSelection::One(panel_channel),
            )
        }
        6 => {
            // two-mode circulator at phi = pi/2, k = pi/4; detuning swept
            let design = design_circulator_two_modes(1.2, PI / 2.0, PI / 4.0)
                .expect("reference design point");
            let mode = if p < 3 { ModeLabel::D1 } else { ModeLabel::D2 };
            detuning_sweep(
                design.node_spec(),
                design.channel_specs().to_vec(),
                mode,
                PI / 4.0,
                IncidentSelection::One(panel_channel),
                vec![],
            )
        }
        8 => {
            // three-mode circulator, equal couplings; panel channel's k swept
            let phi = if p < 3 { PI / 3.0 } else { 5.0 * PI / 3.0 };
            let [design, _] =
                design_circulator_three_modes_equal(phi).expect("reference design point");
            k_sweep(
                design.node_spec(),
                design.channel_specs().to_vec(),
                panel_channel,
                IncidentSelection::One(panel_channel),
            )
        }
        9 => {
            // three-mode circulator at phi = pi/3, k = 0.5236; detunings swept
            let [design, _] =
                design_circulator_three_modes_equal(PI / 3.0).expect("reference design point");
            let (mode, rules) = if p < 3 {
                (ModeLabel::D1, vec![])
            } else {
                (
                    ModeLabel::D2,
                    vec![DerivedRule::MirrorDetuning {
                        follower: ModeLabel::D3,
                        leader: ModeLabel::D2,
                    }],
                )
            };
            detuning_sweep(
                design.node_spec(),
                design.channel_specs().to_vec(),
                mode,
                0.5236,
                IncidentSelection::One(panel_channel),
                rules,
            )
        }
        10 => {
            // k-designed three-mode circulator at k = 0.1 pi / 0.2 pi
            let design_k = if p < 3 { 0.1 * PI } else { 0.2 * PI };
            let design = design_circulator_three_modes_at_k(design_k, PI / 2.0)
                .expect("reference design point");
            k_sweep(
                design.node_spec(),
                design.channel_specs().to_vec(),
                panel_channel,
                IncidentSelection::One(panel_channel),
            )
        }
        _ => unreachable!("validated by FromStr"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::run_sweep;

    #[test]
    fn id_parsing_round_trip() {
        for id in all_figure_ids() {
            let parsed: FigureId = id.to_string().parse().unwrap();
            assert_eq!(parsed, id);
        }
        assert_eq!(all_figure_ids().len(), 38);
        assert!("fig4a".parse::<FigureId>().is_err());
        assert!("fig2e".parse::<FigureId>().is_err());
        assert!("figure2a".parse::<FigureId>().is_err());
    }

    #[test]
    fn fig2c_bindings() {
        let spec = reproduce_figure("fig2c".parse().unwrap());
        assert_eq!(spec.steps, 512);
        assert!((spec.node.phi() - PI / 2.0).abs() < 1e-12);
        assert_eq!(spec.node.coupling(Channel::A, ModeLabel::D2), 4.0);
        assert!((spec.node.modes()[1].gamma - 514.0_f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            spec.variable,
            SweepVariable::WaveNumber(Channel::A)
        ));
    }

    #[test]
    fn fig6a_bindings() {
        let spec = reproduce_figure("fig6a".parse().unwrap());
        assert!(matches!(spec.variable, SweepVariable::Detuning(ModeLabel::D1)));
        assert_eq!(spec.reference_k, Some((Channel::A, PI / 4.0)));
        assert_eq!(spec.node.coupling(Channel::A, ModeLabel::D2), 1.2);
        assert!((spec.channels[2].xi - 1.239_677_377_384_938_8).abs() < 1e-12);
        assert_eq!(spec.incident, IncidentSelection::One(Channel::A));
    }

    #[test]
    fn fig9d_ties_delta3_to_delta2() {
        let spec = reproduce_figure("fig9d".parse().unwrap());
        assert_eq!(
            spec.derived_rules,
            vec![DerivedRule::MirrorDetuning {
                follower: ModeLabel::D3,
                leader: ModeLabel::D2,
            }]
        );
        let records = run_sweep(&spec).unwrap();
        assert_eq!(records.len(), 512);
    }

    #[test]
    fn fig9a_record_near_sqrt3_detuning_splits_evenly() {
        let spec = reproduce_figure("fig9a".parse().unwrap());
        let records = run_sweep(&spec).unwrap();
        let target = 3.0_f64.sqrt();
        let record = records
            .iter()
            .min_by(|x, y| {
                (x.value - target).abs().total_cmp(&(y.value - target).abs())
            })
            .unwrap();
        for to in Channel::ALL {
            let flow = record.flow(to, Channel::A).unwrap();
            assert!(
                (flow - 1.0 / 3.0).abs() < 5e-3,
                "I_{to}a = {flow} at delta1 = {}",
                record.value
            );
        }
    }

    #[test]
    fn fig10a_design_bindings() {
        let spec = reproduce_figure("fig10a".parse().unwrap());
        assert!((spec.channels[2].xi - 1.371_366_847_500_281_4).abs() < 1e-12);
        assert!(
            (spec.node.coupling(Channel::A, ModeLabel::D1) - 0.766_671_541_334_666_4).abs()
                < 1e-12
        );
    }

    #[test]
    fn every_figure_validates() {
        for id in all_figure_ids() {
            let spec = reproduce_figure(id);
            spec.validate().unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }
}
