//! Grid sweeps over wavenumber, detunings, phase and couplings.
//!
//! Grids are cell-centred: `value_i = lo + (i + 1/2) (hi - lo) / steps`,
//! which keeps k-sweeps off the singular band edges without special casing.
//! Every grid point produces a record; points the closed forms refuse
//! (band edge, mechanical pole, singular node) are recorded as skipped with
//! a reason code, never dropped.

use crate::channel::{Channel, ChannelSpec, ChannelStatus};
use crate::error::ScatterError;
use crate::node::{ModeLabel, NodeSpec};
use crate::scattering::{smatrix, ScatteringResult};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

/// What the grid varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepVariable {
    /// Wavenumber of the named channel; the shared energy follows its
    /// dispersion.
    WaveNumber(Channel),
    Detuning(ModeLabel),
    Phi,
    Coupling(Channel, ModeLabel),
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepVariable::WaveNumber(ch) => write!(f, "k_{ch}"),
            SweepVariable::Detuning(m) => write!(f, "delta{}", m.index() + 1),
            SweepVariable::Phi => write!(f, "phi"),
            SweepVariable::Coupling(ch, m) => write!(f, "j_{ch}{}", m.index() + 1),
        }
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "k" | "k_a" => return Ok(SweepVariable::WaveNumber(Channel::A)),
            "k_b" => return Ok(SweepVariable::WaveNumber(Channel::B)),
            "k_c" => return Ok(SweepVariable::WaveNumber(Channel::C)),
            "delta1" => return Ok(SweepVariable::Detuning(ModeLabel::D1)),
            "delta2" => return Ok(SweepVariable::Detuning(ModeLabel::D2)),
            "delta3" => return Ok(SweepVariable::Detuning(ModeLabel::D3)),
            "phi" => return Ok(SweepVariable::Phi),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("j_") {
            let mut chars = rest.chars();
            let ch: Channel = chars
                .next()
                .map(|c| c.to_string().parse())
                .transpose()?
                .ok_or("empty coupling name")?;
            let mode: ModeLabel = chars.as_str().parse()?;
            return Ok(SweepVariable::Coupling(ch, mode));
        }
        Err(format!(
            "unknown sweep variable '{s}' (expected k_a|k_b|k_c|delta1|delta2|delta3|phi|j_<ch><mode>)"
        ))
    }
}

/// Which incident channels each record reports.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum IncidentSelection {
    #[default]
    All,
    One(Channel),
}

impl IncidentSelection {
    fn includes(self, ch: Channel) -> bool {
        match self {
            IncidentSelection::All => true,
            IncidentSelection::One(c) => c == ch,
        }
    }
}

/// Per-point parameter bindings applied alongside the swept variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivedRule {
    /// Keeps one detuning locked to another while the leader is swept.
    MirrorDetuning {
        follower: ModeLabel,
        leader: ModeLabel,
    },
}

/// A grid sweep over one scenario.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub node: NodeSpec,
    pub channels: Vec<ChannelSpec>,
    pub incident: IncidentSelection,
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    /// Wavenumber of a reference channel fixing the scattering energy for
    /// non-wavenumber sweeps; ignored (and optional) for k-sweeps.
    pub reference_k: Option<(Channel, f64)>,
    pub derived_rules: Vec<DerivedRule>,
}

/// Why a grid point was skipped or partially evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    BandEdge,
    Pole,
    Singular,
}

/// Point status: fully evaluated, evaluated with some closed channels, or
/// skipped entirely.
#[derive(Debug, Clone, PartialEq)]
pub enum PointStatus {
    Ok,
    /// Listed channels are evanescent at this energy; their incident
    /// columns are undefined.
    Closed(Vec<Channel>),
    Skipped(SkipReason),
}

impl PointStatus {
    pub fn code(&self) -> String {
        match self {
            PointStatus::Ok => "ok".into(),
            PointStatus::Closed(chs) => {
                let labels: String = chs.iter().map(|c| c.label()).collect();
                format!("closed:{labels}")
            }
            PointStatus::Skipped(SkipReason::BandEdge) => "band_edge".into(),
            PointStatus::Skipped(SkipReason::Pole) => "pole".into(),
            PointStatus::Skipped(SkipReason::Singular) => "singular".into(),
        }
    }
}

/// One grid point: the swept value plus the full scattering data (or a skip
/// reason).
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub value: f64,
    pub energy: f64,
    pub status: PointStatus,
    pub result: Option<ScatteringResult>,
}

impl SweepRecord {
    /// Flow `from -> to` if computed at this point.
    pub fn flow(&self, to: Channel, from: Channel) -> Option<f64> {
        let r = self.result.as_ref()?;
        let f = r.flow(to, from);
        f.is_finite().then_some(f)
    }

    pub fn conservation_residual(&self) -> Option<f64> {
        self.result.as_ref().map(|r| r.max_conservation_residual())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.steps < 2 {
            return Err(SweepError::InvalidSpec(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo >= self.hi {
            return Err(SweepError::InvalidSpec(format!(
                "range must satisfy lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        let n = self.node.topology().n_channels();
        if self.channels.len() != n {
            return Err(SweepError::InvalidSpec(format!(
                "{} expects {n} channels, got {}",
                self.node.topology(),
                self.channels.len()
            )));
        }
        for (i, c) in self.channels.iter().enumerate() {
            if c.label.index() != i {
                return Err(SweepError::InvalidSpec(
                    "channels must appear in the fixed order a, b, c".into(),
                ));
            }
            if c.xi <= 0.0 || !c.xi.is_finite() {
                return Err(SweepError::InvalidSpec(format!(
                    "channel {} has non-positive hopping",
                    c.label
                )));
            }
        }
        if let SweepVariable::WaveNumber(ch) = self.variable {
            if ch.index() >= n {
                return Err(SweepError::InvalidSpec(format!(
                    "swept channel {ch} is not part of this topology"
                )));
            }
        } else {
            match self.reference_k {
                None => {
                    return Err(SweepError::InvalidSpec(
                        "non-wavenumber sweeps need a reference wavenumber".into(),
                    ))
                }
                Some((ch, k)) => {
                    if ch.index() >= n || !(k > 0.0 && k < std::f64::consts::PI) {
                        return Err(SweepError::InvalidSpec(format!(
                            "reference wavenumber k_{ch} = {k} must lie in (0, pi) on a channel \
                             of this topology"
                        )));
                    }
                }
            }
        }
        if let SweepVariable::Detuning(m) = self.variable {
            if m.index() >= self.node.modes().len() {
                return Err(SweepError::InvalidSpec(format!(
                    "swept mode {m} is not part of this topology"
                )));
            }
            for rule in &self.derived_rules {
                let DerivedRule::MirrorDetuning { follower, .. } = rule;
                if *follower == m {
                    return Err(SweepError::InvalidSpec(format!(
                        "swept detuning {m} is also bound by a derived rule"
                    )));
                }
            }
        }
        if let IncidentSelection::One(ch) = self.incident {
            if ch.index() >= n {
                return Err(SweepError::InvalidSpec(format!(
                    "incident channel {ch} is not part of this topology"
                )));
            }
        }
        Ok(())
    }

    /// Cell-centred grid values.
    pub fn grid(&self) -> Vec<f64> {
        let width = (self.hi - self.lo) / self.steps as f64;
        (0..self.steps)
            .map(|i| self.lo + (i as f64 + 0.5) * width)
            .collect()
    }

    /// Node with the swept variable (and derived rules) bound to `value`.
    fn bind(&self, value: f64) -> NodeSpec {
        let mut node = match self.variable {
            SweepVariable::WaveNumber(_) => self.node.clone(),
            SweepVariable::Detuning(m) => self.node.with_delta(m, value),
            SweepVariable::Phi => self.node.with_phi(value),
            SweepVariable::Coupling(ch, m) => self.node.with_coupling(ch, m, value),
        };
        for rule in &self.derived_rules {
            let DerivedRule::MirrorDetuning { follower, leader } = rule;
            let lead_delta = node.modes()[leader.index()].delta;
            node = node.with_delta(*follower, lead_delta);
        }
        node
    }

    /// Incident wavenumber and channel for a bound point.
    fn incidence(&self, value: f64) -> (Channel, f64) {
        match self.variable {
            SweepVariable::WaveNumber(ch) => (ch, value),
            _ => self.reference_k.expect("validated"),
        }
    }
}

/// Evaluates the sweep; records come back in grid order regardless of the
/// parallel execution schedule.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, SweepError> {
    spec.validate()?;
    let grid = spec.grid();
    let records: Vec<SweepRecord> = grid
        .par_iter()
        .map(|&value| evaluate_point(spec, value))
        .collect();
    Ok(records)
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> SweepRecord {
    let node = spec.bind(value);
    let (inc_channel, inc_k) = spec.incidence(value);
    let energy = -2.0 * spec.channels[inc_channel.index()].xi * inc_k.cos();

    let skip = |reason| SweepRecord {
        value,
        energy,
        status: PointStatus::Skipped(reason),
        result: None,
    };

    // find some propagating channel to drive the solve from
    let statuses: Vec<ChannelStatus> = spec
        .channels
        .iter()
        .map(|c| crate::channel::channel_status_from_energy(energy, c.xi))
        .collect();
    if statuses.iter().any(|s| matches!(s, ChannelStatus::BandEdge)) {
        return skip(SkipReason::BandEdge);
    }
    let closed: Vec<Channel> = spec
        .channels
        .iter()
        .zip(&statuses)
        .filter(|(_, s)| !s.is_propagating())
        .map(|(c, _)| c.label)
        .collect();
    let driver = if statuses[inc_channel.index()].is_propagating() {
        Some((inc_channel, inc_k))
    } else {
        spec.channels.iter().zip(&statuses).find_map(|(c, s)| {
            if let ChannelStatus::Propagating { k } = s {
                Some((c.label, *k))
            } else {
                None
            }
        })
    };
    let Some((driver_ch, driver_k)) = driver else {
        // every channel closed: nothing to scatter, keep the flagged gap
        return SweepRecord {
            value,
            energy,
            status: PointStatus::Closed(closed),
            result: None,
        };
    };

    match smatrix(driver_k, driver_ch, &node, &spec.channels) {
        Ok(full) => {
            let result = restrict_to_selection(full, spec.incident);
            SweepRecord {
                value,
                energy,
                status: if closed.is_empty() {
                    PointStatus::Ok
                } else {
                    PointStatus::Closed(closed)
                },
                result: Some(result),
            }
        }
        Err(ScatterError::PoleAtMechanicalResonance { .. }) => skip(SkipReason::Pole),
        Err(ScatterError::BandEdge(_)) | Err(ScatterError::WavenumberOutOfBand(_)) => {
            skip(SkipReason::BandEdge)
        }
        Err(ScatterError::SingularNodeMatrix { .. }) => skip(SkipReason::Singular),
        Err(other) => unreachable!("unexpected sweep failure: {other}"),
    }
}

/// Masks flow columns outside the requested incident selection.
fn restrict_to_selection(result: ScatteringResult, sel: IncidentSelection) -> ScatteringResult {
    match sel {
        IncidentSelection::All => result,
        IncidentSelection::One(_) => result.with_columns_masked(|ch| sel.includes(ch)),
    }
}
