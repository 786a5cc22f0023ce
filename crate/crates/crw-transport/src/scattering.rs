//! Scattering results and flow computation shared by every backend.

use crate::channel::{channel_status_from_energy, Channel, ChannelSpec, ChannelStatus};
use crate::error::ScatterError;
use crate::node::{NodeSpec, Topology};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Amplitudes, flows and channel statuses at one scattering energy.
///
/// Matrices are indexed `[to, from]` in the fixed channel order (a, b, c).
/// Flow columns are only defined for propagating incident channels; columns
/// of closed channels hold NaN. Flows into evanescent channels are exactly 0.
#[derive(Debug, Clone)]
pub struct ScatteringResult {
    energy: f64,
    channels: Vec<ChannelSpec>,
    statuses: Vec<ChannelStatus>,
    amplitudes: DMatrix<Complex64>,
    flows: DMatrix<f64>,
}

impl ScatteringResult {
    /// Builds a result from a full amplitude matrix, deriving the flow matrix.
    pub fn from_amplitudes(
        energy: f64,
        channels: &[ChannelSpec],
        statuses: &[ChannelStatus],
        amplitudes: DMatrix<Complex64>,
    ) -> Self {
        let n = channels.len();
        assert_eq!(statuses.len(), n);
        assert_eq!(amplitudes.nrows(), n);
        assert_eq!(amplitudes.ncols(), n);
        let mut flows = DMatrix::from_element(n, n, f64::NAN);
        for from in 0..n {
            if let Ok(col) =
                flow_column(&amplitudes, channels, statuses, Channel::ALL[from])
            {
                for to in 0..n {
                    flows[(to, from)] = col[to];
                }
            }
        }
        ScatteringResult {
            energy,
            channels: channels.to_vec(),
            statuses: statuses.to_vec(),
            amplitudes,
            flows,
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn channels(&self) -> &[ChannelSpec] {
        &self.channels
    }

    pub fn statuses(&self) -> &[ChannelStatus] {
        &self.statuses
    }

    pub fn status(&self, channel: Channel) -> ChannelStatus {
        self.statuses[channel.index()]
    }

    /// Scattering amplitude for `from -> to`.
    pub fn amplitude(&self, to: Channel, from: Channel) -> Complex64 {
        self.amplitudes[(to.index(), from.index())]
    }

    /// Scattering flow for `from -> to`; NaN when `from` is closed.
    pub fn flow(&self, to: Channel, from: Channel) -> f64 {
        self.flows[(to.index(), from.index())]
    }

    pub fn amplitude_matrix(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    pub fn flow_matrix(&self) -> &DMatrix<f64> {
        &self.flows
    }

    /// `1 - sum of outgoing flows` for incidence from one channel: the
    /// absorbed fraction, which vanishes for a lossless node. None when the
    /// channel is closed at this energy or its column was masked out.
    pub fn conservation_residual(&self, from: Channel) -> Option<f64> {
        let i = from.index();
        if i >= self.n_channels() || !self.statuses[i].is_propagating() {
            return None;
        }
        let total: f64 = (0..self.n_channels()).map(|to| self.flows[(to, i)]).sum();
        total.is_finite().then_some(1.0 - total)
    }

    /// Largest `|1 - column sum|` over the propagating incident channels.
    pub fn max_conservation_residual(&self) -> f64 {
        (0..self.n_channels())
            .filter_map(|i| self.conservation_residual(Channel::ALL[i]))
            .fold(0.0, |acc, r| acc.max(r.abs()))
    }

    /// Copy with the amplitude and flow columns of deselected incident
    /// channels replaced by NaN.
    pub fn with_columns_masked(&self, keep: impl Fn(Channel) -> bool) -> ScatteringResult {
        let mut masked = self.clone();
        for from in 0..self.n_channels() {
            if keep(Channel::ALL[from]) {
                continue;
            }
            for to in 0..self.n_channels() {
                masked.amplitudes[(to, from)] = Complex64::new(f64::NAN, f64::NAN);
                masked.flows[(to, from)] = f64::NAN;
            }
        }
        masked
    }
}

/// Velocity-weighted flow column `I_{to, from}` per the flow definition
/// `I = |s|^2 (xi_to sin k_to) / (xi_from sin k_from)`.
///
/// Outputs into evanescent channels carry no flux and yield exactly 0.
pub fn flow_column(
    amplitudes: &DMatrix<Complex64>,
    channels: &[ChannelSpec],
    statuses: &[ChannelStatus],
    incident: Channel,
) -> Result<Vec<f64>, ScatterError> {
    let from = incident.index();
    if from >= channels.len() {
        return Err(ScatterError::UnknownChannel(incident));
    }
    let v_in = match statuses[from] {
        ChannelStatus::Propagating { k } => channels[from].xi * k.sin(),
        _ => {
            return Err(ScatterError::IncidentNotPropagating {
                channel: incident,
                energy: f64::NAN,
            })
        }
    };
    Ok(statuses
        .iter()
        .enumerate()
        .map(|(to, st)| match *st {
            ChannelStatus::Propagating { k } => {
                amplitudes[(to, from)].norm_sqr() * channels[to].xi * k.sin() / v_in
            }
            _ => 0.0,
        })
        .collect())
}

/// Shared preamble of every backend: fix the energy from the incident
/// channel's wavenumber and classify all channels at that energy.
///
/// Fails when the incident wavenumber leaves the open band or any channel
/// sits on a band edge (where flows are singular).
pub(crate) fn energy_and_statuses(
    incident_k: f64,
    incident: Channel,
    channels: &[ChannelSpec],
) -> Result<(f64, Vec<ChannelStatus>), ScatterError> {
    let idx = incident.index();
    if idx >= channels.len() {
        return Err(ScatterError::UnknownChannel(incident));
    }
    let energy = crate::channel::dispersion_energy(incident_k, channels[idx].xi)?;
    statuses_at_energy(energy, channels).map(|sts| (energy, sts))
}

pub(crate) fn statuses_at_energy(
    energy: f64,
    channels: &[ChannelSpec],
) -> Result<Vec<ChannelStatus>, ScatterError> {
    let statuses: Vec<ChannelStatus> = channels
        .iter()
        .map(|c| channel_status_from_energy(energy, c.xi))
        .collect();
    for (c, st) in channels.iter().zip(&statuses) {
        if matches!(st, ChannelStatus::BandEdge) {
            return Err(ScatterError::BandEdge(c.label));
        }
    }
    Ok(statuses)
}

/// Closed-form scattering dispatched on the node topology.
pub fn smatrix(
    incident_k: f64,
    incident: Channel,
    node: &NodeSpec,
    channels: &[ChannelSpec],
) -> Result<ScatteringResult, ScatterError> {
    match node.topology() {
        Topology::TwoPort => {
            let chans: &[ChannelSpec; 2] = channels
                .try_into()
                .map_err(|_| ScatterError::UnknownChannel(Channel::C))?;
            crate::two_port::smatrix_two_port(incident_k, incident, node, chans)
        }
        _ => {
            let chans: &[ChannelSpec; 3] = channels
                .try_into()
                .map_err(|_| ScatterError::UnknownChannel(Channel::C))?;
            crate::three_port::smatrix_three_port(incident_k, incident, node, chans)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn specs2() -> Vec<ChannelSpec> {
        vec![
            ChannelSpec::new(Channel::A, 1.0).unwrap(),
            ChannelSpec::new(Channel::B, 1.0).unwrap(),
        ]
    }

    #[test]
    fn decoupled_full_reflection_flow() {
        // s_ll = -e^{2ik}, off-diagonals zero: I_ll = 1.
        let k = std::f64::consts::FRAC_PI_3;
        let statuses = vec![
            ChannelStatus::Propagating { k },
            ChannelStatus::Propagating { k },
        ];
        let z = Complex64::from_polar(1.0, 2.0 * k);
        let mut amps = DMatrix::zeros(2, 2);
        amps[(0, 0)] = -z;
        amps[(1, 1)] = -z;
        let col = flow_column(&amps, &specs2(), &statuses, Channel::A).unwrap();
        assert!((col[0] - 1.0).abs() < 1e-15);
        assert_eq!(col[1], 0.0);
    }

    #[test]
    fn equal_velocities_pass_probability_through() {
        let k = std::f64::consts::FRAC_PI_4;
        let statuses = vec![
            ChannelStatus::Propagating { k },
            ChannelStatus::Propagating { k },
        ];
        let mut amps = DMatrix::zeros(2, 2);
        amps[(1, 0)] = Complex64::new(0.5_f64.sqrt(), 0.0);
        let col = flow_column(&amps, &specs2(), &statuses, Channel::A).unwrap();
        assert!((col[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn evanescent_output_flow_is_exactly_zero() {
        let statuses = vec![
            ChannelStatus::Propagating {
                k: std::f64::consts::FRAC_PI_2,
            },
            ChannelStatus::Evanescent {
                amplitude_factor: 0.3,
            },
        ];
        let mut amps = DMatrix::zeros(2, 2);
        amps[(1, 0)] = Complex64::new(0.7, 0.1);
        let col = flow_column(&amps, &specs2(), &statuses, Channel::A).unwrap();
        assert_eq!(col[1], 0.0);
    }

    #[test]
    fn closed_incident_channel_is_an_error() {
        let statuses = vec![
            ChannelStatus::Evanescent {
                amplitude_factor: 0.3,
            },
            ChannelStatus::Propagating {
                k: std::f64::consts::FRAC_PI_2,
            },
        ];
        let amps = DMatrix::zeros(2, 2);
        assert!(matches!(
            flow_column(&amps, &specs2(), &statuses, Channel::A),
            Err(ScatterError::IncidentNotPropagating { .. })
        ));
    }
}
