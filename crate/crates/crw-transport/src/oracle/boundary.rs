//! Direct boundary-condition solver.
//!
//! Substitutes the plane-wave ansatz `u_l(j) = delta_{l,inc} e^{-i k_l j} +
//! s_{l,inc} e^{i k_l j}` into the node equations at site 0 together with the
//! phonon equations, and solves the resulting dense linear system for the
//! scattering and phonon amplitudes. The bulk equation is satisfied by the
//! ansatz identically, so only `#channels + #modes` rows are assembled.
//!
//! Unlike the closed forms, nothing is divided by a mechanical response
//! denominator, so this backend stays valid at `E = -delta_i` exactly.

use crate::channel::{Channel, ChannelSpec, ChannelStatus};
use crate::error::ScatterError;
use crate::node::{ModeLabel, NodeSpec};
use crate::scattering::{energy_and_statuses, ScatteringResult};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// One unknown of the assembled system, in row/column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    /// Outgoing amplitude `s_{channel, incident}`.
    Amplitude(Channel),
    /// Phonon amplitude `u_{mode}`.
    Phonon(ModeLabel),
}

/// The assembled node equations for one incident channel.
#[derive(Debug, Clone)]
pub struct BoundarySystem {
    pub unknowns: Vec<Unknown>,
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
    energy: f64,
    statuses: Vec<ChannelStatus>,
}

impl BoundarySystem {
    /// Assembles the system for a photon incident from `incident` with
    /// wavenumber `incident_k`.
    pub fn assemble(
        incident_k: f64,
        incident: Channel,
        node: &NodeSpec,
        channels: &[ChannelSpec],
    ) -> Result<Self, ScatterError> {
        let (energy, statuses) = energy_and_statuses(incident_k, incident, channels)?;
        Self::assemble_at_energy(energy, &statuses, incident, node, channels)
    }

    pub(crate) fn assemble_at_energy(
        energy: f64,
        statuses: &[ChannelStatus],
        incident: Channel,
        node: &NodeSpec,
        channels: &[ChannelSpec],
    ) -> Result<Self, ScatterError> {
        let nc = channels.len();
        let modes = node.modes();
        let nm = modes.len();
        let dim = nc + nm;
        let inc = incident.index();
        if !statuses[inc].is_propagating() {
            return Err(ScatterError::IncidentNotPropagating {
                channel: incident,
                energy,
            });
        }

        let z: Vec<Complex64> = statuses
            .iter()
            .map(|st| st.outgoing_factor().expect("band edge rejected"))
            .collect();
        let mut matrix = DMatrix::zeros(dim, dim);
        let mut rhs = DVector::zeros(dim);
        let mut unknowns = Vec::with_capacity(dim);

        // Channel rows: J_{l,i} p*_{l,i} u_{d,i} - xi_l u_l(1) - E u_l(0) = 0.
        for (l, ch) in channels.iter().enumerate() {
            unknowns.push(Unknown::Amplitude(ch.label));
            matrix[(l, l)] = -(ch.xi * z[l] + energy);
            for (i, mode) in modes.iter().enumerate() {
                let j = node.coupling(ch.label, mode.label);
                if j != 0.0 {
                    matrix[(l, nc + i)] = j * node.phase_plus(ch.label, mode.label).conj();
                }
            }
            if l == inc {
                // incident part e^{-i k j} moved to the right-hand side
                rhs[l] = ch.xi / z[inc] + energy;
            }
        }

        // Phonon rows: sum_l J_{l,i} p_{l,i} u_l(0) - (E + delta_i + i gamma_i) u_{d,i} = 0.
        for (i, mode) in modes.iter().enumerate() {
            unknowns.push(Unknown::Phonon(mode.label));
            let row = nc + i;
            for (l, ch) in channels.iter().enumerate() {
                let j = node.coupling(ch.label, mode.label);
                if j != 0.0 {
                    matrix[(row, l)] = j * node.phase_plus(ch.label, mode.label);
                }
            }
            matrix[(row, row)] = -mode.response_denominator(energy);
            let j_inc = node.coupling(channels[inc].label, mode.label);
            if j_inc != 0.0 {
                rhs[row] = -j_inc * node.phase_plus(channels[inc].label, mode.label);
            }
        }

        Ok(BoundarySystem {
            unknowns,
            matrix,
            rhs,
            energy,
            statuses: statuses.to_vec(),
        })
    }

    /// Solves for the raw unknown vector (amplitudes then phonons).
    pub fn solve(&self) -> Result<DVector<Complex64>, ScatterError> {
        let lu = self.matrix.clone().lu();
        let det = lu.determinant();
        let scale = self
            .matrix
            .norm()
            .powi(self.matrix.nrows() as i32)
            .max(f64::MIN_POSITIVE);
        if det.norm() <= 1e-12 * scale {
            return Err(ScatterError::SingularBoundarySystem);
        }
        lu.solve(&self.rhs)
            .ok_or(ScatterError::SingularBoundarySystem)
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn statuses(&self) -> &[ChannelStatus] {
        &self.statuses
    }
}

/// Full scattering result from the boundary solver, contract-identical to
/// the closed-form backends.
///
/// Amplitude columns are solved for every propagating channel at the shared
/// energy; columns of closed channels are NaN (an evanescent wave cannot be
/// injected).
pub fn solve_boundary_system(
    incident_k: f64,
    incident: Channel,
    node: &NodeSpec,
    channels: &[ChannelSpec],
) -> Result<ScatteringResult, ScatterError> {
    let (energy, statuses) = energy_and_statuses(incident_k, incident, channels)?;
    let nc = channels.len();
    let mut amplitudes = DMatrix::from_element(nc, nc, Complex64::new(f64::NAN, f64::NAN));
    for (l, ch) in channels.iter().enumerate() {
        if !statuses[l].is_propagating() {
            continue;
        }
        let system =
            BoundarySystem::assemble_at_energy(energy, &statuses, ch.label, node, channels)?;
        let x = system.solve()?;
        for to in 0..nc {
            amplitudes[(to, l)] = x[to];
        }
    }
    Ok(ScatteringResult::from_amplitudes(
        energy, channels, &statuses, amplitudes,
    ))
}
