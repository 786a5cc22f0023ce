//! CSV and JSON emission for sweep records.
//!
//! The CSV schema is stable:
//! `var,value,status,E,I_aa,I_ab,I_ac,I_ba,I_bb,I_bc,I_ca,I_cb,I_cc,conservation_residual`
//! (two-port scenarios omit the c columns). Floats carry 12 significant
//! digits; undefined flows print as `nan`; rows follow grid order. With
//! `log10` enabled, companion columns `log10_I_*` clamped at -16 are
//! appended after the base schema.

use crate::channel::Channel;
use crate::sweep::{SweepRecord, SweepSpec};
use serde_json::json;
use std::io::{self, Write};

/// Formats a float with 12 significant digits (printf `%.12g` style).
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // trim trailing zeros, keep at least one digit
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        let s = format!("{x:.11e}");
        // tidy 1.20000000000e-5 -> 1.2e-5
        match s.split_once('e') {
            Some((mant, exp)) => {
                let mant = mant.trim_end_matches('0').trim_end_matches('.');
                format!("{mant}e{exp}")
            }
            None => s,
        }
    }
}

fn flow_cell(record: &SweepRecord, to: Channel, from: Channel) -> String {
    match record.flow(to, from) {
        Some(f) => fmt_sig(f),
        None => "nan".into(),
    }
}

fn log_cell(record: &SweepRecord, to: Channel, from: Channel) -> String {
    match record.flow(to, from) {
        Some(f) => fmt_sig(f.log10().max(-16.0)),
        None => "nan".into(),
    }
}

fn channel_pairs(n: usize) -> Vec<(Channel, Channel)> {
    let mut pairs = Vec::new();
    for to in &Channel::ALL[..n] {
        for from in &Channel::ALL[..n] {
            pairs.push((*to, *from));
        }
    }
    pairs
}

/// Writes the sweep as CSV in the documented schema.
pub fn write_csv<W: Write>(
    w: &mut W,
    spec: &SweepSpec,
    records: &[SweepRecord],
    log10: bool,
) -> io::Result<()> {
    let n = spec.channels.len();
    let pairs = channel_pairs(n);
    let var = spec.variable.to_string();

    let mut header = String::from("var,value,status,E");
    for (to, from) in &pairs {
        header.push_str(&format!(",I_{to}{from}"));
    }
    header.push_str(",conservation_residual");
    if log10 {
        for (to, from) in &pairs {
            header.push_str(&format!(",log10_I_{to}{from}"));
        }
    }
    writeln!(w, "{header}")?;

    for record in records {
        let mut row = format!(
            "{var},{},{},{}",
            fmt_sig(record.value),
            record.status.code(),
            fmt_sig(record.energy)
        );
        for (to, from) in &pairs {
            row.push(',');
            row.push_str(&flow_cell(record, *to, *from));
        }
        row.push(',');
        match record.conservation_residual() {
            Some(r) => row.push_str(&fmt_sig(r)),
            None => row.push_str("nan"),
        }
        if log10 {
            for (to, from) in &pairs {
                row.push(',');
                row.push_str(&log_cell(record, *to, *from));
            }
        }
        writeln!(w, "{row}")?;
    }
    Ok(())
}

/// Writes the sweep as JSON: scenario summary plus one object per record,
/// amplitudes included.
pub fn write_json<W: Write>(
    w: &mut W,
    spec: &SweepSpec,
    records: &[SweepRecord],
) -> io::Result<()> {
    let n = spec.channels.len();
    let pairs = channel_pairs(n);
    let recs: Vec<serde_json::Value> = records
        .iter()
        .map(|record| {
            let mut flows = serde_json::Map::new();
            let mut amplitudes = serde_json::Map::new();
            if let Some(result) = &record.result {
                for (to, from) in &pairs {
                    let key = format!("{to}{from}");
                    let flow = result.flow(*to, *from);
                    flows.insert(
                        key.clone(),
                        if flow.is_finite() {
                            json!(flow)
                        } else {
                            serde_json::Value::Null
                        },
                    );
                    let amp = result.amplitude(*to, *from);
                    amplitudes.insert(
                        key,
                        if amp.re.is_finite() {
                            json!([amp.re, amp.im])
                        } else {
                            serde_json::Value::Null
                        },
                    );
                }
            }
            let statuses: Vec<serde_json::Value> = record
                .result
                .as_ref()
                .map(|r| {
                    r.statuses()
                        .iter()
                        .zip(&spec.channels)
                        .map(|(st, ch)| {
                            json!({
                                "channel": ch.label.label(),
                                "kind": st.kind_label(),
                                "k": match st {
                                    crate::channel::ChannelStatus::Propagating { k } => json!(k),
                                    _ => serde_json::Value::Null,
                                },
                            })
                        })
                        .collect()
                })
                .unwrap_or_default();
            json!({
                "value": record.value,
                "energy": record.energy,
                "status": record.status.code(),
                "statuses": statuses,
                "flows": flows,
                "amplitudes": amplitudes,
                "conservation_residual": record.conservation_residual(),
            })
        })
        .collect();
    let doc = json!({
        "var": spec.variable.to_string(),
        "steps": spec.steps,
        "range": [spec.lo, spec.hi],
        "records": recs,
    });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(0.25), "0.25");
        assert_eq!(fmt_sig(-1.4142135623730951), "-1.41421356237");
        assert_eq!(fmt_sig(9.746597952843254e-4), "0.000974659795284");
        assert_eq!(fmt_sig(1.2e-7), "1.2e-7");
        assert_eq!(fmt_sig(f64::NAN), "nan");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-16.0), "-16");
    }

    #[test]
    fn round_trip_precision_is_adequate() {
        // 12 significant digits reparse to within 5e-12 relative error
        for &x in &[std::f64::consts::PI, 0.257975327720358, 2.0 / 3.0, 1e-11] {
            let y: f64 = fmt_sig(x).parse().unwrap();
            assert!((x - y).abs() <= 5e-12 * x.abs(), "{x} -> {y}");
        }
    }
}
