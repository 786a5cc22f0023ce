//! Command-line front end: single-point S-matrix queries, parameter sweeps,
//! circulator design solvers, reference dataset regeneration and
//! cross-backend verification.
//!
//! Exit codes: 0 on success, 2 for configuration/input errors, 3 for
//! physics-domain errors (band edge, mechanical pole, singular node).

use clap::{Args, Parser, Subcommand, ValueEnum};
use crw_transport::config::{parse_angle, AngleUnit, ScenarioConfig};
use crw_transport::error::{DesignError, ScatterError};
use crw_transport::figures::{all_figure_ids, reproduce_figure, FigureId};
use crw_transport::output::{fmt_sig, write_csv, write_json};
use crw_transport::prelude::*;
use crw_transport::sweep::SweepRecord;
use crw_transport::verify::{verify_closed_vs_boundary, verify_conservation, verify_wavepacket};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

const EXIT_CONFIG: u8 = 2;
const EXIT_PHYSICS: u8 = 3;

#[derive(Parser)]
#[command(
    name = "crw",
    version,
    about = "Single-photon scattering in coupled-resonator waveguides joined by mechanical modes",
    after_help = "Thread count for sweeps follows RAYON_NUM_THREADS (default: all cores)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scattering amplitudes and flows at a single operating point.
    Smatrix(SmatrixArgs),
    /// Sweep one variable over a grid and write CSV or JSON.
    Sweep(SweepArgs),
    /// Solve the perfect-circulator design equations.
    Design(DesignArgs),
    /// Regenerate reference figure datasets.
    Figure(FigureArgs),
    /// Run a cross-backend verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SmatrixArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Incident channel.
    #[arg(long)]
    incident: Channel,
    /// Incident wavenumber; accepts forms like 0.7854, 0.25pi, pi/4.
    #[arg(long)]
    k: String,
    /// Unit for plain numeric angles.
    #[arg(long, default_value = "rad")]
    angle_unit: AngleUnitArg,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Swept variable: k_a|k_b|k_c|delta1|delta2|delta3|phi|j_<ch><mode>.
    #[arg(long)]
    var: String,
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    #[arg(long)]
    steps: usize,
    /// Output file; written atomically (temp file + rename).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Incident channel, or all propagating channels.
    #[arg(long, default_value = "all")]
    incident: String,
    /// Reference wavenumber of channel a (required unless sweeping k).
    #[arg(long)]
    k: Option<String>,
    #[arg(long, default_value = "rad")]
    angle_unit: AngleUnitArg,
    /// Append log10 flow columns (clamped at -16) after the base schema.
    #[arg(long)]
    log10: bool,
    /// Tie delta3 to delta2 while sweeping delta2.
    #[arg(long)]
    tie_delta3: bool,
}

#[derive(Args)]
struct DesignArgs {
    /// circ1 (two modes), circ2-equal (three modes, equal couplings),
    /// circ2-k (three modes, arbitrary wavenumber).
    #[arg(long)]
    topology: DesignTopology,
    /// J2 in units of the a/b hopping (circ1; default 1.2).
    #[arg(long)]
    j2: Option<f64>,
    /// Synthetic phase.
    #[arg(long)]
    phi: Option<String>,
    /// Operating wavenumber.
    #[arg(long)]
    k: Option<String>,
    #[arg(long, default_value = "rad")]
    angle_unit: AngleUnitArg,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure id (fig2a .. fig10f) or `all`.
    #[arg(long)]
    id: String,
    /// Output directory for the CSV datasets.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    log10: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random draws per topology (agreement/conservation suites).
    #[arg(long, default_value_t = 1000)]
    draws: usize,
    /// Packet width for the wavepacket suite.
    #[arg(long, default_value_t = 20.0)]
    sigma: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    ClosedVsBoundary,
    Wavepacket,
    Conservation,
}

#[derive(Clone, Copy)]
struct AngleUnitArg(AngleUnit);

impl FromStr for AngleUnitArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(AngleUnitArg(s.parse()?))
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Smatrix(args) => cmd_smatrix(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Design(args) => cmd_design(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn config_fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG)
}

fn physics_fail(err: ScatterError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_PHYSICS)
}

fn load_scenario(path: &Path) -> Result<(NodeSpec, Vec<ChannelSpec>), ExitCode> {
    let config = ScenarioConfig::from_path(path).map_err(config_fail)?;
    config.build().map_err(config_fail)
}

fn cmd_smatrix(args: SmatrixArgs) -> ExitCode {
    let (node, channels) = match load_scenario(&args.config) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let k = match parse_angle(&args.k, args.angle_unit.0) {
        Ok(k) => k,
        Err(e) => return config_fail(e),
    };
    let result = match smatrix(k, args.incident, &node, &channels) {
        Ok(r) => r,
        Err(e) => return physics_fail(e),
    };

    println!("E = {:.6}", result.energy());
    for (spec, status) in channels.iter().zip(result.statuses()) {
        match status {
            ChannelStatus::Propagating { k } => println!(
                "channel {}: propagating, k = {:.6} ({:.6}pi), v = {:.6}",
                spec.label,
                k,
                k / std::f64::consts::PI,
                spec.xi * k.sin()
            ),
            ChannelStatus::Evanescent { amplitude_factor } => println!(
                "channel {}: evanescent, |e^ik| = {:.6}",
                spec.label,
                amplitude_factor.abs()
            ),
            ChannelStatus::BandEdge => println!("channel {}: band edge", spec.label),
        }
    }
    for to in &Channel::ALL[..channels.len()] {
        let s = result.amplitude(*to, args.incident);
        println!(
            "s_{to}{} = {:+.6}{:+.6}i  (|s|^2 = {:.6})",
            args.incident,
            s.re,
            s.im,
            s.norm_sqr()
        );
    }
    let flows_line = Channel::ALL[..channels.len()]
        .iter()
        .map(|to| format!("I_{to}{}={:.6}", args.incident, result.flow(*to, args.incident)))
        .collect::<Vec<_>>()
        .join(" ");
    println!("{flows_line}");
    println!(
        "conservation_residual = {}",
        fmt_sig(result.conservation_residual(args.incident).unwrap_or(f64::NAN))
    );
    ExitCode::SUCCESS
}

fn parse_incident(s: &str) -> Result<IncidentSelection, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        Ok(IncidentSelection::All)
    } else {
        Ok(IncidentSelection::One(s.parse()?))
    }
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    let (node, channels) = match load_scenario(&args.config) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let variable: SweepVariable = match args.var.parse() {
        Ok(v) => v,
        Err(e) => return config_fail(e),
    };
    let incident = match parse_incident(&args.incident) {
        Ok(i) => i,
        Err(e) => return config_fail(e),
    };
    let angular = matches!(
        variable,
        SweepVariable::WaveNumber(_) | SweepVariable::Phi
    );
    let bound = |s: &str| {
        if angular {
            parse_angle(s, args.angle_unit.0)
        } else {
            s.trim().parse::<f64>().map_err(|e| e.to_string())
        }
    };
    let lo = match bound(&args.from) {
        Ok(v) => v,
        Err(e) => return config_fail(e),
    };
    let hi = match bound(&args.to) {
        Ok(v) => v,
        Err(e) => return config_fail(e),
    };
    let reference_k = match &args.k {
        Some(s) => match parse_angle(s, args.angle_unit.0) {
            Ok(k) => Some((Channel::A, k)),
            Err(e) => return config_fail(e),
        },
        None => None,
    };
    let derived_rules = if args.tie_delta3 {
        vec![crw_transport::sweep::DerivedRule::MirrorDetuning {
            follower: ModeLabel::D3,
            leader: ModeLabel::D2,
        }]
    } else {
        vec![]
    };
    let spec = SweepSpec {
        node,
        channels,
        incident,
        variable,
        lo,
        hi,
        steps: args.steps,
        reference_k,
        derived_rules,
    };
    let records = match run_sweep(&spec) {
        Ok(r) => r,
        Err(e) => return config_fail(e),
    };
    match write_records(&args.out, &spec, &records, args.format, args.log10) {
        Ok(()) => {
            println!("wrote {} records to {}", records.len(), args.out.display());
            ExitCode::SUCCESS
        }
        Err(e) => config_fail(e),
    }
}

/// Writes via a temp file in the target directory so a failed run never
/// leaves a partial file behind.
fn write_records(
    out: &Path,
    spec: &SweepSpec,
    records: &[SweepRecord],
    format: Format,
    log10: bool,
) -> Result<(), String> {
    let dir = out.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))
        .map_err(|e| format!("cannot create temp file near {}: {e}", out.display()))?;
    match format {
        Format::Csv => write_csv(tmp.as_file_mut(), spec, records, log10),
        Format::Json => write_json(tmp.as_file_mut(), spec, records),
    }
    .map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    tmp.flush().map_err(|e| e.to_string())?;
    tmp.persist(out)
        .map_err(|e| format!("cannot persist {}: {e}", out.display()))?;
    Ok(())
}

fn cmd_design(args: DesignArgs) -> ExitCode {
    let unit = args.angle_unit.0;
    let angle = |s: &Option<String>, default: f64| -> Result<f64, String> {
        match s {
            Some(text) => parse_angle(text, unit),
            None => Ok(default),
        }
    };
    let phi = match angle(&args.phi, std::f64::consts::FRAC_PI_2) {
        Ok(v) => v,
        Err(e) => return config_fail(e),
    };
    match args.topology {
        DesignTopology::Circ1 => {
            let k = match angle(&args.k, std::f64::consts::FRAC_PI_4) {
                Ok(v) => v,
                Err(e) => return config_fail(e),
            };
            let j2 = args.j2.unwrap_or(1.2);
            match design_circulator_two_modes(j2, phi, k) {
                Ok(d) => {
                    let c = match d.couplings {
                        crw_transport::DesignCouplings::TwoModes(c) => c,
                        _ => unreachable!(),
                    };
                    println!("J_c2={:.6}, xi_c={:.6}", c.j_c2, d.xi_c);
                    print_operating_point(&d);
                    ExitCode::SUCCESS
                }
                Err(e) => design_fail(e),
            }
        }
        DesignTopology::Circ2Equal => {
            let phi = match &args.phi {
                Some(text) => match parse_angle(text, unit) {
                    Ok(v) => v,
                    Err(e) => return config_fail(e),
                },
                None => return config_fail("circ2-equal requires --phi"),
            };
            match design_circulator_three_modes_equal(phi) {
                Ok([d, mirror]) => {
                    let j = match d.couplings {
                        crw_transport::DesignCouplings::ThreeModes(c) => c.j_a1,
                        _ => unreachable!(),
                    };
                    println!("J={:.6}, k={}", j, format_angle_6(d.k));
                    print_operating_point(&d);
                    println!(
                        "mirror k={}, direction={}",
                        format_angle_6(mirror.k),
                        mirror.direction
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => design_fail(e),
            }
        }
        DesignTopology::Circ2K => {
            let k = match &args.k {
                Some(text) => match parse_angle(text, unit) {
                    Ok(v) => v,
                    Err(e) => return config_fail(e),
                },
                None => return config_fail("circ2-k requires --k"),
            };
            match design_circulator_three_modes_at_k(k, phi) {
                Ok(d) => {
                    let c = match d.couplings {
                        crw_transport::DesignCouplings::ThreeModes(c) => c,
                        _ => unreachable!(),
                    };
                    println!(
                        "J_1={:.6}, J_2={:.6}, J_3={:.6}, xi_c={:.6}",
                        c.j_a1, c.j_a2, c.j_c2, d.xi_c
                    );
                    print_operating_point(&d);
                    ExitCode::SUCCESS
                }
                Err(e) => design_fail(e),
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignTopology {
    Circ1,
    #[value(name = "circ2-equal")]
    Circ2Equal,
    #[value(name = "circ2-k")]
    Circ2K,
}

fn design_fail(err: DesignError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(EXIT_CONFIG)
}

fn format_angle_6(angle: f64) -> String {
    format!("{:.6}pi", angle / std::f64::consts::PI)
}

fn print_operating_point(d: &CirculatorDesign) {
    println!(
        "phi={}, k={}, direction={}",
        format_angle_6(d.phi),
        format_angle_6(d.k),
        d.direction
    );
}

use crw_transport::CirculatorDesign;

fn cmd_figure(args: FigureArgs) -> ExitCode {
    let ids: Vec<FigureId> = if args.id.trim().eq_ignore_ascii_case("all") {
        all_figure_ids()
    } else {
        match args.id.parse() {
            Ok(id) => vec![id],
            Err(e) => return config_fail(e),
        }
    };
    if let Err(e) = std::fs::create_dir_all(&args.out) {
        return config_fail(format!("cannot create {}: {e}", args.out.display()));
    }
    let started = Instant::now();
    for id in &ids {
        let spec = reproduce_figure(*id);
        let records = match run_sweep(&spec) {
            Ok(r) => r,
            Err(e) => return config_fail(e),
        };
        // conservation audit on lossless scenarios
        let lossless = spec.node.modes().iter().all(|m| m.gamma == 0.0);
        if lossless {
            let worst = records
                .iter()
                .filter_map(|r| r.conservation_residual())
                .fold(0.0, f64::max);
            if worst > 1e-9 {
                eprintln!("error: {id}: conservation audit failed (residual {worst:.3e})");
                return ExitCode::from(EXIT_PHYSICS);
            }
        }
        let path = args.out.join(format!("{id}.csv"));
        if let Err(e) = write_records(&path, &spec, &records, Format::Csv, args.log10) {
            return config_fail(e);
        }
        println!(
            "{id}: {} records -> {} (audit {})",
            records.len(),
            path.display(),
            if lossless { "ok" } else { "n/a: damped node" }
        );
    }
    println!(
        "{} dataset(s) in {:.2} s",
        ids.len(),
        started.elapsed().as_secs_f64()
    );
    ExitCode::SUCCESS
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let reports = match args.suite {
        Suite::ClosedVsBoundary => verify_closed_vs_boundary(args.seed, args.draws),
        Suite::Conservation => verify_conservation(args.seed, args.draws),
        Suite::Wavepacket => verify_wavepacket(args.sigma),
    };
    let mut all_ok = true;
    for report in &reports {
        println!("{report}");
        all_ok &= report.passed();
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PHYSICS)
    }
}
