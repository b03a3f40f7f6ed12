//! Command-line driver: reads a JSON curve spec, runs energies, sweeps and
//! studies, and writes CSV or JSON tables.

mod spec;
mod table;

pub use spec::{ContactSpec, CurveDef, CurveSpec, EnergySpec, HarmonicSpec, Num};
pub use table::{Cell, Format, Table};

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::contact::{admissibility_report, Classification};
use crate::energy::{energy, exponent_study, ohara_energy, ContactGeometry, EnergyParams, ModelDomain, Verdict};
use crate::error::Error;

pub const EXIT_CLEAR: i32 = 0;
pub const EXIT_CONTACT: i32 = 2;
pub const EXIT_INADMISSIBLE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
/// Runtime failures not covered above (I/O, quadrature).
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "tube-energy", version, about = "Repulsive energy of tubes around closed curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy of the tube described by the spec.
    Energy(SpecArgs),
    /// Energy for a list of tube radii, compared with the centreline limit.
    SweepR {
        #[command(flatten)]
        common: SpecArgs,
        /// Comma-separated tube radii.
        #[arg(long, value_delimiter = ',', required = true)]
        r_list: Vec<f64>,
        /// Grid size for the centreline energy.
        #[arg(long, default_value_t = 2048)]
        ohara_grid: usize,
    },
    /// Energy for a list of aspect ratios `1/(r κ_max)`.
    SweepAspect {
        #[command(flatten)]
        common: SpecArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        aspects: Vec<f64>,
    },
    /// Cutoff study of the model contact integrals.
    ExponentStudy {
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.005,0.0025")]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        half_length: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Admissibility and self-contact report.
    Report {
        #[command(flatten)]
        common: SpecArgs,
        /// Seeds for the separation search; overrides the spec.
        #[arg(long)]
        seeds: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Overrides the spec grid, as `N_S,N_THETA`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<[usize; 2]>,
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GeometryArg {
    Point,
    Line,
}

fn parse_grid(s: &str) -> Result<[usize; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.trim().parse().map_err(|e| format!("N_S: {e}"))?;
            let b = b.trim().parse().map_err(|e| format!("N_THETA: {e}"))?;
            Ok([a, b])
        }
        _ => Err(format!("expected N_S,N_THETA, got {s:?}")),
    }
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    error: anyhow::Error,
}

fn fail(code: i32, error: impl Into<anyhow::Error>) -> Failure {
    Failure { code, error: error.into() }
}

fn library(e: Error) -> Failure {
    let code = match e {
        Error::InvalidParameter(_) | Error::DegenerateFrame { .. } | Error::Irregular { .. } => EXIT_USAGE,
        Error::SelfContactSingular { .. } => EXIT_CONTACT,
        _ => EXIT_SOFTWARE,
    };
    fail(code, e)
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Tables go to `--out` or `stdout`; diagnostics to `stderr`.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_CLEAR };
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {:#}", f.error);
            f.code
        }
    }
}

fn load(args: &SpecArgs) -> Result<CurveSpec, Failure> {
    let text = std::fs::read_to_string(&args.spec)
        .with_context(|| format!("reading {}", args.spec.display()))
        .map_err(|e| fail(EXIT_USAGE, e))?;
    let mut spec = CurveSpec::from_json(&text)
        .with_context(|| format!("parsing {}", args.spec.display()))
        .map_err(|e| fail(EXIT_PARSE, e))?;
    if let Some(g) = args.grid {
        spec.energy.grid = g;
    }
    if let Some(a) = args.alpha {
        spec.energy.alpha = Num(a);
    }
    spec.validate().map_err(library)?;
    Ok(spec)
}

fn emit(table: &Table, output: &OutputArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let text = table.render(output.format).map_err(|e| fail(EXIT_SOFTWARE, e))?;
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(|e| fail(EXIT_SOFTWARE, e)),
        None => stdout.write_all(text.as_bytes()).context("writing output").map_err(|e| fail(EXIT_SOFTWARE, e)),
    }
}

fn grid_meta(table: &mut Table, params: &EnergyParams<f64>, r: f64) {
    table.meta("grid", format!("{}x{}", params.n_s, params.n_theta));
    table.meta("refinement_levels", params.refinement_levels.to_string());
    table.meta("alpha", format!("{:?}", params.alpha));
    table.meta("diagonal_threshold", format!("{:?}", params.threshold_for(r)));
    table.meta("measure", format!("{:?}", params.measure).to_lowercase());
}

struct Evaluated {
    status: &'static str,
    code: i32,
    value: Option<crate::energy::EnergyResult<f64>>,
}

fn evaluate(spec: &CurveSpec, r: f64) -> Result<Evaluated, Failure> {
    let tube = spec.tube_with_radius(r).map_err(library)?;
    let params = spec.energy_params().map_err(library)?;
    let inadmissible = !tube.locally_admissible();
    match energy(&tube, &params) {
        Ok(res) => {
            let (status, code) = if inadmissible {
                ("locally_inadmissible", EXIT_INADMISSIBLE)
            } else if res.near_contact {
                ("near_contact", EXIT_CONTACT)
            } else {
                ("clear", EXIT_CLEAR)
            };
            Ok(Evaluated { status, code, value: Some(res) })
        }
        Err(Error::SelfContactSingular { .. }) => Ok(Evaluated {
            status: if inadmissible { "locally_inadmissible" } else { "self_contact_singular" },
            code: if inadmissible { EXIT_INADMISSIBLE } else { EXIT_CONTACT },
            value: None,
        }),
        Err(e) => Err(library(e)),
    }
}

fn worst(a: i32, b: i32) -> i32 {
    let rank = |c| match c {
        EXIT_INADMISSIBLE => 2,
        EXIT_CONTACT => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn energy_cells(ev: &Evaluated) -> Vec<Cell> {
    match &ev.value {
        Some(res) => vec![
            Cell::Num(res.value),
            Cell::Num(res.error_estimate),
            Cell::Num(res.min_far_chord),
            Cell::Text(ev.status.into()),
        ],
        None => vec![Cell::Num(f64::INFINITY), Cell::Empty, Cell::Num(0.0), Cell::Text(ev.status.into())],
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Energy(args) => {
            let spec = load(&args)?;
            let ev = evaluate(&spec, spec.r.0)?;
            let mut t = Table::new("energy", &["r", "alpha", "value", "error_estimate", "min_far_chord", "status"]);
            let mut row = vec![Cell::Num(spec.r.0), Cell::Num(spec.energy.alpha.0)];
            row.extend(energy_cells(&ev));
            t.row(row);
            grid_meta(&mut t, &spec.energy_params().map_err(library)?, spec.r.0);
            t.spec(spec.to_json());
            emit(&t, &args.output, stdout)?;
            Ok(ev.code)
        }
        Command::SweepR { common, r_list, ohara_grid } => {
            let spec = load(&common)?;
            let params = spec.energy_params().map_err(library)?;
            let curve = spec.curve().map_err(library)?;
            let reference = ohara_energy(&curve, params.alpha, ohara_grid).map_err(library)?;
            let norm = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
            let mut t = Table::new(
                "sweep-r",
                &["r", "F", "F_over_4pi2", "ohara_gap", "error_estimate", "min_far_chord", "status"],
            );
            let mut code = EXIT_CLEAR;
            for &r in &r_list {
                let ev = evaluate(&spec, r)?;
                code = worst(code, ev.code);
                let mut row = vec![Cell::Num(r)];
                match &ev.value {
                    Some(res) => {
                        let scaled = res.value / norm;
                        row.extend([
                            Cell::Num(res.value),
                            Cell::Num(scaled),
                            Cell::Num((scaled - reference).abs()),
                            Cell::Num(res.error_estimate),
                            Cell::Num(res.min_far_chord),
                        ]);
                    }
                    None => row.extend([Cell::Num(f64::INFINITY), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Num(0.0)]),
                }
                row.push(Cell::Text(ev.status.into()));
                t.row(row);
            }
            grid_meta(&mut t, &params, spec.r.0);
            t.meta("ohara_energy", format!("{reference:?}"));
            t.meta("ohara_grid", ohara_grid.to_string());
            t.spec(spec.to_json());
            emit(&t, &common.output, stdout)?;
            Ok(code)
        }
        Command::SweepAspect { common, aspects } => {
            let spec = load(&common)?;
            let params = spec.energy_params().map_err(library)?;
            let kappa = spec.tube().map_err(library)?.kappa_max();
            let mut t = Table::new(
                "sweep-aspect",
                &["aspect", "r", "value", "error_estimate", "min_far_chord", "status"],
            );
            let mut code = EXIT_CLEAR;
            for &a in &aspects {
                if !(a > 0.0) {
                    return Err(fail(EXIT_USAGE, anyhow::anyhow!("aspect ratios must be positive, got {a}")));
                }
                let r = 1.0 / (a * kappa);
                let ev = evaluate(&spec, r)?;
                code = worst(code, ev.code);
                let mut row = vec![Cell::Num(a), Cell::Num(r)];
                row.extend(energy_cells(&ev));
                t.row(row);
            }
            grid_meta(&mut t, &params, spec.r.0);
            t.meta("kappa_max", format!("{kappa:?}"));
            t.spec(spec.to_json());
            emit(&t, &common.output, stdout)?;
            Ok(code)
        }
        Command::ExponentStudy { geometry, alphas, deltas, epsilon, half_length, output } => {
            let geometry = match geometry {
                GeometryArg::Point => ContactGeometry::PointContact,
                GeometryArg::Line => ContactGeometry::LineContact,
            };
            let domain = ModelDomain { epsilon, half_length };
            let mut t = Table::new("exponent-study", &["alpha", "delta", "J", "increment", "verdict"]);
            let mut code = EXIT_CLEAR;
            for &alpha in &alphas {
                let study = exponent_study(geometry, alpha, &deltas, &domain).map_err(library)?;
                let verdict = match study.verdict {
                    Verdict::Converges => "converges",
                    Verdict::Diverges => {
                        code = EXIT_CONTACT;
                        "diverges"
                    }
                };
                for row in &study.rows {
                    t.row(vec![
                        Cell::Num(alpha),
                        Cell::Num(row.delta),
                        Cell::Num(row.value),
                        row.increment.map_or(Cell::Empty, Cell::Num),
                        Cell::Text(verdict.into()),
                    ]);
                }
            }
            t.meta("geometry", format!("{geometry:?}"));
            t.meta("epsilon", format!("{epsilon:?}"));
            t.meta("half_length", format!("{half_length:?}"));
            emit(&t, &output, stdout)?;
            Ok(code)
        }
        Command::Report { common, seeds } => {
            let spec = load(&common)?;
            let n_seed = seeds.unwrap_or(spec.contact.n_seed);
            let tube = spec.tube().map_err(library)?;
            let rep = admissibility_report(&tube, n_seed).map_err(library)?;
            let (x, y) = rep.witness;
            let mut t = Table::new("report", &["quantity", "value"]);
            let rows: Vec<(&str, Cell)> = vec![
                ("classification", Cell::Text(rep.classification.as_str().into())),
                ("locally_admissible", Cell::Bool(rep.locally_admissible)),
                ("admissibility_ratio", Cell::Num(rep.admissibility_ratio)),
                ("min_jacobian_factor", Cell::Num(rep.min_jacobian_factor)),
                ("min_chord", Cell::Num(rep.min_chord)),
                ("witness_x_u", Cell::Num(x.u)),
                ("witness_x_theta", Cell::Num(x.theta)),
                ("witness_y_u", Cell::Num(y.u)),
                ("witness_y_theta", Cell::Num(y.theta)),
                ("dstar_at_witness", Cell::Num(rep.dstar_at_witness)),
                ("separation_at_witness", Cell::Num(rep.separation_at_witness)),
                ("penetration_depth", Cell::Num(rep.penetration_depth)),
            ];
            for (k, v) in rows {
                t.row(vec![Cell::Text(k.into()), v]);
            }
            t.meta("n_seed", n_seed.to_string());
            t.meta("tol_far_squared", format!("{:?}", rep.tolerances.far_squared));
            t.meta("tol_contact", format!("{:?}", rep.tolerances.contact));
            t.spec(spec.to_json());
            emit(&t, &common.output, stdout)?;
            Ok(match rep.classification {
                Classification::Clear => EXIT_CLEAR,
                Classification::SelfContact | Classification::InterpenetrationSuspected => EXIT_CONTACT,
                Classification::LocallyInadmissible => EXIT_INADMISSIBLE,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grid_parser() {
        assert_eq!(parse_grid("48,24"), Ok([48, 24]));
        assert!(parse_grid("48").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["tube-energy"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["tube-energy", "energy"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["tube-energy", "exponent-study", "--geometry", "point", "--alphas", "3.5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["tube-energy", "--help"]).0, EXIT_CLEAR);
    }

    #[test]
    fn malformed_spec_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\n  \"curve\": {\"kind\": \"circle\", \"radius\": 2},\n  \"r\": 0.5,\n  \"extra\": 1\n}").unwrap();
        let (code, _, err) = run_args(&["tube-energy", "energy", "--spec", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_PARSE);
        assert!(err.contains("extra") && err.contains("line 4"), "{err}");
    }

    #[test]
    fn exponent_study_table() {
        let (code, out, _) =
            run_args(&["tube-energy", "exponent-study", "--geometry", "point", "--alphas", "1", "--deltas", "0.02,0.01,0.005"]);
        assert_eq!(code, EXIT_CLEAR);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("alpha,delta,J,increment,verdict"));
        assert_eq!(out.lines().filter(|l| l.ends_with(",converges")).count(), 3);
        assert!(out.lines().any(|l| l.starts_with("# command: exponent-study")));
    }
}
