use clap::{Parser, Subcommand, ValueEnum};
use origami_sim::anyons::{self, ModularData};
use origami_sim::interferometry::{self as interf, ErrorBudget, MeasurementRecord};
use origami_sim::linalg::CMat;
use origami_sim::mcg::{self, LoopVector, MCGWord};
use origami_sim::origami;
use origami_sim::report::{Check, Report, Status};
use origami_sim::stabilizer::{self as stab, Move, StabilizerCode};
use origami_sim::Error;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const DEFAULT_MAX_LATTICE: usize = 8;
const DEFAULT_TOLERANCE: f64 = 1e-9;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_STATES: usize = 100;

#[derive(Parser, Debug)]
#[command(name = "origami-sim", version, about = "Verify folded-layer modular transformations and their oracles")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for random-state sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pass threshold for floating-point identities.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Largest dense Fock dimension.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Largest lattice size for stabilizer codes.
    #[arg(long, global = true)]
    max_lattice: Option<usize>,
    /// Record wall time per check (makes reports differ between runs).
    #[arg(long, global = true)]
    timings: bool,
    /// JSON file overriding the resource caps.
    #[arg(long, env = "ORIGAMI_SIM_CONFIG", global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modular data of the built-in anyon models.
    Models {
        #[command(subcommand)]
        action: ModelsCmd,
    },
    /// Words in the extended mapping class group of the torus.
    Mcg {
        #[command(subcommand)]
        action: McgCmd,
    },
    /// Folded layer-SWAP protocols.
    Origami {
        #[command(subcommand)]
        action: OrigamiCmd,
    },
    /// Toric-code tableau checks.
    Stabilizer {
        #[command(subcommand)]
        action: StabilizerCmd,
    },
    /// Interferometric readout identities, error budgets and S extraction.
    Measure {
        #[command(subcommand)]
        action: MeasureCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ModelsCmd {
    List,
    Show {
        name: String,
    },
    /// Checks a built-in model or a JSON model file.
    Verify {
        target: String,
    },
}

#[derive(Subcommand, Debug)]
enum McgCmd {
    /// Matrix of a word such as "Rb S"; the empty word is the identity.
    Eval {
        word: String,
    },
    Relations,
}

#[derive(Subcommand, Debug)]
enum OrigamiCmd {
    List,
    /// A catalog or unfolded protocol name, or `all`.
    Verify {
        protocol: String,
    },
}

#[derive(Subcommand, Debug)]
enum StabilizerCmd {
    /// Applies one lattice move to the L×L toric code.
    Verify {
        #[arg(long)]
        lattice: usize,
        #[arg(long = "move")]
        mv: String,
        /// Word the move should realise; defaults per move.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Runs the bilayer genon protocols on the code with cuts of size L.
    Genon {
        #[arg(long = "L")]
        l: usize,
        /// fig3a_i_ii, fig3a_i_ii_iii or layer_swap; all three by default.
        #[arg(long)]
        protocol: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    /// Checks the parity, twist and controlled-SWAP readout identities on random states
    IdentitySuite {
        #[arg(long, default_value_t = DEFAULT_STATES)]
        states: usize,
    },
    /// Evaluates the error estimators for a budget JSON file.
    Estimate { budget: PathBuf },
    /// Writes exact Ramsey records of ⟨ψ|S|ψ⟩ for a model, ready for `extract`.
    Synth { model: String },
    /// Reconstructs S from a measurement file.
    Extract {
        measurements: PathBuf,
        /// Compare the reconstruction against this model's S.
        #[arg(long)]
        expect: Option<String>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    max_lattice: Option<usize>,
    max_dim: Option<usize>,
    tolerance: Option<f64>,
    seed: Option<u64>,
}

struct Settings {
    seed: u64,
    tolerance: f64,
    max_dim: usize,
    max_lattice: usize,
}

/// Input file for `measure extract`: records plus the conjugation permutation.
#[derive(Debug, Serialize, Deserialize)]
struct MeasurementSet {
    model: Option<String>,
    conj: Vec<usize>,
    records: Vec<MeasurementRecord>,
}

#[derive(Serialize)]
struct Output<'a> {
    tool: &'static str,
    version: &'static str,
    command: String,
    status: Status,
    checks: &'a [Check],
}

enum Outcome {
    Report(Report),
    /// Raw JSON written as is (used by `measure synth`).
    Document(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let settings = match load_settings(&cli) {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let start = Instant::now();
    match run(&cli.command, &settings) {
        Ok(Outcome::Document(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(mut report)) => {
            if cli.timings {
                let total = start.elapsed().as_secs_f64() * 1e3;
                report.push(Check::new("elapsed", Status::Pass, "", format!("{total:.1} ms")));
            } else {
                report.strip_timings();
            }
            let pass = report.all_pass();
            print_report(&report, cli.format, command.join(" "));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => usage_error(&e),
    }
}

fn usage_error(e: &str) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn load_settings(cli: &Cli) -> Result<Settings, String> {
    let config = match &cli.config {
        Some(path) => read_json::<Config>(path)?,
        None => Config::default(),
    };
    Ok(Settings {
        seed: cli.seed.or(config.seed).unwrap_or(DEFAULT_SEED),
        tolerance: cli.tolerance.or(config.tolerance).unwrap_or(DEFAULT_TOLERANCE),
        max_dim: cli.max_dim.or(config.max_dim).unwrap_or(interf::DEFAULT_MAX_DIM),
        max_lattice: cli.max_lattice.or(config.max_lattice).unwrap_or(DEFAULT_MAX_LATTICE),
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn print_report(report: &Report, format: Format, command: String) {
    let status = if report.all_pass() { Status::Pass } else { Status::Fail };
    match format {
        Format::Json => {
            let out = Output {
                tool: "origami-sim",
                version: env!("CARGO_PKG_VERSION"),
                command,
                status,
                checks: &report.checks,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("report serialises"));
        }
        Format::Text => {
            print!("{report}");
            let count = |s: Status| report.checks.iter().filter(|c| c.status == s).count();
            println!(
                "{status}: {} pass, {} fail, {} warn, {} skipped",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Warn),
                count(Status::Skipped)
            );
        }
    }
}

fn run(cmd: &Command, s: &Settings) -> Result<Outcome, String> {
    let report = match cmd {
        Command::Models { action } => models(action).map_err(|e| e.to_string())?,
        Command::Mcg { action } => mcg_cmd(action).map_err(|e| e.to_string())?,
        Command::Origami { action } => origami_cmd(action).map_err(|e| e.to_string())?,
        Command::Stabilizer { action } => stabilizer(action, s).map_err(|e| e.to_string())?,
        Command::Measure { action } => return measure(action, s),
    };
    Ok(Outcome::Report(report))
}

fn info(name: impl Into<String>, actual: impl Into<String>) -> Check {
    Check::new(name, Status::Pass, "", actual)
}

fn fmt_complex(z: num_complex::Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    format!("{:.6}{:+.6}i", clean(z.re), clean(z.im))
}

fn fmt_matrix(m: &CMat) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let row: Vec<String> = (0..m.ncols()).map(|j| fmt_complex(m[(i, j)])).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn load_model(target: &str) -> Result<ModularData, Error> {
    if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target).map_err(|e| Error::Parse(format!("{target}: {e}")))?;
        return ModularData::from_json_unchecked(&text);
    }
    anyons::model_by_spec(target)
}

fn models(cmd: &ModelsCmd) -> Result<Report, Error> {
    let mut r = Report::new();
    match cmd {
        ModelsCmd::List => {
            for name in anyons::BUILTIN_NAMES {
                let m = if name == "laughlin" { anyons::laughlin(3)? } else { anyons::builtin_model(name, None)? };
                r.push(info(name, format!("rank {} ({})", m.rank(), m.labels.join(", "))));
            }
        }
        ModelsCmd::Show { name } => {
            let m = load_model(name)?;
            r.push(info("labels", m.labels.join(", ")));
            r.push(info("dims", format!("{:?}", m.dims)));
            r.push(info("S", fmt_matrix(&m.s)));
            let t: Vec<String> = m.t.iter().map(|&z| fmt_complex(z)).collect();
            r.push(info("T", format!("diag({})", t.join(", "))));
            r.push(info("Tr(S)", fmt_complex(origami_sim::linalg::trace(&m.s))));
            r.push(info("conj", format!("{:?}", m.conj)));
            r.push(info("Θ", fmt_complex(anyons::gauss_sum(&m))));
        }
        ModelsCmd::Verify { target } => r.extend(anyons::verify_modular_data(&load_model(target)?)),
    }
    Ok(r)
}

fn mcg_cmd(cmd: &McgCmd) -> Result<Report, Error> {
    let mut r = Report::new();
    match cmd {
        McgCmd::Eval { word } => {
            let w: MCGWord = word.parse()?;
            let m = mcg::word_to_matrix(&w)?;
            r.push(info("matrix", m.to_string()));
            r.push(info("det", m.det().to_string()));
            for (name, v) in [("α", LoopVector::new(1, 0)), ("β", LoopVector::new(0, 1))] {
                let img = mcg::act_on_loop(&m, v)?;
                r.push(info(format!("image of {name}"), format!("({}, {})", img.p, img.q)));
            }
        }
        McgCmd::Relations => r.extend(mcg::verify_group_relations()),
    }
    Ok(r)
}

fn find_protocol(name: &str) -> Result<origami::Protocol, Error> {
    origami::builtin_protocol(name).or_else(|_| origami::unfolded_protocol(name))
}

fn origami_cmd(cmd: &OrigamiCmd) -> Result<Report, Error> {
    let mut r = Report::new();
    match cmd {
        OrigamiCmd::List => {
            for name in origami::catalog_names() {
                let p = origami::builtin_protocol(name)?;
                let status = if p.stub { Status::Skipped } else { Status::Pass };
                let desc = format!("{} on {}: {}", p.expected, p.geometry.name, p.describe_steps());
                r.push(Check::new(name, status, "", desc));
            }
        }
        OrigamiCmd::Verify { protocol } => {
            let names: Vec<String> = if protocol == "all" {
                origami::catalog_names().into_iter().map(String::from).collect()
            } else {
                vec![protocol.clone()]
            };
            for name in names {
                let p = find_protocol(&name)?;
                let start = Instant::now();
                let mut checks = origami::verify_protocol(&p).checks;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                for c in &mut checks {
                    c.elapsed_ms = Some(ms);
                }
                r.checks.extend(checks);
            }
        }
    }
    Ok(r)
}

fn default_expectation(mv: Move) -> Option<&'static str> {
    match mv {
        Move::ReflectDiagonal => Some("Ra S"),
        Move::ReflectVertical => Some("Ra"),
        Move::RotateQuarterVertex | Move::RotateQuarterPlaquette | Move::RotateQuarterEdge => Some("S"),
        Move::RotateQuarterEdgeHadamard => None,
        Move::LayerSwap | Move::PatchLayerSwap(_) => Some(""),
    }
}

fn fmt_symplectic(s: &stab::Symplectic) -> String {
    let rows: Vec<String> = s.0.iter().map(|r| r.iter().map(|b| b.to_string()).collect::<String>()).collect();
    rows.join("/")
}

fn action_check(
    name: String,
    code: &StabilizerCode,
    perm: &stab::QubitPermutation,
    expect: Option<&str>,
) -> Result<Check, Error> {
    let action = stab::logical_action(code, perm)?;
    let actual = action.gate.clone().unwrap_or_else(|| fmt_symplectic(&action.symplectic));
    Ok(match expect {
        Some(w) => {
            let expected = stab::expected_action(&w.parse()?)?;
            let label = if w.is_empty() { "identity".to_string() } else { format!("rep({w})") };
            Check::new(name, Status::from_bool(expected == action.symplectic), label, actual)
        }
        None => Check::new(name, Status::Warn, "no modular counterpart", actual),
    })
}

fn check_lattice(l: usize, s: &Settings) -> Result<(), Error> {
    if l > s.max_lattice {
        return Err(Error::ResourceLimit(format!("L = {l} exceeds the configured limit {}", s.max_lattice)));
    }
    Ok(())
}

fn stabilizer(cmd: &StabilizerCmd, s: &Settings) -> Result<Report, Error> {
    let mut r = Report::new();
    match cmd {
        StabilizerCmd::Verify { lattice, mv, expect } => {
            check_lattice(*lattice, s)?;
            let code = stab::build_toric_torus(*lattice)?;
            let mv: Move = mv.parse()?;
            let expect = expect.as_deref().or(default_expectation(mv));
            let name = format!("toric L={lattice}: {mv}");
            match stab::geometric_permutation(&code, mv) {
                Ok(perm) => r.push(action_check(name, &code, &perm, expect)?),
                Err(e @ Error::NonAutomorphism(_)) => {
                    r.push(Check::new(name, Status::Fail, "code automorphism", e.to_string()))
                }
                Err(e) => return Err(e),
            }
        }
        StabilizerCmd::Genon { l, protocol } => {
            check_lattice(*l, s)?;
            let code = stab::build_bilayer_genon_code(*l)?;
            let names: Vec<&str> = match protocol {
                Some(p) => vec![p.as_str()],
                None => vec!["fig3a_i_ii", "fig3a_i_ii_iii", "layer_swap"],
            };
            for name in names {
                let label = format!("genon L={l}: {name}");
                if name == "layer_swap" {
                    let perm = stab::geometric_permutation(&code, Move::LayerSwap)?;
                    r.push(action_check(label, &code, &perm, Some(""))?);
                    continue;
                }
                let p = origami::unfolded_protocol(name)?;
                match stab::protocol_action(&code, &p) {
                    Ok(chk) => {
                        let actual = chk.action.gate.clone().unwrap_or_else(|| fmt_symplectic(&chk.action.symplectic));
                        r.push(Check::new(
                            label,
                            Status::from_bool(chk.agrees),
                            format!("rep({})", p.expected),
                            actual,
                        ));
                    }
                    Err(e @ (Error::NonAutomorphism(_) | Error::NotClosed(_))) => {
                        r.push(Check::new(label, Status::Fail, format!("rep({})", p.expected), e.to_string()))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(r)
}

fn estimate_check(name: &str, e: interf::Estimate) -> Check {
    let status = if e.valid { Status::Pass } else { Status::Warn };
    let expected = if e.valid { "" } else { "outside the first-order regime" };
    Check::new(name, status, expected, format!("{:.6}", e.value))
}

fn measure(cmd: &MeasureCmd, s: &Settings) -> Result<Outcome, String> {
    let err = |e: Error| e.to_string();
    let mut r = Report::new();
    match cmd {
        MeasureCmd::IdentitySuite { states } => {
            r.extend(interf::identity_suite(s.seed, *states, s.max_dim, s.tolerance).map_err(err)?);
        }
        MeasureCmd::Estimate { budget } => {
            let b: ErrorBudget = read_json(budget)?;
            b.validate().map_err(err)?;
            r.push(estimate_check("timing overlap", interf::timing_error_overlap(&b)));
            r.push(estimate_check("thermal fidelity", interf::thermal_fidelity(&b)));
            r.push(estimate_check("readout fidelity", interf::readout_fidelity(&b)));
        }
        MeasureCmd::Synth { model } => {
            let m = anyons::model_by_spec(model).map_err(err)?;
            let set = MeasurementSet {
                model: Some(m.name.clone()),
                conj: m.conj.clone(),
                records: interf::synthetic_measurements(&m).map_err(err)?,
            };
            return Ok(Outcome::Document(serde_json::to_string_pretty(&set).expect("records serialise")));
        }
        MeasureCmd::Extract { measurements, expect } => {
            let set: MeasurementSet = read_json(measurements)?;
            let n = set.conj.len();
            if set.conj.iter().any(|&c| c >= n) {
                return Err("conj must be a permutation of 0..n".into());
            }
            let conj = origami_sim::linalg::permutation_matrix(&set.conj);
            let ex = interf::extract_matrix_elements(&set.records, &conj).map_err(err)?;
            let method = serde_json::to_value(ex.method).expect("method serialises");
            r.push(info("method", method.as_str().unwrap_or_default()));
            r.push(
                Check::new(
                    "residual",
                    Status::from_bool(ex.residual < s.tolerance),
                    format!("< {:e}", s.tolerance),
                    format!("{:.3e}", ex.residual),
                )
                .with_tolerance(s.tolerance),
            );
            r.push(info("S", fmt_matrix(&ex.s)));
            if let Some(name) = expect {
                let m = anyons::model_by_spec(name).map_err(err)?;
                let diff = origami_sim::linalg::max_abs_diff(&ex.s, &m.s);
                r.push(
                    Check::new(
                        format!("S = S({})", m.name),
                        Status::from_bool(diff < s.tolerance),
                        "0",
                        format!("{diff:.3e}"),
                    )
                    .with_tolerance(s.tolerance),
                );
            }
        }
    }
    Ok(Outcome::Report(r))
}
