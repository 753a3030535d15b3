use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermisea::counting::{
    boson_entropy, boson_inequality_check, boson_variance, fig1_functions, BosonOccupations,
    CountingReport,
};
use fermisea::factorization::RegionProjector;
use fermisea::models::{lattice_scan, lll_mode_profile, lll_scan};
use fermisea::thermal::{
    effective_energies, occupation_operator, restricted_occupation, ThermalSystem,
};
use serde_json::{json, Value};

mod input;
mod output;
mod verify;

use output::{write_json, Table};

#[derive(Parser, Debug)]
#[command(
    name = "fermisea",
    version,
    about = "Entropy and particle-number statistics of free-fermion states"
)]
struct Cli {
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; tables default to csv, the thermal report to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized verification.
    #[arg(long, global = true, default_value_t = 2008)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy, second- and fourth-cumulant bound functions on [0, 1].
    Fig1 {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        steps: u64,
    },
    /// Counting statistics of the filled lowest Landau level in a disc.
    Lll {
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        #[arg(long, default_value_t = 20.0)]
        r_max: f64,
        /// Number of intervals between r-min and r-max.
        #[arg(long, default_value_t = 190)]
        r_steps: usize,
    },
    /// Radial profiles of in-disc angular-momentum modes.
    LllModes {
        #[arg(long, default_value_t = 6.0)]
        radius: f64,
        #[arg(long, default_value = "0,6,12,18,24,30,36,42")]
        k_list: String,
        #[arg(long, default_value_t = 10000, value_parser = clap::value_parser!(u64).range(1..))]
        r_steps: u64,
    },
    /// Counting statistics of a segment of a ring Fermi sea.
    Lattice {
        #[arg(long, default_value_t = 512)]
        sites: usize,
        #[arg(long, default_value_t = 256)]
        filled: usize,
        #[arg(long, default_value_t = 1)]
        ell_min: usize,
        #[arg(long)]
        ell_max: Option<usize>,
    },
    /// Counting statistics of a quasi-free thermal state restricted to a region.
    Thermal(ThermalArgs),
    /// Compare closed forms with brute-force Fock-space computations.
    Verify {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        /// Tolerance applied to every suite instead of the defaults.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Dilute boson bound S >= ln2 Var for a set of mode occupations.
    Bosons {
        #[arg(long, default_value = "0.5")]
        n: String,
    },
}

#[derive(Args, Debug)]
struct ThermalArgs {
    /// Kernel matrix file.
    #[arg(long)]
    kernel: PathBuf,
    /// 1-based site indices, e.g. `1,2,5`.
    #[arg(
        long,
        conflicts_with = "region_file",
        required_unless_present = "region_file"
    )]
    region: Option<String>,
    /// Projector matrix file.
    #[arg(long)]
    region_file: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Input(String),
    Verification,
}

impl From<input::InputError> for Failure {
    fn from(e: input::InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(cli: &Cli, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Outcome {
    let result = match &cli.out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            write(&mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| Failure::Input(format!("writing output: {e}")))
}

impl Cli {
    fn table_format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

fn emit_table(cli: &Cli, table: &Table) -> Outcome {
    match cli.table_format() {
        Format::Csv => emit(cli, |w| table.write_csv(w)),
        Format::Json => emit(cli, |w| write_json(&table.to_json(), w)),
    }
}

fn report_row(x: f64, r: &CountingReport) -> Vec<f64> {
    vec![x, r.mean, r.variance, r.entropy_nats, r.kappa4, r.ratio()]
}

fn fig1(cli: &Cli, steps: u64) -> Outcome {
    let mut table = Table::new(["x", "entropy_fn", "bound2_fn", "bound4_fn"]);
    for i in 0..=steps {
        let x = i as f64 / steps as f64;
        let (s, f2, f4) = fig1_functions(x);
        table.push(vec![x, s, f2, f4]);
    }
    emit_table(cli, &table)
}

fn lll(cli: &Cli, r_min: f64, r_max: f64, r_steps: usize) -> Outcome {
    if !(r_min > 0.0 && r_min <= r_max && r_max.is_finite()) {
        return Err(usage(format!(
            "need 0 < r-min <= r-max, got {r_min}, {r_max}"
        )));
    }
    if r_steps == 0 && r_min != r_max {
        return Err(usage("r-steps = 0 requires r-min = r-max"));
    }
    let radii: Vec<f64> = if r_steps == 0 {
        vec![r_min]
    } else {
        (0..=r_steps)
            .map(|i| r_min + (r_max - r_min) * i as f64 / r_steps as f64)
            .collect()
    };
    let mut table = Table::new(["R", "mean", "variance", "entropy", "kappa4", "ratio"]);
    for p in lll_scan(&radii).map_err(usage)? {
        table.push(report_row(p.radius, &p.report));
    }
    emit_table(cli, &table)
}

fn lll_modes(cli: &Cli, radius: f64, k_list: &str, r_steps: u64) -> Outcome {
    let ks: Vec<usize> = input::parse_list(k_list).map_err(usage)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(usage(format!("radius must be positive, got {radius}")));
    }
    let grid: Vec<f64> = (0..=r_steps)
        .map(|i| radius * i as f64 / r_steps as f64)
        .collect();
    let profiles = ks
        .iter()
        .map(|&k| lll_mode_profile(k, radius, &grid))
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage)?;
    let mut table =
        Table::new(std::iter::once("r".to_string()).chain(ks.iter().map(|k| format!("p_k{k}"))));
    for (i, &r) in grid.iter().enumerate() {
        table.push(
            std::iter::once(r)
                .chain(profiles.iter().map(|p| p[i]))
                .collect(),
        );
    }
    emit_table(cli, &table)
}

fn lattice(
    cli: &Cli,
    sites: usize,
    filled: usize,
    ell_min: usize,
    ell_max: Option<usize>,
) -> Outcome {
    let ell_max = ell_max.unwrap_or(sites);
    if ell_min == 0 || ell_min > ell_max {
        return Err(usage(format!(
            "need 1 <= ell-min <= ell-max, got {ell_min}, {ell_max}"
        )));
    }
    let segments: Vec<usize> = (ell_min..=ell_max).collect();
    let mut table = Table::new(["ell", "mean", "variance", "entropy", "kappa4", "ratio"]);
    for p in lattice_scan(sites, filled, &segments).map_err(usage)? {
        table.push(report_row(p.segment as f64, &p.report));
    }
    emit_table(cli, &table)
}

fn thermal(cli: &Cli, args: &ThermalArgs) -> Outcome {
    if cli.format == Some(Format::Csv) {
        return Err(usage("the thermal report is JSON only"));
    }
    let kernel = input::read_matrix(&args.kernel)?;
    let dim = kernel.nrows();
    let sys = ThermalSystem::new(kernel)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.kernel.display())))?;
    let region = match (&args.region, &args.region_file) {
        (Some(spec), _) => {
            let sites = input::parse_sites(spec).map_err(usage)?;
            RegionProjector::sites(dim, sites).map_err(usage)?
        }
        (None, Some(path)) => {
            let p = input::read_matrix(path)?;
            if p.nrows() != dim {
                return Err(Failure::Input(format!(
                    "{}: projector dimension {} differs from kernel dimension {dim}",
                    path.display(),
                    p.nrows()
                )));
            }
            RegionProjector::matrix(p)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        (None, None) => unreachable!("clap requires a region"),
    };
    let occ = restricted_occupation(&occupation_operator(&sys), &region).map_err(usage)?;
    let report = fermisea::counting::inequality_report(&occ.spectrum());
    let mut value = serde_json::to_value(report).expect("plain numbers");
    let energies: Vec<Value> = effective_energies(&occ)
        .iter()
        .map(|e| {
            json!({
                "occupation": e.occupation,
                "value": if e.pinned { Value::Null } else { json!(e.value) },
                "pinned": e.pinned,
            })
        })
        .collect();
    value["effective_energies"] = Value::Array(energies);
    emit(cli, |w| write_json(&value, w))
}

fn bosons(cli: &Cli, list: &str) -> Outcome {
    let n: Vec<f64> = input::parse_list(list).map_err(usage)?;
    let occ = BosonOccupations::new(n).map_err(usage)?;
    let (s, var) = (boson_entropy(&occ), boson_variance(&occ));
    let bound = std::f64::consts::LN_2 * var;
    let verdict = boson_inequality_check(&occ);
    match cli.table_format() {
        Format::Csv => emit(cli, |w| {
            writeln!(w, "entropy,variance,bound,applicable,holds")?;
            writeln!(
                w,
                "{},{},{},{},{}",
                output::fmt_g(s),
                output::fmt_g(var),
                output::fmt_g(bound),
                verdict.applicable,
                verdict.holds
            )
        }),
        Format::Json => {
            let value = json!({
                "entropy": s,
                "variance": var,
                "bound": bound,
                "applicable": verdict.applicable,
                "holds": verdict.holds,
            });
            emit(cli, |w| write_json(&value, w))
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Fig1 { steps } => fig1(cli, *steps),
        Command::Lll {
            r_min,
            r_max,
            r_steps,
        } => lll(cli, *r_min, *r_max, *r_steps),
        Command::LllModes {
            radius,
            k_list,
            r_steps,
        } => lll_modes(cli, *radius, k_list, *r_steps),
        Command::Lattice {
            sites,
            filled,
            ell_min,
            ell_max,
        } => lattice(cli, *sites, *filled, *ell_min, *ell_max),
        Command::Thermal(args) => thermal(cli, args),
        Command::Verify { cases, tol } => {
            if let Some(t) = tol {
                if !(*t >= 0.0 && t.is_finite()) {
                    return Err(usage(format!("tolerance must be non-negative, got {t}")));
                }
            }
            let rows = verify::run(cli.seed, *cases as usize, *tol);
            let all_pass = rows.iter().all(|r| r.pass);
            match cli.table_format() {
                Format::Csv => emit(cli, |w| verify::write_csv(&rows, w))?,
                Format::Json => emit(cli, |w| {
                    write_json(&serde_json::to_value(&rows).expect("rows"), w)
                })?,
            }
            if all_pass {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Bosons { n } => bosons(cli, n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("fermisea: verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fermisea: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("fermisea: {msg}");
            ExitCode::from(3)
        }
    }
}
