use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rhopf::algebra::{Flavor, Toggles};
use rhopf::cli::{parse_rspec, run_plan, Command, Plan};
use rhopf::rmatrix::instances;
use rhopf::{Error, Result};

/// Exact verification of R-matrix current algebras and their Hopf structure.
#[derive(Parser)]
#[command(name = "rhopf", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Yang-Baxter equation, unitarity, invertibility and pole clearing.
    CheckR(Common),
    /// Braid consistency, relation homomorphism checks and Hopf axioms.
    VerifyHopf(Common),
    /// Mode-relation consistency and, for example1, the Drinfeld comparison.
    VerifyModes(Common),
    /// Prints the normal form of an element expression.
    NormalOrder {
        /// Element, e.g. "Phi1(z2)*Phi1(z1)" or "Phi1(z1) @ L11(z2*q^(c1/2))".
        expr: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Built-in instance name.
    #[arg(long, conflicts_with = "spec")]
    instance: Option<String>,
    /// R-matrix spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Algebra flavor: P, EP or DEP.
    #[arg(long, default_value = "DEP")]
    flavor: String,
    /// Mode truncation order N.
    #[arg(long, default_value_t = 5)]
    window: i64,
    /// Guard band; defaults to 1 + the largest polynomial degree.
    #[arg(long)]
    margin: Option<i64>,
    /// Convention toggle NAME=VALUE (repeatable).
    #[arg(long = "toggle", value_name = "NAME=VALUE")]
    toggles: Vec<String>,
    /// Do not impose triangularity on the modes.
    #[arg(long)]
    no_triangular: bool,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn plan(command: Command, c: &Common, expr: Option<String>) -> Result<Plan> {
    let (instance, rmatrix) = match (&c.instance, &c.spec) {
        (Some(name), None) => (name.clone(), instances::by_name(name)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
            let spec = parse_rspec(&text)?;
            (spec.name.unwrap_or_else(|| path.display().to_string()), spec.rmatrix)
        }
        _ => return Err(Error::Domain(format!("give exactly one of --instance or --spec; instances: {}", instances::NAMES.join(", ")))),
    };
    let flavor = match c.flavor.as_str() {
        "P" => Flavor::P,
        "EP" => Flavor::EP,
        "DEP" => Flavor::DEP,
        other => return Err(Error::Domain(format!("unknown flavor {other:?}"))),
    };
    let mut toggles = Toggles::default();
    for t in &c.toggles {
        let (k, v) = t.split_once('=').ok_or_else(|| Error::Domain(format!("toggle {t:?} is not NAME=VALUE")))?;
        toggles.set(k, v)?;
    }
    Ok(Plan { command, instance, rmatrix, flavor, toggles, window: c.window, margin: c.margin, triangular: !c.no_triangular, expr })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common, expr) = match cli.command {
        Sub::CheckR(c) => (Command::CheckR, c, None),
        Sub::VerifyHopf(c) => (Command::VerifyHopf, c, None),
        Sub::VerifyModes(c) => (Command::VerifyModes, c, None),
        Sub::NormalOrder { expr, common } => (Command::NormalOrder, common, Some(expr)),
    };
    let report = match plan(command, &common, expr).and_then(|p| run_plan(&p)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &common.out {
        if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    print!("{}", report.summary());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
