use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use deformkit::algebra::{catalog_get, catalog_source, parse_algebra, AlgebraDef};
use deformkit::report::{
    catalog_report, check_report, deform_report, rep_report, resolve_target, DeformOptions, Report, RepOptions,
};
use deformkit::rep::{KappaSign, RepKind, Spin};

#[derive(Parser)]
#[command(name = "deformkit", version, about = "Deformations of kinematical Lie algebras in enveloping algebras")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum RootChoice {
    Positive,
}

#[derive(Subcommand)]
enum Cmd {
    /// Jacobi, Casimir centrality, Cartan and involution checks.
    Check {
        /// Catalog name or path to an .alg file.
        algebra: String,
    },
    /// Deform `src` into `dst` (`nh` and `desitter` pick a member by --kappa-sign).
    Deform {
        src: String,
        dst: String,
        /// Append the relativistic observable suite (galilei → poincare).
        #[arg(long)]
        observables: bool,
        /// Evaluate the target Casimirs on the deformed generators.
        #[arg(long)]
        casimirs: bool,
        #[arg(long, value_enum)]
        root_determination: Option<RootChoice>,
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        kappa_sign: KappaSign,
    },
    /// Verify a differential-operator representation.
    Rep {
        name: RepKind,
        #[arg(long, default_value = "0")]
        spin: Spin,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-", allow_hyphen_values = true)]
        kappa_sign: KappaSign,
        /// Sample points for the spot-oracle.
        #[arg(long, default_value_t = 2)]
        points: usize,
        /// Floating-point spin matrices; allows any spin.
        #[arg(long)]
        numeric: bool,
    },
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    /// Print the .alg source of an entry.
    Export { name: String },
}

fn load(arg: &str) -> Result<AlgebraDef, String> {
    let path = Path::new(arg);
    if path.is_file() || arg.ends_with(".alg") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        parse_algebra(&text).map_err(|e| format!("{arg}:{e}"))
    } else {
        catalog_get(arg).map_err(|e| e.to_string())
    }
}

fn run(cli: Cli) -> Result<Option<Report>, String> {
    let err = |e: deformkit::report::ReportError| e.to_string();
    Ok(Some(match cli.cmd {
        Cmd::Check { algebra } => check_report(&load(&algebra)?),
        Cmd::Deform { src, dst, observables, casimirs, root_determination, kappa_sign } => {
            let opts = DeformOptions { observables, casimirs, positive_roots: root_determination.is_some() };
            deform_report(&src, resolve_target(&dst, kappa_sign), opts).map_err(err)?
        }
        Cmd::Rep { name, spin, seed, kappa_sign, points, numeric } => {
            let opts = RepOptions { spin, seed, sign: kappa_sign, points, numeric };
            rep_report(name, &opts).map_err(err)?
        }
        Cmd::Catalog { cmd: CatalogCmd::List } => catalog_report().map_err(err)?,
        Cmd::Catalog { cmd: CatalogCmd::Export { name } } => {
            print!("{}", catalog_source(&name).map_err(|e| e.to_string())?);
            return Ok(None);
        }
    }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(Some(report)) => {
            match format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
