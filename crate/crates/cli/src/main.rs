mod config;
mod experiment;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nevbound::bounds::{upper_bound_b, write_reports_csv};
use nevbound::hamiltonian::parse_family;
use nevbound::monodromy::{geometric_grid, growth_profile, log_max_on_circle};
use nevbound::{BoundMode, BoundReport, ComparisonData, Error, Result};
use rayon::prelude::*;

use config::Loaded;

#[derive(Parser)]
#[command(name = "nevbound", version, about = "Growth of monodromy matrices of Hamburger Hamiltonians")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the checks of a TOML experiment file.
    Run { config: PathBuf },
    /// List the built-in experiment presets.
    Presets,
    /// Print ln M(R) over a radius grid as CSV.
    Measure {
        family: String,
        #[arg(long, default_value_t = 1e2)]
        rmin: f64,
        #[arg(long, default_value_t = 1e6)]
        rmax: f64,
        #[arg(long, default_value_t = 4)]
        ppd: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 64)]
        angles: usize,
    },
    /// Print the upper bound, with the measured ln M(R), as CSV.
    Bound {
        family: String,
        data: String,
        #[arg(long, default_value_t = 1e2)]
        rmin: f64,
        #[arg(long, default_value_t = 1e6)]
        rmax: f64,
        #[arg(long, default_value_t = 4)]
        ppd: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = Mode::Infimum)]
        mode: Mode,
    },
    /// Run the built-in acceptance criteria.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Infimum,
    AtT,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Validation(_) => 2,
        Error::Cap(_) => 3,
        _ => 1,
    }
}

fn grid(rmin: f64, rmax: f64, ppd: usize) -> Result<Vec<f64>> {
    if !(rmin > 0.0 && rmin < rmax && rmax.is_finite()) || ppd == 0 {
        return Err(Error::Validation(format!("bad grid [{rmin}, {rmax}] with {ppd} points per decade")));
    }
    Ok(geometric_grid(rmin, rmax, ppd))
}

fn execute(cmd: Cmd) -> Result<bool> {
    let stdout = std::io::stdout();
    match cmd {
        Cmd::Run { config } => {
            let loaded = Loaded::from_path(&config)?;
            let out = experiment::run(&loaded)?;
            for (name, v) in &out.verdicts {
                println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
            }
            println!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
            Ok(out.pass())
        }
        Cmd::Presets => {
            print!("{}", nevbound::casebook::list_presets());
            Ok(true)
        }
        Cmd::Measure { family, rmin, rmax, ppd, eps, angles } => {
            let h = parse_family(&family, None)?;
            let p = growth_profile(&h, &grid(rmin, rmax, ppd)?, eps, angles)?;
            p.write_csv(stdout.lock())?;
            eprintln!("order estimate {:.4}", p.order);
            Ok(true)
        }
        Cmd::Bound { family, data, rmin, rmax, ppd, eps, mode } => {
            let h = parse_family(&family, None)?;
            let data = ComparisonData::parse(&data, None)?;
            let mode = match mode {
                Mode::Infimum => BoundMode::GridInfimum,
                Mode::AtT => BoundMode::AtT,
            };
            let rows: Vec<BoundReport> = grid(rmin, rmax, ppd)?
                .par_iter()
                .map(|&r| {
                    let mut rep = upper_bound_b(&data, r, mode)?;
                    rep.attach_measurement(log_max_on_circle(&h, r, 64, eps)?.log_max);
                    Ok(rep)
                })
                .collect::<Result<_>>()?;
            write_reports_csv(&rows, stdout.lock())?;
            Ok(true)
        }
        Cmd::Selftest { seed } => {
            let mut ok = true;
            for c in nevbound::acceptance::CRITERIA {
                let o = nevbound::acceptance::run_criterion(c, seed);
                println!("{}", o.line());
                std::io::stdout().flush()?;
                ok &= o.pass;
            }
            Ok(ok)
        }
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("NEVBOUND_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Validation(format!("NEVBOUND_THREADS = '{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Validation(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| execute(cli.cmd)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
