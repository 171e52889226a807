use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use klwb_core::suites::{run_dump, run_specialize, run_suite, with_threads, Dump, ExponentBound, Report, RunConfig, Suite};
use klwb_core::{coxeter::CartanType, Error};

#[derive(Parser)]
#[command(name = "klwb", version, about = "Exact checks for Kazhdan-Laumon and orbit Hecke algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite
    Verify {
        /// braid, cubic, pi, w0, minpoly, canonical, gluing, polyconj, tilting, chevalley or cells
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print a data table
    Dump {
        /// cells, fulltwist_scalars, qpoly or orbit_table
        what: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate p(v) at v = q^(1/2)
    Specialize {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Cartan type, e.g. A2, B3, G2
    #[arg(long = "type", default_value = "A1")]
    cartan_type: String,
    /// largest denominator of character points
    #[arg(long, default_value_t = 6)]
    den: i64,
    /// exponent bound: paper, safe or an integer
    #[arg(long, default_value = "safe")]
    m: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// number of randomized samples (suite default if omitted)
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long, env = "KLWB_THREADS")]
    threads: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let cartan_type: CartanType = self.cartan_type.parse()?;
        let cfg = RunConfig {
            cartan_type,
            den: self.den,
            m: self.m.parse::<ExponentBound>()?,
            seed: self.seed,
            samples: self.samples,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<(Report, bool), Error> {
    let common = match &cli.command {
        Command::Verify { common, .. } | Command::Dump { common, .. } | Command::Specialize { common, .. } => common,
    };
    let cfg = common.config()?;
    let report = with_threads(common.threads, || match &cli.command {
        Command::Verify { suite, .. } => run_suite(suite.parse::<Suite>()?, &cfg),
        Command::Dump { what, .. } => run_dump(what.parse::<Dump>()?, &cfg),
        Command::Specialize { q, .. } => run_specialize(*q, &cfg),
    })??;
    Ok((report, common.json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, json)) => {
            let body = if json { format!("{}\n", report.to_json()) } else { report.to_text() };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            match report.first_failure() {
                Some(f) => {
                    eprintln!("failed: {}: {}", f.check, f.witness.as_deref().unwrap_or(&f.detail));
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
