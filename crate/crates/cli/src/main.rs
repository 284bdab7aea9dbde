//! `rsmoments` command-line front end.

mod commands;
mod config;
mod error;
mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rsmoments::radicals::Signs;

use commands::{CalibrateArgs, Ctx, Experiment, ExperimentArgs, MomentArgs, OracleQuery, Series};
use config::{Format, RunConfig, Settings};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "rsmoments",
    version,
    about = "Moments of the Rankin-Selberg error term"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Coefficient bound N.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Cache directory [default: $RSMOMENTS_CACHE or .].
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Weight of the cusp form.
    #[arg(long, global = true)]
    kappa: Option<u32>,
    /// Mean constant A, overriding calibration (needs --z0).
    #[arg(long, global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Secondary constant Z0, overriding calibration (needs --a).
    #[arg(long, global = true, allow_negative_numbers = true)]
    z0: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest number of tuples an enumeration may visit.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// `key=value` file, or an earlier report to replay its configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Fourier coefficient a(N).
    Tau {
        /// Print every a(n), n <= N.
        #[arg(long)]
        all: bool,
    },
    /// Compute a(1..=N), check it and write the coefficient cache.
    Coeffs,
    /// Fit A and Z0 from Riesz means and write the calibration sidecar.
    Calibrate {
        #[arg(long, default_value_t = 3)]
        rho: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        x_min: Option<f64>,
        #[arg(long)]
        x_max: Option<f64>,
        /// Do not write the sidecar.
        #[arg(long)]
        dry_run: bool,
    },
    /// Truncated s_{k;l} and B_k.
    Constants {
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Truncation point [default: N].
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Riesz means, error terms and the truncated expansion on a grid.
    Delta {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        count: usize,
        #[arg(long, default_value_t = 100.0)]
        y: f64,
    },
    /// Integral of the k-th power over [T1, T2].
    Moment {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: f64,
        /// Truncation of R1/R2; implies --of r2 unless --of is given.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, value_enum)]
        of: Option<Series>,
        /// Number of geometric sub-ranges, one row each.
        #[arg(long, default_value_t = 1)]
        grid: usize,
        /// Output format for this report.
        #[arg(long, value_enum)]
        report: Option<Format>,
        /// Truncation of B_k [default: N].
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Count near-solutions of fourth-root relations.
    OracleCount {
        /// Dyadic sizes N_j, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "rs")]
        ns: Vec<u64>,
        /// Sign bits i_1..i_{k-1}, comma separated.
        #[arg(long)]
        signs: Option<String>,
        #[arg(long)]
        delta: f64,
        /// Count |m1^c + m2^c - m3^c - m4^c| <= delta*M^c instead.
        #[arg(long, requires_all = ["m", "c"])]
        rs: bool,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Canned experiment grids.
    Experiment {
        #[arg(long, value_enum)]
        name: Experiment,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long)]
        trunc: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let file = match &g.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config {
                path: p.clone(),
                line: 0,
                msg: e.to_string(),
            })?;
            Some(Settings::parse(&text, p)?)
        }
        None => None,
    };
    let flags = Settings {
        n: g.n,
        cache: g.cache,
        kappa: g.kappa,
        a: g.a,
        z0: g.z0,
        threads: g.threads,
        budget: g.budget,
        format: g.format,
    };
    let cfg = RunConfig::resolve(flags, file)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?;
    }
    let mut format = cfg.format;
    let ctx = Ctx { cfg };
    let text = match cli.command {
        Command::Tau { all } => commands::tau(&ctx, all)?,
        Command::Coeffs => commands::coeffs(&ctx)?.render(format),
        Command::Calibrate {
            rho,
            samples,
            x_min,
            x_max,
            dry_run,
        } => commands::calibrate_cmd(
            &ctx,
            &CalibrateArgs {
                rho,
                samples,
                x_min,
                x_max,
                dry_run,
            },
        )?
        .render(format),
        Command::Constants { k, trunc } => commands::constants(&ctx, &k, trunc)?.render(format),
        Command::Delta { from, to, count, y } => {
            commands::delta(&ctx, from, to, count, y)?.render(format)
        }
        Command::Moment {
            k,
            t1,
            t2,
            y,
            of,
            grid,
            report,
            trunc,
        } => {
            format = report.unwrap_or(format);
            commands::moment(
                &ctx,
                &MomentArgs {
                    k,
                    t1,
                    t2,
                    y,
                    of,
                    grid,
                    trunc,
                },
            )?
            .render(format)
        }
        Command::OracleCount {
            ns,
            signs,
            delta,
            rs,
            m,
            c,
        } => {
            let q = if rs {
                OracleQuery::Rs {
                    m: m.unwrap(),
                    c: c.unwrap(),
                    delta,
                }
            } else {
                let signs: Signs = signs
                    .ok_or_else(|| CliError::Usage("--signs is required without --rs".into()))?
                    .parse()?;
                OracleQuery::Near { ns, signs, delta }
            };
            commands::oracle_count(&ctx, &q)?.render(format)
        }
        Command::Experiment {
            name,
            t,
            k,
            y,
            trunc,
        } => commands::experiment(
            &ctx,
            &ExperimentArgs {
                name,
                t,
                k,
                y,
                trunc,
            },
        )?
        .render(format),
    };
    match &g.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
