use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use overdet::error::{Error, Result};
use overdet::parse::{parse_document, parse_weight, InputDoc};
use overdet::pl_probe::DEFAULT_SAMPLE_SEED;
use overdet::report::{
    finalize, pl_probe_report, pw_check_report, render_json, resolve_report,
    variety_report, weights_report, ReportBundle, ReportOptions,
};

#[derive(Parser)]
#[command(
    name = "overdet",
    version,
    about = "Workbench for overdetermined constant-coefficient systems: \
             resolutions, characteristic varieties, weight functions, and \
             growth-bound probes",
    after_help = "Exit codes: 0 ok, 1 input error, 2 probe trend growing, \
                  3 probe vacuous, 4 resource cap."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct CommonArgs {
    /// Input JSON file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for sampled angles and directions.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SEED)]
    seed: u64,
    /// Accept unknown JSON fields instead of rejecting them.
    #[arg(long)]
    lenient: bool,
    /// Emit the flat CSV table instead of the JSON report.
    #[arg(long)]
    csv: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Free resolution, integrability conditions, and annihilator of a system.
    Resolve {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Factor the characteristic curve and expand its branches at infinity.
    Variety {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of Puiseux expansion steps per branch.
        #[arg(long = "puiseux-order", default_value_t = 6)]
        puiseux_order: u32,
    },
    /// Axiom verdicts and subadditivity constants for the document's weights.
    Weights {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Support-width decay experiment for a gevrey weight.
    PwCheck {
        #[command(flatten)]
        common: CommonArgs,
        /// Width exponent: factor k gets half-width proportional to k^-s.
        #[arg(long, default_value_t = 2)]
        s: u32,
        /// Total support half-width budget.
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        /// Number of convolution factors.
        #[arg(long, default_value_t = 2000)]
        factors: usize,
    },
    /// Finite-radius probe of the growth-transfer bounds on a curve.
    PlProbe {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest sampling radius.
        #[arg(long, default_value_t = 1e4)]
        rmax: f64,
        /// Hypothesis index alpha.
        #[arg(long, default_value_t = 2)]
        alpha: u32,
        /// Number of log-spaced sampling circles.
        #[arg(long, default_value_t = 20)]
        radii: usize,
        /// Number of directions per circle.
        #[arg(long, default_value_t = 12)]
        angles: usize,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Resolve { .. } => "resolve",
            Cmd::Variety { .. } => "variety",
            Cmd::Weights { .. } => "weights",
            Cmd::PwCheck { .. } => "pw-check",
            Cmd::PlProbe { .. } => "pl-probe",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Cmd::Resolve { common }
            | Cmd::Variety { common, .. }
            | Cmd::Weights { common }
            | Cmd::PwCheck { common, .. }
            | Cmd::PlProbe { common, .. } => common,
        }
    }
}

fn read_input(common: &CommonArgs) -> Result<String> {
    match &common.input {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn load_document(common: &CommonArgs) -> Result<(String, InputDoc)> {
    let text = read_input(common)?;
    let doc = parse_document(&text, common.lenient)?;
    Ok((text, doc))
}

fn run(cmd: &Cmd) -> Result<(ReportBundle, String)> {
    let common = cmd.common();
    let mut opts = ReportOptions {
        seed: common.seed,
        ..ReportOptions::default()
    };
    match cmd {
        Cmd::Resolve { .. } => {
            let (text, doc) = load_document(common)?;
            Ok((resolve_report(&doc)?, text))
        }
        Cmd::Variety { puiseux_order, .. } => {
            opts.puiseux_order = *puiseux_order;
            let (text, doc) = load_document(common)?;
            Ok((variety_report(&doc, &opts)?, text))
        }
        Cmd::Weights { .. } => {
            let (text, doc) = load_document(common)?;
            Ok((weights_report(&doc)?, text))
        }
        Cmd::PwCheck {
            s,
            epsilon,
            factors,
            ..
        } => {
            opts.s = *s;
            opts.epsilon = *epsilon;
            opts.factors = *factors;
            let (text, weight) = match &common.input {
                Some(_) => {
                    let text = read_input(common)?;
                    let weight = parse_weight(&text)?;
                    (text, Some(weight))
                }
                None => (String::new(), None),
            };
            Ok((pw_check_report(weight.as_ref(), &opts)?, text))
        }
        Cmd::PlProbe {
            rmax,
            alpha,
            radii,
            angles,
            ..
        } => {
            opts.rmax = *rmax;
            opts.alpha = *alpha;
            opts.radii = *radii;
            opts.angles = *angles;
            let (text, doc) = load_document(common)?;
            Ok((pl_probe_report(&doc, &opts)?, text))
        }
    }
}

fn write_output(common: &CommonArgs, rendered: &str) -> Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, rendered).map_err(Error::from),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let name = cli.command.name();
    let code = match run(&cli.command) {
        Ok((bundle, input_text)) => {
            let rendered = if cli.command.common().csv {
                bundle.csv.clone()
            } else {
                render_json(&finalize(name, &input_text, &bundle))
            };
            match write_output(cli.command.common(), &rendered) {
                Ok(()) => {
                    eprintln!(
                        "{name}: {} ({} ms)",
                        bundle.verdict_summary,
                        started.elapsed().as_millis()
                    );
                    bundle.exit_code
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
