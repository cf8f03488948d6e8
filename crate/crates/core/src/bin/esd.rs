use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use esd_core::cli::{
    cmd_evolve, cmd_figure, cmd_selftest, cmd_sweep, parse_config, threads_from_env, CliError, SelftestOptions, EXIT_OK,
};

#[derive(Parser)]
#[command(name = "esd", version, about = "Entanglement sudden death of two trapped ions under intrinsic decoherence")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Plain-text `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<String>,

    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Subcommand)]
enum Command {
    /// Single trajectory time series.
    Evolve,
    /// Cartesian parameter sweep (comma-separated values per axis).
    Sweep,
    /// Figure preset: fig1, fig2a, fig2b or fig3.
    Figure { name: Option<String> },
    /// Cross-oracle consistency checks.
    Selftest {
        /// Override every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

#[derive(Args)]
struct ParamFlags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    zeta1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    zeta2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, global = true)]
    nmax: Option<String>,
    #[arg(long, global = true)]
    n0: Option<String>,
    #[arg(long, global = true)]
    tmax: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    preset: Option<String>,
}

impl ParamFlags {
    fn pairs(&self) -> Vec<(String, String)> {
        let fields = [
            ("beta1", &self.beta1),
            ("beta2", &self.beta2),
            ("zeta1", &self.zeta1),
            ("zeta2", &self.zeta2),
            ("phi", &self.phi),
            ("gamma", &self.gamma),
            ("theta", &self.theta),
            ("nmax", &self.nmax),
            ("n0", &self.n0),
            ("tmax", &self.tmax),
            ("samples", &self.samples),
            ("out", &self.out),
            ("preset", &self.preset),
        ];
        fields.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect()
    }
}

fn open_output(path: Option<&str>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let contents = match &cli.config {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| CliError::config("config", format!("cannot read {path}: {e}")))?
        }
        None => String::new(),
    };
    let flags = cli.params.pairs();
    match cli.command {
        Command::Evolve => {
            let config = parse_config(&contents, &flags)?;
            let mut out = open_output(config.out.as_deref())?;
            cmd_evolve(&config, &mut out)?;
            out.flush()?;
        }
        Command::Sweep => {
            let config = parse_config(&contents, &flags)?;
            let threads = threads_from_env()?;
            let mut out = open_output(config.out.as_deref())?;
            cmd_sweep(&config, threads, &mut out)?;
            out.flush()?;
        }
        Command::Figure { name } => {
            let config = parse_config(&contents, &flags)?;
            let name = name
                .or_else(|| config.grid.preset.map(|p| p.name().to_string()))
                .ok_or_else(|| CliError::config("preset", "no preset name given"))?;
            let threads = threads_from_env()?;
            let mut out = open_output(config.out.as_deref())?;
            cmd_figure(&name, &contents, &flags, threads, &mut out)?;
            out.flush()?;
        }
        Command::Selftest { tolerance } => {
            let report = cmd_selftest(&SelftestOptions { tolerance_override: tolerance, ..Default::default() });
            println!("{report}");
            if !report.passed() {
                return Err(CliError::SelftestFailed(report.failures()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK as u8),
        Err(e) => {
            eprintln!("esd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
