use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rsbirch::campaign::{exit_code, run, CampaignConfig, CharSelection, Command};
use rsbirch::Error;

#[derive(Parser)]
#[command(name = "rsbirch", version, about = "Exact verification campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Brute-force local Birch sums against their closed form.
    Birch {
        #[command(flatten)]
        common: Common,
        /// Also check the corollary form and its substitution chain.
        #[arg(long)]
        corollary: bool,
    },
    /// Matrix identities and representative-set propositions.
    Identities {
        #[command(flatten)]
        common: Common,
        /// Inject a false claim to exercise the failure path.
        #[arg(long)]
        corrupt: bool,
    },
    /// Parabolic Hecke algebra relations.
    Hecke {
        #[command(flatten)]
        common: Common,
    },
    /// p-adic distributions, inversion and interpolation constants.
    Measures {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long)]
        corrupt: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(short, long)]
    p: u64,
    #[arg(short, long, default_value_t = 1)]
    n: usize,
    /// Conductor exponent.
    #[arg(short, long, default_value_t = 1)]
    m: u32,
    #[arg(short, long)]
    l: Option<u32>,
    #[arg(long, default_value_t = 2)]
    radius: i64,
    /// `all` or a comma-separated list of indices.
    #[arg(long, default_value = "all")]
    characters: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Omit timing from the report.
    #[arg(long)]
    no_timing: bool,
}

impl Common {
    fn config(&self, command: Command) -> Result<CampaignConfig, Error> {
        let mut c = CampaignConfig::new(command, self.p, self.n);
        c.m = self.m;
        c.l = self.l;
        c.radius = self.radius;
        c.characters = self.characters.parse::<CharSelection>()?;
        c.seed = self.seed;
        c.threads = self.threads;
        c.samples = self.samples;
        c.output = self.output.clone();
        Ok(c)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, config) = match &cli.command {
        Cmd::Birch { common, corollary } => (common, common.config(Command::Birch).map(|mut c| {
            c.corollary = *corollary;
            c
        })),
        Cmd::Identities { common, corrupt } => (common, common.config(Command::Identities).map(|mut c| {
            c.corrupt = *corrupt;
            c
        })),
        Cmd::Hecke { common } => (common, common.config(Command::Hecke)),
        Cmd::Measures { common, depth, corrupt } => (common, common.config(Command::Measures).map(|mut c| {
            c.depth = *depth;
            c.corrupt = *corrupt;
            c
        })),
    };
    let result = config.and_then(|c| run(&c));
    match &result {
        Ok(report) => {
            let text = if common.no_timing { report.stable_json() } else { report.to_json() };
            match &common.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            for c in report.failures() {
                eprintln!("FAIL {}", c.name);
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&result) as u8)
}
