//! Batch campaigns: validated configuration in, JSON report out.

mod birch;
mod hecke;
mod identities;
mod measures;

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::characters::{enumerate_chars, MultChar};
use crate::error::{Error, Result};

pub use birch::cmd_birch;
pub use hecke::cmd_hecke;
pub use identities::cmd_identities;
pub use measures::cmd_measures;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Birch,
    Identities,
    Hecke,
    Measures,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharSelection {
    All,
    Indices(Vec<usize>),
}

impl FromStr for CharSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Self::All);
        }
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Config(format!("bad character index {t:?}"))))
            .collect::<Result<_>>()
            .map(Self::Indices)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub command: Command,
    pub p: u64,
    pub n: usize,
    /// Conductor exponent.
    pub m: u32,
    /// Level of the representative sets; `None` picks the least admissible.
    pub l: Option<u32>,
    /// Window radius for the exponents `e`.
    pub radius: i64,
    pub characters: CharSelection,
    pub seed: u64,
    pub threads: usize,
    pub output: Option<PathBuf>,
    /// Deepest level for distributions.
    pub depth: u32,
    pub samples: usize,
    /// Also run the corollary form (birch).
    pub corollary: bool,
    /// Test mode: inject a known-false claim so the failure path is exercised.
    pub corrupt: bool,
}

impl CampaignConfig {
    pub fn new(command: Command, p: u64, n: usize) -> Self {
        Self {
            command,
            p,
            n,
            m: 1,
            l: None,
            radius: 2,
            characters: CharSelection::All,
            seed: 0,
            threads: 1,
            output: None,
            depth: 3,
            samples: 100,
            corollary: false,
            corrupt: false,
        }
    }

    pub fn level(&self) -> u32 {
        self.l.unwrap_or(2 * self.n as u32).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !is_prime(self.p) {
            return bad(format!("p = {} is not prime", self.p));
        }
        if self.threads == 0 {
            return bad("threads must be at least 1".into());
        }
        match self.command {
            Command::Birch => {
                if self.n > 3 {
                    return bad(format!("n = {} is beyond reach (n ≤ 3)", self.n));
                }
                if self.m == 0 {
                    return bad("conductor exponent m must be at least 1".into());
                }
                if let Some(l) = self.l {
                    if l < 2 * self.n as u32 {
                        return bad(format!("l = {l} < 2n = {}", 2 * self.n));
                    }
                }
                if self.radius < 0 {
                    return bad("radius must be non-negative".into());
                }
                if self.p.checked_pow(self.m * (self.level() + 2 * self.radius as u32 + 2)).is_none() {
                    return bad("p^(m l) overflows".into());
                }
                if let CharSelection::Indices(ix) = &self.characters {
                    let count = enumerate_chars(self.p, self.m).len();
                    if let Some(i) = ix.iter().find(|&&i| i >= count) {
                        return bad(format!("character index {i} out of range ({count} characters)"));
                    }
                }
            }
            Command::Identities => {
                if self.n > 6 {
                    return bad(format!("n = {} exceeds 6", self.n));
                }
                if self.m == 0 || self.m > 2 {
                    return bad("identities use m ∈ {1, 2}".into());
                }
            }
            Command::Hecke => {
                if self.n == 0 || self.n > 3 {
                    return bad(format!("hecke campaigns need 1 ≤ n ≤ 3, got {}", self.n));
                }
                if self.p > 7 {
                    return bad("hecke campaigns need p ≤ 7".into());
                }
            }
            Command::Measures => {
                if self.depth < 2 || self.depth > 6 {
                    return bad(format!("depth must lie in 2..=6, got {}", self.depth));
                }
                if self.p.checked_pow(self.depth).is_none_or(|q| q > 20_000) {
                    return bad("p^depth must stay below 20000".into());
                }
                if self.n == 0 || self.n > 4 || (self.n == 4 && self.p != 2) {
                    return bad("measures need 1 ≤ n ≤ 3 (n = 4 only at p = 2)".into());
                }
            }
        }
        Ok(())
    }

    /// Selected primitive characters of conductor `p^m`, with their indices.
    pub fn selected_characters(&self) -> Vec<(usize, MultChar)> {
        let all = enumerate_chars(self.p, self.m);
        match &self.characters {
            CharSelection::All => all.into_iter().enumerate().collect(),
            CharSelection::Indices(ix) => ix.iter().map(|&i| (i, all[i].clone())).collect(),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Artifact {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub total_ms: u128,
    pub checks_ms: Vec<(String, u128)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub artifact: Artifact,
    /// Names of the statements the campaign exercises.
    pub statements: Vec<&'static str>,
    pub config: CampaignConfig,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub timing: Timing,
}

impl Report {
    /// The report without its timing field; stable across reruns.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Outcome of a single check: pass flag, detail, optional witness.
pub type Outcome = (bool, Value, Option<Value>);

pub(crate) struct Recorder {
    start: Instant,
    checks: Vec<Check>,
    timing: Timing,
}

impl Recorder {
    pub fn new() -> Self {
        Self { start: Instant::now(), checks: Vec::new(), timing: Timing::default() }
    }

    /// Runs one check; a computation error is recorded as a failure.
    pub fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<Outcome>) {
        let name = name.into();
        let t = Instant::now();
        let check = match f() {
            Ok((passed, detail, witness)) => Check { name: name.clone(), passed, detail, witness },
            Err(e) => Check { name: name.clone(), passed: false, detail: json!({ "error": e.to_string() }), witness: None },
        };
        self.timing.checks_ms.push((name, t.elapsed().as_millis()));
        self.checks.push(check);
    }

    pub fn finish(mut self, config: &CampaignConfig, statements: Vec<&'static str>) -> Report {
        self.timing.total_ms = self.start.elapsed().as_millis();
        Report {
            artifact: Artifact { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") },
            statements,
            config: config.clone(),
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            timing: self.timing,
        }
    }
}

/// Validates the configuration and runs the campaign on a pool of
/// `config.threads` workers.
pub fn run(config: &CampaignConfig) -> Result<Report> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| match config.command {
        Command::Birch => cmd_birch(config),
        Command::Identities => cmd_identities(config),
        Command::Hecke => cmd_hecke(config),
        Command::Measures => cmd_measures(config),
    })
}

/// 0 when every check passed, 1 on a verification failure, 2 on a
/// configuration error.
pub fn exit_code(result: &Result<Report>) -> i32 {
    match result {
        Ok(r) if r.passed => 0,
        Ok(_) => 1,
        Err(Error::Config(_)) | Err(Error::Domain(_)) | Err(Error::Precondition(_)) => 2,
        Err(_) => 1,
    }
}
