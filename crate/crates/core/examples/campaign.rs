//! Drive a verification campaign from code instead of the `rsbirch` binary
//! and print the report as JSON.
//!
//!     cargo run --release --example campaign -- <birch|identities|hecke|measures> <p> <n>

use rsbirch::campaign::{exit_code, run, CampaignConfig, Command};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let command = match args.first().map_or("identities", String::as_str) {
        "birch" => Command::Birch,
        "hecke" => Command::Hecke,
        "measures" => Command::Measures,
        _ => Command::Identities,
    };
    let p = args.get(1).map_or(3, |a| a.parse().expect("prime"));
    let n = args.get(2).map_or(2, |a| a.parse().expect("size"));
    let result = run(&CampaignConfig::new(command, p, n));
    match &result {
        Ok(report) => {
            for c in &report.checks {
                eprintln!("{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name);
            }
            println!("{}", report.stable_json());
        }
        Err(e) => eprintln!("error: {e}"),
    }
    std::process::exit(exit_code(&result));
}
