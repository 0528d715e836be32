// Drives the command line front end from code and writes every data file
// into a scratch directory, as `topochain <command> --out DIR` would.
//
// Run with `cargo run --release --example figure_data -- [DIR]`.

use std::path::{Path, PathBuf};

use topochain::cli::{execute, Cli};
use topochain::Result;

use clap::Parser;

/// Runs each command into `dir` and returns the file names written.
pub fn run(dir: &Path) -> Result<Vec<String>> {
    let out = dir.to_string_lossy().into_owned();
    let commands = [
        vec!["spectrum", "--delta", "0"],
        vec!["chern", "--grid", "64"],
        vec!["steady"],
        vec!["wind", "--L", "4"],
        vec!["pump"],
        vec!["green-verify"],
    ];
    let mut written = Vec::new();
    for args in commands {
        let mut full = vec!["topochain"];
        full.extend(args);
        full.extend(["--out", &out]);
        let cli = Cli::try_parse_from(&full).expect("example arguments are valid");
        let outcome = execute(&cli.command)?;
        outcome.write(dir)?;
        written.extend(outcome.files.into_iter().map(|(name, _)| name));
    }
    Ok(written)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("figure-data"));
    for name in run(&dir)? {
        println!("{}", dir.join(name).display());
    }
    Ok(())
}
