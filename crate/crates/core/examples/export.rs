//! Drives the command line in-process and writes a few artifacts to a
//! directory (default `target/octoforms-export`).

use std::fs::{self, File};
use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "target/octoforms-export".into()));
    fs::create_dir_all(&dir)?;
    let jobs: [(&str, &[&str]); 5] = [
        ("phi.csv", &["form", "--which", "spin9", "--format", "csv"]),
        ("phi.json", &["form", "--which", "spin9", "--json"]),
        ("fields_256.json", &["fields", "--m", "256", "--verify", "--json"]),
        ("census.json", &["clifford-structure", "--model", "eiii", "--census", "--closure", "--tau2", "--json"]),
        ("berger_20000.csv", &["berger", "--samples", "20000", "--format", "csv"]),
    ];
    for (file, args) in jobs {
        let mut out = File::create(dir.join(file))?;
        let code = octoforms::cli::run(std::iter::once("octoforms").chain(args.iter().copied()), &mut out);
        println!("{:<18} exit {code}", file);
    }
    Ok(())
}
