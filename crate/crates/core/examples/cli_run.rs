//! Driving a configured run from code, as the `ck-lattice` binary does,
//! and reading back what it wrote.
//!
//! ```bash
//! cargo run --example cli_run
//! ```

use ck_lattice::cli::{parse_config, run, Args};
use clap::Parser;

fn main() -> ck_lattice::Result<()> {
    let out = std::env::temp_dir().join("ck-lattice-example");
    let argv = [
        "ck-lattice",
        "--dim",
        "1",
        "--points",
        "16",
        "--tau",
        "0.2",
        "--steps",
        "6",
        "--initial",
        "gaussian:1.5",
        "--compare",
        "leapfrog,series:20",
        "--tol",
        "1e-9",
        "--emit-kernel",
        "--manifest",
        "--out",
        out.to_str().expect("utf-8 temp path"),
    ];
    let args = Args::try_parse_from(argv).map_err(|e| ck_lattice::Error::Parse(e.to_string()))?;
    let cfg = parse_config(&args)?;
    let outcome = run(&cfg)?;
    print!("{}", outcome.summary);
    println!("pass: {}", outcome.pass);
    for f in &outcome.manifest.files {
        println!("{}  {}", f.sha256, out.join(&f.path).display());
    }
    println!("\n{}", std::fs::read_to_string(out.join("compare.csv"))?);
    Ok(())
}
