//! Drive the batch runner from a JSON document, as the `gauss-ht` binary does.
//!
//! Usage: cargo run --example run_config -- [config.json] [out-dir]

use std::path::PathBuf;

use gauss_ht::cli::{Overrides, run_document};

fn main() -> gauss_ht::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/asymptotic_cosine.json")));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("gauss-ht-example"));
    let text = std::fs::read_to_string(&config)?;
    let outcome = run_document(
        &text,
        &Overrides {
            out: Some(out),
            ..Overrides::default()
        },
    )?;
    for file in &outcome.files {
        println!("== {}", file.display());
        print!("{}", std::fs::read_to_string(file)?);
    }
    println!("exit code {}", outcome.exit_code);
    Ok(())
}
