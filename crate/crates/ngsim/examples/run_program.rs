//! Runs a JSON program file and prints the result document.
//!
//! cargo run --example run_program -- crates/ngsim/programs/cat_heterodyne.json

use ngsim::program::{parse_program, run};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/programs/cat_heterodyne.json").into());
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| {
        eprintln!("{path}: {e}");
        std::process::exit(2)
    });
    match parse_program(&text).and_then(|p| run(&p)) {
        Ok(doc) => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(e.exit_code())
        }
    }
}
