//! Prints a synthetic paired dataset as CSV.
//!
//! Usage: synth <reconstruction|noisy|uniform> [seed]

use phq9_core::store::export_paired;
use phq9_core::synthetic;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let data = match args.first().map(String::as_str) {
        Some("reconstruction") => synthetic::reconstruction(seed),
        Some("noisy") => synthetic::noisy(108, 1.88, seed),
        Some("uniform") => synthetic::uniform(108, seed),
        _ => {
            eprintln!("usage: synth <reconstruction|noisy|uniform> [seed]");
            std::process::exit(2);
        }
    };
    print!("{}", export_paired(&data));
}
