//! Run a bundled fixture manifest through the task runner, as the CLI does.
//!
//! `cargo run --example manifest_run -- crates/core/fixtures/prolonged-n3.manifest`

use engel::manifest::parse_manifest;
use engel::runner::{digest, run_tasks, select_tasks};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/standard-engel-r4.manifest").into());
    let text = std::fs::read_to_string(&path)?;
    let manifest = parse_manifest(&text)?;
    let tasks = select_tasks(&manifest, None)?;
    let report = run_tasks(&manifest, &tasks, digest(text.as_bytes()));
    print!("{}", report.to_text());
    Ok(())
}
