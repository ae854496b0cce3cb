//! Regenerates the bundled scenario corpus and grasp fixture.
//!
//! Usage: `cargo run -p riskcomp-core --example write_corpus [root]`
//! (default root: the workspace root).

use std::path::PathBuf;

use riskcomp_core::fixtures::{scenario_corpus, symmetric_grasp_fixture};
use riskcomp_core::scenario::{fixture_to_json, scenario_to_json};

fn main() -> std::io::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."));
    for (stem, scenario) in scenario_corpus() {
        let path = root.join("scenarios").join(format!("{stem}.json"));
        std::fs::create_dir_all(path.parent().expect("has parent"))?;
        std::fs::write(&path, scenario_to_json(&scenario) + "\n")?;
        println!("{}", path.display());
    }
    let path = root.join("fixtures").join("symmetric_sphere.json");
    std::fs::create_dir_all(path.parent().expect("has parent"))?;
    std::fs::write(&path, fixture_to_json(&symmetric_grasp_fixture()) + "\n")?;
    println!("{}", path.display());
    Ok(())
}
