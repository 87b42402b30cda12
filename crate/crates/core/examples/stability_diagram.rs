//! Scan a family from a TOML config and write scan.csv, thresholds.csv and
//! the stability diagram into a directory (default ./stability_out).

use std::path::PathBuf;

use imbilliard::cli::{run, RunConfig, RunOptions, Verb};

const CONFIG: &str = r#"
[curve]
kind = "superellipse"
k = 2

[family]
family = "two_superellipse_axis"
k = 2

[scan]
n = 400
"#;

fn main() -> imbilliard::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "stability_out".into());
    std::fs::create_dir_all(&out).map_err(|e| imbilliard::ImbError::Io(e.to_string()))?;
    let cfg = RunConfig::parse(CONFIG)?;
    let opts = RunOptions { out: Some(out), ..Default::default() };
    let outcome = run(Verb::Scan, &cfg, &opts)?;
    for line in &outcome.lines {
        println!("{line}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
