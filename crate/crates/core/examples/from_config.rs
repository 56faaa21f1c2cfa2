//! Runs an experiment from TOML text and prints the CSV report.

use rootlab::cli::{run, ExperimentConfig, Task};

const CONFIG: &str = r#"
[ensemble]
family = "kac"
n = 200

[law]
kind = "rademacher"

[law_b]
kind = "gaussian"

[statistic]
window = [-1.0, 1.0]

[run]
trials = 500
seed = 17
"#;

fn main() -> rootlab::Result<()> {
    let cfg = ExperimentConfig::parse(CONFIG)?;
    print!("{}", cfg.emit()?);
    println!();
    print!("{}", String::from_utf8_lossy(&run(Task::Compare, &cfg)?));
    Ok(())
}
