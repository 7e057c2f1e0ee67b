//! Drives the report layer the way the CLI does: loads a TOML
//! configuration and prints the required-rate sweep as CSV.

use lctc::config::RunConfig;
use lctc::report::{cmd_criteria, cmd_sweep};

fn main() -> lctc::Result<()> {
    let cfg = RunConfig::from_toml_str(
        r#"
preset = "table2"
[sweep]
start = 0.0
stop = 0.25
steps = 6
t_env = ["10 ms", "100 ms"]
alpha = [0.05]
"#,
    )?;
    let r = cmd_sweep(&cfg)?;
    print!("{}", r.to_csv());
    println!("crossings: {}", r.json["crossings"]);
    let c = cmd_criteria(&cfg)?;
    println!("criteria pass: {}", c.json["all_pass"]);
    Ok(())
}
