//! A TOML experiment end to end: run, write the trace, read it back.

use threshold_dynamics::cli::ExperimentConfig;
use threshold_dynamics::engine::{read_trace, run, write_trace, TraceLine};

const CONFIG: &str = r#"
seed = 9
max_rounds = 10000

[graph]
source = "gnp"
n = 80
p = 0.06

[potential]
name = "min_degree"
alpha = 3.0
beta = 1000.0

[scheduler]
name = "round_robin"
batch = 200
"#;

fn main() -> threshold_dynamics::Result<()> {
    let config = ExperimentConfig::from_toml(CONFIG, "inline")?;
    let out = run(config.prepare()?.run)?;
    let mut buf = Vec::new();
    write_trace(&out.trace, &mut buf)?;
    let lines = read_trace(buf.as_slice(), "memory")?;
    for line in &lines {
        match line {
            TraceLine::Header(h) => println!(
                "header: {} nodes, {} / {}",
                h.node_count, h.potential, h.scheduler
            ),
            TraceLine::Round(r) if r.additions + r.removals > 0 => {
                println!(
                    "round {:>3}: -{} +{} classes {}",
                    r.round, r.removals, r.additions, r.degree_classes
                )
            }
            TraceLine::Round(_) => {}
            TraceLine::Verdict {
                verdict, rounds, ..
            } => println!("{verdict:?} after {rounds} rounds"),
        }
    }
    Ok(())
}
