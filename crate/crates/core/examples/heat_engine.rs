//! A static qubit in front of a closed gate, fed alternately by polarized
//! and unpolarized flying qubits, pumps up to ln 2 of entropy per cycle.

use std::f64::consts::LN_2;

use flyqubit::engine::{reflection_channel, run_cycle, EngineConfig};
use flyqubit::qmat::DensityMatrix;

pub fn run_example() -> flyqubit::Result<()> {
    let config = EngineConfig::new(0.5);
    let r = reflection_channel(&config.params, config.mirror_phase)?;
    println!("round-trip operator unitarity error: {:e}", r.unitarity_error());

    let trace = run_cycle(&DensityMatrix::maximally_mixed(2), &config)?;
    for step in trace.steps.iter().take(4) {
        println!(
            "{:>3} {:<11} z={:+.6} S={:.6}",
            step.iteration,
            step.phase.to_string(),
            step.bloch.as_array()[2],
            step.entropy
        );
    }
    println!(
        "magnetize {} steps, demagnetize {} steps, entropy moved {:.4} ln2",
        trace.magnetize.iterations,
        trace.demagnetize.iterations,
        trace.entropy_transferred() / LN_2
    );

    println!("\nmirror phase sweep at Ω = 0.5:");
    for k in 0..6 {
        let phase = k as f64 * 0.5;
        let cfg = EngineConfig { mirror_phase: phase, ..config };
        let t = run_cycle(&DensityMatrix::maximally_mixed(2), &cfg)?;
        println!(
            "  {phase:.1} rad: {:>3} + {:>3} interactions, {:.4} ln2",
            t.magnetize.iterations,
            t.demagnetize.iterations,
            t.entropy_transferred() / LN_2
        );
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
