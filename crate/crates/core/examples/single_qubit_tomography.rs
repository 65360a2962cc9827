//! Reading out a lone qubit through an ancilla polarized along x, y and z.

use flyqubit::qmat::{bloch, trace_distance, BlochVector};
use flyqubit::scatter::ScatterParams;
use flyqubit::tomo::{measure_plan, plan_standard, reconstruct, Mode};

pub fn run_example() -> flyqubit::Result<()> {
    let truth = BlochVector::new(0.3, -0.5, 0.6).to_density()?;
    let plan = plan_standard(Mode::SingleQubitAncilla, ScatterParams::new(0.8))?;

    for shots in [0, 10_000, 1_000_000] {
        let records = measure_plan(&plan, &truth, shots, 42)?;
        let rec = reconstruct(&plan, &records)?;
        println!(
            "shots {shots:>9}: bloch {:?}  trace distance {:.2e}",
            rec.bloch.map(|b| b.as_array()).unwrap_or_default(),
            trace_distance(&rec.state, &truth)?
        );
    }
    println!("true bloch vector:  {:?}", bloch(&truth)?.as_array());
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
