//! Local spin of each register qubit, measured through an ancilla while
//! the other register qubit is bypassed.

use flyqubit::gates::Target;
use flyqubit::qmat::{bloch, partial_trace, random, Keep};
use flyqubit::scatter::ScatterParams;
use flyqubit::tomo::{measure_plan, plan_marginal, reconstruct};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> flyqubit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pair = random::random_mixed(4, &mut rng);
    for (target, keep) in [(Target::Qubit1, Keep::First), (Target::Qubit2, Keep::Second)] {
        let plan = plan_marginal(ScatterParams::new(1.0), target)?;
        let rec = reconstruct(&plan, &measure_plan(&plan, &pair, 0, 0)?)?;
        println!(
            "qubit {target}: reconstructed {:.6?}, true {:.6?}",
            rec.bloch.map(|b| b.as_array()).unwrap_or_default(),
            bloch(&partial_trace(&pair, keep)?)?.as_array()
        );
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
