//! Two-qubit tomography without any two-qubit gate: the local terms come
//! from resolving the transmitted qubit's spin.

use flyqubit::qmat::{random, trace_distance};
use flyqubit::scatter::{pt_polarized_input, ScatterParams};
use flyqubit::tomo::{ideal_value, measure_plan, plan_standard, reconstruct, Injector, MeasurementSetting, Mode};
use flyqubit::gates::GateSequence;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> flyqubit::Result<()> {
    let params = ScatterParams::new(0.9);
    let plan = plan_standard(Mode::TwoQubitPolarized, params)?;
    assert!(!plan.has_two_qubit_gate());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let truth = random::random_mixed(4, &mut rng);
    let rec = reconstruct(&plan, &measure_plan(&plan, &truth, 0, 0)?)?;
    println!(
        "{} settings, no two-qubit gates, trace distance {:.2e}",
        plan.len(),
        trace_distance(&rec.state, &truth)?
    );

    // Injecting polarized flying qubits carries the same information.
    let z = [0.0, 0.0, 1.0];
    for sign in [1.0, -1.0] {
        let s = MeasurementSetting::transmission(GateSequence::new(), params)
            .with_injector(Injector::Polarized { axis: z, sign });
        println!(
            "injection along {sign:+}z: P_T = {:.6} (closed form {:.6})",
            ideal_value(&s, &truth)?,
            pt_polarized_input(&params, &truth, z, sign)?
        );
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
