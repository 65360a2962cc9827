//! Full two-qubit tomography from unpolarized transmission alone, using
//! single-qubit gates and sqrtSWAP before each measurement.

use flyqubit::qmat::{decompose, fidelity, random, trace_distance};
use flyqubit::scatter::ScatterParams;
use flyqubit::tomo::{build_design_matrix, measure_plan, plan_standard, reconstruct, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> flyqubit::Result<()> {
    let plan = plan_standard(Mode::TwoQubitGates, ScatterParams::new(1.0))?;
    println!("plan ({} settings):", plan.len());
    let design = build_design_matrix(&plan)?;
    for (s, row) in plan.settings.iter().zip(&design.rows) {
        let nonzero = row.iter().filter(|x| x.abs() > 1e-12).count();
        let name = if s.seq.is_empty() { "identity".to_string() } else { s.seq.to_string() };
        println!("  {name:<28} touches {nonzero} coefficients");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let truth = random::random_mixed(4, &mut rng);
    let a = decompose(&truth)?;
    for shots in [0, 100_000] {
        let rec = reconstruct(&plan, &measure_plan(&plan, &truth, shots, 9)?)?;
        let c = rec.coeffs.as_ref().expect("two-qubit mode");
        println!(
            "\nshots {shots}: trace distance {:.2e}, fidelity {:.8}, condition {:.2}, PSD repair {:.2e}",
            trace_distance(&rec.state, &truth)?,
            fidelity(&rec.state, &truth)?,
            rec.diagnostics.condition_number,
            rec.diagnostics.psd_projection_distance
        );
        println!("  a12 true {:+.5}  reconstructed {:+.5}", a.a[1][2], c.a[1][2]);
        println!("  a30 true {:+.5}  reconstructed {:+.5}", a.a[3][0], c.a[3][0]);
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
