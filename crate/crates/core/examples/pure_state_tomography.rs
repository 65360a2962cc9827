//! Pure-state tomography: fit amplitudes and phases of
//! ψ = a1 e^{iθ1}|00⟩ + a2 e^{iθ2}|T0⟩ + a3|S⟩ + a4 e^{iθ4}|11⟩.

use flyqubit::qmat::fidelity;
use flyqubit::scatter::ScatterParams;
use flyqubit::tomo::{measure_plan, plan_standard, reconstruct_pure, Mode, PureStateParams};

pub fn run_example() -> flyqubit::Result<()> {
    let plan = plan_standard(Mode::PureState, ScatterParams::new(1.0))?;
    let cases = [
        PureStateParams::new([0.5, 0.4, 0.6, 0.48], 0.7, -2.1, 2.5)?,
        PureStateParams::new([1.0, 0.0, 0.0, 0.0], 0.0, 0.0, 0.0)?,
        PureStateParams::new([0.0, 0.0, 1.0, 0.0], 0.0, 0.0, 0.0)?,
    ];
    for truth in cases {
        let rho = truth.density()?;
        let fit = reconstruct_pure(&plan, &measure_plan(&plan, &rho, 0, 0)?)?;
        let p = fit.params;
        println!(
            "amplitudes {:.4?}  phases ({:+.4}, {:+.4}, {:+.4})  fidelity {:.10}  unconstrained {:?}",
            p.amplitudes(),
            p.th1,
            p.th2,
            p.th4,
            fidelity(&fit.state, &rho)?,
            fit.unconstrained
        );
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
