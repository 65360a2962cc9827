//! Finite-shot reconstruction error falls as shots^(-1/2).

use flyqubit::qmat::{random, trace_distance};
use flyqubit::scatter::ScatterParams;
use flyqubit::tomo::{measure_plan, plan_standard, reconstruct, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

pub fn run_example() -> flyqubit::Result<()> {
    let plan = plan_standard(Mode::TwoQubitGates, ScatterParams::new(1.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let truth = random::random_mixed(4, &mut rng);
    let mut points = Vec::new();
    for shots in [10_000u64, 100_000, 1_000_000] {
        let errs = (0..15)
            .map(|seed| {
                let rec = reconstruct(&plan, &measure_plan(&plan, &truth, shots, seed)?)?;
                trace_distance(&rec.state, &truth)
            })
            .collect::<flyqubit::Result<Vec<_>>>()?;
        let m = median(errs);
        println!("shots {shots:>9}: median trace distance {m:.3e}");
        points.push(((shots as f64).ln(), m.ln()));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    println!("log-log slope: {slope:.3}");
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
