//! The two-impurity closed forms assume the impurities sit a whole number of
//! wavelengths apart. The full cascade shows what happens in between.

use std::f64::consts::PI;

use flyqubit::qmat::DensityMatrix;
use flyqubit::scatter::{transmission_probability, two_qubit_block, unpolarized_input, ScatterParams};

pub fn run_example() -> flyqubit::Result<()> {
    let singlet = unpolarized_input(&DensityMatrix::singlet());
    let triplet = unpolarized_input(&DensityMatrix::ground(4));
    println!("kd/pi   singlet   triplet   unitarity");
    for k in 0..=8 {
        let kd = PI * k as f64 / 4.0;
        let block = two_qubit_block(&ScatterParams::with_kd(1.0, kd))?;
        println!(
            "{:5.2}   {:.5}   {:.5}   {:.1e}",
            kd / PI,
            transmission_probability(&block, &singlet)?,
            transmission_probability(&block, &triplet)?,
            block.unitarity_error()
        );
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
