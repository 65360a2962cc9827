//! A single static qubit: the 4×4 transmission operator and the
//! transmission of a z-polarized flying qubit.

use std::f64::consts::PI;

use flyqubit::qmat::{spin_projector, DensityMatrix};
use flyqubit::scatter::{
    qubit_block, qubit_single_pt_closed, qubit_t_single, qubit_t_single_closed,
    transmission_probability, ScatterParams,
};

pub fn run_example() -> flyqubit::Result<()> {
    let omega = 0.7;
    let params = ScatterParams::new(omega);
    let numeric = qubit_t_single(&params);
    let closed = qubit_t_single_closed(omega);
    println!("|t(inverse) - t(closed)|_max = {:e}", numeric.max_abs_diff(&closed));
    println!("triplet |00> amplitude: {:.6}", closed[(0, 0)]);
    println!("exchange |01> -> |10>:  {:.6}", closed[(1, 2)]);

    let up = DensityMatrix::ground(2);
    println!("\ntheta  P_T(matrix)  P_T(closed)");
    for k in 0..=4 {
        let theta = PI * k as f64 / 4.0;
        let stat = DensityMatrix::new(spin_projector([theta.sin(), 0.0, theta.cos()]))?;
        let pt = transmission_probability(&qubit_block(&params), &up.kron(&stat))?;
        let want = qubit_single_pt_closed(omega, theta);
        println!("{theta:.3}  {pt:.8}   {want:.8}");
        assert!((pt - want).abs() < 1e-10);
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
