//! A flying spin crossing frozen classical spins.
//!
//! One frozen spin transmits with probability 1/(1+Ω²) whatever its
//! direction; two of them transmit better the more antiparallel they are.

use std::f64::consts::PI;

use flyqubit::qmat::CMatrix;
use flyqubit::scatter::{
    frozen_block, frozen_pair_block, frozen_pair_pt, frozen_rotation_angle, FrozenSpin,
    ScatterParams,
};

pub fn run_example() -> flyqubit::Result<()> {
    let params = ScatterParams::new(0.8);
    for (theta, phi) in [(0.0, 0.0), (1.0, 2.0), (PI, 0.5)] {
        let t = frozen_block(&params, &FrozenSpin::from_angles(theta, phi)).t;
        let pt = (&t.adjoint() * &t).trace().re / 2.0;
        println!("single spin at theta={theta:.2}: P_T = {pt:.6}");
        let iso = CMatrix::identity(2).scale_re(1.0 / (1.0 + 0.64));
        assert!((&t.adjoint() * &t).max_abs_diff(&iso) < 1e-12);
    }
    println!("spin rotation angle per pass: {:.4} rad", frozen_rotation_angle(0.8));

    println!("\ntheta    P_T(closed)  P_T(cascade)");
    let params = ScatterParams::new(1.0);
    for k in 0..=4 {
        let theta = PI * k as f64 / 4.0;
        let block = frozen_pair_block(&params, theta, 0.0)?;
        let pt = (&block.t.adjoint() * &block.t).trace().re / 2.0;
        let closed = frozen_pair_pt(&params, theta)?;
        println!("{theta:.3}   {closed:.6}     {pt:.6}");
        assert!((pt - closed).abs() < 1e-10);
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
