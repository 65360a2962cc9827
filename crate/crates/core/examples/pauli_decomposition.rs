//! Pauli coefficients, partial traces and entropies of two-qubit states.

use flyqubit::qmat::{
    assemble, bloch, decompose, nats_to_bits, partial_trace, von_neumann_entropy, DensityMatrix,
    Keep,
};

pub fn run_example() -> flyqubit::Result<()> {
    for (name, rho) in [
        ("singlet", DensityMatrix::singlet()),
        ("|00>", DensityMatrix::ground(4)),
        ("werner(0.5)", DensityMatrix::werner(0.5)?),
    ] {
        let a = decompose(&rho)?;
        let q1 = partial_trace(&rho, Keep::First)?;
        println!(
            "{name:>12}: a11={:+.3} a22={:+.3} a33={:+.3}  <s1.s2>={:+.3}  qubit 1 bloch={:?}  S(q1)={:.3} bits",
            a.a[1][1],
            a.a[2][2],
            a.a[3][3],
            a.sigma_dot_sigma(),
            bloch(&q1)?.as_array(),
            nats_to_bits(von_neumann_entropy(&q1)),
        );
        let back = assemble(&a)?;
        assert!(back.mat().max_abs_diff(rho.mat()) < 1e-14);
    }
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
