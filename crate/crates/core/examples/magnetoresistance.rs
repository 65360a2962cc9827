//! Two static qubits: transmission depends on their entanglement through
//! <σ₁·σ₂> alone. The singlet is perfectly transparent at any coupling,
//! while triplets become opaque as Ω grows.

use flyqubit::qmat::{decompose, DensityMatrix};
use flyqubit::scatter::{
    pt_from_exchange, pt_unpolarized_closed_form, transmission_probability,
    transmitted_polarization, two_qubit_block, unpolarized_input, ScatterParams,
};

pub fn run_example() -> flyqubit::Result<()> {
    let states = [
        ("singlet", DensityMatrix::singlet()),
        ("triplet |00>", DensityMatrix::ground(4)),
        ("werner(0.5)", DensityMatrix::werner(0.5)?),
        ("mixed", DensityMatrix::maximally_mixed(4)),
    ];
    println!("{:>14} {:>8} {:>8} {:>8} {:>8}", "state", "0.5", "1", "3", "10");
    for (name, rho) in &states {
        let row: Vec<String> = [0.5, 1.0, 3.0, 10.0]
            .iter()
            .map(|&w| {
                let p = ScatterParams::new(w);
                let oracle = transmission_probability(&two_qubit_block(&p)?, &unpolarized_input(rho))?;
                let closed = pt_unpolarized_closed_form(&p, rho)?;
                assert!((oracle - closed).abs() < 1e-10);
                let s12 = decompose(rho)?.sigma_dot_sigma();
                assert!((pt_from_exchange(w, s12) - closed).abs() < 1e-12);
                Ok(format!("{closed:8.5}"))
            })
            .collect::<flyqubit::Result<_>>()?;
        println!("{name:>14} {}", row.join(" "));
    }

    let pol = transmitted_polarization(&ScatterParams::new(0.5), &DensityMatrix::ground(4))?;
    println!("\ntransmitted flying-qubit polarization for |00>, Ω=0.5: {pol:?}");
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
