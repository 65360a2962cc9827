//! Gates on the static qubits before a transmission measurement change
//! which Pauli coefficients the measurement sees.

use flyqubit::gates::{apply, conjugate_observable, pauli_transfer, GateSequence};
use flyqubit::qmat::{decompose, exchange_operator, random};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> flyqubit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rho = random::random_mixed(4, &mut rng);
    let a = decompose(&rho)?;
    println!("before:        a11={:+.4} a22={:+.4} a33={:+.4}", a.a[1][1], a.a[2][2], a.a[3][3]);
    for seq in ["X@2", "Y@2", "Ry90@2", "Rz90@2,Y@2"] {
        let s: GateSequence = seq.parse()?;
        let b = decompose(&apply(&s, &rho)?)?;
        println!("{seq:>12}:  a11={:+.4} a22={:+.4} a33={:+.4}", b.a[1][1], b.a[2][2], b.a[3][3]);
    }

    // sqrtSWAP commutes with the exchange operator
    let s: GateSequence = "sqrtSWAP@12".parse()?;
    let exch = exchange_operator(2, 0, 1);
    let moved = conjugate_observable(&s, &exch)?;
    println!("\nsqrtSWAP: |U†(σ₁·σ₂)U − σ₁·σ₂| = {:e}", moved.max_abs_diff(&exch));

    let ptm = pauli_transfer(&"Ry90@2".parse::<GateSequence>()?.unitary());
    // column z on qubit 2 (index 3) lands on x (index 1)
    println!("Ry90@2 Pauli transfer: Z2 -> {:+.1}·X2", ptm[1][3]);
    Ok(())
}

fn main() -> flyqubit::Result<()> {
    run_example()
}
