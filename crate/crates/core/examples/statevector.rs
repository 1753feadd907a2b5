// Pauli-rotation circuits on the statevector simulator.
//
// `cargo run --example statevector`

use qsvm::{Axis, PauliString, StateVector};

pub fn run() -> qsvm::Result<()> {
    // |+>|+> from the Hadamard layer.
    let plus = StateVector::new_zero_state(2)?.apply_hadamard_all();
    println!("H⊗H|00> = {:?}", plus.amplitudes());

    // exp(iθ Z0Z1) only phases the amplitudes.
    let zz = PauliString::new(vec![(0, Axis::Z), (1, Axis::Z)])?;
    let phased = plus.clone().apply_pauli_exponential(&zz, 0.3)?;
    for (k, a) in phased.amplitudes().iter().enumerate() {
        println!("  |{k:02b}>  {:+.6} {:+.6}i", a.re, a.im);
    }

    // exp(iπ/2 X0) = iX0 flips qubit 0.
    let x0 = PauliString::new(vec![(0, Axis::X)])?;
    let flipped = StateVector::new_zero_state(2)?.apply_pauli_exponential(&x0, std::f64::consts::FRAC_PI_2)?;
    println!("exp(iπ/2 X0)|00> = {:?}", flipped.amplitudes());

    let yz = PauliString::new(vec![(0, Axis::Y), (2, Axis::Z)])?;
    let mut s = StateVector::new_zero_state(3)?.apply_hadamard_all();
    for k in 0..10 {
        s = s.apply_pauli_exponential(&yz, 0.1 * k as f64)?;
    }
    println!("{yz} applied ten times, norm² = {:.15}", s.norm_sqr());
    let overlap = s.inner_product(&StateVector::new_zero_state(3)?.apply_hadamard_all())?;
    println!("|<+++|ψ>|² = {:.6}", overlap.norm_sqr());
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    run()
}
