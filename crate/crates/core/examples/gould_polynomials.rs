//! Gould polynomials, the basic sequence of the central difference
//! `2 sinh(tau d/dt)`, in exact rational and floating point arithmetic.
//!
//! ```bash
//! cargo run --example gould_polynomials
//! ```

use ck_lattice::umbral::{delta_apply, egf_partial_sums, gould_sequence, Stencil};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let tau = BigRational::new(BigInt::from(1), BigInt::from(2));
    let seq = gould_sequence::<BigRational>(6, tau.clone());
    println!("G_k(t) for tau = 1/2:");
    for (k, g) in seq.iter().enumerate() {
        println!("  G_{k}(t) = {g}");
    }
    let ok = (1..seq.len()).all(|k| {
        let k_big = BigRational::from_integer(BigInt::from(k));
        delta_apply(&seq[k], tau.clone()) == seq[k - 1].scale(k_big)
    });
    println!("exact lowering relation holds: {ok}");

    let stencil = Stencil::two_sinh(0.5);
    println!("stencil coefficients b_k: {:?}", stencil.delta_coefficients(4));

    println!("\nresummed series against cosh/sinh((t/tau) asinh(z/2)):");
    let tau = 0.25;
    for (t, z) in [(0.5, 0.3), (1.0, -0.8), (2.0, 1.0)] {
        let (even, odd) = egf_partial_sums(t, tau, z, 40);
        let arg = t / tau * (z / 2.0).asinh();
        println!(
            "  t = {t}, z = {z:>4}: even {even:.12} ({:.1e}), odd {odd:.12} ({:.1e})",
            (even - arg.cosh()).abs(),
            (odd - arg.sinh()).abs()
        );
    }
}
