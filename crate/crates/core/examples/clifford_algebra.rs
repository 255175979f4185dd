//! Generators, the Witt pair and geometric products in Cl(n+1, n+1).
//!
//! ```bash
//! cargo run --example clifford_algebra
//! ```

use ck_lattice::{Complex64, Multivector, Signature};

fn main() -> ck_lattice::Result<()> {
    let sig = Signature::new(2)?;
    println!("n = {}: {} generators, top index {}", sig.dim(), sig.generator_count(), sig.top());

    for j in 0..sig.generator_count() {
        let e = Multivector::generator(sig, j)?;
        println!("e_{j}^2 = {}", &e * &e);
    }

    let e1 = Multivector::generator(sig, 1)?;
    let e3 = Multivector::generator(sig, 3)?;
    println!("e_1 e_3 = {}", &e1 * &e3);
    println!("e_3 e_1 = {}", &e3 * &e1);

    let plus = Multivector::witt_plus(sig);
    let minus = Multivector::witt_minus(sig);
    println!("e_+ = {plus}");
    println!("e_- = {minus}");
    println!("e_+^2 = {}", &plus * &plus);
    println!("e_+ e_- + e_- e_+ = {}", &(&plus * &minus) + &(&minus * &plus));

    // i e_1 squares to +1
    let ie1 = e1.scale(Complex64::i());
    println!("(i e_1)^2 = {}", &ie1 * &ie1);
    Ok(())
}
