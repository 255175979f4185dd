//! The lattice Laplacian, the Dirac operator and the one-step evolution
//! operator, with their factorizations checked on a random field.
//!
//! ```bash
//! cargo run --example lattice_operators
//! ```

use ck_lattice::lattice::{dirac, evolution_operator, laplacian};
use ck_lattice::{CliffordField, Complex64, LatticeGrid, Multivector};

fn main() -> ck_lattice::Result<()> {
    let grid = LatticeGrid::new(1, 8, 1.0)?;
    let delta = CliffordField::delta(grid);
    println!("Laplacian of a delta:");
    for (i, v) in laplacian(&delta).values().iter().enumerate() {
        println!("  x = {:>2}: {v}", grid.centred(i));
    }
    println!("Dirac operator of a delta:");
    for (i, v) in dirac(&delta).values().iter().enumerate() {
        println!("  x = {:>2}: {v}", grid.centred(i));
    }

    let grid = LatticeGrid::new(2, 8, 0.5)?;
    let sig = grid.signature();
    // a smooth, mixed-grade test field
    let f = CliffordField::from_fn(grid, |x| {
        let s = (x[0] as f64 * 0.7).sin() + (x[1] as f64 * 1.3).cos();
        let mut m = Multivector::scalar(sig, s);
        m.accumulate(0b0110, Complex64::new(0.0, s * s));
        m
    });
    let lap = laplacian(&f);
    let dd = dirac(&dirac(&f));
    println!("sup |D^2 f + Delta f| = {:.3e}", dd.try_add(&lap)?.sup_norm());

    let tau = 0.2;
    let a2 = evolution_operator(&evolution_operator(&f, tau)?, tau)?;
    let expect = lap.scale(-4.0 * tau * tau).try_add(&laplacian(&lap).scale(tau.powi(4)))?;
    println!("sup |A^2 f - (-4 tau^2 Delta + tau^4 Delta^2) f| = {:.3e}", a2.distance(&expect)?);
    Ok(())
}
