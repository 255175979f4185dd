//! Discrete Fourier transform on the periodic lattice: round trip, Parseval
//! and the multipliers that diagonalize the Laplacian and the Dirac operator.
//!
//! ```bash
//! cargo run --example fourier_transform
//! ```

use ck_lattice::lattice::{dirac, laplacian};
use ck_lattice::spectral::{cfl_max_tau, forward_dft, inverse_dft, multipliers};
use ck_lattice::{CliffordField, Complex64, LatticeGrid, Multivector};

fn main() -> ck_lattice::Result<()> {
    let grid = LatticeGrid::new(1, 16, 1.0)?;
    let sig = grid.signature();
    let f = CliffordField::scalar_fn(grid, |x| {
        let c = grid.centred(x[0]) as f64;
        Complex64::new((-c * c / 8.0).exp(), 0.1 * c)
    });

    let spec = forward_dft(&f);
    println!("round trip error   {:.3e}", inverse_dft(&spec).distance(&f)?);
    println!("site energy        {:.15}", f.inner(&f)?.re);
    println!("dual energy        {:.15}", spec.energy());

    let mult = multipliers(&grid, 0.2)?;
    let neg_d2: Vec<Multivector> = mult.modes().iter().map(|m| Multivector::scalar(sig, -m.d2)).collect();
    let z: Vec<Multivector> = mult.modes().iter().map(|m| m.z.clone()).collect();
    let gap = |a: &[Multivector], b: &[Multivector]| a.iter().zip(b).map(|(x, y)| x.distance_inf(y)).fold(0.0, f64::max);
    println!(
        "Laplacian multiplier error {:.3e}",
        gap(forward_dft(&laplacian(&f)).values(), spec.apply(&neg_d2)?.values())
    );
    println!(
        "Dirac multiplier error     {:.3e}",
        gap(forward_dft(&dirac(&f)).values(), spec.apply(&z)?.values())
    );

    println!("\n  k        xi        d^2     lambda");
    for (m, mode) in mult.modes().iter().enumerate() {
        println!(
            "{:>3} {:>9.5} {:>10.6} {:>10.6}",
            grid.frequency_label(m),
            mode.xi[0],
            mode.d2,
            mode.lambda.re
        );
    }
    println!("\nlargest stable tau: {:.12}", cfl_max_tau(&grid));
    Ok(())
}
