//! The fundamental solution on the lattice and the convolution formula.
//!
//! ```bash
//! cargo run --example convolution_kernel
//! ```

use ck_lattice::solvers::{convolve, kernel, spectral_solve, InitialDatum};
use ck_lattice::spectral::Propagator;
use ck_lattice::LatticeGrid;

fn main() -> ck_lattice::Result<()> {
    let grid = LatticeGrid::new(1, 8, 1.0)?;
    let tau = 0.2;
    for steps in [0, 1, 3] {
        let k = kernel(&grid, tau, steps, Propagator::Extension)?;
        println!("K(x, {steps} tau), origin value {:.6}", k.value(0));
    }

    let k = kernel(&grid, tau, 3, Propagator::Extension)?;
    let phi0 = InitialDatum::Gaussian { sigma: 1.0 }.realize(grid)?;
    let by_convolution = convolve(&k, &phi0)?;
    let by_multiplier = spectral_solve(&phi0, tau, 3)?;
    println!("convolution vs multiplier: {:.2e}", by_convolution.distance(&by_multiplier)?);
    Ok(())
}
