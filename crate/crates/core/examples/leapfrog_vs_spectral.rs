//! The three-level leapfrog scheme against the exact Fourier multiplier
//! solution, slice by slice.
//!
//! ```bash
//! cargo run --release --example leapfrog_vs_spectral
//! ```

use ck_lattice::lattice::harmonic_residual;
use ck_lattice::solvers::{leapfrog_solve, spectral_trajectory, InitialDatum};
use ck_lattice::spectral::{cfl_max_tau, Propagator};
use ck_lattice::LatticeGrid;

fn main() -> ck_lattice::Result<()> {
    let grid = LatticeGrid::new(1, 16, 1.0)?;
    let tau = 0.2;
    println!("tau = {tau}, largest stable tau = {:.6}", cfl_max_tau(&grid));
    let phi0 = InitialDatum::Gaussian { sigma: 2.0 }.realize(grid)?;
    let steps = 20;

    let lf = leapfrog_solve(&phi0, tau, steps)?;
    let sp = spectral_trajectory(&phi0, tau, steps, Propagator::Extension)?;
    println!("step    sup norm       gap   relative");
    for (k, gap) in lf.gaps(&sp)?.into_iter().enumerate() {
        let size = sp.slices[k].sup_norm();
        println!("{k:>4} {size:>11.4e} {gap:>9.2e} {:>10.2e}", gap / size);
    }
    let worst = sp
        .slices
        .windows(3)
        .map(|w| harmonic_residual(&w[0], &w[1], &w[2], tau))
        .collect::<ck_lattice::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("largest space-time Laplace residual of the spectral slices: {worst:.2e}");
    Ok(())
}
