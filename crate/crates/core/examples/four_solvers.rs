//! Leapfrog, spectral, truncated Gould series and kernel convolution on the
//! same problem, with pairwise sup gaps.
//!
//! ```bash
//! cargo run --release --example four_solvers
//! ```

use ck_lattice::solvers::{
    convolution_trajectory, leapfrog_solve, series_trajectory, spectral_trajectory, InitialDatum, Trajectory,
};
use ck_lattice::spectral::Propagator;
use ck_lattice::LatticeGrid;

fn main() -> ck_lattice::Result<()> {
    for (n, points, steps) in [(1, 16, 12), (2, 8, 10)] {
        let grid = LatticeGrid::new(n, points, 1.0)?;
        let tau = 0.2;
        let phi0 = InitialDatum::Gaussian { sigma: 1.5 }.realize(grid)?;
        let runs: Vec<(&str, Trajectory)> = vec![
            ("leapfrog", leapfrog_solve(&phi0, tau, steps)?),
            ("spectral", spectral_trajectory(&phi0, tau, steps, Propagator::Extension)?),
            ("series:20", series_trajectory(&phi0, tau, steps, 20)?),
            ("convolution", convolution_trajectory(&phi0, tau, steps)?),
        ];
        println!("n = {n}, N = {points}, {steps} steps of tau = {tau}");
        for i in 0..runs.len() {
            for j in i + 1..runs.len() {
                let gap = runs[i].1.gaps(&runs[j].1)?.into_iter().fold(0.0, f64::max);
                println!("  {:>11} vs {:<11} {gap:.2e}", runs[i].0, runs[j].0);
            }
        }
    }
    Ok(())
}
