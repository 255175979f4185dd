//! The kernel as a space-time principal value integral over frequencies,
//! converging to the dual-sum kernel as the frequency grid is refined.
//!
//! ```bash
//! cargo run --release --example spacetime_kernel
//! ```

use ck_lattice::solvers::{kernel, spacetime_kernel};
use ck_lattice::spectral::Propagator;
use ck_lattice::LatticeGrid;

fn main() -> ck_lattice::Result<()> {
    let grid = LatticeGrid::new(1, 16, 1.0)?;
    let tau = 0.2;
    for steps in [1, 4] {
        let exact = kernel(&grid, tau, steps, Propagator::Chebyshev)?;
        println!("t = {steps} tau, x = 0: dual sum {:.6}", exact.value(0));
        for e in [8, 10, 12, 14] {
            let v = spacetime_kernel(&grid, tau, &[0], steps, 1 << e)?;
            println!("  M = 2^{e:<2} gap {:.2e}", v.distance_inf(exact.value(0)));
        }
    }
    Ok(())
}
