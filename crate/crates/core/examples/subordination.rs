//! The propagator through its Mittag-Leffler subordination integral, with
//! the per-mode diagnostics.
//!
//! ```bash
//! cargo run --release --example subordination
//! ```

use ck_lattice::solvers::{subordination_solve, InitialDatum, ModeStatus, SubordinationParams};
use ck_lattice::solvers::spectral_solve_with;
use ck_lattice::spectral::{cfl_max_tau, Propagator};
use ck_lattice::LatticeGrid;

fn main() -> ck_lattice::Result<()> {
    let grid = LatticeGrid::new(1, 16, 1.0)?;
    let phi0 = InitialDatum::Gaussian { sigma: 1.5 }.realize(grid)?;
    for tau in [0.2, cfl_max_tau(&grid)] {
        let exact = spectral_solve_with(&phi0, tau, 4, Propagator::Chebyshev)?;
        println!("tau = {tau:.6}");
        for e in [10, 12, 14] {
            let params = SubordinationParams {
                p_max: 40.0,
                p_nodes: 256,
                omega_nodes: 1 << e,
            };
            let (psi, report) = subordination_solve(&phi0, tau, 4, &params)?;
            println!(
                "  M = 2^{e}: gap to the Chebyshev multiplier {:.2e}, non-convergent modes {:?}",
                psi.distance(&exact)?,
                report.non_convergent()
            );
            if e == 10 {
                for m in &report.modes {
                    let status = match m.status {
                        ModeStatus::Subordinated { s_max } => format!("subordinated, band |s| <= {s_max:.4}"),
                        ModeStatus::DirectOnly => "direct".to_string(),
                        ModeStatus::NonConvergent => "non-convergent".to_string(),
                    };
                    println!("    k = {:>3}, lambda = {:.6}: {status}", m.labels[0], m.lambda);
                }
            }
        }
    }
    Ok(())
}
