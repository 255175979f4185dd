//! The two-parameter Mittag-Leffler function, its Laplace transform identity
//! and the resolvent it represents.
//!
//! ```bash
//! cargo run --release --example mittag_leffler
//! ```

use ck_lattice::mittag_leffler::{laplace_identity_check, ml, ml_resolvent, resolvent_direct, MlParams};
use ck_lattice::spectral::mode_at;
use ck_lattice::Signature;

fn main() -> ck_lattice::Result<()> {
    let exp = MlParams::new(1.0, 1.0)?;
    let hh = MlParams::new(0.5, 0.5)?;
    println!("     z     E_11(z)      exp(z)   E_1/2,1/2(z)");
    for z in [-2.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        println!("{z:>6.2} {:>11.8} {:>11.8} {:>14.10}", ml(&exp, z)?, f64::exp(z), ml(&hh, z)?);
    }

    println!("\nLaplace identity, alpha = beta = 1/2, P = 40:");
    for (lambda, s) in [(1.0, 0.5), (1.5, -0.5), (2.0, 0.5)] {
        let c = laplace_identity_check(0.5, 0.5, s, lambda, 40.0, 2048)?;
        println!("  lambda {lambda}, s {s:>4}: integral {:.12}, closed form {:.12}, gap {:.1e}", c.lhs, c.rhs, c.gap);
    }

    let tau = 0.4;
    let mode = mode_at(Signature::new(1)?, 1.0, tau, &[1.2]);
    let lambda = mode.lambda_real()?;
    println!("\nresolvent at xi = 1.2, tau = {tau} (lambda = {lambda:.6}):");
    for s in [-0.2, 0.0, 0.2] {
        let omega = f64::acos(s) / tau;
        let direct = resolvent_direct(omega, &mode, tau)?;
        let via_ml = ml_resolvent(omega, &mode, tau, 40.0, 2048)?;
        println!("  cos(w tau) = {s:>4}: {direct:.6}\n    gap {:.2e}", direct.distance_inf(&via_ml));
    }
    Ok(())
}
