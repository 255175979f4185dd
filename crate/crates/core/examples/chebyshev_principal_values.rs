//! Chebyshev polynomials from the recurrence and from their principal value
//! integral representations.
//!
//! ```bash
//! cargo run --release --example chebyshev_principal_values
//! ```

use ck_lattice::chebyshev::{cheb_t, cheb_u, pv_cheb_t, pv_cheb_u, PvQuadrature};

fn main() -> ck_lattice::Result<()> {
    println!(" k  lambda        T_k      PV err     U_{{k-1}}     PV err");
    let spec = PvQuadrature::new(1 << 14, 0.2)?;
    for k in [1, 2, 5, 8] {
        for l in [0.1, 0.5, 0.9] {
            let t = cheb_t(k, l);
            let u = cheb_u(k as i64 - 1, l)?;
            let pt = pv_cheb_t(k, l, &spec)?;
            let pu = pv_cheb_u(k, l, &spec)?;
            println!("{k:>2} {l:>7.2} {t:>10.6} {:>10.2e} {u:>10.6} {:>10.2e}", (pt - t).abs(), (pu - u).abs());
        }
    }

    println!("\nrefinement at k = 8, lambda = 0.3:");
    for e in 8..=14 {
        let spec = PvQuadrature::new(1 << e, 0.2)?;
        let err = (pv_cheb_t(8, 0.3, &spec)? - cheb_t(8, 0.3)).abs();
        println!("  M = 2^{e:<2} error {err:.3e}");
    }
    Ok(())
}
