//! Generalized Mittag-Leffler function and the Laplace-type representation
//! of the resolvent `1 / (cos(w tau) - lambda)`.
//!
//! ```text
//! E_{a,b}(z) = sum_k z^k / Gamma(b + a k)
//! int_0^inf e^{-p l^2} p^{b-1} E_{a,b}(s p^a) dp = l^{-2b} / (1 - s l^{-2a}),   l^2 > |s|^{1/a}
//! ```
//!
//! With `a = b = 1/2` the right side is `1 / (l - s)`, so
//! `1 / (s - l) = -int_0^inf e^{-p l^2} E_{1/2,1/2}(s sqrt p) / sqrt p dp`
//! whenever `|s| < l`. The weight is the decaying exponential; the integral
//! diverges with the opposite sign.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::spectral::ModeData;

/// Parameters of `E_{alpha, beta}` and its series stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub alpha: f64,
    pub beta: f64,
    /// Stop once `|term| < eps (1 + |partial|)` for three consecutive terms.
    pub eps: f64,
    pub max_terms: usize,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidMlParams { alpha, beta });
        }
        Ok(Self {
            alpha,
            beta,
            eps: 1e-17,
            max_terms: 600,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// `E_{alpha, beta}` with a precomputed `ln Gamma(beta + alpha k)` table.
#[derive(Debug, Clone)]
pub struct MittagLeffler {
    params: MlParams,
    ln_gamma: Vec<f64>,
}

impl MittagLeffler {
    pub fn new(params: MlParams) -> Self {
        let ln_gamma = (0..params.max_terms)
            .map(|k| ln_gamma(params.beta + params.alpha * k as f64))
            .collect();
        Self { params, ln_gamma }
    }

    pub fn params(&self) -> &MlParams {
        &self.params
    }

    /// `1 / Gamma(beta + alpha k)`.
    pub fn inv_gamma(&self, k: usize) -> f64 {
        (-self.ln_gamma[k]).exp()
    }

    /// `z^k / Gamma(beta + alpha k)`, evaluated in logs so large `|z|` and
    /// `k` do not overflow the intermediate power.
    pub fn term(&self, k: usize, z: f64) -> f64 {
        if k == 0 {
            return self.inv_gamma(0);
        }
        if z == 0.0 {
            return 0.0;
        }
        let mag = (k as f64 * z.abs().ln() - self.ln_gamma[k]).exp();
        if z < 0.0 && k % 2 == 1 {
            -mag
        } else {
            mag
        }
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        let mut sum = 0.0;
        let mut small = 0;
        for k in 0..self.params.max_terms {
            let term = self.term(k, z);
            sum += term;
            if term.abs() < self.params.eps * (1.0 + sum.abs()) {
                small += 1;
                if small == 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
        Err(Error::SeriesNotConverged {
            z,
            terms: self.params.max_terms,
        })
    }
}

/// `E_{alpha, beta}(z)`.
pub fn ml(params: &MlParams, z: f64) -> Result<f64> {
    MittagLeffler::new(*params).eval(z)
}

/// Composite Simpson rule on `[a, b]` with `panels` (even) subintervals.
pub(crate) fn simpson(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// Result of a numerical Laplace identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    /// Quadrature value with `2M` panels.
    pub lhs: f64,
    /// `lambda^{-2 beta} / (1 - s lambda^{-2 alpha})`.
    pub rhs: f64,
    pub gap: f64,
    /// `|Q_{2M} - Q_M|`.
    pub refinement: f64,
}

/// Largest accepted `|Q_{2M} - Q_M| / (1 + |Q_{2M}|)`.
const LAPLACE_REFINEMENT_TOL: f64 = 1e-4;

/// `int_0^P e^{-p lambda^2} p^{beta-1} E_{alpha,beta}(s p^alpha) dp` against its
/// closed form.
///
/// The substitution `p = u^{1/beta}` turns the measure `p^{beta-1} dp` into
/// `du / beta`, removing the endpoint singularity for `beta < 1`.
pub fn laplace_identity_check(
    alpha: f64,
    beta: f64,
    s: f64,
    lambda: f64,
    p_max: f64,
    nodes: usize,
) -> Result<LaplaceCheck> {
    let params = MlParams::new(alpha, beta)?;
    let lambda2 = lambda * lambda;
    let bound = s.abs().powf(1.0 / alpha);
    if !(lambda2 > bound) {
        return Err(Error::OutsideConvergenceRegion { lambda2, bound });
    }
    let e = MittagLeffler::new(params);
    let u_max = p_max.powf(beta);
    let integrand = |u: f64| -> Result<f64> {
        let p = u.powf(1.0 / beta);
        Ok((-p * lambda2).exp() * e.eval(s * p.powf(alpha))? / beta)
    };
    let coarse = simpson(0.0, u_max, nodes, integrand)?;
    let fine = simpson(0.0, u_max, 2 * nodes, integrand)?;
    let refinement = (fine - coarse).abs();
    if refinement > LAPLACE_REFINEMENT_TOL * (1.0 + fine.abs()) {
        return Err(Error::QuadratureNotConverged { coarse, fine });
    }
    let rhs = lambda.powf(-2.0 * beta) / (1.0 - s * lambda.powf(-2.0 * alpha));
    Ok(LaplaceCheck {
        lhs: fine,
        rhs,
        gap: (fine - rhs).abs(),
        refinement,
    })
}

/// `E_{1/2,1/2}` with default stopping rule.
pub fn half_half() -> MittagLeffler {
    MittagLeffler::new(MlParams::new(0.5, 0.5).expect("positive parameters"))
}

/// `-i sin(w tau) + tau e_0 z - (tau^2/2) e_{2n+1} e_0 z^2`.
pub fn resolvent_numerator(omega: f64, mode: &ModeData, tau: f64) -> Multivector {
    let mut num = mode.b_term(tau);
    num.accumulate(0, Complex64::new(0.0, -(omega * tau).sin()));
    num
}

/// Numerator divided by `cos(w tau) - lambda`.
pub fn resolvent_direct(omega: f64, mode: &ModeData, tau: f64) -> Result<Multivector> {
    let lambda = mode.lambda_real()?;
    let den = (omega * tau).cos() - lambda;
    if den.abs() < 1e-14 {
        return Err(Error::PoleHit(den));
    }
    Ok(resolvent_numerator(omega, mode, tau).scale(1.0 / den))
}

/// `int_0^P e^{-p lambda^2} E_{1/2,1/2}(s sqrt p) / sqrt p dp` with `p = u^2`
/// and Simpson in `u`. Equals `1 / (lambda - s)` in the limit when `|s| < lambda`.
pub fn ml_laplace_weight(s: f64, lambda: f64, p_max: f64, nodes: usize) -> Result<f64> {
    if !(s.abs() < lambda) {
        return Err(Error::OutsideConvergenceRegion {
            lambda2: lambda * lambda,
            bound: s * s,
        });
    }
    let e = half_half();
    let lambda2 = lambda * lambda;
    simpson(0.0, p_max.sqrt(), nodes, |u| {
        Ok(2.0 * (-u * u * lambda2).exp() * e.eval(s * u)?)
    })
}

/// The resolvent through its Mittag-Leffler representation; requires
/// `|cos(w tau)| < lambda`.
pub fn ml_resolvent(omega: f64, mode: &ModeData, tau: f64, p_max: f64, nodes: usize) -> Result<Multivector> {
    let lambda = mode.lambda_real()?;
    let weight = ml_laplace_weight((omega * tau).cos(), lambda, p_max, nodes)?;
    Ok(resolvent_numerator(omega, mode, tau).scale(-weight))
}

/// `H(p) = -(tau / 2 pi) int_{-pi/tau}^{pi/tau} N(w) E_{1/2,1/2}(cos(w tau) sqrt p) / sqrt p e^{-i w t} dw`
/// by the midpoint rule with `omega_nodes` nodes.
pub fn aux_h(mode: &ModeData, t: f64, p: f64, tau: f64, omega_nodes: usize) -> Result<Multivector> {
    let e = half_half();
    let sqrt_p = p.sqrt();
    let dw = 2.0 * PI / (tau * omega_nodes as f64);
    let mut acc = Multivector::zero(mode.z.signature());
    for j in 0..omega_nodes {
        let omega = -PI / tau + (j as f64 + 0.5) * dw;
        let weight = e.eval((omega * tau).cos() * sqrt_p)? / sqrt_p;
        let phase = Complex64::from_polar(weight, -omega * t);
        acc += &resolvent_numerator(omega, mode, tau).scale(phase);
    }
    Ok(acc.scale(-tau * dw / (2.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_validated() {
        assert!(MlParams::new(0.0, 1.0).is_err());
        assert!(MlParams::new(1.0, -0.5).is_err());
        assert!(MlParams::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn exponential_and_origin() {
        let p = MlParams::new(1.0, 1.0).unwrap();
        assert!((ml(&p, 1.0).unwrap() - std::f64::consts::E).abs() < 1e-12);
        let q = MlParams::new(0.5, 0.5).unwrap();
        assert!((ml(&q, 0.0).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn non_convergence_reported() {
        let p = MlParams::new(1.0, 1.0).unwrap().with_max_terms(5);
        assert!(matches!(ml(&p, 3.0), Err(Error::SeriesNotConverged { .. })));
    }

    #[test]
    fn laplace_examples() {
        let c = laplace_identity_check(0.5, 0.5, 0.5, 2.0, 40.0, 2000).unwrap();
        assert!((c.rhs - 2.0 / 3.0).abs() < 1e-15);
        assert!(c.gap <= 1e-6, "{c:?}");

        let c = laplace_identity_check(1.0, 1.0, 1.0, 2f64.sqrt(), 40.0, 4000).unwrap();
        assert!((c.rhs - 1.0).abs() < 1e-12);
        assert!(c.gap <= 1e-8, "{c:?}");

        let c = laplace_identity_check(0.5, 0.75, 0.0, 1.3, 40.0, 2000).unwrap();
        assert!((c.rhs - 1.3f64.powf(-1.5)).abs() < 1e-15);
        assert!(c.gap <= 1e-7, "{c:?}");

        assert!(matches!(
            laplace_identity_check(0.5, 0.5, 0.9, 0.8, 40.0, 100),
            Err(Error::OutsideConvergenceRegion { .. })
        ));
    }

    #[test]
    fn scalar_weight_examples() {
        let w = ml_laplace_weight(0.3, 0.9, 120.0, 4000).unwrap();
        assert!((w - 1.0 / 0.6).abs() <= 1e-6, "{w}");
        let w0 = ml_laplace_weight(0.0, 0.9, 80.0, 4000).unwrap();
        assert!((w0 - 1.0 / 0.9).abs() <= 1e-6, "{w0}");
        assert!(ml_laplace_weight(0.95, 0.9, 40.0, 100).is_err());
    }
}
