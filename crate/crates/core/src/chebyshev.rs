//! Chebyshev polynomials of the first and second kind, and their principal
//! value integral representations
//!
//! ```text
//! T_k(l)     = -(tau/pi) PV int_0^{pi/tau} sin(w tau) sin(w k tau) / (cos(w tau) - l) dw
//! U_{k-1}(l) =  (tau/pi) PV int_0^{pi/tau} cos(w k tau) / (cos(w tau) - l) dw
//! ```
//!
//! The principal value is taken with midpoint panels laid out symmetrically
//! about the pole `w* = acos(l) / tau`, so no node lands on the pole and
//! mirrored nodes cancel the `1/(w - w*)` part of the integrand. A fixed
//! uniform grid does not do this: unless the pole happens to sit on a panel
//! edge, the leftover is O(1) and does not shrink with the node count.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `T_k(x)` by the three-term recurrence; valid for every real `x`.
pub fn cheb_t(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut curr) = (1.0, x);
            for _ in 1..k {
                let next = 2.0 * x * curr - prev;
                prev = curr;
                curr = next;
            }
            curr
        }
    }
}

/// `U_k(x)` by the three-term recurrence, with `U_{-1} = 0`.
pub fn cheb_u(k: i64, x: f64) -> Result<f64> {
    if k < -1 {
        return Err(Error::NegativeDegree(k));
    }
    Ok(match k {
        -1 => 0.0,
        0 => 1.0,
        _ => {
            let (mut prev, mut curr) = (1.0, 2.0 * x);
            for _ in 1..k {
                let next = 2.0 * x * curr - prev;
                prev = curr;
                curr = next;
            }
            curr
        }
    })
}

/// `T_k(x) = cos(k acos x)` for `|x| <= 1`.
pub fn cheb_t_trig(k: usize, x: f64) -> Result<f64> {
    if x.abs() > 1.0 {
        return Err(Error::PoleOutsideInterval(x));
    }
    Ok((k as f64 * x.acos()).cos())
}

/// `U_k(x) = sin((k+1) acos x) / sin(acos x)` for `|x| <= 1`.
pub fn cheb_u_trig(k: i64, x: f64) -> Result<f64> {
    if k < -1 {
        return Err(Error::NegativeDegree(k));
    }
    if x.abs() > 1.0 {
        return Err(Error::PoleOutsideInterval(x));
    }
    let theta = x.acos();
    let s = theta.sin();
    if s.abs() < 1e-300 {
        // limit at x = +-1: U_k(+-1) = (+-1)^k (k + 1)
        let sign = if x < 0.0 && k.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
        return Ok(sign * (k + 1) as f64);
    }
    Ok(((k + 1) as f64 * theta).sin() / s)
}

/// Node/weight pairs for a composite midpoint rule on `[a, b]` with a simple
/// pole at `pole`, using roughly `count` panels.
///
/// The panels within `min(pole - a, b - pole)` of the pole are mirrored about
/// it; the rest of the interval gets uniform panels of the nominal width.
pub fn pole_anchored_nodes(a: f64, b: f64, pole: f64, count: usize) -> Vec<(f64, f64)> {
    assert!(b > a && count > 0);
    let pole = pole.clamp(a, b);
    let nominal = (b - a) / count as f64;
    let radius = (pole - a).min(b - pole);
    let mut nodes = Vec::with_capacity(count + 2);
    if radius > 0.0 {
        let per_side = ((radius / nominal).round() as usize).max(1);
        let width = radius / per_side as f64;
        for i in 0..per_side {
            let offset = (i as f64 + 0.5) * width;
            nodes.push((pole - offset, width));
            nodes.push((pole + offset, width));
        }
    }
    let (lo, hi) = if pole - a > b - pole {
        (a, pole - radius)
    } else {
        (pole + radius, b)
    };
    let rest = hi - lo;
    if rest > 0.0 {
        let panels = ((rest / nominal).round() as usize).max(1);
        let width = rest / panels as f64;
        nodes.extend((0..panels).map(|i| (lo + (i as f64 + 0.5) * width, width)));
    }
    nodes
}

/// Full-period rule on `(-pi, pi]` for integrands with poles at `+-acos(l)`,
/// built by mirroring the half-period rule. `count` is the total node budget.
pub fn full_period_nodes(l: f64, count: usize) -> Vec<(f64, f64)> {
    let half = pole_anchored_nodes(0.0, PI, l.clamp(-1.0, 1.0).acos(), (count / 2).max(1));
    let mut nodes = Vec::with_capacity(2 * half.len());
    for &(x, w) in &half {
        nodes.push((-x, w));
        nodes.push((x, w));
    }
    nodes
}

/// Principal value quadrature settings for the half-period representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvQuadrature {
    nodes: usize,
    tau: f64,
    consistency: f64,
}

impl PvQuadrature {
    /// `nodes` must be even and at least 8; `tau` is the (arbitrary) time step
    /// used in the change of variables.
    pub fn new(nodes: usize, tau: f64) -> Result<Self> {
        if nodes < 8 || nodes % 2 != 0 {
            return Err(Error::BadNodeCount(nodes));
        }
        crate::lattice::check_tau(tau)?;
        Ok(Self {
            nodes,
            tau,
            consistency: 1e-3,
        })
    }

    /// Largest accepted gap between the estimates at `M` and `M/2` nodes.
    pub fn with_consistency(mut self, tol: f64) -> Self {
        self.consistency = tol;
        self
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `PV int_0^{pi/tau} f(w) / (cos(w tau) - l) dw` with `count` panels.
    fn half_period(&self, l: f64, count: usize, f: &impl Fn(f64) -> f64) -> f64 {
        let tau = self.tau;
        pole_anchored_nodes(0.0, PI / tau, l.acos() / tau, count)
            .into_iter()
            .map(|(w, dw)| dw * f(w) / ((w * tau).cos() - l))
            .sum()
    }

    /// Principal value of `int_0^{pi/tau} f(w) / (cos(w tau) - l) dw`,
    /// checked against the estimate with half the nodes.
    pub fn principal_value(&self, l: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        if !(l.abs() < 1.0) {
            return Err(Error::PoleOutsideInterval(l));
        }
        let fine = self.half_period(l, self.nodes, &f);
        let coarse = self.half_period(l, self.nodes / 2, &f);
        if (fine - coarse).abs() > self.consistency * (1.0 + fine.abs()) {
            return Err(Error::QuadratureNotConverged { coarse, fine });
        }
        Ok(fine)
    }
}

/// `T_k(l)` from its principal value representation, `k >= 1`.
pub fn pv_cheb_t(k: usize, l: f64, spec: &PvQuadrature) -> Result<f64> {
    if k == 0 {
        return Err(Error::NegativeDegree(0));
    }
    let tau = spec.tau();
    let t = k as f64 * tau;
    let integral = spec.principal_value(l, |w| (w * tau).sin() * (w * t).sin())?;
    Ok(-tau / PI * integral)
}

/// `U_{k-1}(l)` from its principal value representation, `k >= 1`.
pub fn pv_cheb_u(k: usize, l: f64, spec: &PvQuadrature) -> Result<f64> {
    if k == 0 {
        return Err(Error::NegativeDegree(0));
    }
    let tau = spec.tau();
    let t = k as f64 * tau;
    let integral = spec.principal_value(l, |w| (w * t).cos())?;
    Ok(tau / PI * integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_values() {
        assert_eq!(cheb_t(3, 0.5), -1.0);
        assert!((cheb_u(1, 0.3).unwrap() - 0.6).abs() < 1e-15);
        for k in 0..20 {
            assert_eq!(cheb_t(k, 1.0), 1.0);
        }
        assert_eq!(cheb_u(-1, 0.4).unwrap(), 0.0);
        assert!(cheb_u(-2, 0.4).is_err());
        // outside [-1, 1] the recurrence still works: T_2(2) = 7, U_2(2) = 15
        assert_eq!(cheb_t(2, 2.0), 7.0);
        assert_eq!(cheb_u(2, 2.0).unwrap(), 15.0);
    }

    #[test]
    fn trig_forms_match_recurrence() {
        let mut worst: f64 = 0.0;
        for k in 0..=32usize {
            for &x in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
                worst = worst.max((cheb_t(k, x) - cheb_t_trig(k, x).unwrap()).abs());
                let kk = k as i64 - 1;
                worst = worst.max((cheb_u(kk, x).unwrap() - cheb_u_trig(kk, x).unwrap()).abs());
            }
        }
        assert!(worst <= 1e-12, "worst {worst}");
        assert!(cheb_t_trig(2, 1.5).is_err());
        assert_eq!(cheb_u_trig(3, 1.0).unwrap(), 4.0);
        assert_eq!(cheb_u_trig(3, -1.0).unwrap(), -4.0);
    }

    #[test]
    fn pearson_pair_identity() {
        for k in 1..=16usize {
            for i in 0..=20 {
                let x = -1.0 + 0.1 * i as f64;
                let t = cheb_t(k, x);
                let u = cheb_u(k as i64 - 1, x).unwrap();
                assert!((t * t + (1.0 - x * x) * u * u - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn anchored_nodes_cover_interval() {
        for &pole in &[0.0, 0.3, 1.5, 2.9, PI] {
            let nodes = pole_anchored_nodes(0.0, PI, pole, 100);
            let total: f64 = nodes.iter().map(|n| n.1).sum();
            assert!((total - PI).abs() < 1e-12);
            assert!(nodes.iter().all(|&(x, _)| x != pole));
        }
        let full = full_period_nodes(0.4, 64);
        let total: f64 = full.iter().map(|n| n.1).sum();
        assert!((total - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn pv_examples() {
        let spec = PvQuadrature::new(1 << 14, 0.37).unwrap();
        assert!((pv_cheb_t(2, 0.3, &spec).unwrap() - (-0.82)).abs() < 1e-5);
        assert!((pv_cheb_u(1, 0.5, &spec).unwrap() - 1.0).abs() < 1e-5);
        // tan over [0, pi] pairs off about pi/2
        let odd = spec.principal_value(0.0, |w| (w * spec.tau()).sin()).unwrap();
        assert!((spec.tau() / PI * odd).abs() <= 1e-5);
    }

    #[test]
    fn pv_rejects_bad_input() {
        assert!(matches!(PvQuadrature::new(7, 1.0), Err(Error::BadNodeCount(7))));
        assert!(PvQuadrature::new(6, 1.0).is_err());
        let spec = PvQuadrature::new(64, 1.0).unwrap();
        assert!(matches!(pv_cheb_t(2, 1.0, &spec), Err(Error::PoleOutsideInterval(_))));
        assert!(pv_cheb_u(0, 0.2, &spec).is_err());
        let tight = PvQuadrature::new(8, 1.0).unwrap().with_consistency(1e-12);
        assert!(matches!(
            pv_cheb_t(6, 0.7, &tight),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }

    #[test]
    fn pv_is_tau_independent() {
        let a = PvQuadrature::new(4096, 1.0).unwrap();
        let b = PvQuadrature::new(4096, 0.05).unwrap();
        for k in 1..6 {
            let ta = pv_cheb_t(k, 0.45, &a).unwrap();
            let tb = pv_cheb_t(k, 0.45, &b).unwrap();
            assert!((ta - tb).abs() < 1e-11, "{ta} {tb}");
        }
    }
}
