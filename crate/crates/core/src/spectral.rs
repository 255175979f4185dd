//! Discrete Fourier transform over the Brillouin zone and the Fourier
//! multipliers of `-Delta_h`, `D_h` and the time propagator.
//!
//! ```text
//! (F f)(xi)     = h^n (2 pi)^{-n/2} sum_x f(x) e^{i x.xi}
//! (F^-1 F)(x)   = (2 pi)^{-n/2} sum_xi F(xi) e^{-i x.xi} dxi,   dxi = (2 pi / (N h))^n
//! d(xi)^2       = sum_j (4/h^2) sin^2(h xi_j / 2)
//! z(xi)         = sum_j -i e_j sin(h xi_j)/h + e_{n+j} (1 - cos(h xi_j))/h
//! ```
//!
//! Each blade channel is transformed independently by direct summation.
//! Dual points are stored with frequency label `k = m - N/2 + 1` per axis.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::chebyshev::{cheb_t, cheb_u};
use crate::clifford::{BladeMask, Multivector, Signature};
use crate::error::{Error, Result};
use crate::lattice::{check_tau, CliffordField, LatticeGrid};

/// `F_h f`: one multivector per dual lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumField {
    grid: LatticeGrid,
    values: Vec<Multivector>,
}

impl MomentumField {
    pub fn zeros(grid: LatticeGrid) -> Self {
        Self {
            grid,
            values: vec![Multivector::zero(grid.signature()); grid.site_count()],
        }
    }

    pub fn from_values(grid: LatticeGrid, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != grid.site_count() {
            return Err(Error::InvalidGrid(format!(
                "expected {} dual values, got {}",
                grid.site_count(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    /// Dual-sum energy `sum_xi |F(xi)|^2 dxi` over all blade coefficients.
    pub fn energy(&self) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .flat_map(|v| v.terms().map(|(_, c)| c.norm_sqr()))
            .sum();
        s * self.grid.dual_cell()
    }

    /// Left multiplication by a per-mode multiplier.
    pub fn apply(&self, multiplier: &[Multivector]) -> Result<Self> {
        if multiplier.len() != self.values.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: multiplier.iter().zip(&self.values).map(|(m, v)| m * v).collect(),
        })
    }
}

/// Direct DFT along every axis of a dense channel, in place.
/// `sign = +1` for `e^{+i x.xi}`, `-1` for the inverse kernel.
fn transform_channel(grid: &LatticeGrid, data: &mut [Complex64], roots: &[Complex64], sign: i64) {
    let n_pts = grid.points();
    let half = (n_pts / 2) as i64;
    let mut line = vec![Complex64::new(0.0, 0.0); n_pts];
    for axis in 0..grid.dim() {
        let stride = n_pts.pow(axis as u32);
        for start in 0..data.len() {
            if (start / stride) % n_pts != 0 {
                continue;
            }
            for (o, out) in line.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..n_pts {
                    // forward: o is a dual label, i a site; inverse: the reverse
                    let (m, x) = if sign > 0 { (o, i) } else { (i, o) };
                    let k = m as i64 - half + 1;
                    let r = (sign * k * x as i64).rem_euclid(n_pts as i64) as usize;
                    acc += data[start + i * stride] * roots[r];
                }
                *out = acc;
            }
            for (m, v) in line.iter().enumerate() {
                data[start + m * stride] = *v;
            }
        }
    }
}

fn roots_of_unity(points: usize) -> Vec<Complex64> {
    (0..points)
        .map(|r| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / points as f64))
        .collect()
}

fn transform(
    grid: LatticeGrid,
    values: &[Multivector],
    sign: i64,
    scale: f64,
) -> Vec<Multivector> {
    let sig = grid.signature();
    let masks: BTreeSet<BladeMask> = values.iter().flat_map(|v| v.terms().map(|(m, _)| m)).collect();
    let roots = roots_of_unity(grid.points());
    let count = grid.site_count();
    let mut out = vec![Multivector::zero(sig); count];
    let mut channel = vec![Complex64::new(0.0, 0.0); count];
    for &mask in &masks {
        for (slot, v) in channel.iter_mut().zip(values) {
            *slot = v.coefficient(mask);
        }
        transform_channel(&grid, &mut channel, &roots, sign);
        for (o, c) in out.iter_mut().zip(&channel) {
            o.accumulate(mask, c * scale);
        }
    }
    out
}

fn two_pi_pow(dim: usize) -> f64 {
    (2.0 * std::f64::consts::PI).powf(-(dim as f64) / 2.0)
}

pub fn forward_dft(f: &CliffordField) -> MomentumField {
    let grid = *f.grid();
    let scale = grid.cell() * two_pi_pow(grid.dim());
    MomentumField {
        grid,
        values: transform(grid, f.values(), 1, scale),
    }
}

pub fn inverse_dft(spectrum: &MomentumField) -> CliffordField {
    let grid = spectrum.grid;
    let scale = two_pi_pow(grid.dim()) * grid.dual_cell();
    CliffordField::from_values(grid, transform(grid, &spectrum.values, -1, scale))
        .expect("transform preserves the site count")
}

/// Multiplier data at one dual point.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeData {
    /// Frequencies `xi_j`.
    pub xi: Vec<f64>,
    /// `d_h(xi)^2`.
    pub d2: f64,
    /// `z_h(xi)`.
    pub z: Multivector,
    /// `tau^2 d2 + tau^4 d2^2 / 4`.
    pub mu2: f64,
    /// `sqrt(1 - mu2)`, principal branch.
    pub lambda: Complex64,
}

impl ModeData {
    /// Real `lambda`, or an error when the CFL bound fails at this point.
    pub fn lambda_real(&self) -> Result<f64> {
        if self.lambda.im != 0.0 {
            return Err(Error::ComplexLambda);
        }
        Ok(self.lambda.re)
    }

    /// `B = tau e_0 z - (tau^2/2) e_{2n+1} e_0 d2`.
    pub fn b_term(&self, tau: f64) -> Multivector {
        let sig = self.z.signature();
        let mut b = self.z.left_blade(1, Complex64::new(tau, 0.0));
        // e_{2n+1} e_0 = -(e_0 e_{2n+1})
        let bivector = (1u32 << sig.top()) | 1;
        b.accumulate(bivector, Complex64::new(0.5 * tau * tau * self.d2, 0.0));
        b
    }
}

/// Multipliers at every dual point for a given time step.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipliers {
    grid: LatticeGrid,
    tau: f64,
    modes: Vec<ModeData>,
}

impl Multipliers {
    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn modes(&self) -> &[ModeData] {
        &self.modes
    }

    pub fn signature(&self) -> Signature {
        self.grid.signature()
    }
}

/// Mode data at explicit frequencies.
pub fn mode_at(sig: Signature, spacing: f64, tau: f64, xi: &[f64]) -> ModeData {
    let h = spacing;
    let n = sig.dim();
    let mut d2 = 0.0;
    let mut z = Multivector::zero(sig);
    for (j, &x) in xi.iter().enumerate() {
        let s = (0.5 * h * x).sin();
        d2 += 4.0 / (h * h) * s * s;
        z.accumulate(1 << (j + 1), Complex64::new(0.0, -(h * x).sin() / h));
        // 1 - cos(h xi) = 2 sin^2(h xi / 2), which avoids cancellation
        z.accumulate(1 << (n + j + 1), Complex64::new(2.0 * s * s / h, 0.0));
    }
    let mu2 = tau * tau * d2 + 0.25 * tau.powi(4) * d2 * d2;
    let mut radicand = 1.0 - mu2;
    if radicand < 0.0 && radicand > -1e-12 {
        // tau exactly at the CFL bound: 1 - mu2 is zero up to rounding
        radicand = 0.0;
    }
    let lambda = Complex64::new(radicand, 0.0).sqrt();
    ModeData {
        xi: xi.to_vec(),
        d2,
        z,
        mu2,
        lambda,
    }
}

pub fn multipliers(grid: &LatticeGrid, tau: f64) -> Result<Multipliers> {
    check_tau(tau)?;
    let sig = grid.signature();
    let modes = (0..grid.site_count())
        .map(|i| {
            let xi: Vec<f64> = grid.coords(i).iter().map(|&m| grid.frequency(m)).collect();
            mode_at(sig, grid.spacing(), tau, &xi)
        })
        .collect();
    Ok(Multipliers {
        grid: *grid,
        tau,
        modes,
    })
}

/// Largest `tau` with `tau^2 max d2 <= 2 (sqrt 2 - 1)`, i.e. `h sqrt((sqrt 2 - 1) / (2n))`.
pub fn cfl_max_tau(grid: &LatticeGrid) -> f64 {
    grid.spacing() * ((2f64.sqrt() - 1.0) / (2.0 * grid.dim() as f64)).sqrt()
}

pub fn check_cfl(grid: &LatticeGrid, tau: f64) -> Result<()> {
    check_tau(tau)?;
    let max_tau = cfl_max_tau(grid);
    if tau > max_tau * (1.0 + 1e-12) {
        return Err(Error::Cfl { tau, max_tau });
    }
    Ok(())
}

/// Number of steps `t / tau`, which must be a nonnegative integer.
pub fn time_steps(t: f64, tau: f64) -> Result<usize> {
    check_tau(tau)?;
    let r = t / tau;
    let k = r.round();
    if !r.is_finite() || k < 0.0 || (r - k).abs() > 1e-9 * k.max(1.0) {
        return Err(Error::NonIntegerTime(r));
    }
    Ok(k as usize)
}

/// Which closed form the per-mode propagator uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagator {
    /// `T_k(c) + U_{k-1}(c) B` with `c = 1 + tau^2 d2 / 2 = sqrt(1 + mu2) >= 1`.
    ///
    /// This is the Fourier symbol of `exp((t/tau) asinh(A_tau / 2))`, the
    /// resummed Gould series, and it satisfies the two-level recurrence
    /// `M_{k+1} = M_{k-1} + 2 B M_k` exactly.
    Extension,
    /// `T_k(lambda) + U_{k-1}(lambda) B` with `lambda = sqrt(1 - mu2) <= 1`;
    /// requires the CFL bound. This is the multiplier whose space-time
    /// principal-value representation the kernel module reproduces.
    Chebyshev,
}

fn chebyshev_combination(b: &Multivector, k: usize, arg: f64) -> Multivector {
    let t = cheb_t(k, arg);
    let u = cheb_u(k as i64 - 1, arg).expect("degree >= -1");
    let mut m = b.scale(u);
    m.accumulate(0, Complex64::new(t, 0.0));
    m
}

/// `T_k(lambda) 1 + U_{k-1}(lambda) [tau e_0 z - (tau^2/2) e_{2n+1} e_0 d2]` at every mode.
pub fn propagator_multiplier(mult: &Multipliers, steps: usize) -> Result<Vec<Multivector>> {
    check_cfl(&mult.grid, mult.tau)?;
    mult.modes
        .iter()
        .map(|mode| {
            let lambda = mode.lambda_real()?;
            Ok(chebyshev_combination(&mode.b_term(mult.tau), steps, lambda))
        })
        .collect()
}

/// `T_k(c) 1 + U_{k-1}(c) B` with `c = 1 + tau^2 d2 / 2` at every mode.
pub fn extension_multiplier(mult: &Multipliers, steps: usize) -> Vec<Multivector> {
    mult.modes
        .iter()
        .map(|mode| {
            let c = 1.0 + 0.5 * mult.tau * mult.tau * mode.d2;
            chebyshev_combination(&mode.b_term(mult.tau), steps, c)
        })
        .collect()
}

pub fn propagator(mult: &Multipliers, form: Propagator, steps: usize) -> Result<Vec<Multivector>> {
    match form {
        Propagator::Extension => Ok(extension_multiplier(mult, steps)),
        Propagator::Chebyshev => propagator_multiplier(mult, steps),
    }
}
