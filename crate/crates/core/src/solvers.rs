//! Propagation of the lattice Cauchy problem
//!
//! ```text
//! Psi(x, t + tau) - Psi(x, t - tau) = (2 tau e_0 D_h + tau^2 e_{2n+1} e_0 Delta_h) Psi(x, t)
//! Psi(x, 0) = Phi_0(x)
//! ```
//!
//! along independent routes: two-level leapfrog, Fourier multipliers,
//! truncated Gould series, convolution with a kernel table, the space-time
//! principal value kernel, and a Mittag-Leffler subordination of the
//! multiplier's frequency integral.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;

use crate::chebyshev::{cheb_t, cheb_u, full_period_nodes, pole_anchored_nodes};
use crate::clifford::Multivector;
use crate::error::{Error, Result};
use crate::field_io::read_field_csv;
use crate::lattice::{evolution_operator, laplacian, CliffordField, LatticeGrid};
use crate::mittag_leffler::{half_half, resolvent_direct, simpson};
use crate::spectral::{
    check_cfl, forward_dft, inverse_dft, multipliers, propagator, time_steps, ModeData, MomentumField,
    Propagator,
};
use crate::umbral::gould_sequence;

/// Initial datum `Phi_0`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum {
    /// Unit scalar at the origin site.
    Delta,
    /// `exp(-|x|^2 / (2 sigma^2))` with periodic minimum-image distance to the origin.
    Gaussian { sigma: f64 },
    /// `exp(-i x . xi_k)` for integer frequency labels `k`; missing labels are 0.
    PlaneWave { labels: Vec<isize> },
    /// A field CSV file.
    File(PathBuf),
}

impl InitialDatum {
    pub fn realize(&self, grid: LatticeGrid) -> Result<CliffordField> {
        match self {
            InitialDatum::Delta => Ok(CliffordField::delta(grid)),
            InitialDatum::Gaussian { sigma } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidDatum(format!("gaussian width must be positive, got {sigma}")));
                }
                let h = grid.spacing();
                Ok(CliffordField::scalar_fn(grid, |x| {
                    let r2: f64 = x.iter().map(|&c| (grid.centred(c) as f64 * h).powi(2)).sum();
                    Complex64::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
                }))
            }
            InitialDatum::PlaneWave { labels } => {
                let half = (grid.points() / 2) as isize;
                if labels.len() > grid.dim() || labels.iter().any(|&k| k <= -half || k > half) {
                    return Err(Error::InvalidDatum(format!(
                        "plane wave labels {labels:?} must have at most {} entries in ({}, {}]",
                        grid.dim(),
                        -half,
                        half
                    )));
                }
                let n = grid.points() as f64;
                Ok(CliffordField::scalar_fn(grid, |x| {
                    let phase: f64 = labels
                        .iter()
                        .zip(x)
                        .map(|(&k, &c)| 2.0 * PI * k as f64 * c as f64 / n)
                        .sum();
                    Complex64::from_polar(1.0, -phase)
                }))
            }
            InitialDatum::File(path) => {
                let file = std::fs::File::open(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                read_field_csv(grid, std::io::BufReader::new(file))
            }
        }
    }
}

impl fmt::Display for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialDatum::Delta => write!(f, "delta"),
            InitialDatum::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
            InitialDatum::PlaneWave { labels } => {
                let ks: Vec<String> = labels.iter().map(|k| k.to_string()).collect();
                write!(f, "planewave:{}", ks.join(","))
            }
            InitialDatum::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for InitialDatum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown initial datum '{s}'"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("delta", None) => Ok(InitialDatum::Delta),
            ("gaussian", Some(a)) => {
                let sigma = a.parse().map_err(|_| bad())?;
                Ok(InitialDatum::Gaussian { sigma })
            }
            ("planewave", Some(a)) => {
                let labels = a
                    .split(',')
                    .map(|k| k.trim().parse().map_err(|_| bad()))
                    .collect::<Result<Vec<isize>>>()?;
                Ok(InitialDatum::PlaneWave { labels })
            }
            ("file", Some(a)) if !a.is_empty() => Ok(InitialDatum::File(PathBuf::from(a))),
            _ => Err(bad()),
        }
    }
}

/// Quadrature sizes for [`subordination_solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationParams {
    /// Upper limit `P` of the `p` integral.
    pub p_max: f64,
    /// Simpson panels in `u = sqrt(p)`.
    pub p_nodes: usize,
    /// Node budget over one frequency period.
    pub omega_nodes: usize,
}

impl SubordinationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_max > 0.0 && self.p_max.is_finite()) {
            return Err(Error::Parse(format!("subordination P must be positive, got {}", self.p_max)));
        }
        for n in [self.p_nodes, self.omega_nodes] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::BadNodeCount(n));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverKind {
    Leapfrog,
    Spectral,
    Series { terms: usize },
    Convolution,
    Subordination(SubordinationParams),
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverKind::Leapfrog => write!(f, "leapfrog"),
            SolverKind::Spectral => write!(f, "spectral"),
            SolverKind::Series { terms } => write!(f, "series:{terms}"),
            SolverKind::Convolution => write!(f, "convolution"),
            SolverKind::Subordination(p) => {
                write!(f, "subordination:{},{},{}", p.p_max, p.p_nodes, p.omega_nodes)
            }
        }
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown solver '{s}'"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("leapfrog", None) => Ok(SolverKind::Leapfrog),
            ("spectral", None) => Ok(SolverKind::Spectral),
            ("convolution", None) => Ok(SolverKind::Convolution),
            ("series", Some(k)) => Ok(SolverKind::Series {
                terms: k.trim().parse().map_err(|_| bad())?,
            }),
            ("subordination", Some(a)) => {
                let parts: Vec<&str> = a.split(',').map(str::trim).collect();
                let [p, mp, mw] = parts.as_slice() else {
                    return Err(bad());
                };
                let params = SubordinationParams {
                    p_max: p.parse().map_err(|_| bad())?,
                    p_nodes: mp.parse().map_err(|_| bad())?,
                    omega_nodes: mw.parse().map_err(|_| bad())?,
                };
                params.validate()?;
                Ok(SolverKind::Subordination(params))
            }
            _ => Err(bad()),
        }
    }
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub grid: LatticeGrid,
    pub tau: f64,
    pub steps: usize,
    pub initial: InitialDatum,
    pub solver: SolverKind,
}

impl SolveConfig {
    /// Checks the CFL bound and solver parameters.
    pub fn validate(&self) -> Result<()> {
        check_cfl(&self.grid, self.tau)?;
        if let SolverKind::Subordination(p) = &self.solver {
            p.validate()?;
        }
        Ok(())
    }
}

/// Time slices at `t = 0, tau, 2 tau, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub tau: f64,
    pub slices: Vec<CliffordField>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Sup-norm distance per slice.
    pub fn gaps(&self, other: &Trajectory) -> Result<Vec<f64>> {
        if self.slices.len() != other.slices.len() {
            return Err(Error::GridMismatch);
        }
        self.slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.distance(b))
            .collect()
    }
}

fn apply_multiplier(spectrum: &MomentumField, m: &[Multivector]) -> Result<CliffordField> {
    Ok(inverse_dft(&spectrum.apply(m)?))
}

/// `Psi(., tau)` from the exact one-step symbol `c + B`.
pub fn bootstrap_first_step(phi0: &CliffordField, tau: f64) -> Result<CliffordField> {
    spectral_solve(phi0, tau, 1)
}

pub fn leapfrog_solve(phi0: &CliffordField, tau: f64, steps: usize) -> Result<Trajectory> {
    check_cfl(phi0.grid(), tau)?;
    let mut slices = vec![phi0.clone()];
    if steps >= 1 {
        slices.push(bootstrap_first_step(phi0, tau)?);
    }
    for m in 1..steps {
        let next = slices[m - 1].try_add(&evolution_operator(&slices[m], tau)?)?;
        slices.push(next);
    }
    Ok(Trajectory { tau, slices })
}

/// `F^-1 [M(xi, k tau) F Phi_0]` with the exact extension symbol.
pub fn spectral_solve(phi0: &CliffordField, tau: f64, steps: usize) -> Result<CliffordField> {
    spectral_solve_with(phi0, tau, steps, Propagator::Extension)
}

pub fn spectral_solve_with(
    phi0: &CliffordField,
    tau: f64,
    steps: usize,
    form: Propagator,
) -> Result<CliffordField> {
    check_cfl(phi0.grid(), tau)?;
    if steps == 0 {
        return Ok(phi0.clone());
    }
    let mult = multipliers(phi0.grid(), tau)?;
    apply_multiplier(&forward_dft(phi0), &propagator(&mult, form, steps)?)
}

/// All slices `0..=steps`, sharing one forward transform.
pub fn spectral_trajectory(
    phi0: &CliffordField,
    tau: f64,
    steps: usize,
    form: Propagator,
) -> Result<Trajectory> {
    check_cfl(phi0.grid(), tau)?;
    let mult = multipliers(phi0.grid(), tau)?;
    let spectrum = forward_dft(phi0);
    let slices = (0..=steps)
        .map(|k| match k {
            // M = 1 at t = 0; skip the round trip through the transform
            0 => Ok(phi0.clone()),
            _ => apply_multiplier(&spectrum, &propagator(&mult, form, k)?),
        })
        .collect::<Result<_>>()?;
    Ok(Trajectory { tau, slices })
}

/// `S f = (-4 tau^2 Delta_h + tau^4 Delta_h^2) f = A_tau^2 f`.
fn squared_evolution(f: &CliffordField, tau: f64) -> Result<CliffordField> {
    let lap = laplacian(f);
    lap.scale(-4.0 * tau * tau).try_add(&laplacian(&lap).scale(tau.powi(4)))
}

/// `S^m Phi_0` and `A_tau S^m Phi_0`, enough for all `k <= terms`.
struct SeriesPowers {
    even: Vec<CliffordField>,
    odd: Vec<CliffordField>,
}

impl SeriesPowers {
    fn new(phi0: &CliffordField, tau: f64, terms: usize) -> Result<Self> {
        let mut even = vec![phi0.clone()];
        let mut odd = Vec::new();
        for k in 1..=terms {
            let m = (k - 1) / 2;
            if k % 2 == 1 {
                odd.push(evolution_operator(&even[m], tau)?);
            } else {
                even.push(squared_evolution(&even[m], tau)?);
            }
        }
        Ok(Self { even, odd })
    }

    /// `A_tau^k Phi_0`.
    fn power(&self, k: usize) -> &CliffordField {
        if k % 2 == 0 {
            &self.even[k / 2]
        } else {
            &self.odd[k / 2]
        }
    }
}

/// Truncated Gould series with its last included term.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub field: CliffordField,
    /// Sup norm of the `k = terms` contribution, a truncation indicator.
    pub last_term: f64,
}

fn series_sum(powers: &SeriesPowers, tau: f64, steps: usize, terms: usize) -> Result<SeriesResult> {
    let t = steps as f64 * tau;
    let gould = gould_sequence(terms, tau);
    let mut field = powers.power(0).clone();
    let mut inv_fact = 1.0;
    let mut last_term = field.sup_norm();
    for (k, g) in gould.iter().enumerate().skip(1) {
        inv_fact /= k as f64;
        let coeff = g.eval(t) * inv_fact;
        let term = powers.power(k).scale(coeff);
        last_term = term.sup_norm();
        field = field.try_add(&term)?;
    }
    Ok(SeriesResult { field, last_term })
}

/// `sum_{k <= terms} G_k(t; -tau, 2 tau) / k! A_tau^k Phi_0` at `t = steps tau`.
pub fn series_solve(phi0: &CliffordField, tau: f64, steps: usize, terms: usize) -> Result<SeriesResult> {
    crate::lattice::check_tau(tau)?;
    series_sum(&SeriesPowers::new(phi0, tau, terms)?, tau, steps, terms)
}

pub fn series_trajectory(phi0: &CliffordField, tau: f64, steps: usize, terms: usize) -> Result<Trajectory> {
    crate::lattice::check_tau(tau)?;
    let powers = SeriesPowers::new(phi0, tau, terms)?;
    let slices = (0..=steps)
        .map(|k| Ok(series_sum(&powers, tau, k, terms)?.field))
        .collect::<Result<_>>()?;
    Ok(Trajectory { tau, slices })
}

/// `K(x, t) = (2 pi)^{-n} sum_xi M(xi, t) e^{-i x . xi} dxi`.
///
/// With this normalization `sum_y h^n K(x - y, t) Phi_0(y)` reproduces the
/// multiplier solution and `K(., 0) = delta / h^n`.
pub fn kernel(grid: &LatticeGrid, tau: f64, steps: usize, form: Propagator) -> Result<CliffordField> {
    check_cfl(grid, tau)?;
    let mult = multipliers(grid, tau)?;
    let scale = (2.0 * PI).powf(-(grid.dim() as f64) / 2.0);
    let values = propagator(&mult, form, steps)?
        .into_iter()
        .map(|m| m.scale(scale))
        .collect();
    Ok(inverse_dft(&MomentumField::from_values(*grid, values)?))
}

/// `Psi(x) = sum_y h^n K(x - y) Phi_0(y)`, kernel on the left.
pub fn convolve(kernel: &CliffordField, phi0: &CliffordField) -> Result<CliffordField> {
    let grid = *phi0.grid();
    if kernel.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let n = grid.dim();
    let pts = grid.points();
    let cell = grid.cell();
    let mut out = vec![Multivector::zero(grid.signature()); grid.site_count()];
    for (y, phi) in phi0.values().iter().enumerate() {
        if phi.is_zero() {
            continue;
        }
        let yc = grid.coords(y);
        for (x, slot) in out.iter_mut().enumerate() {
            let xc = grid.coords(x);
            let d: Vec<usize> = (0..n).map(|j| (xc[j] + pts - yc[j]) % pts).collect();
            *slot += &(kernel.at(&d) * phi);
        }
    }
    CliffordField::from_values(grid, out.into_iter().map(|v| v.scale(cell)).collect())
}

pub fn convolution_solve(phi0: &CliffordField, tau: f64, steps: usize) -> Result<CliffordField> {
    if steps == 0 {
        check_cfl(phi0.grid(), tau)?;
        return Ok(phi0.clone());
    }
    convolve(&kernel(phi0.grid(), tau, steps, Propagator::Extension)?, phi0)
}

pub fn convolution_trajectory(phi0: &CliffordField, tau: f64, steps: usize) -> Result<Trajectory> {
    let slices = (0..=steps)
        .map(|k| convolution_solve(phi0, tau, k))
        .collect::<Result<_>>()?;
    Ok(Trajectory { tau, slices })
}

/// `(tau / (2 pi)^{n+1}) sum_xi dxi PV int R(w, xi) e^{-i (w t + x . xi)} dw`
/// with `R` the resolvent, matching [`kernel`] with [`Propagator::Chebyshev`].
///
/// The frequency integral uses `omega_nodes` midpoint panels per period,
/// mirrored about each pole `w tau = +-acos(lambda)`.
pub fn spacetime_kernel(
    grid: &LatticeGrid,
    tau: f64,
    x: &[usize],
    steps: usize,
    omega_nodes: usize,
) -> Result<Multivector> {
    check_cfl(grid, tau)?;
    let mult = multipliers(grid, tau)?;
    let mut acc = Multivector::zero(grid.signature());
    for (i, mode) in mult.modes().iter().enumerate() {
        let lambda = mode.lambda_real()?;
        let phase_x: f64 = grid
            .coords(i)
            .iter()
            .zip(x)
            .map(|(&m, &c)| grid.frequency(m) * c as f64 * grid.spacing())
            .sum();
        let mut inner = Multivector::zero(grid.signature());
        for (theta, w) in full_period_nodes(lambda, omega_nodes) {
            let omega = theta / tau;
            let r = resolvent_direct(omega, mode, tau)?;
            let phase = Complex64::from_polar(w / tau, -(theta * steps as f64 + phase_x));
            inner += &r.scale(phase);
        }
        acc += &inner;
    }
    let n = grid.dim() as i32;
    Ok(acc.scale(tau * grid.dual_cell() / (2.0 * PI).powi(n + 1)))
}

/// The truncated Laplace-type integral
/// `F(s) = -int_0^P e^{-p lambda^2} E_{1/2,1/2}(s sqrt p) / sqrt p dp`,
/// which tends to `1 / (s - lambda)` for `|s| < lambda`.
///
/// The series of `E_{1/2,1/2}` is integrated term by term,
/// `F(s) = sum_m I_m s^m` with
/// `I_m = -int_0^{sqrt P} 2 e^{-u^2 lambda^2} u^m / Gamma((m+1)/2) du`,
/// so one set of moments serves every `s` in `[-s_max, s_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceResolvent {
    lambda: f64,
    s_max: f64,
    moments: Vec<f64>,
}

impl LaplaceResolvent {
    pub fn new(lambda: f64, s_max: f64, p_max: f64, p_nodes: usize) -> Result<Self> {
        if !(s_max.abs() < lambda) {
            return Err(Error::OutsideConvergenceRegion {
                lambda2: lambda * lambda,
                bound: s_max * s_max,
            });
        }
        let e = half_half();
        let lambda2 = lambda * lambda;
        let u_max = p_max.sqrt();
        let max_terms = e.params().max_terms;
        let mut moments = Vec::new();
        let mut total = 0.0;
        let mut small = 0;
        for m in 0..max_terms {
            let im = -simpson(0.0, u_max, p_nodes, |u| Ok(2.0 * (-u * u * lambda2).exp() * e.term(m, u)))?;
            moments.push(im);
            let bound = im.abs() * s_max.abs().powi(m as i32);
            total += bound;
            if bound < 1e-17 * (1.0 + total) {
                small += 1;
                if small == 3 {
                    return Ok(Self { lambda, s_max, moments });
                }
            } else {
                small = 0;
            }
        }
        Err(Error::SeriesNotConverged {
            z: s_max * u_max,
            terms: max_terms,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    /// `F(s)` for `|s| <= s_max`.
    pub fn eval(&self, s: f64) -> f64 {
        self.moments.iter().rev().fold(0.0, |acc, &c| acc * s + c)
    }
}

/// How a dual mode's frequency integral was evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeStatus {
    /// The band `|cos(w tau)| <= s_max` used the Mittag-Leffler integral,
    /// the rest of the period the direct resolvent.
    Subordinated { s_max: f64 },
    /// `lambda^2` too small for the truncated `p` integral to converge
    /// anywhere: the whole period used the direct resolvent.
    DirectOnly,
    /// `min_w |cos(w tau)| >= lambda`: no frequency admits the Laplace
    /// representation; the closed-form multiplier was used.
    NonConvergent,
}

/// Per-mode diagnostics of [`subordination_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    /// Integer frequency labels of the dual point.
    pub labels: Vec<isize>,
    pub lambda: f64,
    pub status: ModeStatus,
    /// Nodes handled by the Mittag-Leffler integral.
    pub band_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SubordinationReport {
    pub modes: Vec<ModeReport>,
}

impl SubordinationReport {
    /// Dual indices flagged non-convergent.
    pub fn non_convergent(&self) -> Vec<usize> {
        self.modes
            .iter()
            .enumerate()
            .filter(|(_, m)| m.status == ModeStatus::NonConvergent)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Frequency quadrature for one mode, with the resolvent folded into the
/// weights: `(theta, w R(theta))`, where `R = 1 / (cos theta - lambda)` off
/// the band and its Laplace form on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModePlan {
    lambda: f64,
    status: ModeStatus,
    nodes: Vec<(f64, f64)>,
    band_nodes: usize,
}

/// Keeps `e^{-P (lambda^2 - s^2)} <= e^{-28}` on the band.
const BAND_DECAY: f64 = 28.0;

fn mirrored(half: Vec<(f64, f64)>) -> impl Iterator<Item = (f64, f64)> {
    half.into_iter().flat_map(|(x, w)| [(-x, w), (x, w)])
}

fn midpoint(a: f64, b: f64, count: usize) -> Vec<(f64, f64)> {
    let w = (b - a) / count as f64;
    (0..count).map(|i| (a + (i as f64 + 0.5) * w, w)).collect()
}

impl ModePlan {
    pub fn new(lambda: f64, params: &SubordinationParams) -> Result<Self> {
        if lambda <= 0.0 {
            return Ok(Self {
                lambda,
                status: ModeStatus::NonConvergent,
                nodes: Vec::new(),
                band_nodes: 0,
            });
        }
        let half_budget = (params.omega_nodes / 2).max(1);
        let pole = lambda.min(1.0).acos();
        let direct = |(theta, w): (f64, f64)| -> Result<(f64, f64)> {
            let den = theta.cos() - lambda;
            if den.abs() < 1e-14 {
                return Err(Error::PoleHit(den));
            }
            Ok((theta, w / den))
        };
        let kappa = BAND_DECAY / params.p_max;
        if lambda * lambda <= kappa {
            let nodes = mirrored(pole_anchored_nodes(0.0, PI, pole, half_budget))
                .map(direct)
                .collect::<Result<_>>()?;
            return Ok(Self {
                lambda,
                status: ModeStatus::DirectOnly,
                nodes,
                band_nodes: 0,
            });
        }
        let s_max = (lambda * lambda - kappa).sqrt();
        let theta_a = s_max.acos();
        let theta_b = PI - theta_a;
        let count = |len: f64| ((half_budget as f64 * len / PI).round() as usize).max(1);
        let laplace = LaplaceResolvent::new(lambda, s_max, params.p_max, params.p_nodes)?;

        let mut nodes: Vec<(f64, f64)> = mirrored(pole_anchored_nodes(0.0, theta_a, pole, count(theta_a)))
            .chain(mirrored(midpoint(theta_b, PI, count(PI - theta_b))))
            .map(direct)
            .collect::<Result<_>>()?;
        let band: Vec<(f64, f64)> = mirrored(midpoint(theta_a, theta_b, count(theta_b - theta_a)))
            .map(|(theta, w)| (theta, w * laplace.eval(theta.cos())))
            .collect();
        let band_nodes = band.len();
        nodes.extend(band);
        Ok(Self {
            lambda,
            status: ModeStatus::Subordinated { s_max },
            nodes,
            band_nodes,
        })
    }

    pub fn status(&self) -> ModeStatus {
        self.status
    }

    pub fn band_nodes(&self) -> usize {
        self.band_nodes
    }

    /// `(T_k(lambda), U_{k-1}(lambda))` from
    /// `(1/2 pi) int (-i sin theta, 1) e^{-i k theta} / (cos theta - lambda) dtheta`.
    pub fn chebyshev_pair(&self, k: usize) -> (Complex64, Complex64) {
        if k == 0 {
            return (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        }
        if self.status == ModeStatus::NonConvergent {
            let u = cheb_u(k as i64 - 1, self.lambda).expect("k >= 1");
            return (Complex64::new(cheb_t(k, self.lambda), 0.0), Complex64::new(u, 0.0));
        }
        let mut a = Complex64::new(0.0, 0.0);
        let mut b = Complex64::new(0.0, 0.0);
        for &(theta, wr) in &self.nodes {
            let e = Complex64::from_polar(wr, -(k as f64) * theta);
            a += e * Complex64::new(0.0, -theta.sin());
            b += e;
        }
        (a / (2.0 * PI), b / (2.0 * PI))
    }
}

/// Per-mode multiplier `a + b B` from a plan.
fn plan_multiplier(plan: &ModePlan, mode: &ModeData, tau: f64, steps: usize) -> Multivector {
    let (a, b) = plan.chebyshev_pair(steps);
    let mut m = mode.b_term(tau).scale(b);
    m.accumulate(0, a);
    m
}

fn subordination_plans(
    grid: &LatticeGrid,
    tau: f64,
    params: &SubordinationParams,
) -> Result<(crate::spectral::Multipliers, Vec<ModePlan>, SubordinationReport)> {
    check_cfl(grid, tau)?;
    params.validate()?;
    let mult = multipliers(grid, tau)?;
    let mut plans = Vec::with_capacity(mult.modes().len());
    let mut report = SubordinationReport::default();
    for (i, mode) in mult.modes().iter().enumerate() {
        let lambda = mode.lambda_real()?;
        let plan = ModePlan::new(lambda, params)?;
        report.modes.push(ModeReport {
            labels: grid.coords(i).iter().map(|&m| grid.frequency_label(m)).collect(),
            lambda,
            status: plan.status(),
            band_nodes: plan.band_nodes(),
        });
        plans.push(plan);
    }
    Ok((mult, plans, report))
}

/// Multiplier solution whose frequency integral is evaluated through the
/// Mittag-Leffler subordination where it converges; approaches the
/// [`Propagator::Chebyshev`] answer as the quadratures are refined.
pub fn subordination_solve(
    phi0: &CliffordField,
    tau: f64,
    steps: usize,
    params: &SubordinationParams,
) -> Result<(CliffordField, SubordinationReport)> {
    let traj = subordination_trajectory(phi0, tau, steps, params)?;
    let (mut slices, report) = (traj.0.slices, traj.1);
    Ok((slices.pop().expect("at least one slice"), report))
}

pub fn subordination_trajectory(
    phi0: &CliffordField,
    tau: f64,
    steps: usize,
    params: &SubordinationParams,
) -> Result<(Trajectory, SubordinationReport)> {
    let (mult, plans, report) = subordination_plans(phi0.grid(), tau, params)?;
    let spectrum = forward_dft(phi0);
    let slices = (0..=steps)
        .map(|k| {
            if k == 0 {
                return Ok(phi0.clone());
            }
            let m: Vec<Multivector> = plans
                .iter()
                .zip(mult.modes())
                .map(|(plan, mode)| plan_multiplier(plan, mode, tau, k))
                .collect();
            apply_multiplier(&spectrum, &m)
        })
        .collect::<Result<_>>()?;
    Ok((Trajectory { tau, slices }, report))
}

/// Runs the configured solver for every slice `0..=steps`.
pub fn solve(cfg: &SolveConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let phi0 = cfg.initial.realize(cfg.grid)?;
    match cfg.solver {
        SolverKind::Leapfrog => leapfrog_solve(&phi0, cfg.tau, cfg.steps),
        SolverKind::Spectral => spectral_trajectory(&phi0, cfg.tau, cfg.steps, Propagator::Extension),
        SolverKind::Series { terms } => series_trajectory(&phi0, cfg.tau, cfg.steps, terms),
        SolverKind::Convolution => convolution_trajectory(&phi0, cfg.tau, cfg.steps),
        SolverKind::Subordination(p) => Ok(subordination_trajectory(&phi0, cfg.tau, cfg.steps, &p)?.0),
    }
}

/// `t / tau` for a time on the lattice `tau Z>=0`.
pub fn steps_for_time(t: f64, tau: f64) -> Result<usize> {
    time_steps(t, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid1() -> LatticeGrid {
        LatticeGrid::new(1, 8, 1.0).unwrap()
    }

    #[test]
    fn parses_solvers_and_data() {
        assert_eq!("series:20".parse::<SolverKind>().unwrap(), SolverKind::Series { terms: 20 });
        assert_eq!("leapfrog".parse::<SolverKind>().unwrap(), SolverKind::Leapfrog);
        let s: SolverKind = "subordination:40,256,1024".parse().unwrap();
        assert_eq!(s.to_string(), "subordination:40,256,1024");
        assert!("series".parse::<SolverKind>().is_err());
        assert!("magic".parse::<SolverKind>().is_err());
        assert!("subordination:40,7,1024".parse::<SolverKind>().is_err());

        assert_eq!("gaussian:1.5".parse::<InitialDatum>().unwrap(), InitialDatum::Gaussian { sigma: 1.5 });
        assert_eq!(
            "planewave:2,-1".parse::<InitialDatum>().unwrap(),
            InitialDatum::PlaneWave { labels: vec![2, -1] }
        );
        assert!("planewave:x".parse::<InitialDatum>().is_err());
        assert!("file:".parse::<InitialDatum>().is_err());
    }

    #[test]
    fn data_realization() {
        let g = grid1();
        let gauss = InitialDatum::Gaussian { sigma: 1.0 }.realize(g).unwrap();
        // minimum image: sites 1 and 7 are both at distance 1
        assert_eq!(gauss.value(1), gauss.value(7));
        assert_eq!(gauss.value(0).scalar_part(), Complex64::new(1.0, 0.0));
        assert!(InitialDatum::PlaneWave { labels: vec![5] }.realize(g).is_err());
        assert!(InitialDatum::Gaussian { sigma: 0.0 }.realize(g).is_err());
    }

    #[test]
    fn zero_steps_return_datum() {
        let g = grid1();
        let phi = InitialDatum::Gaussian { sigma: 1.3 }.realize(g).unwrap();
        assert_eq!(leapfrog_solve(&phi, 0.2, 0).unwrap().slices, vec![phi.clone()]);
        assert!(spectral_solve(&phi, 0.2, 0).unwrap().distance(&phi).unwrap() < 1e-13);
        assert_eq!(series_solve(&phi, 0.2, 0, 7).unwrap().field, phi);
        assert_eq!(series_solve(&phi, 0.2, 3, 0).unwrap().field, phi);
        assert!(convolution_solve(&phi, 0.2, 0).unwrap().distance(&phi).unwrap() < 1e-13);
    }

    #[test]
    fn kernel_at_zero_is_scaled_delta() {
        let g = LatticeGrid::new(1, 8, 0.5).unwrap();
        let k = kernel(&g, 0.1, 0, Propagator::Extension).unwrap();
        let expect = CliffordField::delta(g).scale(1.0 / 0.5);
        assert!(k.distance(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn laplace_resolvent_matches_direct() {
        let lambda = 0.9;
        let f = LaplaceResolvent::new(lambda, 0.6, 80.0, 512).unwrap();
        for i in 0..=12 {
            let s = -0.6 + 0.1 * i as f64;
            assert!((f.eval(s) - 1.0 / (s - lambda)).abs() <= 1e-6, "s = {s}");
        }
    }

    #[test]
    fn plan_reproduces_chebyshev_values() {
        let params = SubordinationParams {
            p_max: 40.0,
            p_nodes: 256,
            omega_nodes: 1 << 14,
        };
        let plan = ModePlan::new(0.95, &params).unwrap();
        assert!(matches!(plan.status(), ModeStatus::Subordinated { .. }));
        assert!(plan.band_nodes() > 0);
        for k in 1..=8 {
            let (a, b) = plan.chebyshev_pair(k);
            assert!((a.re - cheb_t(k, 0.95)).abs() < 1e-4 && a.im.abs() < 1e-10);
            assert!((b.re - cheb_u(k as i64 - 1, 0.95).unwrap()).abs() < 1e-4);
        }
        assert_eq!(ModePlan::new(0.0, &params).unwrap().status(), ModeStatus::NonConvergent);
        assert_eq!(ModePlan::new(0.5, &params).unwrap().status(), ModeStatus::DirectOnly);
    }
}
