//! Periodic lattice `hZ^n / NhZ^n`, Clifford-valued fields, and the finite
//! difference operators built on them.
//!
//! Sites are stored in linear order with axis 1 varying fastest. All operators
//! act on the left of the Clifford coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clifford::{DenseAccumulator, Multivector, Signature};
use crate::error::{Error, Result};

/// Periodic spatial lattice with `points` sites per axis and spacing `spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGrid {
    dim: usize,
    points: usize,
    spacing: f64,
}

impl LatticeGrid {
    pub fn new(dim: usize, points: usize, spacing: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points < 4 || points % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= 4, got {points}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        let sites = (points as u128).checked_pow(dim as u32);
        if sites.is_none_or(|s| s > 1 << 24) {
            return Err(Error::InvalidGrid(format!("{points}^{dim} sites is too many")));
        }
        Signature::new(dim)?;
        Ok(Self {
            dim,
            points,
            spacing,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.dim).expect("validated in LatticeGrid::new")
    }

    /// `N^n`.
    pub fn site_count(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    /// Multi-index of a linear site index, axis 1 first.
    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            out.push(index % self.points);
            index /= self.points;
        }
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.points + (c % self.points))
    }

    /// Linear index of the site reached by moving `steps` along `axis` (0-based).
    pub fn neighbour(&self, index: usize, axis: usize, steps: isize) -> usize {
        let stride = self.points.pow(axis as u32);
        let coord = (index / stride) % self.points;
        let n = self.points as isize;
        let moved = (coord as isize + steps).rem_euclid(n) as usize;
        index - coord * stride + moved * stride
    }

    /// Signed lattice offset of a coordinate, in `-N/2+1 ..= N/2`.
    pub fn centred(&self, c: usize) -> isize {
        let half = (self.points / 2) as isize;
        let c = c as isize;
        if c > half {
            c - self.points as isize
        } else {
            c
        }
    }

    /// Integer frequency label `k` of dual index `m`: `k = m - N/2 + 1`.
    pub fn frequency_label(&self, m: usize) -> isize {
        m as isize - (self.points / 2) as isize + 1
    }

    /// `xi_k = 2 pi k / (N h)`, in the Brillouin zone `(-pi/h, pi/h]`.
    pub fn frequency(&self, m: usize) -> f64 {
        2.0 * PI * self.frequency_label(m) as f64 / (self.points as f64 * self.spacing)
    }

    /// Dual cell volume `(2 pi / (N h))^n`.
    pub fn dual_cell(&self) -> f64 {
        (2.0 * PI / (self.points as f64 * self.spacing)).powi(self.dim as i32)
    }

    /// Primal cell volume `h^n`.
    pub fn cell(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }
}

/// One time slice: a multivector per lattice site.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordField {
    grid: LatticeGrid,
    values: Vec<Multivector>,
}

impl CliffordField {
    pub fn zeros(grid: LatticeGrid) -> Self {
        let sig = grid.signature();
        Self {
            grid,
            values: vec![Multivector::zero(sig); grid.site_count()],
        }
    }

    pub fn from_values(grid: LatticeGrid, values: Vec<Multivector>) -> Result<Self> {
        if values.len() != grid.site_count() {
            return Err(Error::InvalidGrid(format!(
                "expected {} site values, got {}",
                grid.site_count(),
                values.len()
            )));
        }
        let sig = grid.signature();
        if let Some(v) = values.iter().find(|v| v.signature() != sig) {
            return Err(Error::SignatureMismatch {
                left: sig.dim(),
                right: v.signature().dim(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Field built site by site from the multi-index.
    pub fn from_fn(grid: LatticeGrid, mut f: impl FnMut(&[usize]) -> Multivector) -> Self {
        let values = (0..grid.site_count()).map(|i| f(&grid.coords(i))).collect();
        Self { grid, values }
    }

    /// Scalar field, value `f(x)` times the unit.
    pub fn scalar_fn(grid: LatticeGrid, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let sig = grid.signature();
        Self::from_fn(grid, |x| Multivector::scalar(sig, f(x)))
    }

    /// Unit scalar at the origin, zero elsewhere.
    pub fn delta(grid: LatticeGrid) -> Self {
        Self::scalar_fn(grid, |x| {
            if x.iter().all(|&c| c == 0) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Multivector] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &Multivector {
        &self.values[index]
    }

    pub fn at(&self, coords: &[usize]) -> &Multivector {
        &self.values[self.grid.index(coords)]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Multivector, &Multivector) -> Multivector) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        self.map(|v| v.scale(c))
    }

    /// Left multiplication of every site value by `m`.
    pub fn left_mul(&self, m: &Multivector) -> Self {
        self.map(|v| m * v)
    }

    /// `max_x norm_inf(f(x))`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(Multivector::norm_inf).fold(0.0, f64::max)
    }

    /// `sup_norm(self - other)`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.distance_inf(b))
            .fold(0.0, f64::max))
    }

    /// Site-sum inner product `h^n sum_x sum_A conj(f_A(x)) g_A(x)` over blade coefficients.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.values.iter().zip(&other.values) {
            for (m, ca) in a.terms() {
                acc += ca.conj() * b.coefficient(m);
            }
        }
        Ok(acc * self.grid.cell())
    }
}

/// `g(x) = f(x + dir * h * e_axis)` with periodic wraparound; `axis` is 1-based.
pub fn shift(f: &CliffordField, axis: usize, dir: isize) -> Result<CliffordField> {
    let grid = *f.grid();
    if axis == 0 || axis > grid.dim() {
        return Err(Error::AxisOutOfRange {
            axis,
            dim: grid.dim(),
        });
    }
    let values = (0..grid.site_count())
        .map(|i| f.values[grid.neighbour(i, axis - 1, dir)].clone())
        .collect();
    Ok(CliffordField { grid, values })
}

/// `(Delta_h f)(x) = sum_j [f(x + h e_j) + f(x - h e_j) - 2 f(x)] / h^2`.
pub fn laplacian(f: &CliffordField) -> CliffordField {
    let grid = *f.grid();
    let inv_h2 = Complex64::new(1.0 / (grid.spacing() * grid.spacing()), 0.0);
    let centre_weight = inv_h2 * (-2.0 * grid.dim() as f64);
    let mut acc = DenseAccumulator::new(grid.signature());
    let values = (0..grid.site_count())
        .map(|i| {
            acc.add(centre_weight, &f.values[i]);
            for axis in 0..grid.dim() {
                acc.add(inv_h2, &f.values[grid.neighbour(i, axis, 1)]);
                acc.add(inv_h2, &f.values[grid.neighbour(i, axis, -1)]);
            }
            acc.take()
        })
        .collect();
    CliffordField { grid, values }
}

/// Adds `c D_h f (x_i)` to `acc`.
fn add_dirac(acc: &mut DenseAccumulator, f: &CliffordField, i: usize, c: Complex64) {
    let grid = f.grid;
    let n = grid.dim();
    let half = c * (0.5 / grid.spacing());
    let centre = &f.values[i];
    for axis in 0..n {
        let fwd = &f.values[grid.neighbour(i, axis, 1)];
        let bwd = &f.values[grid.neighbour(i, axis, -1)];
        let (ej, enj) = (1 << (axis + 1), 1 << (n + axis + 1));
        acc.add_left_blade(ej, half, fwd);
        acc.add_left_blade(ej, -half, bwd);
        acc.add_left_blade(enj, half * 2.0, centre);
        acc.add_left_blade(enj, -half, fwd);
        acc.add_left_blade(enj, -half, bwd);
    }
}

/// Finite difference Dirac operator
///
/// `D_h f = sum_j e_j [f(x+he_j) - f(x-he_j)]/(2h) + e_{n+j} [2f(x) - f(x+he_j) - f(x-he_j)]/(2h)`.
pub fn dirac(f: &CliffordField) -> CliffordField {
    let grid = *f.grid();
    let mut acc = DenseAccumulator::new(grid.signature());
    let values = (0..grid.site_count())
        .map(|i| {
            add_dirac(&mut acc, f, i, Complex64::new(1.0, 0.0));
            acc.take()
        })
        .collect();
    CliffordField { grid, values }
}

/// One-step evolution operator `A_tau f = 2 tau e_0 D_h f + tau^2 e_{2n+1} e_0 Delta_h f`.
pub fn evolution_operator(f: &CliffordField, tau: f64) -> Result<CliffordField> {
    check_tau(tau)?;
    let grid = *f.grid();
    let sig = grid.signature();
    let d = dirac(f);
    let lap = laplacian(f);
    // e_{2n+1} e_0 = -e_0 e_{2n+1}; stored blade is e_0 e_{2n+1}.
    let bivector = (1u32 << sig.top()) | 1;
    let mut acc = DenseAccumulator::new(sig);
    let values = d
        .values
        .iter()
        .zip(&lap.values)
        .map(|(dv, lv)| {
            acc.add_left_blade(1, Complex64::new(2.0 * tau, 0.0), dv);
            acc.add_left_blade(bivector, Complex64::new(-tau * tau, 0.0), lv);
            acc.take()
        })
        .collect();
    Ok(CliffordField { grid, values })
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTau(tau))
    }
}

/// Sup-norm of `[next + prev - 2 curr] / tau^2 - Delta_h curr`.
pub fn kg_residual(
    prev: &CliffordField,
    curr: &CliffordField,
    next: &CliffordField,
    tau: f64,
) -> Result<f64> {
    second_difference_residual(prev, curr, next, tau, -1.0)
}

/// Sup-norm of `[next + prev - 2 curr] / tau^2 + Delta_h curr`, the discrete
/// space-time Laplace equation.
pub fn harmonic_residual(
    prev: &CliffordField,
    curr: &CliffordField,
    next: &CliffordField,
    tau: f64,
) -> Result<f64> {
    second_difference_residual(prev, curr, next, tau, 1.0)
}

fn second_difference_residual(
    prev: &CliffordField,
    curr: &CliffordField,
    next: &CliffordField,
    tau: f64,
    lap_sign: f64,
) -> Result<f64> {
    check_tau(tau)?;
    curr.check(prev)?;
    curr.check(next)?;
    let lap = laplacian(curr);
    let inv_t2 = 1.0 / (tau * tau);
    let mut worst: f64 = 0.0;
    for i in 0..curr.grid.site_count() {
        let mut r = &next.values[i] + &prev.values[i];
        r += &curr.values[i].scale(-2.0);
        let mut r = r.scale(inv_t2);
        r += &lap.values[i].scale(lap_sign);
        worst = worst.max(r.norm_inf());
    }
    Ok(worst)
}

/// `e_0 [next - prev]/(2 tau) + e_{2n+1} [2 curr - next - prev]/(2 tau)`.
pub fn clifford_time_difference(
    prev: &CliffordField,
    curr: &CliffordField,
    next: &CliffordField,
    tau: f64,
) -> Result<CliffordField> {
    check_tau(tau)?;
    curr.check(prev)?;
    curr.check(next)?;
    let sig = curr.grid.signature();
    let e0 = Multivector::generator(sig, 0)?;
    let etop = Multivector::generator(sig, sig.top())?;
    let central = next.try_sub(prev)?.scale(0.5 / tau);
    let second = curr.scale(2.0).try_sub(next)?.try_sub(prev)?.scale(0.5 / tau);
    central.left_mul(&e0).try_add(&second.left_mul(&etop))
}

/// Witt-basis form `e_- [curr - prev]/tau - e_+ [next - curr]/tau`.
pub fn witt_time_difference(
    prev: &CliffordField,
    curr: &CliffordField,
    next: &CliffordField,
    tau: f64,
) -> Result<CliffordField> {
    check_tau(tau)?;
    curr.check(prev)?;
    curr.check(next)?;
    let sig = curr.grid.signature();
    let backward = curr.try_sub(prev)?.scale(1.0 / tau);
    let forward = next.try_sub(curr)?.scale(1.0 / tau);
    backward
        .left_mul(&Multivector::witt_minus(sig))
        .try_sub(&forward.left_mul(&Multivector::witt_plus(sig)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid1(points: usize) -> LatticeGrid {
        LatticeGrid::new(1, points, 1.0).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(LatticeGrid::new(1, 5, 1.0).is_err());
        assert!(LatticeGrid::new(1, 2, 1.0).is_err());
        assert!(LatticeGrid::new(1, 8, 0.0).is_err());
        assert!(LatticeGrid::new(0, 8, 1.0).is_err());
        let g = LatticeGrid::new(2, 8, 0.5).unwrap();
        assert_eq!(g.site_count(), 64);
        for i in 0..g.site_count() {
            assert_eq!(g.index(&g.coords(i)), i);
        }
    }

    #[test]
    fn frequencies_in_brillouin_zone() {
        let g = LatticeGrid::new(1, 8, 0.5).unwrap();
        let h = g.spacing();
        for m in 0..8 {
            let xi = g.frequency(m);
            assert!(xi > -PI / h && xi <= PI / h + 1e-12);
        }
        assert!((g.frequency(7) - PI / h).abs() < 1e-12);
    }

    #[test]
    fn shift_roundtrips() {
        let g = LatticeGrid::new(2, 4, 1.0).unwrap();
        let f = CliffordField::scalar_fn(g, |x| Complex64::new(x[0] as f64, x[1] as f64));
        let back = shift(&shift(&f, 1, 1).unwrap(), 1, -1).unwrap();
        assert_eq!(back, f);
        let mut g4 = f.clone();
        for _ in 0..4 {
            g4 = shift(&g4, 2, 1).unwrap();
        }
        assert_eq!(g4, f);
        let constant = CliffordField::scalar_fn(g, |_| Complex64::new(3.0, 0.0));
        assert_eq!(shift(&constant, 1, 1).unwrap(), constant);
        assert!(matches!(shift(&f, 3, 1), Err(Error::AxisOutOfRange { .. })));
        assert!(shift(&f, 0, 1).is_err());
        // g(x) = f(x + e_1)
        assert_eq!(shift(&f, 1, 1).unwrap().at(&[0, 2]), f.at(&[1, 2]));
    }

    #[test]
    fn laplacian_stencil() {
        let g = grid1(4);
        let constant = CliffordField::scalar_fn(g, |_| Complex64::new(1.5, -2.0));
        assert_eq!(laplacian(&constant).sup_norm(), 0.0);

        let d = laplacian(&CliffordField::delta(g));
        assert_eq!(d.at(&[0]).scalar_part(), Complex64::new(-2.0, 0.0));
        assert_eq!(d.at(&[1]).scalar_part(), Complex64::new(1.0, 0.0));
        assert_eq!(d.at(&[3]).scalar_part(), Complex64::new(1.0, 0.0));
        assert!(d.at(&[2]).is_zero());

        // e^{i pi x / 2} on N = 4 is an eigenvector with eigenvalue -4 sin^2(pi/4) = -2.
        let wave = CliffordField::scalar_fn(g, |x| Complex64::from_polar(1.0, PI * x[0] as f64 / 2.0));
        let lap = laplacian(&wave);
        assert!(lap.distance(&wave.scale(-2.0)).unwrap() < 1e-15);
    }

    #[test]
    fn dirac_stencil() {
        let g = grid1(4);
        let sig = g.signature();
        let constant = CliffordField::scalar_fn(g, |_| Complex64::new(1.0, 1.0));
        assert!(dirac(&constant).sup_norm() == 0.0);

        let d = dirac(&CliffordField::delta(g));
        let half = Complex64::new(0.5, 0.0);
        // site +1 (index 1) sees delta at x - h: e_1 (0 - 1)/2 + e_2 (0 - 0 - 1)/2
        let expect_plus = Multivector::from_terms(sig, [(0b10, -half), (0b100, -half)]).unwrap();
        let expect_minus = Multivector::from_terms(sig, [(0b10, half), (0b100, -half)]).unwrap();
        let expect_origin = Multivector::blade(sig, 0b100, Complex64::new(1.0, 0.0));
        assert_eq!(d.at(&[1]), &expect_plus);
        assert_eq!(d.at(&[3]), &expect_minus);
        assert_eq!(d.at(&[0]), &expect_origin);
        assert!(d.at(&[2]).is_zero());
    }

    #[test]
    fn residual_formulas() {
        let g = grid1(8);
        let c = CliffordField::scalar_fn(g, |_| Complex64::new(2.0, 0.0));
        assert_eq!(kg_residual(&c, &c, &c, 0.3).unwrap(), 0.0);

        let curr = CliffordField::scalar_fn(g, |x| Complex64::new((x[0] as f64).sin(), 0.5));
        let zero = CliffordField::zeros(g);
        let expected = curr.scale(-2.0).try_sub(&laplacian(&curr)).unwrap().sup_norm();
        let got = kg_residual(&zero, &curr, &zero, 1.0).unwrap();
        assert!((got - expected).abs() < 1e-15);

        let other = CliffordField::zeros(LatticeGrid::new(1, 4, 1.0).unwrap());
        assert_eq!(kg_residual(&other, &curr, &zero, 1.0), Err(Error::GridMismatch));
        assert!(kg_residual(&zero, &curr, &zero, 0.0).is_err());
    }

    #[test]
    fn evolution_kills_constants() {
        let g = LatticeGrid::new(2, 4, 0.7).unwrap();
        let c = CliffordField::scalar_fn(g, |_| Complex64::new(1.0, 2.0));
        assert_eq!(evolution_operator(&c, 0.1).unwrap().sup_norm(), 0.0);
        assert!(evolution_operator(&c, -0.1).is_err());
    }
}
