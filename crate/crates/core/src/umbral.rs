//! Univariate polynomials, finite-difference stencils in `t`, and the basic
//! sequence of the delta operator `2 sinh(tau d/dt)`.
//!
//! `2 sinh(tau d/dt) p(t) = p(t + tau) - p(t - tau)`, so everything here is
//! exact coefficient arithmetic. The generic parameter lets the same code run
//! over `f64` and exact rationals.

use std::fmt;

use num_traits::{FromPrimitive, Num};

/// Dense polynomial, ascending powers; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

/// Binomial coefficient as `T`, built by the additive recurrence so it stays
/// exact for rationals.
fn binomial_row<T: Num + Clone>(n: usize) -> Vec<T> {
    let mut row = vec![T::one()];
    for _ in 0..n {
        let mut next = vec![T::one(); row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1].clone() + row[i].clone();
        }
        row = next;
    }
    row
}

impl<T: Num + Clone> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c t^k`.
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> T {
        self.coeffs.get(j).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, t: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|j| self.coeff(j) - other.coeff(j)).collect())
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `p(t / s)`: coefficient `j` divided by `s^j`.
    pub fn rescale(&self, s: T) -> Self {
        let mut factor = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() / factor.clone());
            factor = factor * s.clone();
        }
        Self::new(out)
    }
}

impl<T: Num + Clone + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{j}")?,
            }
        }
        Ok(())
    }
}

/// `p(t + c)` by binomial expansion.
pub fn shift_poly<T: Num + Clone>(p: &Polynomial<T>, c: T) -> Polynomial<T> {
    let Some(deg) = p.degree() else {
        return Polynomial::zero();
    };
    let mut out = vec![T::zero(); deg + 1];
    for (j, a) in p.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let row = binomial_row::<T>(j);
        // (t + c)^j = sum_i C(j, i) c^(j - i) t^i
        let mut cpow = T::one();
        for i in (0..=j).rev() {
            out[i] = out[i].clone() + a.clone() * row[i].clone() * cpow.clone();
            cpow = cpow * c.clone();
        }
    }
    Polynomial::new(out)
}

/// `2 sinh(tau d/dt) p = p(t + tau) - p(t - tau)`.
pub fn delta_apply<T: Num + Clone>(p: &Polynomial<T>, tau: T) -> Polynomial<T> {
    let minus = T::zero() - tau.clone();
    shift_poly(p, tau).sub(&shift_poly(p, minus))
}

/// A finite-difference operator in `t`: `(L p)(t) = sum_i w_i p(t + o_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil<T> {
    taps: Vec<(T, T)>,
}

impl<T: Num + Clone> Stencil<T> {
    /// `(offset, weight)` pairs.
    pub fn new(taps: Vec<(T, T)>) -> Self {
        Self { taps }
    }

    pub fn taps(&self) -> &[(T, T)] {
        &self.taps
    }

    /// The stencil of `2 sinh(tau d/dt)`: offsets `+-tau`, weights `+-1`.
    pub fn two_sinh(tau: T) -> Self {
        let minus = T::zero() - tau.clone();
        Self::new(vec![(tau, T::one()), (minus, T::zero() - T::one())])
    }

    pub fn apply(&self, p: &Polynomial<T>) -> Polynomial<T> {
        self.taps
            .iter()
            .fold(Polynomial::zero(), |acc, (o, w)| {
                acc.add(&shift_poly(p, o.clone()).scale(w.clone()))
            })
    }

    /// Coefficients `b_k` of `L = sum_k b_k (d/dt)^k / k!`, i.e.
    /// `b_k = [L t^k]_{t = 0}` for `k = 0..=kmax`.
    pub fn delta_coefficients(&self, kmax: usize) -> Vec<T> {
        (0..=kmax)
            .map(|k| self.apply(&Polynomial::monomial(k, T::one())).eval(T::zero()))
            .collect()
    }
}

/// Basic sequence of `2 sinh(d/du)` for `k = 0..=kmax`: `G_0 = 1`,
/// `G_k(0) = 0` and `G_k(u + 1) - G_k(u - 1) = k G_{k-1}(u)`.
///
/// Each step is an upper-triangular solve on the coefficients, using
/// `(u + 1)^j - (u - 1)^j = sum_{j - i odd} 2 C(j, i) u^i`.
pub fn gould_unit_sequence<T: Num + Clone + FromPrimitive>(kmax: usize) -> Vec<Polynomial<T>> {
    let rows: Vec<Vec<T>> = (0..=kmax).map(binomial_row::<T>).collect();
    let two = T::one() + T::one();
    let mut seq = vec![Polynomial::constant(T::one())];
    for k in 1..=kmax {
        let kt = T::from_usize(k).expect("small integer fits");
        let target = seq[k - 1].scale(kt);
        let mut c = vec![T::zero(); k + 1];
        for j in (1..=k).rev() {
            let mut rhs = target.coeff(j - 1);
            for jp in (j + 2..=k).step_by(2) {
                // only j' with j' - (j - 1) odd contribute to u^(j-1)
                rhs = rhs - two.clone() * rows[jp][j - 1].clone() * c[jp].clone();
            }
            let jt = T::from_usize(j).expect("small integer fits");
            c[j] = rhs / (two.clone() * jt);
        }
        seq.push(Polynomial::new(c));
    }
    seq
}

/// `G_k(t; -tau, 2tau)` for `k = 0..=kmax`, the basic sequence of
/// `2 sinh(tau d/dt)` in the variable `t`.
pub fn gould_sequence<T: Num + Clone + FromPrimitive>(kmax: usize, tau: T) -> Vec<Polynomial<T>> {
    gould_unit_sequence::<T>(kmax)
        .into_iter()
        .map(|p| p.rescale(tau.clone()))
        .collect()
}

/// `G_k(t; -tau, 2tau)`.
pub fn gould(k: usize, tau: f64) -> Polynomial<f64> {
    gould_sequence(k, tau).pop().expect("sequence is nonempty")
}

/// Even and odd partial sums of `sum_{k <= kmax} G_k(t) z^k / k!`.
///
/// For `|z| < 2` they converge to `cosh(u asinh(z/2))` and
/// `sinh(u asinh(z/2))` with `u = t / tau`.
pub fn egf_partial_sums(t: f64, tau: f64, z: f64, kmax: usize) -> (f64, f64) {
    let u = t / tau;
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut zk_over_fact = 1.0;
    for (k, g) in gould_unit_sequence::<f64>(kmax).iter().enumerate() {
        if k > 0 {
            zk_over_fact *= z / k as f64;
        }
        let term = g.eval(u) * zk_over_fact;
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    (even, odd)
}
