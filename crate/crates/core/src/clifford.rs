//! Complex Clifford algebra Cl(n+1, n+1).
//!
//! Generators are indexed `0..=2n+1`. Generators `e_0 ..= e_n` square to -1 and
//! `e_{n+1} ..= e_{2n+1}` square to +1; distinct generators anticommute. A blade
//! is stored as a bitmask with bit `j` standing for `e_j`, the factors taken in
//! increasing index order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Blade bitmask. With `n <= 14` the `2n + 2` generators fit in 32 bits.
pub type BladeMask = u32;

const MAX_DIM: usize = 14;

/// Signature of Cl(n+1, n+1) for spatial dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    n: usize,
}

impl Signature {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n > MAX_DIM {
            return Err(Error::InvalidGrid(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        Ok(Self { n })
    }

    /// Spatial dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of generators, `2n + 2`.
    pub fn generator_count(&self) -> usize {
        2 * self.n + 2
    }

    /// Index of the last generator, `2n + 1`.
    pub fn top(&self) -> usize {
        2 * self.n + 1
    }

    /// `e_j^2`: -1 for `j <= n`, +1 above.
    pub fn square(&self, j: usize) -> i32 {
        if j <= self.n {
            -1
        } else {
            1
        }
    }

    pub fn is_valid_mask(&self, mask: BladeMask) -> bool {
        (mask >> self.generator_count()) == 0
    }

    /// Product of two basis blades as an exact integer sign and a result blade.
    pub fn blade_product(&self, a: BladeMask, b: BladeMask) -> (i32, BladeMask) {
        let mut sign = reorder_sign(a, b);
        let mut common = a & b;
        while common != 0 {
            let j = common.trailing_zeros() as usize;
            sign *= self.square(j);
            common &= common - 1;
        }
        (sign, a ^ b)
    }
}

/// Sign picked up when the generators of `b` are moved past those of `a`.
fn reorder_sign(a: BladeMask, b: BladeMask) -> i32 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sparse complex-coefficient multivector.
///
/// Terms with coefficient exactly zero are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    sig: Signature,
    terms: BTreeMap<BladeMask, Complex64>,
}

impl Multivector {
    pub fn zero(sig: Signature) -> Self {
        Self {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: Signature, c: impl Into<Complex64>) -> Self {
        Self::blade(sig, 0, c.into())
    }

    /// `c * e_A` for blade mask `A`. Masks outside the signature are rejected by
    /// [`Multivector::from_terms`]; here they are a programming error.
    pub fn blade(sig: Signature, mask: BladeMask, c: Complex64) -> Self {
        assert!(sig.is_valid_mask(mask), "blade mask {mask:#b} invalid for n = {}", sig.n);
        let mut terms = BTreeMap::new();
        if c != Complex64::new(0.0, 0.0) {
            terms.insert(mask, c);
        }
        Self { sig, terms }
    }

    /// Unit generator `e_j`.
    pub fn generator(sig: Signature, j: usize) -> Result<Self> {
        if j >= sig.generator_count() {
            return Err(Error::GeneratorOutOfRange {
                index: j,
                n: sig.n,
                count: sig.generator_count(),
            });
        }
        Ok(Self::blade(sig, 1 << j, Complex64::new(1.0, 0.0)))
    }

    /// Witt element `e_+ = (e_{2n+1} - e_0) / 2`.
    pub fn witt_plus(sig: Signature) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let mut m = Self::blade(sig, 1 << sig.top(), half);
        m.accumulate(1, -half);
        m
    }

    /// Witt element `e_- = (e_{2n+1} + e_0) / 2`.
    pub fn witt_minus(sig: Signature) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let mut m = Self::blade(sig, 1 << sig.top(), half);
        m.accumulate(1, half);
        m
    }

    pub fn from_terms<I>(sig: Signature, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BladeMask, Complex64)>,
    {
        let mut m = Self::zero(sig);
        for (mask, c) in terms {
            if !sig.is_valid_mask(mask) {
                return Err(Error::GeneratorOutOfRange {
                    index: (BladeMask::BITS - mask.leading_zeros() - 1) as usize,
                    n: sig.n,
                    count: sig.generator_count(),
                });
            }
            m.accumulate(mask, c);
        }
        Ok(m)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing blade-mask order.
    pub fn terms(&self) -> impl Iterator<Item = (BladeMask, Complex64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, mask: BladeMask) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coefficient(0)
    }

    /// Adds `c` to the coefficient of `mask`, dropping the term if it cancels exactly.
    pub fn accumulate(&mut self, mask: BladeMask, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(mask) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == Complex64::new(0.0, 0.0) {
                    slot.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch {
                left: self.sig.n,
                right: other.sig.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.accumulate(m, c);
        }
        Ok(out)
    }

    /// Geometric product `self * other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.sig);
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &other.terms {
                let (sign, mask) = self.sig.blade_product(a, b);
                out.accumulate(mask, ca * cb * f64::from(sign));
            }
        }
        Ok(out)
    }

    /// `c * e_mask * self`, the left action of a single blade.
    pub fn left_blade(&self, mask: BladeMask, c: Complex64) -> Self {
        let mut out = Self::zero(self.sig);
        out.add_left_blade(mask, c, self);
        out
    }

    /// `self += c * e_mask * src` in place.
    pub fn add_left_blade(&mut self, mask: BladeMask, c: Complex64, src: &Self) {
        debug_assert_eq!(self.sig, src.sig);
        for (&b, &cb) in &src.terms {
            let (sign, m) = self.sig.blade_product(mask, b);
            self.accumulate(m, c * cb * f64::from(sign));
        }
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut out = Self::zero(self.sig);
        for (&m, &v) in &self.terms {
            out.accumulate(m, v * c);
        }
        out
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `norm_inf(self - other)` without allocating the difference.
    pub fn distance_inf(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (&m, &c) in &self.terms {
            worst = worst.max((c - other.coefficient(m)).norm());
        }
        for (&m, &c) in &other.terms {
            if !self.terms.contains_key(&m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }
}

/// Dense scratch accumulator for sums of blade actions at one site, reused
/// across sites to avoid per-term map updates.
#[derive(Debug, Clone)]
pub(crate) struct DenseAccumulator {
    sig: Signature,
    coeffs: Vec<Complex64>,
    touched: Vec<BladeMask>,
}

impl DenseAccumulator {
    pub(crate) fn new(sig: Signature) -> Self {
        Self {
            sig,
            coeffs: vec![Complex64::new(0.0, 0.0); 1 << sig.generator_count()],
            touched: Vec::new(),
        }
    }

    fn add_term(&mut self, mask: BladeMask, c: Complex64) {
        let slot = &mut self.coeffs[mask as usize];
        if *slot == Complex64::new(0.0, 0.0) {
            self.touched.push(mask);
        }
        *slot += c;
    }

    /// `+= c * src`.
    pub(crate) fn add(&mut self, c: Complex64, src: &Multivector) {
        for (&m, &v) in &src.terms {
            self.add_term(m, c * v);
        }
    }

    /// `+= c * e_mask * src`.
    pub(crate) fn add_left_blade(&mut self, mask: BladeMask, c: Complex64, src: &Multivector) {
        for (&b, &v) in &src.terms {
            let (sign, m) = self.sig.blade_product(mask, b);
            self.add_term(m, c * v * f64::from(sign));
        }
    }

    /// Returns the sum and resets the accumulator.
    pub(crate) fn take(&mut self) -> Multivector {
        let mut out = Multivector::zero(self.sig);
        for m in self.touched.drain(..) {
            let c = std::mem::replace(&mut self.coeffs[m as usize], Complex64::new(0.0, 0.0));
            if c != Complex64::new(0.0, 0.0) {
                out.terms.insert(m, c);
            }
        }
        out
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    let num = |f: &mut fmt::Formatter<'_>, x: f64| match f.precision() {
        Some(p) => write!(f, "{x:.p$}"),
        None => write!(f, "{x}"),
    };
    // -0.0 prints as 0
    let (re, im) = (c.re + 0.0, c.im + 0.0);
    if im == 0.0 {
        num(f, re)
    } else if re == 0.0 {
        num(f, im)?;
        write!(f, "i")
    } else {
        write!(f, "(")?;
        num(f, re)?;
        write!(f, "{}", if im < 0.0 { "-" } else { "+" })?;
        num(f, im.abs())?;
        write!(f, "i)")
    }
}

/// Terms in blade order, e.g. `1.04 + 0.2 e0_2 + (0.5-1i) e1`; honours a
/// precision such as `{:.3}`.
impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write_coefficient(f, c)?;
            if m == 0 {
                continue;
            }
            write!(f, " e")?;
            let mut rest = m;
            let mut first = true;
            while rest != 0 {
                let j = rest.trailing_zeros();
                if !first {
                    write!(f, "_")?;
                }
                write!(f, "{j}")?;
                first = false;
                rest &= rest - 1;
            }
        }
        Ok(())
    }
}

// Operator forms panic on signature mismatch; use the `try_*` / `product`
// methods where that can happen.

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("signature mismatch in Multivector addition")
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.sig, rhs.sig, "signature mismatch in Multivector addition");
        for (m, c) in rhs.terms() {
            self.accumulate(m, c);
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.product(rhs).expect("signature mismatch in geometric product")
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        &self * &rhs
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sig(n: usize) -> Signature {
        Signature::new(n).unwrap()
    }

    #[test]
    fn generator_range() {
        let s = sig(1);
        assert_eq!(Multivector::generator(s, 0).unwrap().coefficient(0b1), c(1.0, 0.0));
        assert_eq!(Multivector::generator(s, 3).unwrap().coefficient(0b1000), c(1.0, 0.0));
        assert!(matches!(
            Multivector::generator(s, 4),
            Err(Error::GeneratorOutOfRange { index: 4, .. })
        ));
        assert_eq!(Signature::new(0), Err(Error::ZeroDimension));
    }

    #[test]
    fn signature_counts() {
        for n in 1..5 {
            let s = sig(n);
            let neg = (0..s.generator_count()).filter(|&j| s.square(j) == -1).count();
            assert_eq!(neg, n + 1);
            assert_eq!(s.generator_count() - neg, n + 1);
        }
    }

    #[test]
    fn generator_squares() {
        let s = sig(2);
        let e0 = Multivector::generator(s, 0).unwrap();
        let e3 = Multivector::generator(s, 3).unwrap();
        assert_eq!(&e0 * &e0, Multivector::scalar(s, -1.0));
        assert_eq!(&e3 * &e3, Multivector::scalar(s, 1.0));
    }

    #[test]
    fn basic_arithmetic() {
        let s = sig(1);
        let e0 = Multivector::generator(s, 0).unwrap();
        let e1 = Multivector::generator(s, 1).unwrap();
        assert!((&e0 + &e0.scale(-1.0)).is_zero());
        let ie1 = e1.scale(c(0.0, 1.0));
        assert_eq!(&ie1 * &ie1, Multivector::scalar(s, 1.0));
        assert_eq!((&e0 + &e1.scale(2.0)).norm_inf(), 2.0);
        let one = Multivector::scalar(s, 1.0);
        let m = &(&e0 * &e1) + &e1.scale(c(0.5, -2.0));
        assert_eq!(&one * &m, m);
    }

    #[test]
    fn witt_pair() {
        for n in 1..4 {
            let s = sig(n);
            let p = Multivector::witt_plus(s);
            let m = Multivector::witt_minus(s);
            assert!((&p * &p).is_zero());
            assert!((&m * &m).is_zero());
            assert_eq!(&(&p * &m) + &(&m * &p), Multivector::scalar(s, 1.0));
            // e_- - e_+ = e_0 and e_- + e_+ = e_{2n+1}
            assert_eq!(&m - &p, Multivector::generator(s, 0).unwrap());
            assert_eq!(&m + &p, Multivector::generator(s, s.top()).unwrap());
        }
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let a = Multivector::scalar(sig(1), 1.0);
        let b = Multivector::scalar(sig(2), 1.0);
        assert!(matches!(a.product(&b), Err(Error::SignatureMismatch { .. })));
        assert!(matches!(a.try_add(&b), Err(Error::SignatureMismatch { .. })));
    }

    #[test]
    fn display_is_readable() {
        let s = sig(1);
        let m = Multivector::blade(s, 0b101, c(2.0, 0.0));
        assert_eq!(m.to_string(), "2 e0_2");
        let z = &Multivector::scalar(s, c(-0.0, 0.0)) + &Multivector::blade(s, 0b10, c(0.5, -1.0));
        assert_eq!(z.to_string(), "(0.5-1i) e1");
        assert_eq!(format!("{:.2}", Multivector::scalar(s, c(0.0, 1.0 / 3.0))), "0.33i");
    }
}
