//! Truncated power series in one complex variable.
//!
//! A [`TruncatedSeries`] stores the Taylor coefficients `f_0, ..., f_N` of an
//! entire function together with an advisory `tail_bound`. The tail bound is
//! the ℓ¹ mass of the coefficients that were discarded by truncation, which
//! bounds the sup of the discarded part over the closed unit disk. It is an
//! estimate carried for attribution, never a rigorous error bound.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Default degree cap for series built by the higher layers.
pub const DEFAULT_DEGREE_CAP: usize = 40;

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl TruncatedSeries {
    /// Builds a series from coefficients, index `k` holding the coefficient of `z^k`.
    ///
    /// An empty list is treated as the zero series of cap 0.
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Range { k });
        }
        Ok(TruncatedSeries { coeffs, tail_bound: 0.0 })
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        let coeffs = if coeffs.is_empty() {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect()
        };
        TruncatedSeries { coeffs, tail_bound: 0.0 }
    }

    pub fn zero(cap: usize) -> Self {
        TruncatedSeries { coeffs: vec![Complex64::new(0.0, 0.0); cap + 1], tail_bound: 0.0 }
    }

    pub fn constant(c: Complex64, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = c;
        s
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), cap)
    }

    /// `c z^k` with the given cap; if `k > cap` the term lands in the tail.
    pub fn monomial(k: usize, c: Complex64, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = c;
        } else {
            s.tail_bound = c.norm();
        }
        s
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn with_tail_bound(mut self, tail_bound: f64) -> Self {
        self.tail_bound = tail_bound;
        self
    }

    /// Index of the highest nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Re-caps the series. Shrinking moves the dropped ℓ¹ mass into the tail.
    pub fn with_cap(&self, cap: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        let mut tail = self.tail_bound;
        if cap + 1 < coeffs.len() {
            tail += coeffs[cap + 1..].iter().map(|c| c.norm()).sum::<f64>();
            coeffs.truncate(cap + 1);
        } else {
            coeffs.resize(cap + 1, Complex64::new(0.0, 0.0));
        }
        TruncatedSeries { coeffs, tail_bound: tail }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            tail_bound: self.tail_bound * c.norm(),
        }
    }

    pub fn l1_mass(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Cauchy product truncated at `cap`.
    ///
    /// Dropped product coefficients and the cross terms with each operand's
    /// tail are added to the tail bound.
    pub fn mul(&self, other: &Self, cap: usize) -> Self {
        let n = self.coeffs.len();
        let m = other.coeffs.len();
        let full = n + m - 2;
        let keep = cap.min(full);
        let mut out = vec![Complex64::new(0.0, 0.0); cap + 1];
        let mut dropped = 0.0;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k <= keep {
                    out[k] += a * b;
                } else {
                    dropped += (a * b).norm();
                }
            }
        }
        let tail = dropped
            + self.l1_mass() * other.tail_bound
            + other.l1_mass() * self.tail_bound
            + self.tail_bound * other.tail_bound;
        TruncatedSeries { coeffs: out, tail_bound: tail }
    }

    /// Coefficients of `z ↦ f(z - a)`.
    ///
    /// Repeated synthetic division (Taylor shift); exact on the stored
    /// polynomial up to round-off, so the cap and tail are unchanged.
    pub fn shift(&self, a: ComplexPoint) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if a != Complex64::new(0.0, 0.0) {
            let h = -a;
            for i in 0..n.saturating_sub(1) {
                for j in (i..n - 1).rev() {
                    let next = c[j + 1];
                    c[j] += h * next;
                }
            }
        }
        TruncatedSeries { coeffs: c, tail_bound: self.tail_bound }
    }

    /// Taylor series of `e^{c z}` up to degree `cap`.
    pub fn exp_linear(c: Complex64, cap: usize) -> Self {
        let mut coeffs = Vec::with_capacity(cap + 1);
        let mut term = Complex64::new(1.0, 0.0);
        coeffs.push(term);
        for k in 1..=cap {
            term = term * c / k as f64;
            coeffs.push(term);
        }
        TruncatedSeries { coeffs, tail_bound: exp_remainder(c.norm(), cap) }
    }

    /// Horner evaluation of the stored polynomial.
    pub fn evaluate(&self, z: ComplexPoint) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value, first and second derivative at `z` in one Horner pass.
    pub fn evaluate_with_derivatives(&self, z: ComplexPoint) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut p, mut d1, mut d2) = (zero, zero, zero);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * z + d1;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        (p, d1, d2 * 2.0)
    }

    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n == 1 {
            return Self::zero(0);
        }
        let coeffs = (1..n).map(|k| self.coeffs[k] * k as f64).collect();
        TruncatedSeries { coeffs, tail_bound: self.tail_bound }
    }

    /// `f(g(z))` truncated at `cap`, evaluated by Horner's rule in series space.
    ///
    /// Each truncated product only needs input coefficients up to `cap`, so
    /// the result is exact per coefficient whenever the composition converges.
    pub fn compose(&self, inner: &Self, cap: usize) -> Self {
        let inner = inner.with_cap(cap);
        let mut acc = Self::zero(cap);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner, cap);
            acc.coeffs[0] += c;
        }
        acc.tail_bound += self.tail_bound;
        acc
    }

    /// Largest coefficientwise distance, comparing beyond either cap as zero.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).norm()).fold(0.0, f64::max)
    }
}

/// ℓ¹ remainder `Σ_{k>cap} r^k/k!` of the exponential series.
pub(crate) fn exp_remainder(r: f64, cap: usize) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    // log of r^{cap+1}/(cap+1)!
    let k0 = cap + 1;
    let mut log_term = k0 as f64 * r.ln() - crate::special::ln_factorial(k0);
    let mut sum = 0.0;
    let mut k = k0;
    loop {
        let term = log_term.exp();
        sum += term;
        k += 1;
        log_term += r.ln() - (k as f64).ln();
        if (k as f64 > r && log_term.exp() <= sum * 1e-17) || k > k0 + 100_000 {
            break;
        }
    }
    sum
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("degree_cap", &self.degree_cap())
            .field("tail_bound", &self.tail_bound)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        TruncatedSeries { coeffs, tail_bound: self.tail_bound + rhs.tail_bound }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        TruncatedSeries { coeffs, tail_bound: self.tail_bound + rhs.tail_bound }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Product at the smaller of the two caps.
impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs, self.degree_cap().min(rhs.degree_cap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn add_cancels_and_keeps_larger_cap() {
        let f = TruncatedSeries::from_real(&[1.0, 1.0]);
        let g = TruncatedSeries::from_real(&[1.0, -1.0, 0.0]);
        let s = &f + &g;
        assert_eq!(s.degree_cap(), 2);
        assert_eq!(s.coeffs(), &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);

        let z2 = TruncatedSeries::monomial(2, c(1.0, 0.0), 2);
        let z2x3 = TruncatedSeries::monomial(2, c(3.0, 0.0), 2);
        assert_eq!((&z2 + &z2x3).coeff(2), c(4.0, 0.0));
        assert_eq!(&z2 + &TruncatedSeries::zero(2), z2);
    }

    #[test]
    fn mul_truncates_and_records_tail() {
        let f = TruncatedSeries::from_real(&[1.0, 1.0]);
        let g = TruncatedSeries::from_real(&[1.0, -1.0]);
        let p = f.mul(&g, 2);
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p.tail_bound(), 0.0);

        let one = TruncatedSeries::one(1);
        assert_eq!(&f * &one, f);

        let z = TruncatedSeries::monomial(1, c(1.0, 0.0), 1);
        let zz = z.mul(&z, 1);
        assert!(zz.is_zero());
        assert_eq!(zz.tail_bound(), 1.0);
    }

    #[test]
    fn shift_binomial() {
        let z2 = TruncatedSeries::from_real(&[0.0, 0.0, 1.0]);
        let s = z2.shift(c(1.0, 0.0));
        assert_eq!(s.coeffs(), &[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(z2.shift(c(0.0, 0.0)), z2);

        let z3 = TruncatedSeries::from_real(&[0.0, 0.0, 0.0, 1.0]);
        let i = c(0.0, 1.0);
        assert!(z3.shift(i).evaluate(i).norm() < 1e-15);
    }

    #[test]
    fn exp_linear_coefficients() {
        assert_eq!(TruncatedSeries::exp_linear(c(0.0, 0.0), 5), TruncatedSeries::one(5));
        let e2 = TruncatedSeries::exp_linear(c(2.0, 0.0), 5);
        assert!((e2.coeff(3) - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
        let e1 = TruncatedSeries::exp_linear(c(1.0, 0.0), 20);
        assert!((e1.evaluate(c(1.0, 0.0)).re - std::f64::consts::E).abs() < 1e-12);
        // 1/21! + 1/22! + ...
        assert!((e1.tail_bound() - 2.0502980686246613e-20).abs() < 1e-30);
    }

    #[test]
    fn evaluate_horner() {
        let z3 = TruncatedSeries::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert!((z3.evaluate(c(0.0, 1.0)) - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(TruncatedSeries::one(4).evaluate(c(3.0, -7.0)), c(1.0, 0.0));

        // Normalized kernel at a = 0.5, alpha = 1: exp(z/2 - 1/8).
        let ka = TruncatedSeries::exp_linear(c(0.5, 0.0), 40).scale(c((-0.125f64).exp(), 0.0));
        let v = ka.evaluate(c(0.5, 0.0));
        assert!((v.re - 0.125f64.exp()).abs() < 1e-10 && v.im.abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_formula() {
        let f = TruncatedSeries::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        let z = c(0.3, -0.7);
        let (v, d1, d2) = f.evaluate_with_derivatives(z);
        assert!((v - f.evaluate(z)).norm() < 1e-14);
        assert!((d1 - f.derivative().evaluate(z)).norm() < 1e-14);
        assert!((d2 - f.derivative().derivative().evaluate(z)).norm() < 1e-14);
    }

    #[test]
    fn compose_with_polynomial() {
        // (1 + w)^2 with w = z + z^2  ->  1 + 2z + 3z^2 + 2z^3 + z^4
        let f = TruncatedSeries::from_real(&[1.0, 2.0, 1.0]);
        let g = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]);
        let h = f.compose(&g, 4);
        let want = [1.0, 2.0, 3.0, 2.0, 1.0];
        for (k, w) in want.iter().enumerate() {
            assert!((h.coeff(k) - c(*w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            TruncatedSeries::new(vec![c(1.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::Range { k: 1 })
        ));
    }

    #[test]
    fn with_cap_moves_mass_to_tail() {
        let f = TruncatedSeries::from_real(&[1.0, -2.0, 3.0]);
        let g = f.with_cap(0);
        assert_eq!(g.degree_cap(), 0);
        assert_eq!(g.tail_bound(), 5.0);
        assert_eq!(f.with_cap(5).degree_cap(), 5);
    }
}
