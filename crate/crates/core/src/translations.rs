//! Weighted translations `T_a f(z) = e^{α z ā - α|a|²/2} f(z - a)` and the
//! Heisenberg group they realize.
//!
//! Composition picks up the unimodular cocycle `T_a T_b = e^{-iα Im(a·b̄)} T_{a+b}`,
//! which is why the translations do not form a group by themselves and the
//! phase has to be tracked through `(z, t) ↦ e^{iαt} T_z`.

use std::ops::{Add, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{norm_closed, p_norm, Exponent, FockParams, QuadratureGrid};
use crate::series::{ComplexPoint, TruncatedSeries};

/// Beyond `α|a|² > 6` function-level checks are skipped; `e^{α|a|²/2}`
/// amplifies truncation error past double precision.
pub const FUNCTION_LEVEL_LIMIT: f64 = 6.0;

/// A point of `ℂⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(pub Vec<Complex64>);

impl CVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("vector needs at least one component".into()));
        }
        Ok(CVector(components))
    }

    pub fn line(z: Complex64) -> Self {
        CVector(vec![z])
    }

    pub fn zeros(n: usize) -> Self {
        CVector(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.0
    }

    /// `z·w̄ = Σ z_j w̄_j`.
    pub fn dot_conj(&self, w: &CVector) -> Result<Complex64> {
        same_dim(self, w)?;
        Ok(self.0.iter().zip(&w.0).map(|(z, w)| z * w.conj()).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        CVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Neg for &CVector {
    type Output = CVector;

    fn neg(self) -> CVector {
        CVector(self.0.iter().map(|z| -z).collect())
    }
}

pub(crate) fn same_dim(a: &CVector, b: &CVector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// Element `(z, t)` of `ℍ = ℂⁿ × ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergElement {
    pub z: CVector,
    pub t: f64,
}

impl HeisenbergElement {
    pub fn new(z: CVector, t: f64) -> Self {
        HeisenbergElement { z, t }
    }

    pub fn identity(n: usize) -> Self {
        HeisenbergElement { z: CVector::zeros(n), t: 0.0 }
    }

    pub fn inverse(&self) -> Self {
        HeisenbergElement { z: -&self.z, t: -self.t }
    }
}

/// `(z, t) ⊕ (w, s) = (z + w, t + s - Im(z·w̄))`.
pub fn heisenberg_compose(g: &HeisenbergElement, h: &HeisenbergElement) -> Result<HeisenbergElement> {
    let twist = g.z.dot_conj(&h.z)?.im;
    Ok(HeisenbergElement { z: &g.z + &h.z, t: g.t + h.t - twist })
}

/// `e^{iαt}`, the scalar part of the representation `(z, t) ↦ e^{iαt} T_z`.
pub fn representation_phase(g: &HeisenbergElement, alpha: f64) -> Complex64 {
    Complex64::from_polar(1.0, alpha * g.t)
}

/// The cocycle of `T_a T_b = c·T_{a+b}`, written as `e^{-iα Im(a·b̄)}`.
pub fn compose_phase(a: &CVector, b: &CVector, alpha: f64) -> Result<Complex64> {
    Ok(Complex64::from_polar(1.0, -alpha * a.dot_conj(b)?.im))
}

/// The same cocycle in its second form `e^{iα Im(ā·b)}`.
pub fn compose_phase_conjugate_form(a: &CVector, b: &CVector, alpha: f64) -> Result<Complex64> {
    same_dim(a, b)?;
    let abar_b: Complex64 = a.0.iter().zip(&b.0).map(|(a, b)| a.conj() * b).sum();
    Ok(Complex64::from_polar(1.0, alpha * abar_b.im))
}

/// Extra degrees allotted to `T_a f` beyond the cap of `f`:
/// `ceil(α(|a| + 1)²) + 10`.
pub fn cap_headroom(alpha: f64, a_modulus: f64) -> usize {
    (alpha * (a_modulus + 1.0).powi(2)).ceil() as usize + 10
}

/// Whether function-level (series) checks are meaningful at this shift.
pub fn function_level_ok(alpha: f64, a: ComplexPoint) -> bool {
    alpha * a.norm_sqr() <= FUNCTION_LEVEL_LIMIT
}

/// The operator `T_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTranslation {
    pub a: CVector,
    pub alpha: f64,
}

impl WeightedTranslation {
    pub fn new(a: CVector, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        Ok(WeightedTranslation { a, alpha })
    }

    pub fn on_line(a: ComplexPoint, alpha: f64) -> Result<Self> {
        Self::new(CVector::line(a), alpha)
    }

    pub fn inverse(&self) -> Self {
        WeightedTranslation { a: -&self.a, alpha: self.alpha }
    }

    fn line_point(&self) -> Result<ComplexPoint> {
        match self.a.components() {
            [a] => Ok(*a),
            other => Err(Error::InvalidParameter(format!(
                "series translation is one-dimensional, got n = {}",
                other.len()
            ))),
        }
    }

    /// Output cap for an input of cap `cap`.
    pub fn output_cap(&self, cap: usize) -> usize {
        cap + cap_headroom(self.alpha, self.a.norm_sqr().sqrt())
    }

    /// Series of `T_a f`, truncated at [`Self::output_cap`].
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        let a = self.line_point()?;
        if a == Complex64::new(0.0, 0.0) {
            return Ok(f.clone());
        }
        let cap = self.output_cap(f.degree_cap());
        let weight = TruncatedSeries::exp_linear(self.alpha * a.conj(), cap);
        let shifted = f.shift(a);
        let scale = Complex64::new((-0.5 * self.alpha * a.norm_sqr()).exp(), 0.0);
        Ok(weight.mul(&shifted, cap).scale(scale))
    }
}

/// `|‖T_a f‖_{p,α} - ‖f‖_{p,α}|`; for `p = 2` the larger of the quadrature
/// and closed-form defects.
///
/// The grid must support the cap of `T_a f`, see [`isometry_grid`].
pub fn isometry_defect(
    a: ComplexPoint,
    f: &TruncatedSeries,
    params: &FockParams,
    grid: &QuadratureGrid,
) -> Result<f64> {
    let t = WeightedTranslation::on_line(a, params.alpha)?;
    let tf = t.apply(f)?;
    let quad = (p_norm(&tf, params, grid)? - p_norm(f, params, grid)?).abs();
    if params.p == Exponent::Finite(2.0) {
        let closed = (norm_closed(&tf, params)? - norm_closed(f, params)?).abs();
        Ok(quad.max(closed))
    } else {
        Ok(quad)
    }
}

/// Grid large enough for [`isometry_defect`] on inputs of cap `cap`.
pub fn isometry_grid(alpha: f64, cap: usize, a_modulus: f64) -> Result<QuadratureGrid> {
    QuadratureGrid::new(alpha, cap + cap_headroom(alpha, a_modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::inner_product_closed;
    use crate::sampling::SeedStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_translation() {
        let f = TruncatedSeries::from_real(&[1.0, -2.0, 0.5]);
        let t = WeightedTranslation::on_line(c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(t.apply(&f).unwrap(), f);
    }

    #[test]
    fn translate_constant_and_linear() {
        let t = WeightedTranslation::on_line(c(1.0, 0.0), 1.0).unwrap();
        let one = TruncatedSeries::one(0);
        let v = t.apply(&one).unwrap().evaluate(c(1.0, 0.0));
        assert!((v - 0.5f64.exp()).norm() < 1e-10);

        let z = TruncatedSeries::from_real(&[0.0, 1.0]);
        let v = t.apply(&z).unwrap().evaluate(c(0.0, 0.0));
        assert!((v + (-0.5f64).exp()).norm() < 1e-10);
    }

    #[test]
    fn headroom_rule() {
        let t = WeightedTranslation::on_line(c(1.5, 0.0), 1.0).unwrap();
        assert_eq!(t.output_cap(40), 40 + 7 + 10);
        assert!(function_level_ok(1.0, c(2.4, 0.0)));
        assert!(!function_level_ok(1.0, c(2.5, 0.0)));
    }

    #[test]
    fn phase_examples() {
        let one = CVector::line(c(1.0, 0.0));
        let i = CVector::line(c(0.0, 1.0));
        let real_multiple = CVector::line(c(2.5, 0.0));
        assert!((compose_phase(&one, &real_multiple, 1.7).unwrap() - 1.0).norm() < 1e-15);
        let ph = compose_phase(&one, &i, 1.0).unwrap();
        assert!((ph - Complex64::from_polar(1.0, 1.0)).norm() < 1e-15);
        assert!((compose_phase_conjugate_form(&one, &i, 1.0).unwrap() - ph).norm() < 1e-15);

        let a = CVector(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let b = CVector(vec![c(0.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(compose_phase(&a, &b, 3.0).unwrap(), c(1.0, 0.0));
        assert!(compose_phase(&a, &one, 1.0).is_err());
    }

    #[test]
    fn cocycle_against_direct_application() {
        let alpha = 1.0;
        let a = c(0.4, -0.3);
        let b = c(-0.2, 0.5);
        let f = SeedStream::new(11).dense_polynomial(8, alpha);
        let ta = WeightedTranslation::on_line(a, alpha).unwrap();
        let tb = WeightedTranslation::on_line(b, alpha).unwrap();
        let tab = WeightedTranslation::on_line(a + b, alpha).unwrap();
        let lhs = ta.apply(&tb.apply(&f).unwrap()).unwrap();
        let phase = compose_phase(&CVector::line(a), &CVector::line(b), alpha).unwrap();
        let rhs = tab.apply(&f).unwrap().scale(phase);
        let cap = rhs.degree_cap();
        assert!(lhs.with_cap(cap).max_coeff_diff(&rhs) < 1e-12);
    }

    #[test]
    fn heisenberg_examples() {
        let g = HeisenbergElement::new(CVector::line(c(0.3, 0.8)), -1.2);
        let e = HeisenbergElement::identity(1);
        assert_eq!(heisenberg_compose(&g, &e).unwrap(), g);
        let back = heisenberg_compose(&g, &g.inverse()).unwrap();
        assert!(back.z.norm_sqr() < 1e-30 && back.t.abs() < 1e-15);

        let x = HeisenbergElement::new(CVector::line(c(1.0, 0.0)), 0.0);
        let y = HeisenbergElement::new(CVector::line(c(0.0, 1.0)), 0.0);
        let xy = heisenberg_compose(&x, &y).unwrap();
        assert_eq!(xy.z, CVector::line(c(1.0, 1.0)));
        assert!((xy.t - 1.0).abs() < 1e-15);
    }

    #[test]
    fn representation_half_period() {
        let alpha = 2.0;
        let g = HeisenbergElement::new(CVector::line(c(0.0, 0.0)), std::f64::consts::PI / alpha);
        assert!((representation_phase(&g, alpha) + 1.0).norm() < 1e-15);
        assert_eq!(representation_phase(&HeisenbergElement::identity(2), alpha), c(1.0, 0.0));
    }

    #[test]
    fn isometry_defects() {
        let p2 = FockParams::hilbert(1.0).unwrap();
        let one = TruncatedSeries::one(0);
        let grid = isometry_grid(1.0, 0, 1.0).unwrap();
        assert_eq!(isometry_defect(c(0.0, 0.0), &one, &p2, &grid).unwrap(), 0.0);
        assert!(isometry_defect(c(1.0, 0.0), &one, &p2, &grid).unwrap() < 1e-9);

        let f = TruncatedSeries::from_real(&[0.0, -3.0, 1.0]).with_cap(40);
        let a = c(0.7, 0.2);
        let grid = isometry_grid(1.0, 40, a.norm()).unwrap();
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
            let d = isometry_defect(a, &f, &p2.with_p(p), &grid).unwrap();
            assert!(d < 1e-6, "p={p} defect={d}");
        }
    }

    #[test]
    fn unitarity_and_adjoint_closed_form() {
        let alpha = 0.5;
        let p = FockParams::hilbert(alpha).unwrap();
        let mut s = SeedStream::new(5);
        let f = s.dense_polynomial(10, alpha);
        let g = s.dense_polynomial(10, alpha);
        let t = WeightedTranslation::on_line(c(1.1, -0.6), alpha).unwrap();
        let (tf, tg) = (t.apply(&f).unwrap(), t.apply(&g).unwrap());
        let lhs = inner_product_closed(&tf, &tg, &p).unwrap();
        let rhs = inner_product_closed(&f, &g, &p).unwrap();
        assert!((lhs - rhs).norm() < 1e-8);

        let adj_l = inner_product_closed(&tf, &g, &p).unwrap();
        let adj_r = inner_product_closed(&f, &t.inverse().apply(&g).unwrap(), &p).unwrap();
        assert!((adj_l - adj_r).norm() < 1e-8);
    }
}
