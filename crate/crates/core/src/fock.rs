//! Gaussian measures, `F^p_α` norms and the `F²_α` inner product.
//!
//! The inner product of `F²_α` is computed two ways: in closed form from
//! monomial orthogonality (`⟨z^j, z^k⟩_α = δ_jk k!/α^k`) and by a polar
//! quadrature of `f ḡ dλ_α`. The quadrature uses a uniform trapezoid rule in
//! the angle and Gauss–Laguerre in `t = α r²`; for polynomial integrands both
//! are exact, which is what makes it usable as an oracle.
//!
//! For exponents other than 2 the integrand `|f|^p` is not a polynomial and
//! has conical points at the zeros of `f`, so finite `p ≠ 2` norms are taken
//! with nested adaptive Gauss–Kronrod rules on the disk of radius
//! [`QuadratureGrid::domain_radius`]. The sup norm scans the grid and then
//! polishes the best candidates with a fixed 20-step local ascent.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_gk15, GaussLaguerre};
use crate::series::TruncatedSeries;
use crate::special::{ln_factorial, ln_fock_weight, ln_gamma_half_plus_one};

/// Largest `ln` that still exponentiates to a finite double.
const LN_MAX: f64 = 709.0;

/// Default number of radial Gauss–Laguerre nodes.
pub const DEFAULT_RADIAL_NODES: usize = 64;

/// Number of local ascent steps after the grid scan of the sup norm.
pub const SUP_ASCENT_STEPS: usize = 20;

/// Lebesgue exponent `p ∈ (0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p > 0.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidParameter(format!("exponent must lie in (0, inf], got {p}")))
        }
    }

    pub fn is_two(self) -> bool {
        self == Exponent::Finite(2.0)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad exponent {other:?}")))?;
                Exponent::new(p)
            }
        }
    }
}

/// Weight `α`, exponent `p` and dimension `n` of a Fock space `F^p_α(ℂⁿ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockParams {
    pub alpha: f64,
    pub p: Exponent,
    pub n: usize,
}

impl FockParams {
    pub fn new(alpha: f64, p: Exponent, n: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if let Exponent::Finite(p) = p {
            Exponent::new(p)?;
        }
        Ok(FockParams { alpha, p, n })
    }

    /// `F²_α` on the line.
    pub fn hilbert(alpha: f64) -> Result<Self> {
        Self::new(alpha, Exponent::Finite(2.0), 1)
    }

    pub fn with_p(self, p: Exponent) -> Self {
        FockParams { p, ..self }
    }

    pub fn require_line(&self) -> Result<()> {
        if self.n != 1 {
            return Err(Error::InvalidParameter(format!(
                "function-level computation is one-dimensional, got n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Polar quadrature grid for integrals against `dλ_α`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    alpha: f64,
    max_degree: usize,
    radial_nodes: Vec<(f64, f64)>,
    angular_count: usize,
    domain_radius: f64,
}

impl QuadratureGrid {
    /// Grid that integrates `f ḡ dλ_α` exactly for polynomials of degree
    /// at most `max_degree`.
    pub fn new(alpha: f64, max_degree: usize) -> Result<Self> {
        let nodes = DEFAULT_RADIAL_NODES.max(max_degree / 2 + 1);
        Self::with_sizes(alpha, max_degree, nodes, 2 * max_degree + 2)
    }

    pub fn with_sizes(alpha: f64, max_degree: usize, radial: usize, angular: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        if angular < 2 * max_degree + 2 {
            return Err(Error::InvalidParameter(format!(
                "angular count {angular} below 2*{max_degree}+2"
            )));
        }
        if 2 * radial <= max_degree {
            return Err(Error::InvalidParameter(format!(
                "{radial} radial nodes cannot integrate degree {max_degree}"
            )));
        }
        let rule = GaussLaguerre::new(radial, 0.0);
        let radial_nodes = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&t, &w)| ((t / alpha).sqrt(), w))
            .collect();
        // Large enough that |z^d|^p e^{-pα|z|²/2} is negligible beyond it for p ≥ 1/2.
        let domain_radius = ((max_degree as f64).sqrt() + 13.0) / alpha.sqrt();
        Ok(QuadratureGrid { alpha, max_degree, radial_nodes, angular_count: angular, domain_radius })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `(radius, weight)` pairs; weights sum to one.
    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial_nodes
    }

    pub fn angular_count(&self) -> usize {
        self.angular_count
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    fn check(&self, params: &FockParams, degree_cap: usize) -> Result<()> {
        if (self.alpha - params.alpha).abs() > 1e-15 * params.alpha {
            return Err(Error::InvalidParameter(format!(
                "grid built for alpha = {}, used with alpha = {}",
                self.alpha, params.alpha
            )));
        }
        if degree_cap > self.max_degree {
            return Err(Error::GridTooCoarse { supported: self.max_degree, needed: degree_cap });
        }
        Ok(())
    }

    /// `∫ F dλ_α` for an integrand given pointwise.
    pub fn integrate(&self, mut integrand: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        let m = self.angular_count;
        let mut total = Complex64::new(0.0, 0.0);
        for &(r, w) in &self.radial_nodes {
            let mut ring = Complex64::new(0.0, 0.0);
            for j in 0..m {
                let theta = 2.0 * PI * j as f64 / m as f64;
                ring += integrand(Complex64::from_polar(r, theta));
            }
            total += ring * (w / m as f64);
        }
        total
    }

    fn scan_points(&self) -> impl Iterator<Item = Complex64> + '_ {
        let m = self.angular_count.max(64);
        let step = 0.25 / self.alpha.sqrt();
        let rings = (self.domain_radius / step).ceil() as usize;
        let uniform = (0..=rings).map(move |i| i as f64 * step);
        let radii: Vec<f64> = self.radial_nodes.iter().map(|&(r, _)| r).chain(uniform).collect();
        radii
            .into_iter()
            .flat_map(move |r| (0..m).map(move |j| Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64)))
    }
}

/// A term `c w^m w̄^k` of a polynomial in `w` and `w̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedMonomial {
    pub m: usize,
    pub k: usize,
    pub coefficient: Complex64,
}

impl MixedMonomial {
    pub fn new(m: usize, k: usize, coefficient: Complex64) -> Self {
        MixedMonomial { m, k, coefficient }
    }

    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        self.coefficient * w.powu(self.m as u32) * w.conj().powu(self.k as u32)
    }
}

/// Closed-form `⟨f, g⟩_α = Σ f_k ḡ_k k!/α^k`.
///
/// Weights are formed in log space; a range error is raised only when a
/// nonzero term itself leaves the double range.
pub fn inner_product_closed(f: &TruncatedSeries, g: &TruncatedSeries, params: &FockParams) -> Result<Complex64> {
    params.require_line()?;
    weighted_inner(f, g, |k| ln_fock_weight(k, params.alpha))
}

/// `Σ f_k ḡ_k exp(ln_weight(k))` over the common degree range.
pub(crate) fn weighted_inner(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    ln_weight: impl Fn(usize) -> f64,
) -> Result<Complex64> {
    let top = f.degree_cap().min(g.degree_cap());
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=top {
        let prod = f.coeff(k) * g.coeff(k).conj();
        if prod == Complex64::new(0.0, 0.0) {
            continue;
        }
        let lw = ln_weight(k);
        let term = if lw < LN_MAX {
            prod * lw.exp()
        } else {
            let ln_mag = prod.norm().ln() + lw;
            if ln_mag > LN_MAX {
                return Err(Error::Range { k });
            }
            prod / prod.norm() * ln_mag.exp()
        };
        acc += term;
    }
    if !(acc.re.is_finite() && acc.im.is_finite()) {
        return Err(Error::Range { k: top });
    }
    Ok(acc)
}

/// `‖f‖_{2,α}` from the closed form.
pub fn norm_closed(f: &TruncatedSeries, params: &FockParams) -> Result<f64> {
    Ok(inner_product_closed(f, f, params)?.re.max(0.0).sqrt())
}

/// Polar quadrature of `∫ f ḡ dλ_α`.
pub fn inner_product_quadrature(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    params: &FockParams,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    params.require_line()?;
    grid.check(params, f.degree_cap().max(g.degree_cap()))?;
    Ok(grid.integrate(|z| f.evaluate(z) * g.evaluate(z).conj()))
}

/// `‖f‖_{p,α}` for the exponent in `params`.
pub fn p_norm(f: &TruncatedSeries, params: &FockParams, grid: &QuadratureGrid) -> Result<f64> {
    params.require_line()?;
    grid.check(params, f.degree_cap())?;
    if f.is_zero() {
        return Ok(0.0);
    }
    match params.p {
        Exponent::Infinity => Ok(sup_norm(f, params.alpha, grid)),
        p if p.is_two() => Ok(inner_product_quadrature(f, f, params, grid)?.re.max(0.0).sqrt()),
        Exponent::Finite(p) => Ok(finite_p_norm(f, params.alpha, p, grid.domain_radius)),
    }
}

/// Relative tolerance of the radial rule behind `‖f‖_p`, `p ≠ 2`; each
/// angular integral is taken a hundred times tighter so its adaptive noise
/// stays below the radial target.
pub const P_NORM_TOL: f64 = 1e-8;

fn finite_p_norm(f: &TruncatedSeries, alpha: f64, p: f64, radius: f64) -> f64 {
    let angular = |r: f64| -> f64 {
        if r == 0.0 {
            return 2.0 * PI * f.coeff(0).norm().powf(p);
        }
        adaptive_gk15(
            |theta| f.evaluate(Complex64::from_polar(r, theta)).norm().powf(p),
            0.0,
            2.0 * PI,
            8,
            1e-2 * P_NORM_TOL,
            1e-300,
            4000,
        )
    };
    // |f|^p has conical points where a ring passes through a zero of f, so
    // the radial rule is split at the zero moduli.
    let radial = |r: f64| r * (-0.5 * p * alpha * r * r).exp() * angular(r);
    let mut breaks = vec![0.0];
    breaks.extend(zero_moduli(f).into_iter().filter(|&m| m > 0.0 && m < radius));
    breaks.push(radius);
    let step = 0.5 / alpha.sqrt();
    let integral: f64 = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let panels = ((w[1] - w[0]) / step).ceil() as usize;
            adaptive_gk15(radial, w[0], w[1], panels, P_NORM_TOL, 1e-300, 20_000)
        })
        .sum();
    (alpha / PI * integral).powf(1.0 / p)
}

/// Sorted moduli of the zeros of `f`, from the companion matrix.
fn zero_moduli(f: &TruncatedSeries) -> Vec<f64> {
    let Some(d) = f.degree() else { return Vec::new() };
    let c = f.coeffs();
    let low = c.iter().take_while(|v| v.norm() == 0.0).count();
    let n = d - low;
    let mut moduli = vec![0.0; low.min(1)];
    if n > 0 {
        let lead = c[d];
        let companion = DMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -c[low + i] / lead
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        if let Some(eig) = companion.schur().eigenvalues() {
            moduli.extend(eig.iter().map(|z| z.norm()).filter(|m| m.is_finite()));
        }
    }
    moduli.sort_by(f64::total_cmp);
    moduli.dedup();
    moduli
}

/// `sup |f(z)| e^{-α|z|²/2}`: grid scan followed by local ascent from the best points.
fn sup_norm(f: &TruncatedSeries, alpha: f64, grid: &QuadratureGrid) -> f64 {
    let weighted = |z: Complex64| f.evaluate(z).norm() * (-0.5 * alpha * z.norm_sqr()).exp();
    let mut best: Vec<(f64, Complex64)> = Vec::new();
    for z in grid.scan_points() {
        let v = weighted(z);
        if best.len() < 8 || v > best[best.len() - 1].0 {
            best.push((v, z));
            best.sort_by(|a, b| b.0.total_cmp(&a.0));
            best.truncate(8);
        }
    }
    best.into_iter()
        .map(|(v, z)| local_ascent(f, alpha, z).max(v))
        .fold(0.0, f64::max)
}

/// Maximizes `φ(z) = ln|f(z)|² - α|z|²` with damped Newton steps.
fn local_ascent(f: &TruncatedSeries, alpha: f64, start: Complex64) -> f64 {
    let phi = |z: Complex64| {
        let v = f.evaluate(z).norm_sqr();
        if v > 0.0 { v.ln() - alpha * z.norm_sqr() } else { f64::NEG_INFINITY }
    };
    let mut z = start;
    let mut value = phi(z);
    for _ in 0..SUP_ASCENT_STEPS {
        let (v, d1, d2) = f.evaluate_with_derivatives(z);
        if v == Complex64::new(0.0, 0.0) {
            break;
        }
        let g1 = d1 / v;
        let g2 = d2 / v - g1 * g1;
        let grad = [2.0 * g1.re - 2.0 * alpha * z.re, -2.0 * g1.im - 2.0 * alpha * z.im];
        let (hxx, hxy, hyy) = (2.0 * g2.re - 2.0 * alpha, -2.0 * g2.im, -2.0 * g2.re - 2.0 * alpha);
        let det = hxx * hyy - hxy * hxy;
        let mut step = if det > 0.0 && hxx < 0.0 {
            [-(hyy * grad[0] - hxy * grad[1]) / det, -(-hxy * grad[0] + hxx * grad[1]) / det]
        } else {
            let scale = 1.0 / (2.0 * alpha + 2.0 * g2.norm());
            [grad[0] * scale, grad[1] * scale]
        };
        let mut moved = false;
        for _ in 0..40 {
            let cand = z + Complex64::new(step[0], step[1]);
            let cv = phi(cand);
            if cv >= value {
                moved = cv > value || cand != z;
                z = cand;
                value = cv;
                break;
            }
            step = [step[0] * 0.5, step[1] * 0.5];
        }
        if !moved || step[0].hypot(step[1]) <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    (0.5 * value).exp()
}

/// `‖z^k‖_{p,α}` in closed form for finite `p`:
/// `((2/p)·(2/(pα))^{pk/2}·Γ(pk/2 + 1))^{1/p}`.
pub fn monomial_p_norm(k: usize, alpha: f64, p: f64) -> f64 {
    let s = p * k as f64 / 2.0;
    let ln = (2.0 / p).ln() + s * (2.0 / (p * alpha)).ln() + crate::special::ln_gamma(s + 1.0);
    (ln / p).exp()
}

/// `‖z^k‖_{1,α} = 2 (2/α)^{k/2} Γ(k/2 + 1)`.
pub fn monomial_f1_norm(k: usize, alpha: f64) -> f64 {
    (2f64.ln() + 0.5 * k as f64 * (2.0 / alpha).ln() + ln_gamma_half_plus_one(k)).exp()
}

/// `P_α` on a polynomial in `w, w̄`:
/// `P_α(w^m w̄^k) = [m ≥ k] m!/((m-k)! α^k) z^{m-k}`.
pub fn project(terms: &[MixedMonomial], params: &FockParams) -> Result<TruncatedSeries> {
    params.require_line()?;
    let cap = terms.iter().filter(|t| t.m >= t.k).map(|t| t.m - t.k).max().unwrap_or(0);
    let zero = Complex64::new(0.0, 0.0);
    let mut coeffs = vec![zero; cap + 1];
    for t in terms {
        if t.m < t.k || t.coefficient == zero {
            continue;
        }
        let ln = ln_factorial(t.m) - ln_factorial(t.m - t.k) - t.k as f64 * params.alpha.ln();
        if ln > LN_MAX {
            return Err(Error::Range { k: t.m });
        }
        coeffs[t.m - t.k] += t.coefficient * ln.exp();
    }
    TruncatedSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(alpha: f64) -> FockParams {
        FockParams::hilbert(alpha).unwrap()
    }

    #[test]
    fn closed_inner_products() {
        let one = TruncatedSeries::one(3);
        assert_eq!(inner_product_closed(&one, &one, &params(1.0)).unwrap(), c(1.0, 0.0));
        let z = TruncatedSeries::monomial(1, c(1.0, 0.0), 3);
        let z2 = TruncatedSeries::monomial(2, c(1.0, 0.0), 3);
        assert_eq!(inner_product_closed(&z, &z2, &params(0.7)).unwrap(), c(0.0, 0.0));
        assert_eq!(inner_product_closed(&z2, &z2, &params(1.0)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn closed_form_range_error_names_degree() {
        let big = TruncatedSeries::monomial(300, c(1.0, 0.0), 300);
        match inner_product_closed(&big, &big, &params(1.0)) {
            Err(Error::Range { k }) => assert_eq!(k, 300),
            other => panic!("expected range error, got {other:?}"),
        }
        // A tiny coefficient keeps the term representable.
        let tame = TruncatedSeries::monomial(200, c(1e-150, 0.0), 200);
        let v = inner_product_closed(&tame, &tame, &params(1.0)).unwrap();
        let want = (ln_factorial(200) - 300.0 * 10f64.ln()).exp();
        assert!((v.re / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_known_values() {
        let p = params(1.0);
        let grid = QuadratureGrid::new(1.0, 40).unwrap();
        let one = TruncatedSeries::one(0);
        assert!((inner_product_quadrature(&one, &one, &p, &grid).unwrap() - 1.0).norm() < 1e-12);
        let z2 = TruncatedSeries::monomial(2, c(1.0, 0.0), 2);
        assert!((inner_product_quadrature(&z2, &z2, &p, &grid).unwrap() - 2.0).norm() < 1e-10);

        // ⟨k_0, k_1⟩ = e^{-1/2}
        let k0 = TruncatedSeries::one(40);
        let k1 = TruncatedSeries::exp_linear(c(1.0, 0.0), 40).scale(c((-0.5f64).exp(), 0.0));
        let v = inner_product_quadrature(&k0, &k1, &p, &grid).unwrap();
        assert!((v - (-0.5f64).exp()).norm() < 1e-9);
    }

    #[test]
    fn grid_guards() {
        let grid = QuadratureGrid::new(1.0, 10).unwrap();
        let f = TruncatedSeries::one(11);
        assert!(matches!(
            inner_product_quadrature(&f, &f, &params(1.0), &grid),
            Err(Error::GridTooCoarse { supported: 10, needed: 11 })
        ));
        let g = TruncatedSeries::one(3);
        assert!(inner_product_quadrature(&g, &g, &params(2.0), &grid).is_err());
        assert!(QuadratureGrid::with_sizes(1.0, 10, 64, 21).is_err());
        let p2 = FockParams::new(1.0, Exponent::Finite(2.0), 2).unwrap();
        assert!(inner_product_closed(&g, &g, &p2).is_err());
    }

    #[test]
    fn norms_of_constants_and_monomials() {
        let grid = QuadratureGrid::new(1.0, 4).unwrap();
        let one = TruncatedSeries::one(0);
        let p1 = params(1.0).with_p(Exponent::Finite(1.0));
        let p2 = params(1.0);
        let pinf = params(1.0).with_p(Exponent::Infinity);
        assert!((p_norm(&one, &p2, &grid).unwrap() - 1.0).abs() < 1e-12);
        assert!((p_norm(&one, &p1, &grid).unwrap() - 2.0).abs() < 1e-10);
        assert!((p_norm(&one, &pinf, &grid).unwrap() - 1.0).abs() < 1e-14);
        let z2 = TruncatedSeries::monomial(2, c(1.0, 0.0), 2);
        assert!((p_norm(&z2, &p1, &grid).unwrap() - 4.0).abs() < 1e-9);
        // sup r² e^{-r²/2} = 2/e at r = √2
        assert!((p_norm(&z2, &pinf, &grid).unwrap() - 2.0 / std::f64::consts::E).abs() < 1e-13);
        assert_eq!(p_norm(&TruncatedSeries::zero(3), &p1, &grid).unwrap(), 0.0);
    }

    #[test]
    fn monomial_f1_closed_form_against_quadrature() {
        assert!((monomial_f1_norm(0, 1.0) - 2.0).abs() < 1e-15);
        assert!((monomial_f1_norm(2, 1.0) - 4.0).abs() < 1e-14);
        // independent of alpha at k = 0
        assert!((monomial_f1_norm(0, 2.0) - 2.0).abs() < 1e-15);
        for &(k, alpha) in &[(0usize, 2.0), (3, 0.5), (5, 2.0), (7, 1.0)] {
            let grid = QuadratureGrid::new(alpha, k).unwrap();
            let f = TruncatedSeries::monomial(k, c(1.0, 0.0), k);
            let p = params(alpha).with_p(Exponent::Finite(1.0));
            let q = p_norm(&f, &p, &grid).unwrap();
            assert!((q / monomial_f1_norm(k, alpha) - 1.0).abs() < 1e-10, "k={k} alpha={alpha}");
            assert!((monomial_p_norm(k, alpha, 1.0) / monomial_f1_norm(k, alpha) - 1.0).abs() < 1e-13);
        }
        let two = monomial_p_norm(4, 1.5, 2.0);
        assert!((two * two - 24.0 / 1.5f64.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let p = params(1.0);
        let hol = project(&[MixedMonomial::new(2, 0, c(1.0, 0.0))], &p).unwrap();
        assert_eq!(hol.coeffs(), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let anti = project(&[MixedMonomial::new(0, 1, c(1.0, 0.0))], &p).unwrap();
        assert!(anti.is_zero());
        let modulus = project(&[MixedMonomial::new(1, 1, c(1.0, 0.0))], &p).unwrap();
        assert_eq!(modulus.coeffs(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn projection_matches_quadrature_of_kernel_integral() {
        // Coefficient of z^j in P_α u is (α^j/j!) ∫ u(w) w̄^j dλ_α(w).
        for &alpha in &[0.5, 1.0, 2.0] {
            let p = params(alpha);
            let grid = QuadratureGrid::new(alpha, 20).unwrap();
            for &(m, k) in &[(3usize, 1usize), (4, 4), (2, 5), (6, 2)] {
                let term = MixedMonomial::new(m, k, c(0.3, -1.1));
                let proj = project(&[term], &p).unwrap();
                for j in 0..8 {
                    let integral = grid.integrate(|w| term.evaluate(w) * w.conj().powu(j as u32));
                    let want = integral * (j as f64 * alpha.ln() - ln_factorial(j)).exp();
                    assert!((proj.coeff(j) - want).norm() < 1e-10, "m={m} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn projection_overflow() {
        let r = project(&[MixedMonomial::new(400, 200, c(1.0, 0.0))], &params(1e-3));
        assert!(matches!(r, Err(Error::Range { k: 400 })));
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("1.5".parse::<Exponent>().unwrap(), Exponent::Finite(1.5));
        assert!("-1".parse::<Exponent>().is_err());
        assert!(FockParams::new(-1.0, Exponent::Finite(2.0), 1).is_err());
        assert!(FockParams::new(1.0, Exponent::Finite(0.5), 1).is_ok());
    }
}
