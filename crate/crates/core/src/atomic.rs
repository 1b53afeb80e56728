//! Finite atomic decompositions `f ≈ Σ c_j k_{z_j}` over square lattices.
//!
//! Coefficients come from the regularized normal equations of the atom Gram
//! matrix; the ℓ¹ variant runs iteratively reweighted least squares on the
//! same system. Residuals are measured on the synthesized series, which
//! avoids the cancellation of the expanded quadratic form.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockParams;
use crate::kernels::{atom_series, line_atom_inner, reproduce, KernelAtom};
use crate::series::{ComplexPoint, TruncatedSeries};
use crate::special::{ln_factorial, ln_fock_weight};

pub const DEFAULT_MAX_POINTS: usize = 4000;
/// Tikhonov weight relative to the largest Gram diagonal entry.
pub const REGULARIZATION: f64 = 1e-16;
/// Cap on iterated-Tikhonov refinement steps per solve.
pub const REFINEMENTS: usize = 20;

/// Lattice points `δ(m + in)`, `|δ(m + in)| ≤ R`, ordered row by row
/// (imaginary part outer, real part inner, both ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub delta: f64,
    pub radius: f64,
    pub points: Vec<ComplexPoint>,
}

/// Default spacing `0.5·√(π/α)`: four times the critical density.
pub fn default_delta(alpha: f64) -> f64 {
    0.5 * (std::f64::consts::PI / alpha).sqrt()
}

/// Default cutoff `3/√α · (1 + deg/10)`.
pub fn default_radius(alpha: f64, degree: usize) -> f64 {
    3.0 / alpha.sqrt() * (1.0 + degree as f64 / 10.0)
}

pub fn build_lattice(delta: f64, radius: f64) -> Result<Lattice> {
    build_lattice_limited(delta, radius, DEFAULT_MAX_POINTS)
}

pub fn build_lattice_limited(delta: f64, radius: f64, max_points: usize) -> Result<Lattice> {
    if !(delta.is_finite() && delta > 0.0 && radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lattice needs positive spacing and radius, got delta={delta}, radius={radius}"
        )));
    }
    let reach = (radius / delta).floor() as i64;
    // work in integer units so |m + in| ≤ R/δ is decided without drift
    let bound = (radius / delta).powi(2) * (1.0 + 1e-12);
    let estimate = std::f64::consts::PI * (reach as f64 + 1.0).powi(2);
    if estimate > 4.0 * max_points as f64 + 16.0 {
        return Err(Error::LatticeTooLarge { count: estimate as usize, limit: max_points });
    }
    let mut points = Vec::new();
    for n in -reach..=reach {
        for m in -reach..=reach {
            if ((m * m + n * n) as f64) <= bound {
                points.push(Complex64::new(delta * m as f64, delta * n as f64));
            }
        }
    }
    if points.len() > max_points {
        return Err(Error::LatticeTooLarge { count: points.len(), limit: max_points });
    }
    Ok(Lattice { delta, radius, points })
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same points moved by `a`.
    pub fn translated(&self, a: ComplexPoint) -> Lattice {
        Lattice { delta: self.delta, radius: self.radius, points: self.points.iter().map(|z| z + a).collect() }
    }

    fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `G_ij = ⟨k_{z_i}, k_{z_j}⟩_α`.
pub fn gram(lattice: &Lattice, alpha: f64) -> DMatrix<Complex64> {
    let pts = &lattice.points;
    DMatrix::from_fn(pts.len(), pts.len(), |i, j| line_atom_inner(pts[i], pts[j], alpha))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicSolution {
    pub coefficients: Vec<Complex64>,
    /// `‖f − Σ c_j k_{z_j}‖ / ‖f‖` in `F²_α`.
    pub residual_l2: f64,
    /// `ℓ^p` norm of the coefficients for [`Self::coeff_p`].
    pub coeff_lp_norm: f64,
    pub coeff_p: f64,
    pub solver_iterations: usize,
    /// False when the ℓ¹ iteration never met its residual target; the best
    /// iterate is returned anyway.
    pub converged: bool,
}

/// `Σ c_j k_{z_j}` truncated at `cap`.
pub fn synthesize(c: &[Complex64], lattice: &Lattice, alpha: f64, cap: usize) -> Result<TruncatedSeries> {
    if c.len() != lattice.len() {
        return Err(Error::DimensionMismatch { left: c.len(), right: lattice.len() });
    }
    let mut out = TruncatedSeries::zero(cap);
    for (cj, &z) in c.iter().zip(&lattice.points) {
        if cj.norm() == 0.0 {
            continue;
        }
        let atom = atom_series(&KernelAtom::normalized(z, alpha)?, cap)?;
        out = &out + &atom.scale(*cj);
    }
    Ok(out)
}

/// Cap at which every atom of the lattice is resolved to rounding.
pub fn synthesis_cap(lattice: &Lattice, alpha: f64, f_cap: usize) -> usize {
    let mean = alpha * lattice.max_modulus().powi(2);
    f_cap.max((mean + 12.0 * mean.sqrt() + 30.0).ceil() as usize)
}

/// `b_j = ⟨f, k_{z_j}⟩_α`, through the reproducing property.
pub fn moments(f: &TruncatedSeries, lattice: &Lattice, params: &FockParams) -> Result<Vec<Complex64>> {
    params.require_line()?;
    lattice
        .points
        .iter()
        .map(|&z| Ok(reproduce(f, z, params)? * (-0.5 * params.alpha * z.norm_sqr()).exp()))
        .collect()
}

/// Least-squares form of the decomposition: the synthesis operator `Φ` in
/// the orthonormal basis `√(α^k/k!) z^k`, so `G = Φ*Φ` and `b = Φ*f`.
struct System {
    phi: DMatrix<Complex64>,
    target: DVector<Complex64>,
    target_norm: f64,
}

impl System {
    fn new(f: &TruncatedSeries, lattice: &Lattice, alpha: f64) -> Result<System> {
        let cap = synthesis_cap(lattice, alpha, f.degree_cap());
        let mut phi = DMatrix::zeros(cap + 1, lattice.len());
        for (j, &z) in lattice.points.iter().enumerate() {
            let w = alpha.sqrt() * z.conj();
            let (ln_r, theta) = (w.norm().ln(), w.arg());
            let base = -0.5 * alpha * z.norm_sqr();
            for k in 0..=cap {
                phi[(k, j)] = if w.norm() == 0.0 {
                    Complex64::new(if k == 0 { base.exp() } else { 0.0 }, 0.0)
                } else {
                    let kf = k as f64;
                    Complex64::from_polar((base + kf * ln_r - 0.5 * ln_factorial(k)).exp(), kf * theta)
                };
            }
        }
        let target = DVector::from_fn(cap + 1, |k, _| f.coeff(k) * (0.5 * ln_fock_weight(k, alpha)).exp());
        let target_norm = target.norm();
        Ok(System { phi, target, target_norm })
    }

    fn residual(&self, c: &DVector<Complex64>) -> f64 {
        (&self.target - &self.phi * c).norm() / self.target_norm
    }

    /// Minimizer of `‖Φ D c' − f‖² + λ‖c'‖²` with `c = D c'`, refined by
    /// iterated Tikhonov steps while each cuts the residual by 10%.
    fn solve(&self, scale: &[f64], lambda: f64, refinements: usize) -> Result<(DVector<Complex64>, usize)> {
        let (m, n) = self.phi.shape();
        let mut stacked = DMatrix::zeros(m + n, n);
        for j in 0..n {
            for k in 0..m {
                stacked[(k, j)] = self.phi[(k, j)] * scale[j];
            }
            stacked[(m + j, j)] = Complex64::new(lambda.sqrt(), 0.0);
        }
        let qr = stacked.qr();
        let (q, r) = (qr.q(), qr.r());
        let step = |rhs: &DVector<Complex64>| -> Result<DVector<Complex64>> {
            let mut full = DVector::zeros(m + n);
            full.rows_mut(0, m).copy_from(rhs);
            r.solve_upper_triangular(&(q.adjoint() * full))
                .ok_or_else(|| Error::SolverFailure("singular triangular factor".into()))
        };
        let unscale = |y: DVector<Complex64>| DVector::from_fn(n, |j, _| y[j] * scale[j]);
        let mut c = unscale(step(&self.target)?);
        let mut res = self.residual(&c);
        let mut steps = 1;
        for _ in 0..refinements {
            let next = &c + unscale(step(&(&self.target - &self.phi * &c))?);
            let next_res = self.residual(&next);
            if !(next_res < 0.9 * res) {
                break;
            }
            c = next;
            res = next_res;
            steps += 1;
        }
        Ok((c, steps))
    }
}

fn lp(c: &[Complex64], p: f64) -> f64 {
    if p == 1.0 {
        c.iter().map(|z| z.norm()).sum()
    } else {
        c.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn zero_solution(n: usize, p: f64) -> AtomicSolution {
    AtomicSolution {
        coefficients: vec![Complex64::new(0.0, 0.0); n],
        residual_l2: 0.0,
        coeff_lp_norm: 0.0,
        coeff_p: p,
        solver_iterations: 0,
        converged: true,
    }
}

/// Regularization for a lattice: `λ = 1e-10 · max_j G_jj`.
fn lambda_for(lattice: &Lattice, alpha: f64) -> f64 {
    let diag = lattice.points.iter().map(|&z| line_atom_inner(z, z, alpha).re).fold(0.0, f64::max);
    REGULARIZATION * diag
}

/// Minimal-ℓ² coefficients for `(G + λI)c = b`, `b_j = ⟨f, k_{z_j}⟩_α`.
///
/// The system is solved in its equivalent least-squares form
/// `[Φ; √λ I] c ≈ [f; 0]` by QR, which never squares the conditioning of
/// `Φ`; a few iterated-Tikhonov refinements remove most of the bias `λ`
/// introduces.
pub fn decompose_l2(f: &TruncatedSeries, lattice: &Lattice, params: &FockParams) -> Result<AtomicSolution> {
    params.require_line()?;
    if f.is_zero() {
        return Ok(zero_solution(lattice.len(), 2.0));
    }
    let sys = System::new(f, lattice, params.alpha)?;
    let (c, steps) = sys.solve(&vec![1.0; lattice.len()], lambda_for(lattice, params.alpha), REFINEMENTS)?;
    let residual_l2 = sys.residual(&c);
    let coefficients: Vec<Complex64> = c.iter().copied().collect();
    Ok(AtomicSolution {
        coeff_lp_norm: lp(&coefficients, 2.0),
        coefficients,
        residual_l2,
        coeff_p: 2.0,
        solver_iterations: steps,
        converged: true,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1Options {
    /// Relative residual an iterate must reach to count.
    pub target: f64,
    pub eps0: f64,
    pub eps_factor: f64,
    pub iterations: usize,
}

impl Default for L1Options {
    fn default() -> Self {
        L1Options { target: 1e-6, eps0: 1e-2, eps_factor: 0.5, iterations: 30 }
    }
}

pub fn decompose_l1(f: &TruncatedSeries, lattice: &Lattice, params: &FockParams) -> Result<AtomicSolution> {
    decompose_l1_with(f, lattice, params, &L1Options::default())
}

/// IRLS for `min ‖c‖₁` subject to the residual target.
///
/// Each step solves `(D^{1/2} G D^{1/2} + λI) y = D^{1/2} b`, `c = D^{1/2} y`,
/// with `D = diag(√(|c_j|² + ε²))`; ε shrinks geometrically. The iterate of
/// smallest ℓ¹ norm meeting the target wins.
pub fn decompose_l1_with(
    f: &TruncatedSeries,
    lattice: &Lattice,
    params: &FockParams,
    opts: &L1Options,
) -> Result<AtomicSolution> {
    params.require_line()?;
    if f.is_zero() {
        return Ok(zero_solution(lattice.len(), 1.0));
    }
    let sys = System::new(f, lattice, params.alpha)?;
    let lambda = lambda_for(lattice, params.alpha);
    let (mut c, _) = sys.solve(&vec![1.0; lattice.len()], lambda, REFINEMENTS)?;

    let as_vec = |c: &DVector<Complex64>| c.iter().copied().collect::<Vec<_>>();
    let meets = |res: f64| res <= opts.target;
    let mut best = (as_vec(&c), sys.residual(&c));
    let mut eps = opts.eps0;
    for _ in 0..opts.iterations {
        let d: Vec<f64> = c.iter().map(|z| (z.norm_sqr() + eps * eps).sqrt().sqrt()).collect();
        c = sys.solve(&d, lambda, REFINEMENTS)?.0;
        let (cand, res) = (as_vec(&c), sys.residual(&c));
        let better = match (meets(res), meets(best.1)) {
            (true, false) => true,
            (true, true) => lp(&cand, 1.0) < lp(&best.0, 1.0),
            (false, false) => res < best.1,
            (false, true) => false,
        };
        if better {
            best = (cand, res);
        }
        eps *= opts.eps_factor;
    }
    let (coefficients, residual_l2) = best;
    Ok(AtomicSolution {
        coeff_lp_norm: lp(&coefficients, 1.0),
        converged: meets(residual_l2),
        coefficients,
        residual_l2,
        coeff_p: 1.0,
        solver_iterations: opts.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SeedStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lattice_enumeration() {
        let l = build_lattice(1.0, 1.0).unwrap();
        assert_eq!(l.points, vec![c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(build_lattice(1.0, 1.5).unwrap().len(), 9);

        let brute = (-2i32..=2)
            .flat_map(|n| (-2i32..=2).map(move |m| (m, n)))
            .filter(|(m, n)| 0.25 * ((m * m + n * n) as f64) <= 1.0)
            .count();
        assert_eq!(build_lattice(0.5, 1.0).unwrap().len(), brute);
        assert_eq!(brute, 13);

        assert!(matches!(build_lattice(0.01, 10.0), Err(Error::LatticeTooLarge { .. })));
        assert!(build_lattice(0.0, 1.0).is_err());
    }

    #[test]
    fn gram_entries() {
        let single = Lattice { delta: 1.0, radius: 1.0, points: vec![c(0.3, 0.2)] };
        assert!((gram(&single, 1.0)[(0, 0)] - 1.0).norm() < 1e-15);
        let l = build_lattice(1.0, 1.0).unwrap();
        let g = gram(&l, 1.0);
        assert!((0..l.len()).all(|i| (g[(i, i)] - 1.0).norm() < 1e-15));
        assert!((g[(2, 3)] - (-0.5f64).exp()).norm() < 1e-15);
    }

    #[test]
    fn single_atom_is_recovered() {
        let alpha = 1.0;
        let p = FockParams::hilbert(alpha).unwrap();
        let l = build_lattice(default_delta(alpha), 3.0).unwrap();
        let j = l.len() / 2 + 3;
        let f = atom_series(&KernelAtom::normalized(l.points[j], alpha).unwrap(), 60).unwrap();
        let s = decompose_l2(&f, &l, &p).unwrap();
        assert!(s.residual_l2 <= 1e-9, "residual {}", s.residual_l2);
        let peak = (0..l.len()).max_by(|&a, &b| s.coefficients[a].norm().total_cmp(&s.coefficients[b].norm()));
        assert_eq!(peak, Some(j));

        let s1 = decompose_l1(&f, &l, &p).unwrap();
        assert!(s1.converged);
        assert!(s1.coeff_lp_norm <= 1.0 + 1e-3, "l1 = {}", s1.coeff_lp_norm);
        assert!(s.coeff_lp_norm <= s1.coeff_lp_norm + 1e-9);
    }

    #[test]
    fn zero_function() {
        let p = FockParams::hilbert(1.0).unwrap();
        let l = build_lattice(0.7, 2.0).unwrap();
        let s = decompose_l2(&TruncatedSeries::zero(5), &l, &p).unwrap();
        assert_eq!(s.residual_l2, 0.0);
        assert!(s.coefficients.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn constant_function_residual() {
        let p = FockParams::hilbert(1.0).unwrap();
        let l = build_lattice(0.7, 3.0).unwrap();
        let s = decompose_l2(&TruncatedSeries::one(0), &l, &p).unwrap();
        assert!(s.residual_l2 <= 1e-3, "residual {}", s.residual_l2);
    }

    #[test]
    fn synthesize_basics() {
        let l = build_lattice(1.0, 1.0).unwrap();
        let zero = synthesize(&vec![c(0.0, 0.0); l.len()], &l, 1.0, 10).unwrap();
        assert!(zero.is_zero());
        let mut e = vec![c(0.0, 0.0); l.len()];
        e[3] = c(1.0, 0.0);
        let s = synthesize(&e, &l, 1.0, 20).unwrap();
        let k = atom_series(&KernelAtom::normalized(l.points[3], 1.0).unwrap(), 20).unwrap();
        assert!(s.max_coeff_diff(&k) < 1e-16);
        assert!(synthesize(&e[1..], &l, 1.0, 10).is_err());
    }

    #[test]
    fn random_polynomial_round_trip() {
        let alpha = 1.0;
        let p = FockParams::hilbert(alpha).unwrap();
        let f = SeedStream::new(9).dense_polynomial(10, alpha);
        let l = build_lattice(default_delta(alpha), default_radius(alpha, 10)).unwrap();
        let s = decompose_l2(&f, &l, &p).unwrap();
        assert!(s.residual_l2 <= 1e-3, "residual {}", s.residual_l2);
    }
}
