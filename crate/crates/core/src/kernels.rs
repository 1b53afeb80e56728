//! The reproducing kernel `K(z, w) = e^{α z·w̄}` of `F²_α` and its normalized
//! atoms `k_a = K_a / ‖K_a‖`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{inner_product_closed, FockParams};
use crate::series::{ComplexPoint, TruncatedSeries};
use crate::special::ln_factorial;
use crate::translations::{same_dim, CVector};

/// Exponents above this are returned split into log-modulus and phase.
pub const LOG_SPLIT_THRESHOLD: f64 = 700.0;

/// A kernel value; large ones are kept as `e^{ln_modulus + i·phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelValue {
    Finite(Complex64),
    Scaled { ln_modulus: f64, phase: f64 },
}

impl KernelValue {
    fn from_exponent(e: Complex64) -> Self {
        if e.re > LOG_SPLIT_THRESHOLD {
            KernelValue::Scaled { ln_modulus: e.re, phase: e.im }
        } else {
            KernelValue::Finite(e.exp())
        }
    }

    pub fn ln_modulus(&self) -> f64 {
        match *self {
            KernelValue::Finite(v) => v.norm().ln(),
            KernelValue::Scaled { ln_modulus, .. } => ln_modulus,
        }
    }

    /// Value as a plain complex number; overflows to infinity when scaled.
    pub fn to_complex(&self) -> Complex64 {
        match *self {
            KernelValue::Finite(v) => v,
            KernelValue::Scaled { ln_modulus, phase } => Complex64::new(ln_modulus, phase).exp(),
        }
    }
}

/// `K(z, w) = e^{α z·w̄}`.
pub fn kernel_value(z: &CVector, w: &CVector, alpha: f64) -> Result<KernelValue> {
    Ok(KernelValue::from_exponent(alpha * z.dot_conj(w)?))
}

/// `K_a` or, when `normalized`, `k_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelAtom {
    pub a: CVector,
    pub alpha: f64,
    pub normalized: bool,
}

impl KernelAtom {
    pub fn new(a: CVector, alpha: f64, normalized: bool) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        Ok(KernelAtom { a, alpha, normalized })
    }

    pub fn normalized(a: ComplexPoint, alpha: f64) -> Result<Self> {
        Self::new(CVector::line(a), alpha, true)
    }

    pub fn unnormalized(a: ComplexPoint, alpha: f64) -> Result<Self> {
        Self::new(CVector::line(a), alpha, false)
    }

    /// Pointwise value at `z`.
    pub fn value(&self, z: &CVector) -> Result<KernelValue> {
        let mut e = self.alpha * z.dot_conj(&self.a)?;
        if self.normalized {
            e -= 0.5 * self.alpha * self.a.norm_sqr();
        }
        Ok(KernelValue::from_exponent(e))
    }
}

/// Coefficients `α^k ā^k / k!` (times `e^{-α|a|²/2}` when normalized), in
/// log space so large centres do not overflow intermediate powers.
pub fn atom_series(atom: &KernelAtom, cap: usize) -> Result<TruncatedSeries> {
    let a = match atom.a.components() {
        [a] => *a,
        other => {
            return Err(Error::InvalidParameter(format!(
                "kernel series are one-dimensional, got n = {}",
                other.len()
            )))
        }
    };
    let shift = if atom.normalized { -0.5 * atom.alpha * a.norm_sqr() } else { 0.0 };
    let c = atom.alpha * a.conj();
    if c.norm() == 0.0 {
        return Ok(TruncatedSeries::constant(Complex64::new(shift.exp(), 0.0), cap));
    }
    let (ln_r, theta) = (c.norm().ln(), c.arg());
    let coeffs = (0..=cap)
        .map(|k| {
            let kf = k as f64;
            Complex64::from_polar((kf * ln_r - ln_factorial(k) + shift).exp(), kf * theta)
        })
        .collect();
    let series = TruncatedSeries::new(coeffs)?;
    let tail = TruncatedSeries::exp_linear(c, cap).tail_bound() * shift.exp();
    Ok(series.with_tail_bound(tail))
}

/// `⟨k_a, k_b⟩_α = e^{α ā·b − (α/2)(|a|² + |b|²)}`.
pub fn atom_inner(a: &CVector, b: &CVector, alpha: f64) -> Result<Complex64> {
    same_dim(a, b)?;
    let abar_b: Complex64 = a.0.iter().zip(&b.0).map(|(a, b)| a.conj() * b).sum();
    Ok((alpha * abar_b - 0.5 * alpha * (a.norm_sqr() + b.norm_sqr())).exp())
}

pub(crate) fn line_atom_inner(a: ComplexPoint, b: ComplexPoint, alpha: f64) -> Complex64 {
    (alpha * a.conj() * b - 0.5 * alpha * (a.norm_sqr() + b.norm_sqr())).exp()
}

/// `⟨f, K_a⟩_α` through the closed-form inner product; equals `f(a)`.
pub fn reproduce(f: &TruncatedSeries, a: ComplexPoint, params: &FockParams) -> Result<Complex64> {
    params.require_line()?;
    let atom = KernelAtom::unnormalized(a, params.alpha)?;
    let ka = atom_series(&atom, f.degree_cap())?;
    inner_product_closed(f, &ka, params)
}

/// Relative defect of the transformation law on the diagonal,
/// `K(z,z) = |k_a(z)|² K(z−a, z−a)`; with `a = z` this is
/// `K(z,z) = e^{α|z|²} K(0,0)`.
pub fn transform_diagonal_check(a: ComplexPoint, z: ComplexPoint, alpha: f64) -> f64 {
    let (za, zz) = (CVector::line(z - a), CVector::line(z));
    let atom = KernelAtom { a: CVector::line(a), alpha, normalized: true };
    let lhs = kernel_value(&zz, &zz, alpha).expect("same dimension").to_complex();
    let ka = atom.value(&zz).expect("same dimension").to_complex();
    let shifted = kernel_value(&za, &za, alpha).expect("same dimension").to_complex();
    let rhs = ka.norm_sqr() * shifted;
    (lhs - rhs).norm() / lhs.norm()
}

/// Hermitian Gram matrix `[⟨k_{z_i}, k_{z_j}⟩]`.
pub fn atom_gram(points: &[ComplexPoint], alpha: f64) -> DMatrix<Complex64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| line_atom_inner(points[i], points[j], alpha))
}

/// Smallest eigenvalue of the atom Gram matrix; PSD up to rounding.
pub fn gram_min_eigenvalue(points: &[ComplexPoint], alpha: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let eig = atom_gram(points, alpha).symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{inner_product_quadrature, QuadratureGrid};
    use crate::sampling::SeedStream;
    use crate::translations::{compose_phase, WeightedTranslation};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line(z: Complex64) -> CVector {
        CVector::line(z)
    }

    #[test]
    fn kernel_values() {
        let one = line(c(1.0, 0.0));
        let zero = line(c(0.0, 0.0));
        assert_eq!(kernel_value(&zero, &one, 2.0).unwrap(), KernelValue::Finite(c(1.0, 0.0)));
        let e = kernel_value(&one, &one, 1.0).unwrap().to_complex();
        assert!((e - std::f64::consts::E).norm() < 1e-15);

        let mut s = SeedStream::new(1);
        for _ in 0..20 {
            let (z, w) = (line(s.point_in_disk(2.0)), line(s.point_in_disk(2.0)));
            let zw = kernel_value(&z, &w, 1.3).unwrap().to_complex();
            let wz = kernel_value(&w, &z, 1.3).unwrap().to_complex();
            assert!((zw - wz.conj()).norm() < 1e-13 * zw.norm());
        }

        let big = line(c(30.0, 0.0));
        match kernel_value(&big, &big, 1.0).unwrap() {
            KernelValue::Scaled { ln_modulus, phase } => {
                assert_eq!(ln_modulus, 900.0);
                assert_eq!(phase, 0.0);
            }
            v => panic!("expected split value, got {v:?}"),
        }
    }

    #[test]
    fn atom_series_coefficients() {
        let k0 = atom_series(&KernelAtom::unnormalized(c(0.0, 0.0), 1.0).unwrap(), 5).unwrap();
        assert_eq!(k0.coeff(0), c(1.0, 0.0));
        assert!(k0.coeffs()[1..].iter().all(|c| c.norm() == 0.0));

        let k1 = atom_series(&KernelAtom::unnormalized(c(1.0, 0.0), 1.0).unwrap(), 10).unwrap();
        assert!((k1.coeff(2) - 0.5).norm() < 1e-15);

        let n1 = atom_series(&KernelAtom::normalized(c(1.0, 0.0), 1.0).unwrap(), 30).unwrap();
        assert!((n1.evaluate(c(1.0, 0.0)) - 0.5f64.exp()).norm() < 1e-10);
    }

    #[test]
    fn atom_inner_values() {
        let a = line(c(0.3, -1.1));
        assert!((atom_inner(&a, &a, 2.0).unwrap() - 1.0).norm() < 1e-15);
        let (z0, z1) = (line(c(0.0, 0.0)), line(c(1.0, 0.0)));
        let want = (-0.5f64).exp();
        assert!((atom_inner(&z0, &z1, 1.0).unwrap() - want).norm() < 1e-15);

        let p = FockParams::hilbert(1.0).unwrap();
        let grid = QuadratureGrid::new(1.0, 40).unwrap();
        let ka = atom_series(&KernelAtom::normalized(c(0.0, 0.0), 1.0).unwrap(), 40).unwrap();
        let kb = atom_series(&KernelAtom::normalized(c(1.0, 0.0), 1.0).unwrap(), 40).unwrap();
        let q = inner_product_quadrature(&ka, &kb, &p, &grid).unwrap();
        assert!((q - want).norm() < 1e-10);

        let mut s = SeedStream::new(2);
        for _ in 0..20 {
            let (a, b) = (s.point_in_disk(3.0), s.point_in_disk(3.0));
            let ab = atom_inner(&line(a), &line(b), 0.7).unwrap();
            assert!((ab.norm() - (-0.35 * (a - b).norm_sqr()).exp()).abs() < 1e-14);
            let ba = atom_inner(&line(b), &line(a), 0.7).unwrap();
            assert!((ab - ba.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn reproducing_property() {
        let p = FockParams::hilbert(1.0).unwrap();
        let one = TruncatedSeries::one(0);
        assert!((reproduce(&one, c(1.2, 0.4), &p).unwrap() - 1.0).norm() < 1e-15);
        let z2 = TruncatedSeries::monomial(2, c(1.0, 0.0), 2);
        assert!((reproduce(&z2, c(0.5, 0.0), &p).unwrap() - 0.25).norm() < 1e-10);

        let mut s = SeedStream::new(4);
        for _ in 0..20 {
            let f = s.dense_polynomial(15, 1.0);
            let a = s.point_in_disk(1.5);
            let fa = f.evaluate(a);
            assert!((reproduce(&f, a, &p).unwrap() - fa).norm() <= 1e-8 * (1.0 + fa.norm()));
        }
    }

    #[test]
    fn diagonal_law() {
        assert_eq!(transform_diagonal_check(c(0.0, 0.0), c(0.0, 0.0), 1.0), 0.0);
        assert!(transform_diagonal_check(c(1.0, 0.0), c(1.0, 0.0), 1.0) < 1e-15);
        let mut s = SeedStream::new(6);
        for &alpha in &[0.5, 1.0, 2.0] {
            for _ in 0..20 {
                let z = s.point_in_disk(3.0);
                assert!(transform_diagonal_check(z, z, alpha) <= 1e-12);
            }
        }
    }

    #[test]
    fn gram_is_psd() {
        let mut s = SeedStream::new(8);
        let pts: Vec<_> = (0..60).map(|_| s.point_in_disk(2.0)).collect();
        assert!(gram_min_eigenvalue(&pts, 1.0) >= -1e-10);
    }

    #[test]
    fn translation_moves_atoms() {
        let alpha = 1.0;
        let (a, b) = (c(0.5, 0.3), c(-0.4, 0.6));
        let kb = atom_series(&KernelAtom::normalized(b, alpha).unwrap(), 30).unwrap();
        let moved = WeightedTranslation::on_line(a, alpha).unwrap().apply(&kb).unwrap();
        let kab = atom_series(&KernelAtom::normalized(a + b, alpha).unwrap(), moved.degree_cap()).unwrap();
        let phase = compose_phase(&line(a), &line(b), alpha).unwrap();
        assert!(moved.max_coeff_diff(&kab.scale(phase)) < 1e-8);
    }
}
