//! Weighted Bergman spaces `A²_α` and the Hardy space `H²` on the unit disk.
//!
//! Both are diagonal in the monomials: `⟨z^j, z^k⟩ = δ_jk m_k` with
//! `m_k = k! Γ(α+2)/Γ(k+α+2)` (Bergman, normalized area measure
//! `(α+1)(1−|z|²)^α dA`) or `m_k = 1` (Hardy). The Möbius involution
//! `φ_a(z) = (a − z)/(1 − āz)` induces `U_a f = k_a · (f ∘ φ_a)`, with
//! `k_a(z) = (1−|a|²)^{s/2}/(1 − zā)^s`, `s = α + 2` (Bergman) or `s = 1`
//! (Hardy). `U_a` is computed on Taylor coefficients by series composition.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_gk15;
use crate::rigidity::{fit_diagonal, pair_defect, sample_pairs, CandidateSpace, RecoveryOptions, WeightRecovery};
use crate::series::{ComplexPoint, TruncatedSeries};
use crate::special::ln_gamma;

/// Smallest `|1 − āz|` accepted by [`mobius_apply`].
pub const POLE_GUARD: f64 = 1e-14;

/// `|a|` above which `U_a` coefficients grow like `(1 − |a|)^{−k}`.
pub const CONDITIONING_LIMIT: f64 = 0.9;

/// Largest `|a|` for function-level defect checks.
pub const FUNCTION_LEVEL_LIMIT: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    Bergman,
    Hardy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskParams {
    kind: SpaceKind,
    alpha: Option<f64>,
}

impl DiskParams {
    pub fn bergman(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > -1.0) {
            return Err(Error::InvalidParameter(format!("Bergman weight must be > -1, got {alpha}")));
        }
        Ok(DiskParams { kind: SpaceKind::Bergman, alpha: Some(alpha) })
    }

    pub fn hardy() -> Self {
        DiskParams { kind: SpaceKind::Hardy, alpha: None }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Exponent of the kernel and of the weight `k_a`.
    pub fn kernel_exponent(&self) -> f64 {
        match self.alpha {
            Some(alpha) => alpha + 2.0,
            None => 1.0,
        }
    }

    /// `ln ‖z^k‖²`.
    pub fn ln_moment(&self, k: usize) -> f64 {
        match self.alpha {
            Some(alpha) => ln_gamma(k as f64 + 1.0) + ln_gamma(alpha + 2.0) - ln_gamma(k as f64 + alpha + 2.0),
            None => 0.0,
        }
    }

    pub fn moment(&self, k: usize) -> f64 {
        self.ln_moment(k).exp()
    }

    /// The space's own inner product as a diagonal candidate of degree `cap`.
    pub fn candidate(&self, cap: usize) -> CandidateSpace {
        CandidateSpace::diagonal((0..=cap).map(|k| self.moment(k)).collect()).expect("moments are positive")
    }
}

/// `‖z^k‖²` by quadrature: `(α+1) ∫_0^1 t^k (1−t)^α dt` for Bergman, the
/// angular mean of `|ζ^k|² = 1` for Hardy. Cross-checks [`DiskParams::moment`].
pub fn moment_quadrature(k: usize, params: &DiskParams) -> f64 {
    match params.alpha {
        Some(alpha) => {
            let integrand = |t: f64| (alpha + 1.0) * t.powi(k as i32) * (1.0 - t).powf(alpha);
            adaptive_gk15(integrand, 0.0, 1.0, 8, 1e-13, 1e-300, 4000)
        }
        None => {
            let m = 64;
            (0..m).map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64).powu(k as u32).norm_sqr()).sum::<f64>()
                / m as f64
        }
    }
}

pub fn disk_inner(f: &TruncatedSeries, g: &TruncatedSeries, params: &DiskParams) -> Complex64 {
    let n = f.degree_cap().min(g.degree_cap());
    (0..=n).map(|k| f.coeff(k) * g.coeff(k).conj() * params.moment(k)).sum()
}

pub fn disk_norm(f: &TruncatedSeries, params: &DiskParams) -> f64 {
    disk_inner(f, f, params).re.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: ComplexPoint,
}

impl MobiusMap {
    pub fn new(a: ComplexPoint) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("Möbius parameter must satisfy |a| < 1, got {a}")));
        }
        Ok(MobiusMap { a })
    }

    pub fn a(&self) -> ComplexPoint {
        self.a
    }

    /// Taylor series of `φ_a`: `a + Σ_{k≥1} (|a|² − 1) ā^{k−1} z^k`.
    pub fn series(&self, cap: usize) -> TruncatedSeries {
        let r = self.a.norm();
        let mut coeffs = vec![self.a];
        let mut ak = Complex64::new(1.0, 0.0);
        for _ in 1..=cap {
            coeffs.push(ak * (r * r - 1.0));
            ak *= self.a.conj();
        }
        // Σ_{k>cap} (1 − |a|²)|a|^{k−1}
        let tail = if r == 0.0 { 0.0 } else { (1.0 + r) * r.powi(cap as i32) };
        TruncatedSeries::new(coeffs).expect("finite").with_tail_bound(tail)
    }
}

pub fn mobius_apply(map: &MobiusMap, z: ComplexPoint) -> Result<ComplexPoint> {
    let den = Complex64::new(1.0, 0.0) - map.a.conj() * z;
    if den.norm() < POLE_GUARD {
        return Err(Error::Pole(den.norm()));
    }
    Ok((map.a - z) / den)
}

/// `k_a(z) = (1−|a|²)^{s/2} / (1 − zā)^s`.
pub fn weight_function(map: &MobiusMap, z: ComplexPoint, params: &DiskParams) -> Complex64 {
    let s = params.kernel_exponent();
    let base = Complex64::new(1.0, 0.0) - z * map.a.conj();
    (0.5 * s * (1.0 - map.a.norm_sqr()).ln() - s * base.ln()).exp()
}

/// Taylor series of `k_a` up to `cap`: `(1−|a|²)^{s/2} Σ (s)_k/k! ā^k z^k`.
pub fn weight_series(map: &MobiusMap, params: &DiskParams, cap: usize) -> TruncatedSeries {
    let s = params.kernel_exponent();
    let abar = map.a.conj();
    let mut term = Complex64::new((0.5 * s * (1.0 - map.a.norm_sqr()).ln()).exp(), 0.0);
    let mut coeffs = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        coeffs.push(term);
        term *= abar * ((s + k as f64) / (k + 1) as f64);
    }
    // Remaining terms decrease once k > s|a|/(1−|a|); sum them until negligible.
    let mut tail = 0.0;
    let mut k = cap + 1;
    while term.norm() > 1e-18 * (1.0 + tail) && k < cap + 100_000 {
        tail += term.norm();
        term *= abar * ((s + k as f64) / (k + 1) as f64);
        k += 1;
    }
    TruncatedSeries::new(coeffs).expect("finite").with_tail_bound(tail)
}

/// Taylor coefficients of `U_a f = k_a · (f ∘ φ_a)` up to degree `cap`.
///
/// Truncated composition is exact per coefficient; the stored tail bound
/// tracks what lies beyond `cap`.
pub fn u_operator(map: &MobiusMap, f: &TruncatedSeries, params: &DiskParams, cap: usize) -> Result<TruncatedSeries> {
    if let Some(d) = f.degree() {
        if d > cap {
            return Err(Error::DegreeOverflow { degree: d, cap });
        }
    }
    let composed = f.compose(&map.series(cap), cap);
    Ok(weight_series(map, params, cap).mul(&composed, cap))
}

/// Cap at which `U_a f` (deg `f ≤ degree`) has shed all but ~`e^{-75}` of
/// its Taylor mass: the spread `degree (1+|a|)/(1−|a|)` plus a geometric tail.
pub fn function_level_cap(a: ComplexPoint, degree: usize) -> usize {
    let r = a.norm();
    if r == 0.0 {
        return degree;
    }
    (degree as f64 * (1.0 + r) / (1.0 - r) + 75.0 / -r.ln()).ceil() as usize
}

/// `max_k |(U_a U_a f)_k − f_k|` over `k ≤ cap/2`, computed at `cap`.
pub fn involution_defect(map: &MobiusMap, f: &TruncatedSeries, params: &DiskParams, cap: usize) -> Result<f64> {
    let back = u_operator(map, &u_operator(map, f, params, cap)?, params, cap)?;
    Ok((0..=cap / 2).map(|k| (back.coeff(k) - f.coeff(k)).norm()).fold(0.0, f64::max))
}

/// `|‖U_a f‖ − ‖f‖|`.
pub fn isometry_defect(map: &MobiusMap, f: &TruncatedSeries, params: &DiskParams, cap: usize) -> Result<f64> {
    Ok((disk_norm(&u_operator(map, f, params, cap)?, params) - disk_norm(f, params)).abs())
}

/// Whether `U_a` coefficients are well conditioned at this `a`.
pub fn well_conditioned(map: &MobiusMap) -> bool {
    map.a.norm() <= CONDITIONING_LIMIT
}

/// `1/(1 − z w̄)^s`.
pub fn disk_kernel(z: ComplexPoint, w: ComplexPoint, params: &DiskParams) -> Result<Complex64> {
    if !(z.norm() < 1.0 && w.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("kernel arguments must lie in the open disk: {z}, {w}")));
    }
    let base = Complex64::new(1.0, 0.0) - z * w.conj();
    Ok((-params.kernel_exponent() * base.ln()).exp())
}

/// Relative defect of `K(a,a) = |k_a(a)|² K(0,0)`.
pub fn disk_diagonal_law(a: ComplexPoint, params: &DiskParams) -> Result<f64> {
    let map = MobiusMap::new(a)?;
    let kaa = disk_kernel(a, a, params)?.re;
    let k0 = disk_kernel(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), params)?.re;
    let ka = weight_function(&map, a, params).norm_sqr();
    Ok((kaa - ka * k0).abs() / kaa)
}

/// Relative defect of `K(z,w) = k_a(z) conj(k_a(w)) K(φ_a z, φ_a w)`.
pub fn kernel_transformation_defect(a: ComplexPoint, z: ComplexPoint, w: ComplexPoint, params: &DiskParams) -> Result<f64> {
    let map = MobiusMap::new(a)?;
    let lhs = disk_kernel(z, w, params)?;
    let rhs = weight_function(&map, z, params)
        * weight_function(&map, w, params).conj()
        * disk_kernel(mobius_apply(&map, z)?, mobius_apply(&map, w)?, params)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// `⟨f, K_w⟩` from coefficients: `Σ f_k w^k` after weighting by the moments
/// of the kernel expansion `K_w(z) = Σ (s)_k/k! w̄^k z^k`.
pub fn reproduce(f: &TruncatedSeries, w: ComplexPoint, params: &DiskParams) -> Result<Complex64> {
    if !(w.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("point must lie in the open disk: {w}")));
    }
    let s = params.kernel_exponent();
    let mut kernel_coeff = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=f.degree_cap() {
        // ⟨z^k, c_k z^k⟩ = conj(c_k) m_k with c_k = (s)_k/k! w̄^k
        sum += f.coeff(k) * kernel_coeff.conj() * params.moment(k);
        kernel_coeff *= w.conj() * ((s + k as f64) / (k + 1) as f64);
    }
    Ok(sum)
}

/// `√(Σ_{k≥1} k |f_k|²)`: the Dirichlet seminorm for the normalized area measure.
pub fn dirichlet_seminorm(f: &TruncatedSeries) -> f64 {
    f.coeffs().iter().enumerate().skip(1).map(|(k, c)| k as f64 * c.norm_sqr()).sum::<f64>().sqrt()
}

/// Degree headroom between test polynomials and the space cap.
pub const DISK_HEADROOM: usize = 15;

/// Largest test degree at shift `a`: `⌊(cap − 15)(1 − |a|)/(1 + |a|)⌋`.
///
/// `U_a z^d` carries Taylor mass out to degree about `d (1+|a|)/(1−|a|)`,
/// so the plain headroom is not enough to keep it inside the cap.
pub fn disk_sample_degree(a: ComplexPoint, cap: usize) -> Result<usize> {
    let room = cap.checked_sub(DISK_HEADROOM).ok_or(Error::DegreeOverflow { degree: DISK_HEADROOM, cap })?;
    let r = a.norm();
    Ok((room as f64 * (1.0 - r) / (1.0 + r)).floor() as usize)
}

/// Max over seeded pairs of [`pair_defect`] for `U_a`.
///
/// Test polynomials have degree `≤` [`disk_sample_degree`] and unit norm in `params`;
/// as for translations, every unit monomial is also paired with itself.
pub fn disk_rigidity_defect(
    space: &CandidateSpace,
    a: ComplexPoint,
    params: &DiskParams,
    sample_count: usize,
    seed: u64,
) -> Result<f64> {
    if a.norm() > FUNCTION_LEVEL_LIMIT {
        return Err(Error::InvalidParameter(format!("|a| = {} exceeds {FUNCTION_LEVEL_LIMIT}", a.norm())));
    }
    let cap = space.degree_cap();
    let degree = disk_sample_degree(a, cap)?;
    let map = MobiusMap::new(a)?;
    let mut worst: f64 = 0.0;
    for (f, g) in sample_pairs(seed, sample_count, degree, |k| params.ln_moment(k)) {
        let (uf, ug) = (u_operator(&map, &f, params, cap)?, u_operator(&map, &g, params, cap)?);
        worst = worst.max(pair_defect(space, &f, &g, &uf, &ug)?);
    }
    Ok(worst)
}

/// Shifts used by the disk invariance checks, `|a| ≈ 0.35`.
pub fn standard_disk_shifts() -> [ComplexPoint; 3] {
    [Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.3), Complex64::new(0.25, 0.25)]
}

/// Shifts used by disk weight recovery.
pub fn default_disk_shifts() -> Vec<ComplexPoint> {
    vec![Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.2), Complex64::new(0.15, 0.15)]
}

/// Cap for disk weight recovery.
pub const DISK_RECOVERY_CAP: usize = 24;

/// Recover a diagonal `U_a`-invariant form from Möbius data alone; the
/// disk counterpart of [`crate::rigidity::recover_weights`]. Test
/// polynomials default to degree `cap − 14`, which keeps `U_a f` inside the
/// cap for the default shifts.
pub fn recover_disk_weights(
    params: &DiskParams,
    cap: usize,
    shifts: &[ComplexPoint],
    seed: u64,
    opts: &RecoveryOptions,
) -> Result<WeightRecovery> {
    if cap < 8 {
        return Err(Error::InvalidParameter(format!("weight recovery needs cap >= 8, got {cap}")));
    }
    if shifts.is_empty() {
        return Err(Error::InvalidParameter("weight recovery needs at least one shift".into()));
    }
    let degree = opts.sample_degree.unwrap_or(cap.saturating_sub(14)).min(cap);
    let pairs = sample_pairs(seed, opts.pairs_per_shift, degree, |k| params.ln_moment(k));
    let mut rows = Vec::with_capacity(shifts.len() * pairs.len());
    for &a in shifts {
        let map = MobiusMap::new(a)?;
        for (f, g) in &pairs {
            let (uf, ug) = (u_operator(&map, f, params, cap)?, u_operator(&map, g, params, cap)?);
            rows.push((0..=cap).map(|k| uf.coeff(k) * ug.coeff(k).conj() - f.coeff(k) * g.coeff(k).conj()).collect());
        }
    }
    let fit = fit_diagonal(&rows, cap, None, opts.max_sweeps, |_, prev| prev)?;
    let space = CandidateSpace::diagonal(fit.weights.clone())?;
    let mut final_defect = 0.0;
    for &a in shifts {
        let mut worst: f64 = 0.0;
        let map = MobiusMap::new(a)?;
        for (f, g) in &pairs {
            let (uf, ug) = (u_operator(&map, f, params, cap)?, u_operator(&map, g, params, cap)?);
            worst = worst.max(pair_defect(&space, f, g, &uf, &ug)?);
        }
        final_defect += worst;
    }
    Ok(WeightRecovery {
        weights: fit.weights,
        sweeps: fit.sweeps,
        objective: fit.objective,
        final_defect,
        stalled: fit.stalled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SeedStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spaces() -> Vec<DiskParams> {
        vec![DiskParams::bergman(0.0).unwrap(), DiskParams::bergman(1.0).unwrap(), DiskParams::bergman(2.5).unwrap(), DiskParams::hardy()]
    }

    #[test]
    fn moments_match_quadrature() {
        for p in spaces() {
            for k in [0usize, 1, 2, 7, 20] {
                let (m, q) = (p.moment(k), moment_quadrature(k, &p));
                assert!((m - q).abs() < 1e-12 * m, "{p:?} k={k}: {m} vs {q}");
            }
        }
        assert!(DiskParams::bergman(-1.0).is_err());
        let z = TruncatedSeries::monomial(1, c(1.0, 0.0), 1);
        assert!((disk_inner(&z, &z, &DiskParams::bergman(0.0).unwrap()).re - 0.5).abs() < 1e-15);
        assert_eq!(disk_inner(&z, &z, &DiskParams::hardy()), c(1.0, 0.0));
    }

    #[test]
    fn mobius_is_an_involution() {
        let map = MobiusMap::new(c(0.3, -0.5)).unwrap();
        assert!((mobius_apply(&map, c(0.0, 0.0)).unwrap() - map.a()).norm() < 1e-15);
        assert!(mobius_apply(&map, map.a()).unwrap().norm() < 1e-15);
        let mut s = SeedStream::new(5);
        for _ in 0..50 {
            let z = s.point_in_disk(1.0);
            let back = mobius_apply(&map, mobius_apply(&map, z).unwrap()).unwrap();
            assert!((back - z).norm() < 1e-12);
            let u = Complex64::from_polar(1.0, s.uniform(0.0, 6.3));
            assert!((mobius_apply(&map, u).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        assert!(MobiusMap::new(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn u_operator_examples() {
        let hardy = DiskParams::hardy();
        let one = TruncatedSeries::one(0);
        let u = u_operator(&MobiusMap::new(c(0.5, 0.0)).unwrap(), &one, &hardy, 30).unwrap();
        for k in 0..=30 {
            assert!((u.coeff(k) - 0.75f64.sqrt() * 0.5f64.powi(k as i32)).norm() < 1e-15);
        }
        let f = TruncatedSeries::new(vec![c(1.0, 0.0), c(2.0, 1.0), c(0.0, -3.0)]).unwrap();
        let u0 = u_operator(&MobiusMap::new(c(0.0, 0.0)).unwrap(), &f, &DiskParams::bergman(1.0).unwrap(), 2).unwrap();
        assert!(u0.max_coeff_diff(&TruncatedSeries::new(vec![c(1.0, 0.0), c(-2.0, -1.0), c(0.0, -3.0)]).unwrap()) < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let b0 = DiskParams::bergman(0.0).unwrap();
        assert!((disk_kernel(c(0.5, 0.0), c(0.5, 0.0), &b0).unwrap().re - 16.0 / 9.0).abs() < 1e-14);
        assert_eq!(disk_kernel(c(0.0, 0.0), c(0.3, 0.2), &b0).unwrap(), c(1.0, 0.0));
        let z3 = TruncatedSeries::monomial(3, c(1.0, 0.0), 3);
        assert!((reproduce(&z3, c(0.4, 0.0), &DiskParams::hardy()).unwrap() - 0.064).norm() < 1e-10);
        assert_eq!(disk_diagonal_law(c(0.0, 0.0), &b0).unwrap(), 0.0);
        assert!(disk_diagonal_law(c(0.5, 0.0), &b0).unwrap() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        assert_eq!(dirichlet_seminorm(&TruncatedSeries::one(5)), 0.0);
        assert_eq!(dirichlet_seminorm(&TruncatedSeries::monomial(1, c(1.0, 0.0), 1)), 1.0);
        let f = TruncatedSeries::new(vec![c(0.0, 0.0), c(1.0, 2.0), c(-0.5, 0.0)]).unwrap();
        let g = &f + &TruncatedSeries::constant(c(4.0, -1.0), 0);
        assert_eq!(dirichlet_seminorm(&f), dirichlet_seminorm(&g));
    }

    #[test]
    fn rigidity_defect_separates() {
        let b0 = DiskParams::bergman(0.0).unwrap();
        for a in standard_disk_shifts() {
            for p in spaces() {
                let d = disk_rigidity_defect(&p.candidate(40), a, &p, 16, 3).unwrap();
                assert!(d <= 1e-6, "{p:?}: {d}");
            }
            let d = disk_rigidity_defect(&DiskParams::hardy().candidate(40), a, &b0, 16, 3).unwrap();
            assert!(d >= 1e-2, "{d}");
        }
        assert!(disk_rigidity_defect(&b0.candidate(40), c(0.8, 0.0), &b0, 4, 3).is_err());
    }

    #[test]
    fn u_is_an_isometric_involution() {
        let mut s = SeedStream::new(21);
        for p in spaces() {
            let map = MobiusMap::new(c(-0.4, 0.5)).unwrap();
            let f = s.dense_polynomial_weighted(10, |k| p.ln_moment(k));
            let cap = function_level_cap(map.a(), 10);
            assert!(involution_defect(&map, &f, &p, cap).unwrap() < 1e-10);
            assert!(isometry_defect(&map, &f, &p, cap).unwrap() < 1e-10);
        }
    }

    #[test]
    fn recovers_bergman_moments() {
        let p = DiskParams::bergman(1.0).unwrap();
        let r = recover_disk_weights(&p, DISK_RECOVERY_CAP, &default_disk_shifts(), 1, &RecoveryOptions::default()).unwrap();
        for k in 0..=10 {
            assert!((r.weights[k] / p.moment(k) - 1.0).abs() < 1e-4, "k={k}");
        }
    }
}
