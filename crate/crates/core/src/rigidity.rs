//! Candidate inner products on polynomials and the measurements that single
//! out `F²_α` among them: invariance under weighted translations, the
//! constancy of `F(a) = ⟨1, K_a⟩_H`, the kernel diagonal law, and embedding
//! constants between `F^p_α` spaces.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{p_norm, Exponent, FockParams, QuadratureGrid};
use crate::sampling::SeedStream;
use crate::series::{ComplexPoint, TruncatedSeries};
use crate::special::{ln_factorial, ln_fock_weight};
use crate::translations::{cap_headroom, WeightedTranslation};

/// Hermitian form on polynomials of degree `≤ N`: diagonal `w_k` plus an
/// optional first off-diagonal `⟨z^k, z^{k+1}⟩_H = b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSpace {
    weights: Vec<f64>,
    band: Option<Vec<Complex64>>,
}

impl CandidateSpace {
    pub fn diagonal(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, None)
    }

    /// Rejects non-positive weights and bands that break positive
    /// definiteness (checked through the tridiagonal LDL* pivots).
    pub fn new(weights: Vec<f64>, band: Option<Vec<Complex64>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("candidate space needs at least one weight".into()));
        }
        if let Some(k) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::NotPositiveDefinite { index: k, pivot: weights[k] });
        }
        if let Some(b) = &band {
            if b.len() + 1 != weights.len() {
                return Err(Error::DimensionMismatch { left: b.len() + 1, right: weights.len() });
            }
            let mut pivot = weights[0];
            for k in 1..weights.len() {
                pivot = weights[k] - b[k - 1].norm_sqr() / pivot;
                if !(pivot > 0.0) {
                    return Err(Error::NotPositiveDefinite { index: k, pivot });
                }
            }
        }
        Ok(CandidateSpace { weights, band })
    }

    /// `w_k = k!/α^k`, the `F²_α` form.
    pub fn fock(alpha: f64, cap: usize) -> Self {
        let weights = (0..=cap).map(|k| ln_fock_weight(k, alpha).exp()).collect();
        CandidateSpace { weights, band: None }
    }

    pub fn degree_cap(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn band(&self) -> Option<&[Complex64]> {
        self.band.as_deref()
    }

    pub fn is_diagonal(&self) -> bool {
        self.band.as_ref().is_none_or(|b| b.iter().all(|x| x.norm() == 0.0))
    }

    /// Every weight and band entry multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(
            self.weights.iter().map(|w| w * c).collect(),
            self.band.as_ref().map(|b| b.iter().map(|x| x * c).collect()),
        )
    }

    /// Copy with `w_k` multiplied by `factor`.
    pub fn with_weight_scaled(&self, k: usize, factor: f64) -> Result<Self> {
        let mut w = self.weights.clone();
        w[k] *= factor;
        Self::new(w, self.band.clone())
    }

    fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.weights.len();
        let mut h = DMatrix::from_fn(n, n, |i, j| if i == j { Complex64::new(self.weights[i], 0.0) } else { Complex64::new(0.0, 0.0) });
        if let Some(b) = &self.band {
            for (k, bk) in b.iter().enumerate() {
                h[(k, k + 1)] = *bk;
                h[(k + 1, k)] = bk.conj();
            }
        }
        h
    }
}

fn check_degree(f: &TruncatedSeries, cap: usize) -> Result<()> {
    match f.degree() {
        Some(d) if d > cap => Err(Error::DegreeOverflow { degree: d, cap }),
        _ => Ok(()),
    }
}

/// `⟨f, g⟩_H = Σ w_k f_k ḡ_k + Σ (b_k f_k ḡ_{k+1} + b̄_k f_{k+1} ḡ_k)`.
pub fn candidate_inner(space: &CandidateSpace, f: &TruncatedSeries, g: &TruncatedSeries) -> Result<Complex64> {
    let cap = space.degree_cap();
    check_degree(f, cap)?;
    check_degree(g, cap)?;
    let n = f.degree_cap().min(g.degree_cap()).min(cap);
    let mut sum: Complex64 = (0..=n).map(|k| space.weights[k] * f.coeff(k) * g.coeff(k).conj()).sum();
    if let Some(b) = &space.band {
        for (k, bk) in b.iter().enumerate() {
            sum += bk * f.coeff(k) * g.coeff(k + 1).conj() + bk.conj() * f.coeff(k + 1) * g.coeff(k).conj();
        }
    }
    Ok(sum)
}

/// `|⟨Tf, Tg⟩_H − ⟨f, g⟩_H| / (‖f‖_H ‖g‖_H)` for an operator image `(tf, tg)`
/// of `(f, g)`. Homogeneous of degree zero in the form, so rescaling every
/// weight by `c > 0` leaves it unchanged.
pub fn pair_defect(
    space: &CandidateSpace,
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    tf: &TruncatedSeries,
    tg: &TruncatedSeries,
) -> Result<f64> {
    let before = candidate_inner(space, f, g)?;
    let after = candidate_inner(space, tf, tg)?;
    let scale = (candidate_inner(space, f, f)?.re * candidate_inner(space, g, g)?.re).sqrt();
    Ok((after - before).norm() / scale.max(f64::MIN_POSITIVE))
}

/// One measured pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSample {
    pub a: ComplexPoint,
    pub f_index: usize,
    pub g_index: usize,
    pub defect: f64,
}

/// Largest degree a sample may have so `T_a f` still fits in `cap`.
pub fn sample_degree(alpha: f64, a: ComplexPoint, cap: usize) -> Result<usize> {
    let h = cap_headroom(alpha, a.norm());
    cap.checked_sub(h).ok_or(Error::DegreeOverflow { degree: h, cap })
}

/// Test pairs: every unit monomial paired with itself, so each weight up to
/// `degree` is probed directly, followed by `count` seeded sparse pairs (one
/// to three monomials each).
pub(crate) fn sample_pairs(
    seed: u64,
    count: usize,
    degree: usize,
    ln_weight: impl Fn(usize) -> f64 + Copy,
) -> Vec<(TruncatedSeries, TruncatedSeries)> {
    let root = SeedStream::new(seed).fork("invariance");
    let monomials = (0..=degree).map(|k| {
        let e = TruncatedSeries::monomial(k, Complex64::new((-0.5 * ln_weight(k)).exp(), 0.0), degree);
        (e.clone(), e)
    });
    let sparse = (0..count).map(|i| {
        let mut s = root.fork_indexed("pair", i);
        (s.sparse_polynomial_weighted(degree, 3, ln_weight), s.sparse_polynomial_weighted(degree, 3, ln_weight))
    });
    monomials.chain(sparse).collect()
}

/// All per-pair [`pair_defect`]s for `T_a`.
pub fn invariance_samples(
    space: &CandidateSpace,
    a: ComplexPoint,
    sample_count: usize,
    seed: u64,
    params: &FockParams,
) -> Result<Vec<DefectSample>> {
    params.require_line()?;
    let cap = space.degree_cap();
    let degree = sample_degree(params.alpha, a, cap)?;
    let t = WeightedTranslation::on_line(a, params.alpha)?;
    sample_pairs(seed, sample_count, degree, |k| ln_fock_weight(k, params.alpha))
        .par_iter()
        .enumerate()
        .map(|(i, (f, g))| {
            let (tf, tg) = (t.apply(f)?.with_cap(cap), t.apply(g)?.with_cap(cap));
            let defect = pair_defect(space, f, g, &tf, &tg)?;
            Ok(DefectSample { a, f_index: 2 * i, g_index: 2 * i + 1, defect })
        })
        .collect()
}

/// Max over seeded pairs of the relative invariance defect.
pub fn invariance_defect(
    space: &CandidateSpace,
    a: ComplexPoint,
    sample_count: usize,
    seed: u64,
    params: &FockParams,
) -> Result<f64> {
    if a == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    let samples = invariance_samples(space, a, sample_count, seed, params)?;
    Ok(samples.iter().map(|s| s.defect).fold(0.0, f64::max))
}

/// `Σ_a invariance_defect(a)`.
pub fn summed_invariance_defect(
    space: &CandidateSpace,
    shifts: &[ComplexPoint],
    sample_count: usize,
    seed: u64,
    params: &FockParams,
) -> Result<f64> {
    shifts.iter().map(|&a| invariance_defect(space, a, sample_count, seed, params)).sum()
}

/// Shifts used by the rigidity checks: `0.5`, `0.5i`, `0.4 + 0.4i`.
pub fn standard_shifts() -> [ComplexPoint; 3] {
    [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5), Complex64::new(0.4, 0.4)]
}

/// `max_k |w_k α^k/k! − w_0|` over `k ≤ k_max`.
pub fn weight_deviation(space: &CandidateSpace, alpha: f64, k_max: usize) -> f64 {
    let w = space.weights();
    (0..=k_max.min(space.degree_cap()))
        .map(|k| (w[k] * (-ln_fock_weight(k, alpha)).exp() - w[0]).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOptions {
    /// Degree of the test polynomials; `cap − 6` when `None`.
    pub sample_degree: Option<usize>,
    pub pairs_per_shift: usize,
    pub max_sweeps: usize,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        RecoveryOptions { sample_degree: None, pairs_per_shift: 40, max_sweeps: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightRecovery {
    /// Recovered `w_0..w_N` with `w_0 = 1`.
    pub weights: Vec<f64>,
    /// Coordinate-descent sweeps that lowered the objective.
    pub sweeps: usize,
    /// Normalized least-squares objective at the returned weights.
    pub objective: f64,
    /// Summed invariance defect of the returned weights.
    pub final_defect: f64,
    /// True when the sweep budget ran out while still improving.
    pub stalled: bool,
}

/// Shifts recovery uses unless told otherwise: three non-collinear points
/// of modulus about `0.3/√α`.
pub fn default_recovery_shifts(alpha: f64) -> Vec<ComplexPoint> {
    let s = 0.3 / alpha.sqrt();
    vec![Complex64::new(s, 0.0), Complex64::new(0.0, s), Complex64::new(0.7 * s, 0.7 * s)]
}

fn non_collinear(points: &[ComplexPoint]) -> bool {
    let Some(&p0) = points.first() else { return false };
    points.iter().any(|&p| {
        points.iter().any(|&q| {
            let (u, v) = (p - p0, q - p0);
            (u.re * v.im - u.im * v.re).abs() > 1e-12 * (1.0 + u.norm() * v.norm())
        })
    })
}

fn recovery_degree(cap: usize, opts: &RecoveryOptions) -> usize {
    opts.sample_degree.unwrap_or(cap.saturating_sub(6)).min(cap)
}

/// A sweep counts only if it lowers the normalized objective by more than
/// this. Truncating `T_a f` at the cap leaves even the exact weights with
/// an objective near `1e-15`, so a tighter threshold would chase truncation.
pub const SWEEP_TOL: f64 = 1e-12;

/// Rows `c_k = (T_a f)_k conj((T_a g)_k) − f_k conj(g_k)`: a diagonal form
/// is invariant on the pair iff `Σ_k w_k c_k = 0`.
fn invariance_rows(alpha: f64, cap: usize, shifts: &[ComplexPoint], seed: u64, opts: &RecoveryOptions) -> Result<Vec<Vec<Complex64>>> {
    let degree = recovery_degree(cap, opts);
    let pairs = sample_pairs(seed, opts.pairs_per_shift, degree, |k| ln_fock_weight(k, alpha));
    let mut rows = Vec::with_capacity(shifts.len() * pairs.len());
    for &a in shifts {
        let t = WeightedTranslation::on_line(a, alpha)?;
        for (f, g) in &pairs {
            let (tf, tg) = (t.apply(f)?, t.apply(g)?);
            rows.push((0..=cap).map(|k| tf.coeff(k) * tg.coeff(k).conj() - f.coeff(k) * g.coeff(k).conj()).collect());
        }
    }
    Ok(rows)
}

/// Real least-squares system `A x ≈ y` for `w_1..w_N` with `w_0 = 1`.
struct LinearSystem {
    a: DMatrix<f64>,
    y: Vec<f64>,
    scale: Vec<f64>,
}

impl LinearSystem {
    fn new(rows: &[Vec<Complex64>], cap: usize) -> Self {
        let m = 2 * rows.len();
        let mut a = DMatrix::zeros(m, cap);
        let mut y = vec![0.0; m];
        for (r, row) in rows.iter().enumerate() {
            y[2 * r] = -row[0].re;
            y[2 * r + 1] = -row[0].im;
            for k in 1..=cap {
                a[(2 * r, k - 1)] = row[k].re;
                a[(2 * r + 1, k - 1)] = row[k].im;
            }
        }
        let scale: Vec<f64> = (0..cap).map(|j| a.column(j).norm().max(f64::MIN_POSITIVE)).collect();
        LinearSystem { a, y, scale }
    }

    /// Column-equilibrated SVD solve; singular values below `1e-12·σ_max`
    /// are dropped. Directions that weak are set by truncation noise, not data.
    fn solve(&self) -> Result<Vec<f64>> {
        let mut scaled = self.a.clone();
        for (j, s) in self.scale.iter().enumerate() {
            scaled.column_mut(j).scale_mut(1.0 / s);
        }
        let svd = scaled.svd(true, true);
        let tol = 1e-12 * svd.singular_values.max();
        let x = svd
            .solve(&nalgebra::DVector::from_vec(self.y.clone()), tol)
            .map_err(|e| Error::SolverFailure(e.to_string()))?;
        let mut w = vec![1.0];
        w.extend(x.iter().zip(&self.scale).map(|(x, s)| x / s));
        Ok(w)
    }
}

pub(crate) struct DiagonalFit {
    pub weights: Vec<f64>,
    pub sweeps: usize,
    pub objective: f64,
    pub stalled: bool,
}

/// Least-squares fit of `w_1..w_N` (with `w_0 = 1`) to invariance rows,
/// polished by coordinate descent. Weights the solve leaves non-positive
/// are replaced by `fill(k, w_{k−1})`.
pub(crate) fn fit_diagonal(
    rows: &[Vec<Complex64>],
    cap: usize,
    initial: Option<&[f64]>,
    max_sweeps: usize,
    fill: impl Fn(usize, f64) -> f64,
) -> Result<DiagonalFit> {
    let sys = LinearSystem::new(rows, cap);
    let mut w = match initial {
        Some(w0) => {
            if w0.len() != cap + 1 {
                return Err(Error::DimensionMismatch { left: w0.len(), right: cap + 1 });
            }
            w0.iter().map(|w| w / w0[0]).collect()
        }
        None => sys.solve()?,
    };
    // Poorly determined high-degree weights may come out non-positive.
    for k in 1..=cap {
        if !(w[k] > 0.0) {
            w[k] = fill(k, w[k - 1]);
        }
    }

    let col_sq: Vec<f64> = (0..cap).map(|j| sys.a.column(j).norm_squared()).collect();
    let mut resid = {
        let x = nalgebra::DVector::from_iterator(cap, w[1..=cap].iter().copied());
        &sys.a * x - nalgebra::DVector::from_vec(sys.y.clone())
    };
    let y_sq = sys.y.iter().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut objective = resid.norm_squared() / y_sq;
    let mut sweeps = 0;
    let mut stalled = true;
    for _ in 0..max_sweeps {
        let mut trial_w = w.clone();
        let mut trial_r = resid.clone();
        for j in 0..cap {
            if col_sq[j] == 0.0 {
                continue;
            }
            let step = -sys.a.column(j).dot(&trial_r) / col_sq[j];
            // exact line minimization, clamped so the weight stays positive
            let next = (trial_w[j + 1] + step).max(0.1 * trial_w[j + 1]);
            trial_r.axpy(next - trial_w[j + 1], &sys.a.column(j), 1.0);
            trial_w[j + 1] = next;
        }
        let trial_obj = trial_r.norm_squared() / y_sq;
        if !(objective - trial_obj > SWEEP_TOL) {
            stalled = false;
            break;
        }
        w = trial_w;
        resid = trial_r;
        objective = trial_obj;
        sweeps += 1;
    }

    Ok(DiagonalFit { weights: w, sweeps, objective, stalled })
}

/// Recover a diagonal invariant form from translation data alone.
///
/// The invariance conditions are linear in the weights, so a column-scaled
/// SVD solve gives a starting point; coordinate descent over the weights then
/// polishes it until a sweep no longer lowers the objective by [`SWEEP_TOL`].
pub fn recover_weights(alpha: f64, cap: usize, shifts: &[ComplexPoint], seed: u64) -> Result<WeightRecovery> {
    recover_weights_with(alpha, cap, shifts, seed, None, &RecoveryOptions::default())
}

pub fn recover_weights_with(
    alpha: f64,
    cap: usize,
    shifts: &[ComplexPoint],
    seed: u64,
    initial: Option<&[f64]>,
    opts: &RecoveryOptions,
) -> Result<WeightRecovery> {
    if cap < 8 {
        return Err(Error::InvalidParameter(format!("weight recovery needs cap >= 8, got {cap}")));
    }
    if shifts.len() < 3 || !non_collinear(shifts) {
        return Err(Error::InvalidParameter("weight recovery needs at least 3 non-collinear shifts".into()));
    }
    let params = FockParams::hilbert(alpha)?;
    let rows = invariance_rows(alpha, cap, shifts, seed, opts)?;
    let fit = fit_diagonal(&rows, cap, initial, opts.max_sweeps, |k, prev| prev * k as f64 / alpha)?;
    let (w, sweeps, objective, stalled) = (fit.weights, fit.sweeps, fit.objective, fit.stalled);

    let space = CandidateSpace::diagonal(w.clone())?;
    let defect_shifts: Vec<ComplexPoint> =
        shifts.iter().copied().filter(|a| sample_degree(alpha, *a, cap).is_ok()).collect();
    let final_defect = summed_invariance_defect(&space, &defect_shifts, opts.pairs_per_shift, seed, &params)?;
    Ok(WeightRecovery { weights: w, sweeps, objective, final_defect, stalled })
}

/// Partial sums above this count as divergence in [`f_function`].
pub const DIVERGENCE_THRESHOLD: f64 = 1e300;

/// `F(a) = Σ_k (α^k/k!) ⟨1, z^k⟩_H a^k`.
pub fn f_function(space: &CandidateSpace, a: ComplexPoint, alpha: f64) -> Result<Complex64> {
    let n = space.degree_cap();
    let one = TruncatedSeries::one(0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let zk = TruncatedSeries::monomial(k, Complex64::new(1.0, 0.0), k);
        let inner = candidate_inner(space, &one, &zk)?;
        if inner.norm() == 0.0 {
            continue;
        }
        let ln_scale = k as f64 * (alpha * a.norm()).ln() - ln_factorial(k);
        let term = inner * Complex64::from_polar(ln_scale.exp(), k as f64 * a.arg());
        sum += term;
        if !(sum.norm() < DIVERGENCE_THRESHOLD) {
            return Err(Error::Divergence { threshold: DIVERGENCE_THRESHOLD });
        }
    }
    Ok(sum)
}

/// `|F(a) − conj(F(−a))|`.
pub fn f_symmetry_defect(space: &CandidateSpace, a: ComplexPoint, alpha: f64) -> Result<f64> {
    Ok((f_function(space, a, alpha)? - f_function(space, -a, alpha)?.conj()).norm())
}

/// `K_H(z, z) = u* H⁻¹ u` with `u_k = z^k`.
pub fn candidate_kernel_diagonal(space: &CandidateSpace, z: ComplexPoint) -> Result<f64> {
    let n = space.degree_cap() + 1;
    let u = nalgebra::DVector::from_iterator(n, (0..n).map(|k| z.powu(k as u32)));
    if space.is_diagonal() {
        return Ok((0..n).map(|k| u[k].norm_sqr() / space.weights[k]).sum());
    }
    let x = space
        .matrix()
        .cholesky()
        .ok_or(Error::NotPositiveDefinite { index: 0, pivot: 0.0 })?
        .solve(&u);
    Ok(u.dotc(&x).re)
}

/// Relative defect of `K_H(z,z) = e^{α|z|²} K_H(0,0)`.
pub fn kernel_diagonal_defect(space: &CandidateSpace, z: ComplexPoint, alpha: f64) -> Result<f64> {
    let k0 = candidate_kernel_diagonal(space, Complex64::new(0.0, 0.0))?;
    let kz = candidate_kernel_diagonal(space, z)?;
    let want = (alpha * z.norm_sqr()).exp() * k0;
    Ok((kz - want).abs() / want)
}

/// One polynomial's embedding ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingSample {
    pub degree: usize,
    /// `‖f‖_∞ / ‖f‖_p`.
    pub sup_ratio: f64,
    /// `‖f‖_p / ‖f‖_1`.
    pub l1_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    pub max_sup_ratio: f64,
    pub max_l1_ratio: f64,
    pub samples: Vec<EmbeddingSample>,
}

/// Degrees used by the embedding test set.
pub const EMBEDDING_MAX_DEGREE: usize = 20;

/// `(max ‖f‖_∞/‖f‖_p, max ‖f‖_p/‖f‖_1)` over seeded dense polynomials of
/// degree `i mod 21`.
pub fn embedding_constants(params: &FockParams, test_set_seed: u64, count: usize) -> Result<(f64, f64)> {
    let r = embedding_report(params, test_set_seed, count)?;
    Ok((r.max_sup_ratio, r.max_l1_ratio))
}

pub fn embedding_report(params: &FockParams, test_set_seed: u64, count: usize) -> Result<EmbeddingReport> {
    params.require_line()?;
    if count == 0 {
        return Err(Error::EmptyTestSet);
    }
    let root = SeedStream::new(test_set_seed).fork("embedding");
    let grid = QuadratureGrid::new(params.alpha, EMBEDDING_MAX_DEGREE)?;
    let samples: Vec<EmbeddingSample> = (0..count)
        .into_par_iter()
        .map(|i| {
            let degree = i % (EMBEDDING_MAX_DEGREE + 1);
            let f = root.fork_indexed("poly", i).dense_polynomial(degree, params.alpha);
            embedding_sample(&f, params, &grid)
        })
        .collect::<Result<_>>()?;
    Ok(EmbeddingReport {
        max_sup_ratio: samples.iter().map(|s| s.sup_ratio).fold(0.0, f64::max),
        max_l1_ratio: samples.iter().map(|s| s.l1_ratio).fold(0.0, f64::max),
        samples,
    })
}

pub fn embedding_sample(f: &TruncatedSeries, params: &FockParams, grid: &QuadratureGrid) -> Result<EmbeddingSample> {
    let np = p_norm(f, params, grid)?;
    let sup = p_norm(f, &params.with_p(Exponent::Infinity), grid)?;
    let one = p_norm(f, &params.with_p(Exponent::Finite(1.0)), grid)?;
    Ok(EmbeddingSample { degree: f.degree().unwrap_or(0), sup_ratio: sup / np, l1_ratio: np / one })
}
