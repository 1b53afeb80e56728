use num_complex::Complex64;

use super::{stream, worst, Job};
use crate::cli::config::RunConfig;
use crate::cli::report::Case;
use crate::error::Result;
use crate::fock::{p_norm, Exponent, FockParams, QuadratureGrid};
use crate::rigidity::{
    default_recovery_shifts, embedding_report, f_function, f_symmetry_defect, kernel_diagonal_defect, recover_weights,
    recover_weights_with, sample_degree, standard_shifts, summed_invariance_defect, CandidateSpace, EmbeddingSample,
    RecoveryOptions, EMBEDDING_MAX_DEGREE,
};
use crate::series::{exp_remainder, TruncatedSeries};
use crate::special::ln_fock_weight;

const PAIRS: usize = 40;
const PERTURBATION: f64 = 1e-3;
const PERTURBATION_MAX_K: usize = 25;
const EMBEDDING_COUNT: usize = 200;
const STABILITY_FACTOR: f64 = 10.0;
pub const RECOVERY_MAX_K: usize = 10;
/// Cap at which the true weights minimize the truncated objective.
const FIXED_POINT_CAP: usize = 16;

pub(crate) fn scan_jobs() -> Vec<Job> {
    vec![Box::new(invariance_cases), Box::new(f_cases), Box::new(kernel_cases), Box::new(embedding_cases), Box::new(unit_norms)]
}

pub(crate) fn recover_jobs() -> Vec<Job> {
    vec![Box::new(recovery_cases)]
}

fn invariance_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap, seed) = (config.alpha, config.degree_cap, config.seed);
    let params = FockParams::hilbert(alpha)?;
    let shifts = standard_shifts();
    let truth = CandidateSpace::fock(alpha, cap);
    let base = summed_invariance_defect(&truth, &shifts, PAIRS, seed, &params)?;
    let scaled = summed_invariance_defect(&truth.scaled(7.5)?, &shifts, PAIRS, seed, &params)?;

    let top = shifts.iter().map(|&a| sample_degree(alpha, a, cap)).collect::<Result<Vec<_>>>()?;
    let k_max = top.into_iter().min().unwrap_or(0).min(PERTURBATION_MAX_K);
    let mut weakest = (f64::INFINITY, 0);
    for k in 0..=k_max {
        let d = summed_invariance_defect(&truth.with_weight_scaled(k, 1.0 + PERTURBATION)?, &shifts, PAIRS, seed, &params)?;
        if !(d >= weakest.0) {
            weakest = (d, k);
        }
    }
    let shifts_note = "shifts 0.5, 0.5i, 0.4+0.4i";
    Ok(vec![
        Case::at_most("rigidity.true_weights", base, 1e-6)
            .note(format!("w_k = c k!/alpha^k with c = w_0 = 1; {PAIRS} seeded pairs plus unit monomials per shift; {shifts_note}; cap {cap}")),
        Case::above("rigidity.perturbation_min", weakest.0, 1e-5).note(format!(
            "smallest summed defect over single-weight perturbations of {PERTURBATION} relative, k <= {k_max}; attained at k = {}",
            weakest.1
        )),
        Case::at_most("rigidity.scalar_freedom", (scaled - base).abs(), 1e-12)
            .note("defect of 7.5 times the true weights equals the unscaled defect"),
    ])
}

fn f_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap) = (config.alpha, config.degree_cap);
    let mut s = stream(config, "f-function");
    let truth = CandidateSpace::fock(alpha, cap);
    let random = CandidateSpace::diagonal((0..=cap).map(|_| s.uniform(0.5, 2.0)).collect())?;
    let mut band = vec![Complex64::new(0.0, 0.0); cap];
    band[0] = Complex64::new(0.2, 0.1);
    let banded = CandidateSpace::new(truth.weights().to_vec(), Some(band))?;

    let (mut constant, mut symmetric, mut banded_sym): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for i in 0..20 {
        let a = s.fork_indexed("point", i).point_in_disk(2.0 / alpha.sqrt());
        for space in [&truth, &random] {
            let f0 = space.weights()[0];
            constant = worst([constant, (f_function(space, a, alpha)? - f0).norm() / f0]);
        }
        symmetric = worst([symmetric, f_symmetry_defect(&truth, a, alpha)?]);
        if a.re.abs() > 1e-3 {
            banded_sym = banded_sym.min(f_symmetry_defect(&banded, a, alpha)?);
        }
    }
    Ok(vec![
        Case::at_most("rigidity.f_constant", constant, 1e-12).note("true and random diagonal weights, relative to w_0"),
        Case::at_most("rigidity.f_symmetry.true", symmetric, 1e-8),
        Case::above("rigidity.f_symmetry.banded", banded_sym, 0.0)
            .note("<1, z> = 0.2 + 0.1i coupling; smallest defect over the sampled points"),
    ])
}

fn kernel_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap) = (config.alpha, config.degree_cap);
    let truth = CandidateSpace::fock(alpha, cap);
    let mut s = stream(config, "kernel-diagonal");
    let mut defect: f64 = 0.0;
    for _ in 0..50 {
        defect = worst([defect, kernel_diagonal_defect(&truth, s.point_in_disk(2.0), alpha)?]);
    }
    Ok(vec![Case::at_most("rigidity.kernel_diagonal", defect, 1e-10)
        .with_tail(exp_remainder(4.0 * alpha, cap) / (4.0 * alpha).exp())
        .note("K(z,z) = e^{alpha|z|^2} K(0,0), relative, |z| <= 2")])
}

/// Largest per-degree maximum over the median of those maxima.
fn stability(samples: &[EmbeddingSample], ratio: impl Fn(&EmbeddingSample) -> f64) -> (f64, f64) {
    let mut maxima: Vec<f64> = (0..=EMBEDDING_MAX_DEGREE)
        .filter_map(|d| {
            let v: Vec<f64> = samples.iter().filter(|s| s.degree == d).map(&ratio).collect();
            (!v.is_empty()).then(|| worst(v))
        })
        .collect();
    maxima.sort_by(f64::total_cmp);
    let median = maxima[maxima.len() / 2];
    (worst(maxima.iter().copied()) / median, maxima[maxima.len() - 1])
}

fn embedding_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let params = FockParams::hilbert(config.alpha)?;
    let report = embedding_report(&params, stream(config, "embedding").seed(), EMBEDDING_COUNT)?;
    let finite = report.samples.iter().all(|s| s.sup_ratio.is_finite() && s.l1_ratio.is_finite());
    let (sup, sup_max) = stability(&report.samples, |s| s.sup_ratio);
    let (l1, l1_max) = stability(&report.samples, |s| s.l1_ratio);
    let nan_unless = |ok: bool, x: f64| if ok { x } else { f64::NAN };
    Ok(vec![
        Case::at_most("rigidity.embedding.sup_over_l2", nan_unless(finite, sup), STABILITY_FACTOR)
            .note(format!("max/median of per-degree maxima of ||f||_inf/||f||_2; largest ratio {sup_max:.6}; {EMBEDDING_COUNT} polynomials, degree <= {EMBEDDING_MAX_DEGREE}")),
        Case::at_most("rigidity.embedding.l2_over_l1", nan_unless(finite, l1), STABILITY_FACTOR)
            .note(format!("max/median of per-degree maxima of ||f||_2/||f||_1; largest ratio {l1_max:.6}")),
    ])
}

fn unit_norms(config: &RunConfig) -> Result<Vec<Case>> {
    let params = FockParams::hilbert(config.alpha)?;
    let grid = QuadratureGrid::new(config.alpha, 0)?;
    let one = TruncatedSeries::one(0);
    let mut cases = Vec::new();
    for (p, want) in [(Exponent::Infinity, 1.0), (Exponent::Finite(2.0), 1.0), (Exponent::Finite(1.0), 2.0)] {
        let got = p_norm(&one, &params.with_p(p), &grid)?;
        cases.push(Case::at_most(format!("rigidity.norm_of_one.p={p}"), (got - want).abs(), 1e-10).note(format!("expected {want}")));
    }
    Ok(cases)
}

fn weight_table(weights: &[f64], alpha: f64) -> Vec<f64> {
    (0..=RECOVERY_MAX_K).map(|k| (weights[k] / ln_fock_weight(k, alpha).exp() - 1.0).abs()).collect()
}

fn recovery_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap, seed) = (config.alpha, config.degree_cap, config.seed);
    let shifts = default_recovery_shifts(alpha);
    let rec = recover_weights(alpha, cap, &shifts, seed)?;
    let other = recover_weights(alpha, cap, &shifts, seed.wrapping_add(1))?;
    let truth: Vec<f64> = (0..=cap.max(FIXED_POINT_CAP)).map(|k| ln_fock_weight(k, alpha).exp()).collect();
    let opts = RecoveryOptions::default();
    let from_truth = recover_weights_with(alpha, FIXED_POINT_CAP, &shifts, seed, Some(&truth[..=FIXED_POINT_CAP]), &opts)?;
    let polished = recover_weights_with(alpha, cap, &shifts, seed, Some(&truth[..=cap]), &opts)?;

    let mut cases: Vec<Case> = weight_table(&rec.weights, alpha)
        .into_iter()
        .enumerate()
        .map(|(k, err)| {
            Case::at_most(format!("recover.weight.k={k:02}"), err, 1e-4).note(format!(
                "recovered {:.12e}, expected k!/alpha^k = {:.12e}",
                rec.weights[k], truth[k]
            ))
        })
        .collect();
    let drift = worst((0..=RECOVERY_MAX_K).map(|k| (rec.weights[k] / other.weights[k] - 1.0).abs()));
    cases.push(Case::at_most("recover.seed_stability", drift, 1e-6).note(format!("seeds {seed} and {}", seed.wrapping_add(1))));
    cases.push(
        Case::at_most("recover.fixed_point", from_truth.sweeps as f64, 0.0)
            .note(format!("refinement sweeps taken from the true weights at cap {FIXED_POINT_CAP}")),
    );
    let drift = worst(weight_table(&polished.weights, alpha));
    cases.push(Case::at_most("recover.fixed_point_drift", drift, 1e-6).note(format!(
        "relative drift of w_k, k <= {RECOVERY_MAX_K}, after {} sweeps started from the true weights at cap {cap}",
        polished.sweeps
    )));
    let mut fin = Case::at_most("recover.final_defect", rec.final_defect, 1e-6).note(format!(
        "summed invariance defect of the recovered weights; normalization c = w_0 = {}; {} sweeps; objective {:e}",
        rec.weights[0], rec.sweeps, rec.objective
    ));
    if rec.stalled {
        fin = fin.note("optimizer stalled; best iterate reported");
    }
    cases.push(fin);
    Ok(cases)
}
