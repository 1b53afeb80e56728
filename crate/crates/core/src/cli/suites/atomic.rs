use rayon::prelude::*;

use super::{stream, worst, Job};
use crate::atomic::{build_lattice, decompose_l1, decompose_l2, default_delta, default_radius, synthesize, synthesis_cap};
use crate::cli::config::RunConfig;
use crate::cli::report::Case;
use crate::error::Result;
use crate::fock::{norm_closed, p_norm, Exponent, FockParams, QuadratureGrid};
use crate::series::TruncatedSeries;

const TEST_SET: usize = 30;
const MAX_DEGREE: usize = 10;
pub const DELTA_FACTORS: [f64; 4] = [1.0, 0.8, 0.6, 0.5];
const EQUIVALENCE_BOUND: f64 = 20.0;
/// Relative residual the regularized Gram solve reaches at best; two
/// residuals both below it are ties.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

pub(crate) fn jobs() -> Vec<Job> {
    vec![Box::new(l2_cases), Box::new(delta_monotone), Box::new(l1_cases)]
}

fn test_set(config: &RunConfig) -> Vec<TruncatedSeries> {
    let root = stream(config, "test-set");
    (0..TEST_SET).map(|i| root.fork_indexed("poly", i).dense_polynomial(i % (MAX_DEGREE + 1), config.alpha)).collect()
}

fn degree(f: &TruncatedSeries) -> usize {
    f.degree().unwrap_or(0)
}

fn l2_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let alpha = config.alpha;
    let params = FockParams::hilbert(alpha)?;
    let delta = config.delta.unwrap_or(default_delta(alpha));
    let rows: Vec<(f64, f64)> = test_set(config)
        .par_iter()
        .map(|f| {
            let radius = config.radius.unwrap_or(default_radius(alpha, degree(f)));
            let lattice = build_lattice(delta, radius)?;
            let sol = decompose_l2(f, &lattice, &params)?;
            let synth = synthesize(&sol.coefficients, &lattice, alpha, synthesis_cap(&lattice, alpha, f.degree_cap()))?;
            let recomputed = norm_closed(&(&f.with_cap(synth.degree_cap()) - &synth), &params)? / norm_closed(f, &params)?;
            Ok((sol.residual_l2, (recomputed - sol.residual_l2).abs()))
        })
        .collect::<Result<_>>()?;
    let radius_note = match config.radius {
        Some(r) => format!("R = {r}"),
        None => "R = 3/sqrt(alpha) (1 + deg/10)".into(),
    };
    Ok(vec![
        Case::at_most("atomic.l2_residual", worst(rows.iter().map(|r| r.0)), 1e-3)
            .note(format!("{TEST_SET} polynomials, degree <= {MAX_DEGREE}, delta = {delta}, {radius_note}")),
        Case::at_most("atomic.round_trip", worst(rows.iter().map(|r| r.1)), 1e-9)
            .note("synthesized residual recomputed against the reported one"),
    ])
}

/// Residuals for one polynomial at every spacing, fixed radius.
fn residual_curve(f: &TruncatedSeries, params: &FockParams, radius: f64) -> Result<Vec<f64>> {
    let unit = (std::f64::consts::PI / params.alpha).sqrt();
    DELTA_FACTORS
        .iter()
        .map(|&factor| Ok(decompose_l2(f, &build_lattice(factor * unit, radius)?, params)?.residual_l2))
        .collect()
}

fn delta_monotone(config: &RunConfig) -> Result<Vec<Case>> {
    let alpha = config.alpha;
    let params = FockParams::hilbert(alpha)?;
    let radius = config.radius.unwrap_or(default_radius(alpha, MAX_DEGREE));
    let curves: Vec<Vec<f64>> =
        test_set(config).par_iter().map(|f| residual_curve(f, &params, radius)).collect::<Result<_>>()?;
    let increase = worst(curves.iter().flat_map(|c| c.windows(2).map(|w| (w[1] - w[0].max(RESIDUAL_FLOOR)).max(0.0))));
    let finest = worst(curves.iter().map(|c| c[c.len() - 1]));
    let coarsest = worst(curves.iter().map(|c| c[0]));
    Ok(vec![Case::at_most("atomic.delta_monotone", increase, 0.0).note(format!(
        "largest residual increase as delta shrinks through {DELTA_FACTORS:?} sqrt(pi/alpha), R = {radius}; residuals below {RESIDUAL_FLOOR:e} count as ties; worst residual {coarsest:e} -> {finest:e}"
    ))])
}

fn l1_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let alpha = config.alpha;
    let params = FockParams::hilbert(alpha)?;
    let l1 = params.with_p(Exponent::Finite(1.0));
    let grid = QuadratureGrid::new(alpha, MAX_DEGREE)?;
    let delta = config.delta.unwrap_or(default_delta(alpha));
    let rows: Vec<(f64, bool)> = test_set(config)
        .par_iter()
        .map(|f| {
            let radius = config.radius.unwrap_or(default_radius(alpha, degree(f)));
            let sol = decompose_l1(f, &build_lattice(delta, radius)?, &params)?;
            Ok((p_norm(f, &l1, &grid)? / sol.coeff_lp_norm, sol.converged))
        })
        .collect::<Result<_>>()?;
    let hi = worst(rows.iter().map(|r| r.0));
    let lo = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let c = hi.max(1.0 / lo);
    let stalled = rows.iter().filter(|r| !r.1).count();
    Ok(vec![
        Case::at_most("atomic.l1_equivalence", c, EQUIVALENCE_BOUND).note(format!(
            "C = max(max r, 1/min r) for r = ||f||_1 / ||c||_l1 (an upper bound on the infimum); r in [{lo:.6}, {hi:.6}]"
        )),
        Case::at_most("atomic.l1_converged", stalled as f64, 0.0).note("count of l1 solves that missed the residual target"),
    ])
}
