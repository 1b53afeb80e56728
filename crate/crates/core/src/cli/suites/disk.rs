use num_complex::Complex64;

use super::{label, mixed_defect, stream, worst, Job};
use crate::cli::config::RunConfig;
use crate::cli::report::Case;
use crate::disk::{
    default_disk_shifts, dirichlet_seminorm, disk_diagonal_law, disk_rigidity_defect, function_level_cap,
    involution_defect, isometry_defect, kernel_transformation_defect, moment_quadrature, recover_disk_weights,
    reproduce, standard_disk_shifts, u_operator, DiskParams, MobiusMap, SpaceKind, DISK_RECOVERY_CAP,
    FUNCTION_LEVEL_LIMIT,
};
use crate::error::Result;
use crate::rigidity::RecoveryOptions;
use crate::sampling::SeedStream;
use crate::series::TruncatedSeries;

pub const BERGMAN_ALPHAS: [f64; 3] = [0.0, 1.0, 2.5];
const OPERATOR_SAMPLES: usize = 12;
const OPERATOR_DEGREE: usize = 15;
const POINT_SAMPLES: usize = 50;
const INVARIANCE_PAIRS: usize = 16;
const RECOVERY_DEGREE: usize = 10;

pub(crate) fn jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = vec![Box::new(|c: &RunConfig| space_cases(c, DiskParams::hardy()))];
    for alpha in BERGMAN_ALPHAS {
        jobs.push(Box::new(move |c: &RunConfig| space_cases(c, DiskParams::bergman(alpha)?)));
    }
    jobs.push(Box::new(|c: &RunConfig| {
        if BERGMAN_ALPHAS.contains(&c.alpha) { Ok(vec![]) } else { space_cases(c, DiskParams::bergman(c.alpha)?) }
    }));
    jobs.push(Box::new(cross_mode));
    jobs.push(Box::new(dirichlet));
    jobs
}

fn space_name(params: &DiskParams) -> String {
    match params.kind() {
        SpaceKind::Hardy => "disk.hardy".into(),
        SpaceKind::Bergman => format!("disk.bergman[{}]", label(params.alpha().unwrap_or(0.0))),
    }
}

fn unit_polynomial(s: &mut SeedStream, degree: usize, params: &DiskParams) -> TruncatedSeries {
    s.dense_polynomial_weighted(degree, |k| params.ln_moment(k))
}

fn space_cases(config: &RunConfig, params: DiskParams) -> Result<Vec<Case>> {
    let name = space_name(&params);
    let root = stream(config, &name);
    let mut cases = Vec::new();

    let (mut inv, mut iso, mut tail): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..OPERATOR_SAMPLES {
        let mut s = root.fork_indexed("operator", i);
        let map = MobiusMap::new(s.point_in_disk(FUNCTION_LEVEL_LIMIT))?;
        let f = unit_polynomial(&mut s, OPERATOR_DEGREE, &params);
        let cap = function_level_cap(map.a(), OPERATOR_DEGREE);
        inv = worst([inv, involution_defect(&map, &f, &params, cap)?]);
        iso = worst([iso, isometry_defect(&map, &f, &params, cap)?]);
        tail = tail.max(u_operator(&map, &f, &params, cap)?.tail_bound());
    }
    let note = format!("{OPERATOR_SAMPLES} samples, |a| <= {FUNCTION_LEVEL_LIMIT}, unit-norm degree {OPERATOR_DEGREE}");
    cases.push(Case::at_most(format!("{name}.involution"), inv, 1e-8).with_tail(tail).note(&note));
    cases.push(Case::at_most(format!("{name}.isometry"), iso, 1e-7).with_tail(tail).note(&note));

    let (mut transform, mut diagonal, mut reproducing): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..POINT_SAMPLES {
        let mut s = root.fork_indexed("points", i);
        let (a, z, w) = (s.point_in_disk(0.95), s.point_in_disk(0.95), s.point_in_disk(0.95));
        transform = worst([transform, kernel_transformation_defect(a, z, w, &params)?]);
        diagonal = worst([diagonal, disk_diagonal_law(s.point_in_disk(0.9), &params)?]);
        let f = unit_polynomial(&mut s, i % (OPERATOR_DEGREE + 1), &params);
        let p = s.point_in_disk(0.9);
        let fp = f.evaluate(p);
        reproducing = worst([reproducing, mixed_defect((reproduce(&f, p, &params)? - fp).norm(), fp.norm())]);
    }
    cases.push(Case::at_most(format!("{name}.kernel_transformation"), transform, 1e-10).note("relative, |a|,|z|,|w| <= 0.95"));
    cases.push(Case::at_most(format!("{name}.diagonal_law"), diagonal, 1e-12).note("relative, |a| <= 0.9"));
    cases.push(Case::at_most(format!("{name}.reproducing"), reproducing, 1e-10).note("|w| <= 0.9"));

    let moments = worst((0..=30).map(|k| (moment_quadrature(k, &params) / params.moment(k) - 1.0).abs()));
    cases.push(Case::at_most(format!("{name}.moments"), moments, 1e-12).note("closed-form ||z^k||^2 against quadrature, k <= 30"));

    let space = params.candidate(config.degree_cap);
    let mut invariance = 0.0;
    for a in standard_disk_shifts() {
        invariance += disk_rigidity_defect(&space, a, &params, INVARIANCE_PAIRS, config.seed)?;
    }
    cases.push(
        Case::at_most(format!("{name}.invariance"), invariance, 1e-6)
            .note(format!("true moments, summed over 3 shifts with |a| ~ 0.35, cap {}", config.degree_cap)),
    );

    let rec = recover_disk_weights(&params, DISK_RECOVERY_CAP, &default_disk_shifts(), config.seed, &RecoveryOptions::default())?;
    let err = worst((0..=RECOVERY_DEGREE).map(|k| (rec.weights[k] / params.moment(k) - 1.0).abs()));
    let mut case = Case::at_most(format!("{name}.recovery"), err, 1e-3).note(format!(
        "max relative weight error k <= {RECOVERY_DEGREE}, cap {DISK_RECOVERY_CAP}, {} sweeps, final defect {:e}",
        rec.sweeps, rec.final_defect
    ));
    if rec.stalled {
        case = case.note("optimizer stalled; best iterate reported");
    }
    cases.push(case);
    Ok(cases)
}

/// Hardy moments are not invariant under the Bergman action.
fn cross_mode(config: &RunConfig) -> Result<Vec<Case>> {
    let b0 = DiskParams::bergman(0.0)?;
    let hardy = DiskParams::hardy().candidate(config.degree_cap);
    let mut defect = 0.0;
    for a in standard_disk_shifts() {
        defect += disk_rigidity_defect(&hardy, a, &b0, INVARIANCE_PAIRS, config.seed)?;
    }
    Ok(vec![Case::above("disk.cross_mode.hardy_weights_under_bergman[0.0]", defect, 1e-2)])
}

fn dirichlet(_config: &RunConfig) -> Result<Vec<Case>> {
    let one = TruncatedSeries::one(8);
    let linear = worst((1..=8).map(|k| {
        let zk = TruncatedSeries::monomial(k, Complex64::new(1.0, 0.0), 8);
        (dirichlet_seminorm(&zk) - (k as f64).sqrt()).abs()
    }));
    Ok(vec![
        Case::at_most("disk.dirichlet.constant", dirichlet_seminorm(&one), 0.0).note("exact zero required"),
        Case::at_most("disk.dirichlet.monomial", linear, 1e-15).note("D(z^k) = sqrt(k), k <= 8"),
    ])
}
