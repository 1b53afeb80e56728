use num_complex::Complex64;
use rayon::prelude::*;

use super::{label, mixed_defect, stream, worst, Job};
use crate::cli::config::RunConfig;
use crate::cli::report::Case;
use crate::error::Result;
use crate::fock::{
    inner_product_closed, inner_product_quadrature, monomial_p_norm, p_norm, Exponent, FockParams, QuadratureGrid,
};
use crate::kernels::{reproduce, transform_diagonal_check};
use crate::series::TruncatedSeries;
use crate::translations::{
    compose_phase, compose_phase_conjugate_form, heisenberg_compose, isometry_defect, isometry_grid,
    representation_phase, CVector, HeisenbergElement, WeightedTranslation, FUNCTION_LEVEL_LIMIT,
};

pub const ORACLE_ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];
const ORACLE_PAIRS: usize = 200;
const ORACLE_DEGREE: usize = 25;
const TRANSLATION_SAMPLES: usize = 50;
const TRANSLATION_RADIUS: f64 = 1.5;
const TRANSLATION_DEGREE: usize = 10;
const ROUNDTRIP_DEGREE: usize = 25;
const HEISENBERG_TRIPLES: usize = 100;
const KERNEL_SAMPLES: usize = 100;
const KERNEL_DEGREE: usize = 15;

pub(crate) fn jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for alpha in ORACLE_ALPHAS {
        jobs.push(Box::new(move |c: &RunConfig| oracle_inner(c, alpha)));
    }
    jobs.push(Box::new(|c: &RunConfig| {
        if ORACLE_ALPHAS.contains(&c.alpha) { Ok(vec![]) } else { oracle_inner(c, c.alpha) }
    }));
    for p in isometry_exponents_fixed() {
        jobs.push(Box::new(move |c: &RunConfig| translation_isometry(c, p)));
    }
    jobs.push(Box::new(|c: &RunConfig| {
        if isometry_exponents_fixed().contains(&c.p) { Ok(vec![]) } else { translation_isometry(c, c.p) }
    }));
    jobs.push(Box::new(monomial_norms));
    jobs.push(Box::new(unitarity_and_adjoint));
    jobs.push(Box::new(inverse_roundtrip));
    jobs.push(Box::new(cocycle));
    jobs.push(Box::new(phase_forms));
    jobs.push(Box::new(heisenberg));
    jobs.push(Box::new(kernel_cases));
    jobs
}

fn isometry_exponents_fixed() -> [Exponent; 3] {
    [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity]
}

/// Shift radius keeping `α|a|²` inside the function-level range.
fn shift_radius(alpha: f64) -> f64 {
    TRANSLATION_RADIUS.min((FUNCTION_LEVEL_LIMIT / alpha).sqrt())
}

fn radius_note(alpha: f64) -> String {
    let r = shift_radius(alpha);
    if r < TRANSLATION_RADIUS {
        format!("|a| <= {r:.6} so alpha|a|^2 <= {FUNCTION_LEVEL_LIMIT}")
    } else {
        format!("|a| <= {r}")
    }
}

fn oracle_inner(config: &RunConfig, alpha: f64) -> Result<Vec<Case>> {
    let params = FockParams::hilbert(alpha)?;
    let grid = QuadratureGrid::new(alpha, ORACLE_DEGREE)?;
    let root = stream(config, &format!("oracle.alpha={}", label(alpha)));
    let defects: Vec<f64> = (0..ORACLE_PAIRS)
        .into_par_iter()
        .map(|i| {
            let mut s = root.fork_indexed("pair", i);
            let (df, dg) = (s.index(ORACLE_DEGREE + 1), s.index(ORACLE_DEGREE + 1));
            let f = s.dense_polynomial(df, alpha);
            let g = s.dense_polynomial(dg, alpha);
            let closed = inner_product_closed(&f, &g, &params)?;
            let quad = inner_product_quadrature(&f, &g, &params, &grid)?;
            Ok(mixed_defect((closed - quad).norm(), closed.norm()))
        })
        .collect::<Result<_>>()?;
    Ok(vec![Case::at_most(format!("oracle.inner_product.alpha={}", label(alpha)), worst(defects), 1e-9)
        .note(format!("{ORACLE_PAIRS} pairs, degree <= {ORACLE_DEGREE}, unit-norm polynomials"))])
}

/// `‖z^k‖_{p,α}` by quadrature against the closed form, `k ≤ 10`.
fn monomial_norms(config: &RunConfig) -> Result<Vec<Case>> {
    let alpha = config.alpha;
    let params = FockParams::new(alpha, config.p, 1)?;
    let grid = QuadratureGrid::new(alpha, TRANSLATION_DEGREE)?;
    let defects: Vec<f64> = (0..=TRANSLATION_DEGREE)
        .into_par_iter()
        .map(|k| {
            let zk = TruncatedSeries::monomial(k, Complex64::new(1.0, 0.0), k);
            let want = match config.p {
                Exponent::Infinity => (k as f64 / (alpha * std::f64::consts::E)).powf(k as f64 / 2.0),
                Exponent::Finite(p) => monomial_p_norm(k, alpha, p),
            };
            Ok((p_norm(&zk, &params, &grid)? - want).abs() / want)
        })
        .collect::<Result<_>>()?;
    Ok(vec![Case::at_most(format!("oracle.monomial_norm.p={}", config.p), worst(defects), 1e-9)
        .note("relative; sup of |z^k| e^{-alpha|z|^2/2} is (k/(alpha e))^{k/2}")])
}

fn translation_isometry(config: &RunConfig, p: Exponent) -> Result<Vec<Case>> {
    let (alpha, cap) = (config.alpha, config.degree_cap);
    let params = FockParams::new(alpha, p, 1)?;
    let root = stream(config, &format!("translation.isometry.p={p}"));
    let radius = shift_radius(alpha);
    let results: Vec<(f64, f64)> = (0..TRANSLATION_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut s = root.fork_indexed("sample", i);
            let a = s.point_in_disk(radius);
            let f = s.dense_polynomial(i % (TRANSLATION_DEGREE.min(cap) + 1), alpha).with_cap(cap);
            let grid = isometry_grid(alpha, cap, a.norm())?;
            let tail = WeightedTranslation::on_line(a, alpha)?.apply(&f)?.tail_bound();
            Ok((isometry_defect(a, &f, &params, &grid)?, tail))
        })
        .collect::<Result<_>>()?;
    Ok(vec![Case::at_most(format!("translation.isometry.p={p}"), worst(results.iter().map(|r| r.0)), 1e-6)
        .with_tail(worst(results.iter().map(|r| r.1)))
        .note(format!("{TRANSLATION_SAMPLES} samples, {}, unit F^2 norm", radius_note(alpha)))])
}

fn unitarity_and_adjoint(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap) = (config.alpha, config.degree_cap);
    let params = FockParams::hilbert(alpha)?;
    let root = stream(config, "translation.unitarity");
    let radius = shift_radius(alpha);
    let rows: Vec<[f64; 3]> = (0..TRANSLATION_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut s = root.fork_indexed("sample", i);
            let a = s.point_in_disk(radius);
            let deg = TRANSLATION_DEGREE.min(cap);
            let (df, dg) = (s.index(deg + 1), s.index(deg + 1));
            let f = s.dense_polynomial(df, alpha).with_cap(cap);
            let g = s.dense_polynomial(dg, alpha).with_cap(cap);
            let t = WeightedTranslation::on_line(a, alpha)?;
            let (tf, tg) = (t.apply(&f)?, t.apply(&g)?);
            let inv_g = t.inverse().apply(&g)?;
            let fg = inner_product_closed(&f, &g, &params)?;
            let unitary = mixed_defect((inner_product_closed(&tf, &tg, &params)? - fg).norm(), fg.norm());
            let lhs = inner_product_closed(&tf, &g, &params)?;
            let adjoint = mixed_defect((lhs - inner_product_closed(&f, &inv_g, &params)?).norm(), lhs.norm());
            Ok([unitary, adjoint, tf.tail_bound().max(tg.tail_bound()).max(inv_g.tail_bound())])
        })
        .collect::<Result<_>>()?;
    let tail = worst(rows.iter().map(|r| r[2]));
    let note = format!("closed form, {TRANSLATION_SAMPLES} samples, {}", radius_note(alpha));
    Ok(vec![
        Case::at_most("translation.unitarity", worst(rows.iter().map(|r| r[0])), 1e-8).with_tail(tail).note(&note),
        Case::at_most("translation.adjoint", worst(rows.iter().map(|r| r[1])), 1e-8).with_tail(tail).note(&note),
    ])
}

fn inverse_roundtrip(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap) = (config.alpha, config.degree_cap);
    let root = stream(config, "translation.inverse_roundtrip");
    let radius = shift_radius(alpha);
    let rows: Vec<(f64, f64)> = (0..TRANSLATION_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut s = root.fork_indexed("sample", i);
            let a = s.point_in_disk(radius);
            let f = s.dense_polynomial(i % (ROUNDTRIP_DEGREE.min(cap) + 1), alpha).with_cap(cap);
            let t = WeightedTranslation::on_line(a, alpha)?;
            let back = t.inverse().apply(&t.apply(&f)?)?;
            Ok((mixed_defect(back.with_cap(cap).max_coeff_diff(&f), f.max_abs()), back.tail_bound()))
        })
        .collect::<Result<_>>()?;
    Ok(vec![Case::at_most("translation.inverse_roundtrip", worst(rows.iter().map(|r| r.0)), 1e-10)
        .with_tail(worst(rows.iter().map(|r| r.1)))
        .note(format!("coefficientwise, degree <= {ROUNDTRIP_DEGREE}, {}", radius_note(alpha)))])
}

fn cocycle(config: &RunConfig) -> Result<Vec<Case>> {
    let (alpha, cap) = (config.alpha, config.degree_cap);
    let root = stream(config, "cocycle.coefficientwise");
    // |a|, |b| and |a + b| all stay in the function-level range.
    let radius = shift_radius(alpha) / 2.0;
    let rows: Vec<(f64, f64)> = (0..TRANSLATION_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut s = root.fork_indexed("sample", i);
            let (a, b) = (s.point_in_disk(radius), s.point_in_disk(radius));
            let f = s.dense_polynomial(i % (TRANSLATION_DEGREE.min(cap) + 1), alpha).with_cap(cap);
            let ta = WeightedTranslation::on_line(a, alpha)?;
            let tb = WeightedTranslation::on_line(b, alpha)?;
            let tab = WeightedTranslation::on_line(a + b, alpha)?;
            let lhs = ta.apply(&tb.apply(&f)?)?;
            let rhs = tab.apply(&f)?.scale(compose_phase(&CVector::line(a), &CVector::line(b), alpha)?);
            let diff = lhs.with_cap(rhs.degree_cap()).max_coeff_diff(&rhs);
            Ok((mixed_defect(diff, rhs.max_abs()), lhs.tail_bound().max(rhs.tail_bound())))
        })
        .collect::<Result<_>>()?;
    Ok(vec![Case::at_most("cocycle.coefficientwise", worst(rows.iter().map(|r| r.0)), 1e-8)
        .with_tail(worst(rows.iter().map(|r| r.1)))
        .note(format!("{TRANSLATION_SAMPLES} samples, |a|,|b| <= {radius:.6}"))])
}

fn random_vector(s: &mut crate::sampling::SeedStream, n: usize, scale: f64) -> CVector {
    CVector((0..n).map(|_| s.complex_normal() * scale).collect())
}

fn phase_forms(config: &RunConfig) -> Result<Vec<Case>> {
    let root = stream(config, "cocycle.phase_forms");
    let mut defect: f64 = 0.0;
    for i in 0..HEISENBERG_TRIPLES {
        let mut s = root.fork_indexed("pair", i);
        let n = 1 + i % 3;
        let (a, b) = (random_vector(&mut s, n, 1.5), random_vector(&mut s, n, 1.5));
        let d = (compose_phase(&a, &b, config.alpha)? - compose_phase_conjugate_form(&a, &b, config.alpha)?).norm();
        defect = worst([defect, d]);
    }
    Ok(vec![Case::at_most("cocycle.phase_forms", defect, 1e-14).note(format!("{HEISENBERG_TRIPLES} pairs, n in 1..=3"))])
}

fn element_distance(g: &HeisenbergElement, h: &HeisenbergElement) -> f64 {
    let dz = g.z.0.iter().zip(&h.z.0).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    dz.max((g.t - h.t).abs())
}

fn heisenberg(config: &RunConfig) -> Result<Vec<Case>> {
    let root = stream(config, "heisenberg");
    let alpha = config.alpha;
    let (mut assoc, mut inverse, mut repr): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..HEISENBERG_TRIPLES {
        let mut s = root.fork_indexed("triple", i);
        let n = 1 + i % 2;
        let element = |s: &mut crate::sampling::SeedStream| {
            let z = random_vector(s, n, 1.0);
            HeisenbergElement::new(z, s.uniform(-2.0, 2.0))
        };
        let (g, h, k) = (element(&mut s), element(&mut s), element(&mut s));
        let left = heisenberg_compose(&heisenberg_compose(&g, &h)?, &k)?;
        let right = heisenberg_compose(&g, &heisenberg_compose(&h, &k)?)?;
        assoc = worst([assoc, element_distance(&left, &right)]);
        let e = heisenberg_compose(&g, &g.inverse())?;
        inverse = worst([inverse, element_distance(&e, &HeisenbergElement::identity(n))]);
        // U(g)U(h) = e^{iαt} e^{iαs} T_z T_w = e^{iα(t+s)} phase(z,w) T_{z+w} = U(g⊕h)
        let gh = heisenberg_compose(&g, &h)?;
        let lhs = representation_phase(&g, alpha) * representation_phase(&h, alpha) * compose_phase(&g.z, &h.z, alpha)?;
        repr = worst([repr, (lhs - representation_phase(&gh, alpha)).norm()]);
    }
    let note = format!("{HEISENBERG_TRIPLES} triples, n in {{1, 2}}");
    Ok(vec![
        Case::at_most("heisenberg.associativity", assoc, 1e-12).note(&note),
        Case::at_most("heisenberg.inverse", inverse, 1e-12).note(&note),
        Case::at_most("heisenberg.representation", repr, 1e-12).note(&note),
    ])
}

fn kernel_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let alpha = config.alpha;
    let params = FockParams::hilbert(alpha)?;
    let root = stream(config, "kernel");
    let radius = shift_radius(alpha);
    let (mut reproducing, mut diagonal): (f64, f64) = (0.0, 0.0);
    for i in 0..KERNEL_SAMPLES {
        let mut s = root.fork_indexed("sample", i);
        let a = s.point_in_disk(radius);
        let f = s.dense_polynomial(i % (KERNEL_DEGREE + 1), alpha);
        let fa = f.evaluate(a);
        reproducing = worst([reproducing, (reproduce(&f, a, &params)? - fa).norm() / (1.0 + fa.norm())]);
        let (b, z) = (s.point_in_disk(2.0), s.point_in_disk(2.0));
        diagonal = worst([diagonal, transform_diagonal_check(b, z, alpha), transform_diagonal_check(z, z, alpha)]);
    }
    Ok(vec![
        Case::at_most("kernel.reproducing", reproducing, 1e-8)
            .note(format!("|<f,K_a> - f(a)| / (1 + |f(a)|), {KERNEL_SAMPLES} samples, degree <= {KERNEL_DEGREE}, {}", radius_note(alpha))),
        Case::at_most("kernel.diagonal_law", diagonal, 1e-10).note("relative, |a|, |z| <= 2"),
    ])
}
