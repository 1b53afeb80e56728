//! Atomic decomposition of a polynomial over a square lattice of atoms.
use fockspace::atomic::{build_lattice, decompose_l1, decompose_l2, default_delta, default_radius};
use fockspace::fock::{p_norm, Exponent, FockParams, QuadratureGrid};
use fockspace::sampling::SeedStream;

fn main() -> fockspace::Result<()> {
    let alpha = 1.0;
    let params = FockParams::hilbert(alpha)?;
    let f = SeedStream::new(8).dense_polynomial(10, alpha);
    let unit = (std::f64::consts::PI / alpha).sqrt();
    let radius = default_radius(alpha, 10);
    for factor in [1.0, 0.8, 0.6, 0.5] {
        let lattice = build_lattice(factor * unit, radius)?;
        let sol = decompose_l2(&f, &lattice, &params)?;
        println!("delta = {factor:.1}·sqrt(pi/alpha): {:4} atoms, residual {:.3e}", lattice.len(), sol.residual_l2);
    }
    let lattice = build_lattice(default_delta(alpha), radius)?;
    let l1 = decompose_l1(&f, &lattice, &params)?;
    let grid = QuadratureGrid::new(alpha, 10)?;
    let norm1 = p_norm(&f, &params.with_p(Exponent::Finite(1.0)), &grid)?;
    println!(
        "l1 solve: ||c||_1 = {:.6}, ||f||_1 = {norm1:.6}, ratio {:.4}, residual {:.2e}, converged {}",
        l1.coeff_lp_norm,
        norm1 / l1.coeff_lp_norm,
        l1.residual_l2,
        l1.converged
    );
    Ok(())
}
