//! Reproducing kernel, normalized atoms and the atom Gram matrix.
use fockspace::fock::FockParams;
use fockspace::kernels::{atom_series, gram_min_eigenvalue, kernel_value, reproduce, KernelAtom};
use fockspace::sampling::SeedStream;
use fockspace::translations::CVector;
use fockspace::Complex64;

fn main() -> fockspace::Result<()> {
    let alpha = 1.0;
    let params = FockParams::hilbert(alpha)?;
    let a = Complex64::new(1.1, 0.4);
    let f = SeedStream::new(5).dense_polynomial(15, alpha);
    println!("<f, K_a> = {:.14}", reproduce(&f, a, &params)?);
    println!("f(a)     = {:.14}", f.evaluate(a));

    let k = kernel_value(&CVector::line(a), &CVector::line(a), alpha)?;
    println!("K(a,a) = {:.12} = e^(|a|^2) = {:.12}", k.to_complex().re, a.norm_sqr().exp());
    // very large arguments are kept in log form
    let far = kernel_value(&CVector::line(Complex64::new(30.0, 0.0)), &CVector::line(Complex64::new(30.0, 0.0)), alpha)?;
    println!("ln |K(30,30)| = {}", far.ln_modulus());

    let atom = atom_series(&KernelAtom::normalized(a, alpha)?, 40)?;
    println!("normalized atom: first coefficients {:.6?}", &atom.coeffs()[..3]);
    let pts: Vec<Complex64> = (0..5).map(|j| Complex64::new(0.9 * j as f64, 0.0)).collect();
    println!("Gram minimum eigenvalue over 5 atoms: {:e}", gram_min_eigenvalue(&pts, alpha));
    Ok(())
}
