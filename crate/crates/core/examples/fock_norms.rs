//! Fock inner products in closed form and by quadrature, and `p`-norms.
use fockspace::fock::{inner_product_closed, inner_product_quadrature, monomial_p_norm, p_norm, Exponent, FockParams, QuadratureGrid};
use fockspace::sampling::SeedStream;
use fockspace::{Complex64, TruncatedSeries};

fn main() -> fockspace::Result<()> {
    let alpha = 1.0;
    let params = FockParams::hilbert(alpha)?;
    let grid = QuadratureGrid::new(alpha, 25)?;
    let mut s = SeedStream::new(1);
    let f = s.dense_polynomial(12, alpha);
    let g = s.dense_polynomial(20, alpha);
    let closed = inner_product_closed(&f, &g, &params)?;
    let quad = inner_product_quadrature(&f, &g, &params, &grid)?;
    println!("<f,g> closed     = {closed:.15}");
    println!("<f,g> quadrature = {quad:.15}");

    let z3 = TruncatedSeries::monomial(3, Complex64::new(1.0, 0.0), 3);
    for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(3.5), Exponent::Infinity] {
        let got = p_norm(&z3, &params.with_p(p), &grid)?;
        let want = match p {
            Exponent::Finite(p) => format!("{:.12}", monomial_p_norm(3, alpha, p)),
            Exponent::Infinity => "(3/e)^(3/2)".into(),
        };
        println!("||z^3||_{p} = {got:.12}  closed form {want}");
    }
    Ok(())
}
