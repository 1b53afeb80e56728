//! Truncated power series: products, shifts, composition and tail bounds.
use fockspace::{Complex64, TruncatedSeries};

fn main() {
    let c = |re: f64| Complex64::new(re, 0.0);
    let f = TruncatedSeries::from_real(&[1.0, 2.0, 3.0]); // 1 + 2z + 3z²
    let g = TruncatedSeries::from_real(&[0.0, 1.0]); // z
    println!("f·g      = {:?}", f.mul(&g, 8).coeffs());
    println!("f(z − 1) = {:?}", f.shift(c(1.0)).coeffs());
    println!("f(2)     = {}", f.evaluate(c(2.0)));

    let e = TruncatedSeries::exp_linear(c(1.5), 20);
    println!("e^(1.5z) at cap 20: value at 1 = {:.15}, exact {:.15}", e.evaluate(c(1.0)).re, 1.5f64.exp());
    println!("  recorded tail bound {:e}", e.tail_bound());

    let inner = TruncatedSeries::from_real(&[0.0, 0.5, 0.25]);
    println!("f ∘ (z/2 + z²/4) = {:?}", f.compose(&inner, 4).coeffs());
}
