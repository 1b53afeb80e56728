//! Weighted translations, the cocycle phase and the Heisenberg group law.
use fockspace::fock::{norm_closed, FockParams};
use fockspace::translations::{compose_phase, heisenberg_compose, CVector, HeisenbergElement, WeightedTranslation};
use fockspace::Complex64;
use fockspace::sampling::SeedStream;

fn main() -> fockspace::Result<()> {
    let alpha = 1.0;
    let params = FockParams::hilbert(alpha)?;
    let f = SeedStream::new(3).dense_polynomial(8, alpha).with_cap(40);
    let (a, b) = (Complex64::new(0.6, -0.3), Complex64::new(-0.2, 0.9));
    let ta = WeightedTranslation::on_line(a, alpha)?;
    let tb = WeightedTranslation::on_line(b, alpha)?;
    let tf = ta.apply(&f)?;
    println!("||f|| = {:.15}, ||T_a f|| = {:.15} (cap {} -> {})", norm_closed(&f, &params)?, norm_closed(&tf, &params)?, f.degree_cap(), tf.degree_cap());

    let lhs = ta.apply(&tb.apply(&f)?)?;
    let phase = compose_phase(&CVector::line(a), &CVector::line(b), alpha)?;
    let rhs = WeightedTranslation::on_line(a + b, alpha)?.apply(&f)?.scale(phase);
    println!("T_a T_b f vs phase·T_(a+b) f: max coefficient gap {:e}, phase {phase:.6}", lhs.with_cap(rhs.degree_cap()).max_coeff_diff(&rhs));

    let back = ta.inverse().apply(&tf)?.with_cap(40);
    println!("T_(-a) T_a f vs f: {:e}", back.max_coeff_diff(&f));

    let g = HeisenbergElement::new(CVector::line(a), 0.5);
    let h = HeisenbergElement::new(CVector::line(b), -1.0);
    let gh = heisenberg_compose(&g, &h)?;
    println!("(a, 0.5)⊕(b, -1) = ({}, {:.6})", gh.z.0[0], gh.t);
    Ok(())
}
