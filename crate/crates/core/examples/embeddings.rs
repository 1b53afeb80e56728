//! Ratios `||f||_inf/||f||_2` and `||f||_2/||f||_1` over seeded polynomials.
use fockspace::fock::FockParams;
use fockspace::rigidity::embedding_report;

fn main() -> fockspace::Result<()> {
    let params = FockParams::hilbert(1.0)?;
    let report = embedding_report(&params, 11, 63)?;
    println!("max sup/l2 = {:.6}   max l2/l1 = {:.6}", report.max_sup_ratio, report.max_l1_ratio);
    for s in report.samples.iter().take(6) {
        println!("  degree {:2}: sup/l2 {:.4}  l2/l1 {:.4}", s.degree, s.sup_ratio, s.l1_ratio);
    }
    Ok(())
}
