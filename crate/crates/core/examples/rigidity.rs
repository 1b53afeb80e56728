//! Translation invariance singles out the Fock weights among candidate inner products.
use fockspace::fock::FockParams;
use fockspace::rigidity::{default_recovery_shifts, recover_weights, standard_shifts, summed_invariance_defect, CandidateSpace};
use fockspace::special::ln_fock_weight;

fn main() -> fockspace::Result<()> {
    let (alpha, cap, seed) = (1.0, 40, 7);
    let params = FockParams::hilbert(alpha)?;
    let shifts = standard_shifts();
    let truth = CandidateSpace::fock(alpha, cap);
    let flat = CandidateSpace::diagonal(vec![1.0; cap + 1])?;
    for (name, space) in [("k!/alpha^k", &truth), ("all ones", &flat), ("w_3 x 1.001", &truth.with_weight_scaled(3, 1.001)?)] {
        println!("{name:12} summed invariance defect {:.3e}", summed_invariance_defect(space, &shifts, 40, seed, &params)?);
    }

    let alpha = 2.0;
    let rec = recover_weights(alpha, 16, &default_recovery_shifts(alpha), seed)?;
    println!("recovered weights at alpha = 2 (w_0 = 1):");
    for k in 0..=6 {
        println!("  k={k}: {:.12} vs k!/2^k = {:.12}", rec.weights[k], ln_fock_weight(k, alpha).exp());
    }
    println!("sweeps {}, final defect {:e}", rec.sweeps, rec.final_defect);
    Ok(())
}
