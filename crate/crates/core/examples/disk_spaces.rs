//! Bergman and Hardy spaces on the disk: Möbius unitaries and kernels.
use fockspace::disk::{
    disk_kernel, function_level_cap, involution_defect, isometry_defect, kernel_transformation_defect, recover_disk_weights,
    default_disk_shifts, DiskParams, MobiusMap, DISK_RECOVERY_CAP,
};
use fockspace::rigidity::RecoveryOptions;
use fockspace::sampling::SeedStream;
use fockspace::Complex64;

fn main() -> fockspace::Result<()> {
    let a = Complex64::new(0.4, -0.3);
    let map = MobiusMap::new(a)?;
    for params in [DiskParams::bergman(0.0)?, DiskParams::bergman(2.5)?, DiskParams::hardy()] {
        let f = SeedStream::new(2).dense_polynomial_weighted(12, |k| params.ln_moment(k));
        let cap = function_level_cap(a, 12);
        let z = Complex64::new(0.1, 0.5);
        let w = Complex64::new(-0.3, 0.2);
        println!(
            "{:?} alpha={:?}: |U²f − f| {:.1e}, | ||Uf|| − ||f|| | {:.1e}, kernel law {:.1e}, K(z,w) = {:.6}",
            params.kind(),
            params.alpha(),
            involution_defect(&map, &f, &params, cap)?,
            isometry_defect(&map, &f, &params, cap)?,
            kernel_transformation_defect(a, z, w, &params)?,
            disk_kernel(z, w, &params)?
        );
    }
    let params = DiskParams::bergman(1.0)?;
    let rec = recover_disk_weights(&params, DISK_RECOVERY_CAP, &default_disk_shifts(), 1, &RecoveryOptions::default())?;
    println!("recovered Bergman(1) moments: {:.6?}", &rec.weights[..5]);
    println!("closed form:                  {:.6?}", (0..5).map(|k| params.moment(k)).collect::<Vec<_>>());
    Ok(())
}
