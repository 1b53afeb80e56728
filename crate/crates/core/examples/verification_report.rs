//! Run a suite in-process, print its summary and write the CSV table.
use fockspace::cli::{self, export_csv, RunConfig, Suite};

fn main() -> fockspace::Result<()> {
    let mut config = RunConfig::new(Suite::RigidityRecover);
    config.alpha = 2.0;
    let report = cli::run(&config)?;
    for case in &report.cases {
        println!("{:5} {:28} defect {:.3e} tol {:.1e}", if case.pass { "pass" } else { "FAIL" }, case.name, case.defect, case.tolerance);
    }
    println!("{:?}", report.summary);
    let path = std::env::temp_dir().join("fockspace-rigidity-recover.csv");
    export_csv(&report, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
