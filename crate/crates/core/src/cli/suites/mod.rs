//! Case generators for each suite. Every job derives its randomness from
//! the run seed and its own label, so jobs are independent and may run in
//! any order.

mod atomic;
mod disk;
mod fock;
mod rigidity;

use rayon::prelude::*;

use super::config::{RunConfig, Suite};
use super::report::Case;
use crate::error::Result;
use crate::sampling::SeedStream;

pub(crate) type Job = Box<dyn Fn(&RunConfig) -> Result<Vec<Case>> + Send + Sync>;

fn jobs(suite: Suite) -> Vec<Job> {
    match suite {
        Suite::FockVerify => fock::jobs(),
        Suite::DiskVerify => disk::jobs(),
        Suite::Atomic => atomic::jobs(),
        Suite::RigidityScan => rigidity::scan_jobs(),
        Suite::RigidityRecover => rigidity::recover_jobs(),
    }
}

/// Runs every job of the configured suite; the result is unordered.
pub fn run_cases(config: &RunConfig) -> Result<Vec<Case>> {
    let nested: Vec<Vec<Case>> = jobs(config.suite).par_iter().map(|job| job(config)).collect::<Result<_>>()?;
    Ok(nested.into_iter().flatten().collect())
}

pub(crate) fn stream(config: &RunConfig, label: &str) -> SeedStream {
    SeedStream::new(config.seed).fork(config.suite.name()).fork(label)
}

/// Absolute below 1, relative above.
pub(crate) fn mixed_defect(diff: f64, reference: f64) -> f64 {
    diff / reference.abs().max(1.0)
}

/// Largest value; NaN propagates so a broken sample cannot hide.
pub(crate) fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc: f64, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

/// Display form of a real used inside case names.
pub(crate) fn label(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.1}")
    } else {
        format!("{x}")
    }
}
