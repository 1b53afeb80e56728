//! Seeded sampling of test functions and points.
//!
//! Every random draw in the crate comes from a [`SeedStream`]. Streams are
//! split by label, so adding a new consumer never perturbs the draws of an
//! existing one.

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::series::TruncatedSeries;
use crate::special::ln_fock_weight;

/// A named splittable generator.
#[derive(Debug, Clone)]
pub struct SeedStream {
    seed: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn fnv1a(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child stream; depends only on this stream's seed and the label.
    pub fn fork(&self, label: &str) -> SeedStream {
        SeedStream::new(splitmix64(self.seed ^ splitmix64(fnv1a(label))))
    }

    pub fn fork_indexed(&self, label: &str, index: usize) -> SeedStream {
        self.fork(&format!("{label}#{index}"))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.random_range(0..upper)
    }

    /// Uniform point of the closed disk `|z| ≤ radius`.
    pub fn point_in_disk(&mut self, radius: f64) -> Complex64 {
        let r = radius * self.rng.random::<f64>().sqrt();
        Complex64::from_polar(r, self.uniform(0.0, std::f64::consts::TAU))
    }

    /// Dense polynomial of the given degree with unit `F²_α` norm and equal
    /// expected mass per degree.
    pub fn dense_polynomial(&mut self, degree: usize, alpha: f64) -> TruncatedSeries {
        self.dense_polynomial_weighted(degree, |k| ln_fock_weight(k, alpha))
    }

    /// Polynomial with one to `max_terms` monomials of degree `≤ max_degree`,
    /// unit `F²_α` norm.
    pub fn sparse_polynomial(&mut self, max_degree: usize, max_terms: usize, alpha: f64) -> TruncatedSeries {
        self.sparse_polynomial_weighted(max_degree, max_terms, |k| ln_fock_weight(k, alpha))
    }

    /// As [`Self::dense_polynomial`] for the diagonal norm `Σ |f_k|² e^{ln_weight(k)}`.
    pub fn dense_polynomial_weighted(&mut self, degree: usize, ln_weight: impl Fn(usize) -> f64) -> TruncatedSeries {
        let coeffs = (0..=degree).map(|k| self.complex_normal() * (-0.5 * ln_weight(k)).exp()).collect();
        normalize(coeffs, ln_weight)
    }

    /// As [`Self::sparse_polynomial`] for the diagonal norm `Σ |f_k|² e^{ln_weight(k)}`.
    pub fn sparse_polynomial_weighted(
        &mut self,
        max_degree: usize,
        max_terms: usize,
        ln_weight: impl Fn(usize) -> f64,
    ) -> TruncatedSeries {
        let terms = 1 + self.index(max_terms.min(max_degree + 1).max(1));
        let mut coeffs = vec![Complex64::new(0.0, 0.0); max_degree + 1];
        for k in index::sample(&mut self.rng, max_degree + 1, terms) {
            coeffs[k] = self.complex_normal() * (-0.5 * ln_weight(k)).exp();
        }
        normalize(coeffs, ln_weight)
    }
}

fn normalize(coeffs: Vec<Complex64>, ln_weight: impl Fn(usize) -> f64) -> TruncatedSeries {
    let norm: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm_sqr() * ln_weight(k).exp())
        .sum::<f64>()
        .sqrt();
    let coeffs: Vec<Complex64> = coeffs.into_iter().map(|c| c / norm).collect();
    TruncatedSeries::new(coeffs).expect("finite coefficients")
}
