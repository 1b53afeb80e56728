//! One-dimensional quadrature rules used by the measure layer.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::special::ln_gamma;

/// Gauss–Laguerre rule for `∫_0^∞ x^a e^{-x} g(x) dx`, exact for polynomial
/// `g` of degree `< 2n`.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize, a: f64) -> Self {
        assert!(n >= 1, "need at least one node");
        assert!(a > -1.0, "Laguerre parameter must exceed -1");
        // Jacobi matrix eigenvalues give starting nodes.
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jac[(k, k)] = 2.0 * k as f64 + a + 1.0;
            if k + 1 < n {
                let off = ((k as f64 + 1.0) * (k as f64 + 1.0 + a)).sqrt();
                jac[(k, k + 1)] = off;
                jac[(k + 1, k)] = off;
            }
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jac).eigenvalues.iter().copied().collect();
        nodes.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));

        // ln(Γ(n + a + 1) / n!) without cancelling two large log-gammas
        let ln_norm = ln_gamma(a + 1.0) + (1..=n).map(|k| (a / k as f64).ln_1p()).sum::<f64>();
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (ln, lnm1) = laguerre_pair(n, a, *x);
                let deriv = (n as f64 * ln - (n as f64 + a) * lnm1) / *x;
                let step = ln / deriv;
                *x -= step;
                if step.abs() <= 1e-16 * x.abs() {
                    break;
                }
            }
            let (_, lnm1) = laguerre_pair(n, a, *x);
            // L_n(x) = 0 at a node, so x L_n'(x) = -(n + a) L_{n-1}(x).
            let deriv = -(n as f64 + a) * lnm1 / *x;
            weights.push((ln_norm - x.ln() - 2.0 * deriv.abs().ln()).exp());
        }
        GaussLaguerre { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// `(L_n^{(a)}(x), L_{n-1}^{(a)}(x))` by the three-term recurrence.
fn laguerre_pair(n: usize, a: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    if n == 0 {
        return (prev, 0.0);
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One G7/K15 panel: (Kronrod estimate, |K15 - G7|).
fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss–Kronrod integration over `[a, b]`.
///
/// Starts from `panels` equal subintervals and bisects the panel with the
/// largest error estimate until the summed estimate drops below
/// `max(abs_tol, rel_tol |I|)` or `max_panels` is reached.
pub fn adaptive_gk15(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> f64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels * 2);
    let (mut total, mut error) = (0.0, 0.0);
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        let (value, err) = gk15(&mut f, lo, hi);
        total += value;
        error += err;
        heap.push(Panel { a: lo, b: hi, value, error: err });
    }
    while error > abs_tol.max(rel_tol * total.abs()) && heap.len() < max_panels {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&mut f, worst.a, mid);
        let (rv, re) = gk15(&mut f, mid, worst.b);
        total += lv + rv - worst.value;
        error += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_factorial;

    #[test]
    fn laguerre_moments_exact() {
        let rule = GaussLaguerre::new(64, 0.0);
        let mut w_sum = 0.0;
        for &w in rule.weights() {
            assert!(w > 0.0);
            w_sum += w;
        }
        assert!((w_sum - 1.0).abs() < 1e-12, "w_sum={w_sum}");
        // ∫ x^k e^{-x} = k! for k < 128
        for k in [1usize, 5, 17, 40, 63, 90, 127] {
            let got: f64 = rule
                .nodes()
                .iter()
                .zip(rule.weights())
                .map(|(&x, &w)| (k as f64 * x.ln() + w.ln()).exp())
                .sum();
            let want = ln_factorial(k).exp();
            assert!(((got - want) / want).abs() < 1e-11, "k={k} got={got} want={want}");
        }
    }

    #[test]
    fn generalized_laguerre_moments() {
        let rule = GaussLaguerre::new(20, 0.5);
        for k in 0..30 {
            let got = rule.integrate(|x| x.powi(k));
            let want = ln_gamma(k as f64 + 1.5).exp();
            assert!(((got - want) / want).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn adaptive_handles_kinks_and_smooth_integrands() {
        let v = adaptive_gk15(|x| (x - 0.3).abs(), 0.0, 1.0, 1, 1e-13, 0.0, 1000);
        assert!((v - (0.045 + 0.245)).abs() < 1e-13);
        let v = adaptive_gk15(f64::sin, 0.0, std::f64::consts::PI, 4, 1e-14, 0.0, 100);
        assert!((v - 2.0).abs() < 1e-14);
        let v = adaptive_gk15(f64::sqrt, 0.0, 1.0, 1, 1e-12, 0.0, 2000);
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }
}
