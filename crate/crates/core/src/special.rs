//! Log-factorials and the gamma values at half-integers that the norm
//! formulas need.

/// `ln n!`. Exact table through 20!, Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 20 {
        let mut f = 1.0f64;
        for k in 2..=n {
            f *= k as f64;
        }
        return f.ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// `ln Γ(k/2 + 1)` for integer `k ≥ 0`.
pub fn ln_gamma_half_plus_one(k: usize) -> f64 {
    if k % 2 == 0 {
        ln_factorial(k / 2)
    } else {
        // Γ(m + 1/2) = (2m)! √π / (4^m m!) with m = (k + 1) / 2
        let m = (k + 1) / 2;
        ln_factorial(2 * m) - m as f64 * 4f64.ln() - ln_factorial(m) + 0.5 * std::f64::consts::PI.ln()
    }
}

/// `ln (k!/α^k)`, the log of the squared Fock norm of `z^k`.
pub fn ln_fock_weight(k: usize, alpha: f64) -> f64 {
    ln_factorial(k) - k as f64 * alpha.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_across_the_switch() {
        let mut exact = 1.0f64;
        for n in 1..=30usize {
            exact *= n as f64;
            let rel = (ln_factorial(n) - exact.ln()).abs() / exact.ln().max(1.0);
            assert!(rel < 1e-15, "n={n} rel={rel}");
        }
        // ln 170! from an independent high-precision value
        assert!((ln_factorial(170) - 706.5730622457874).abs() < 1e-11);
    }

    #[test]
    fn half_integer_gamma() {
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((ln_gamma_half_plus_one(1).exp() - sqrt_pi / 2.0).abs() < 1e-15);
        assert!((ln_gamma_half_plus_one(3).exp() - 3.0 * sqrt_pi / 4.0).abs() < 1e-15);
        assert!((ln_gamma_half_plus_one(4).exp() - 2.0).abs() < 1e-15);
    }
}

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod gamma_tests {
    use super::*;

    #[test]
    fn lanczos_matches_factorials() {
        for n in 0..60usize {
            let d = (ln_gamma(n as f64 + 1.0) - ln_factorial(n)).abs();
            assert!(d < 1e-12 * (1.0 + ln_factorial(n)), "n={n} d={d}");
        }
        assert!((ln_gamma(0.5) - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
    }
}
