use std::f64::consts::PI;

use num_complex::Complex64;

/// ζ(2n) for n ≥ 1: a partial sum plus the Euler–Maclaurin tail.
fn zeta_even(n: u32) -> f64 {
    let s = (2 * n) as f64;
    let m = 40.0f64;
    let head: f64 = (1..40).map(|k| (k as f64).powf(-s)).sum();
    let tail = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s / 12.0 * m.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * m.powf(-s - 3.0)
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * m.powf(-s - 5.0);
    head + tail
}

fn zeta_table() -> &'static [f64; 32] {
    use std::sync::OnceLock;
    static T: OnceLock<[f64; 32]> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = [0.0; 32];
        for (n, slot) in t.iter_mut().enumerate().skip(1) {
            *slot = zeta_even(n as u32);
        }
        t
    })
}

/// Principal branch of the dilogarithm.
pub fn li2(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let pi2_6 = PI * PI / 6.0;
    if z == one {
        return Complex64::new(pi2_6, 0.0);
    }
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.norm_sqr() > 1.0 {
        let l = (-z).ln();
        return -li2(one / z) - pi2_6 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        return -li2(one - z) + pi2_6 - z.ln() * (one - z).ln();
    }
    // Bernoulli series in u = -log(1 - z); here |u| < 1.3.
    let u = -(one - z).ln();
    let zt = zeta_table();
    let u2 = u * u;
    let r = u2 / (4.0 * PI * PI);
    let mut sum = u - 0.25 * u2;
    let mut pw = u;
    for (n, zeta) in zt.iter().enumerate().skip(1) {
        pw *= r;
        let term = pw * (2.0 * zeta / (2 * n + 1) as f64);
        sum += if n % 2 == 1 { term } else { -term };
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// Bloch–Wigner dilogarithm, the signed volume of the ideal tetrahedron of shape `z`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    li2(z).im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln()
}

/// Lobachevsky function Λ(θ) = -∫₀^θ log|2 sin t| dt.
///
/// Reduced to |θ| ≤ π/2 by oddness and π-periodicity, then summed as
/// θ(1 - log 2θ) + θ Σ ζ(2n) (θ/π)^{2n} / (n (2n+1)), whose terms shrink by
/// at least a factor 4.
pub fn lobachevsky(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(PI);
    if t > PI / 2.0 {
        t -= PI;
    }
    if t == 0.0 {
        return 0.0;
    }
    let sign = t.signum();
    let t = t.abs();
    let x2 = (t / PI) * (t / PI);
    let mut sum = 0.0;
    let mut pw = 1.0;
    for (n, zeta) in zeta_table().iter().enumerate().skip(1) {
        pw *= x2;
        let term = zeta * pw / (n * (2 * n + 1)) as f64;
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    sign * t * (1.0 - (2.0 * t).ln() + sum)
}

/// Catalan's constant, 2Λ(π/4).
pub fn catalan() -> f64 {
    2.0 * lobachevsky(PI / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn li2_small_argument_matches_power_series() {
        for z in [c(0.3, 0.2), c(-0.4, 0.1), c(0.1, -0.45)] {
            let mut s = c(0.0, 0.0);
            let mut pw = c(1.0, 0.0);
            for k in 1..200 {
                pw *= z;
                s += pw / (k * k) as f64;
            }
            assert!((li2(z) - s).norm() < 1e-14, "{z}");
        }
    }

    #[test]
    fn zeta_values() {
        assert!((zeta_even(1) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta_even(2) - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn li2_at_minus_one() {
        assert!((li2(c(-1.0, 0.0)).re + PI * PI / 12.0).abs() < 1e-14);
    }

    #[test]
    fn regular_ideal_tetrahedron() {
        let w = Complex64::from_polar(1.0, PI / 3.0);
        assert!((bloch_wigner(w) - 3.0 * lobachevsky(PI / 3.0)).abs() < 1e-14);
        assert!((bloch_wigner(w) - 1.0149416064096536).abs() < 1e-14);
    }

    #[test]
    fn lobachevsky_is_odd_and_periodic() {
        assert_eq!(lobachevsky(0.0), 0.0);
        for t in [0.1, 0.7, 1.3, 2.9] {
            assert!((lobachevsky(t) + lobachevsky(-t)).abs() < 1e-15);
            assert!((lobachevsky(t + PI) - lobachevsky(t)).abs() < 1e-13);
        }
    }
}
