//! Riemann zeta, Dirichlet eta and the Bessel function `J0`.
//!
//! `riemann_zeta` uses Euler–Maclaurin summation, `dirichlet_eta` uses
//! Borwein's alternating-series acceleration. The two are computed by
//! unrelated routes so the identity `eta(s) = (1 - 2^(1-s)) zeta(s)` is a
//! genuine consistency check. Both target an absolute accuracy of `1e-12`
//! or better on their domains.

use crate::error::{Error, Result};

/// Bernoulli numbers `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const EM_CUTOFF: usize = 16;

/// Riemann zeta `ζ(s) = Σ_{R>=1} R^-s`.
///
/// Defined for `s > 1`; the Euler–Maclaurin form is also the analytic
/// continuation, so `0 < s < 1` is accepted as well. `s = 1` (the pole) and
/// `s <= 0` are rejected.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 0.0) || s == 1.0 || s.is_nan() {
        return Err(Error::OutOfDomain {
            function: "riemann_zeta",
            arg: s,
        });
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    let m = EM_CUTOFF as f64;
    // Ascending order keeps the head sum reproducible.
    let head: f64 = (1..EM_CUTOFF).map(|n| (n as f64).powf(-s)).sum();
    let m_pow = m.powf(-s);
    let mut tail = m * m_pow / (s - 1.0) + 0.5 * m_pow;

    // Σ_k B_2k / (2k)! · s (s+1) ... (s+2k-2) · M^(-s-2k+1)
    let mut rising = s; // s (s+1) ... (s+2k-2)
    let mut factorial = 2.0; // (2k)!
    let mut power = m_pow / m; // M^(-s-2k+1)
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / factorial * rising * power;
        tail += term;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        factorial *= (j + 3.0) * (j + 4.0);
        power /= m * m;
    }
    Ok(head + tail)
}

const BORWEIN_TERMS: usize = 40;

/// Dirichlet eta `η(s) = Σ_{R>=1} (-1)^(R-1) R^-s`, for `s > 0`.
pub fn dirichlet_eta(s: f64) -> Result<f64> {
    if !(s > 0.0) || s.is_nan() {
        return Err(Error::OutOfDomain {
            function: "dirichlet_eta",
            arg: s,
        });
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    let n = BORWEIN_TERMS;
    let nf = n as f64;

    // d_k = n Σ_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = term;
    d.push(nf * acc);
    for i in 1..=n {
        let fi = i as f64;
        term *= 4.0 * (nf + fi - 1.0) * (nf - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d.push(nf * acc);
    }
    let dn = d[n];
    let mut sum = 0.0;
    for (k, dk) in d.iter().take(n).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dk - dn) / ((k + 1) as f64).powf(s);
    }
    Ok(-sum / dn)
}

const J0_SERIES_LIMIT: f64 = 8.0;

/// Bessel function of the first kind of order zero, `J0(x)`.
///
/// Power series below `|x| = 8`, Miller backward recurrence normalised by
/// `J0 + 2 Σ J_2k = 1` above. Absolute error is below `1e-13`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < J0_SERIES_LIMIT {
        j0_series(x)
    } else {
        j0_miller(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn j0_miller(x: f64) -> f64 {
    let start = (x + 40.0 + 10.0 * x.sqrt()) as usize;
    let start = start + start % 2;
    let two_over_x = 2.0 / x;

    let mut next = 0.0; // J_{k+1}
    let mut current = 1e-30; // J_k
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let prev = k as f64 * two_over_x * current - next;
        next = current;
        current = prev;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * current;
        }
        if current.abs() > 1e250 {
            next *= 1e-250;
            current *= 1e-250;
            norm *= 1e-250;
        }
    }
    norm += current;
    current / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn zeta_special_values() {
        assert!((riemann_zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-14);
        assert!((riemann_zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((riemann_zeta(6.0).unwrap() - PI.powi(6) / 945.0).abs() < 1e-14);
        // ζ(1/2) = -1.4603545088095868...
        assert!((riemann_zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-12);
    }

    #[test]
    fn zeta_brute_force_tail() {
        // Direct partial sum plus integral tail bound at s = 7.
        let s = 7.0;
        let direct: f64 = (1..20_000).map(|r| (r as f64).powf(-s)).sum();
        assert!((riemann_zeta(s).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn zeta_domain() {
        assert!(riemann_zeta(1.0).is_err());
        assert!(riemann_zeta(0.0).is_err());
        assert!(riemann_zeta(-2.0).is_err());
        assert!(riemann_zeta(f64::NAN).is_err());
    }

    #[test]
    fn eta_special_values() {
        assert!((dirichlet_eta(1.0).unwrap() - LN_2).abs() < 1e-14);
        assert!((dirichlet_eta(2.0).unwrap() - PI * PI / 12.0).abs() < 1e-14);
        assert!(dirichlet_eta(0.0).is_err());
    }

    #[test]
    fn eta_zeta_identity() {
        let s = 2.5;
        let lhs = dirichlet_eta(s).unwrap();
        let rhs = (1.0 - 2f64.powf(1.0 - s)) * riemann_zeta(s).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn j0_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        // Tabulated: J0(1) = 0.7651976865579666, J0(10) = -0.2459357644513483
        assert!((bessel_j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j0(10.0) + 0.245_935_764_451_348_3).abs() < 1e-13);
        assert!((bessel_j0(-1.0) - bessel_j0(1.0)).abs() == 0.0);
    }

    #[test]
    fn j0_first_zero() {
        assert!(bessel_j0(2.404_825_557_7).abs() < 1e-8);
        // The implemented series changes sign around the tabulated root.
        let (mut lo, mut hi) = (2.3, 2.5);
        assert!(bessel_j0(lo) > 0.0 && bessel_j0(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if bessel_j0(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404_825_557_695_773).abs() < 1e-12);
    }

    #[test]
    fn j0_large_argument_asymptotics() {
        let x = 50.0;
        let phase = x - PI / 4.0;
        let asym = (2.0 / (PI * x)).sqrt() * (phase.cos() + phase.sin() / (8.0 * x));
        assert!(((bessel_j0(x) - asym) / asym).abs() < 1e-3);
        assert!((bessel_j0(x) - 0.055_812_327_669_251_86).abs() < 1e-13);
    }

    #[test]
    fn j0_branches_agree_at_switch() {
        // Miller recurrence is valid below the switch as well.
        for x in [6.0, 7.5, 7.999] {
            assert!((j0_series(x) - j0_miller(x)).abs() < 1e-13, "{x}");
        }
    }
}
