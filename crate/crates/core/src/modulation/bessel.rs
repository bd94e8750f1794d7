//! Integer-order Bessel functions of the first kind.
//!
//! Backward (Miller) recurrence `J_{k-1} = (2k/x) J_k − J_{k+1}` started far
//! above both the order and the argument, normalized with
//! `J_0 + 2 Σ_{k≥1} J_{2k} = 1`. The recurrence runs in the direction in
//! which `J_k` is the dominant solution, so it is stable for every order and
//! argument in the envelope.

use crate::error::{Error, Result};

pub const MAX_ORDER: i32 = 200;
pub const MAX_ARG: f64 = 50.0;

const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_n(x)` for `|n| ≤ 200`, `0 ≤ x ≤ 50`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    if n.abs() > MAX_ORDER || !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::OutOfEnvelope { n, x });
    }
    let order = n.unsigned_abs();
    let value = bessel_j_nonneg(order, x);
    // J_{-n} = (-1)^n J_n
    Ok(if n < 0 && order % 2 == 1 {
        -value
    } else {
        value
    })
}

/// All `J_k(x)` for `k ∈ [0, k_max]` from a single recurrence sweep.
pub fn bessel_j_range(k_max: u32, x: f64) -> Result<Vec<f64>> {
    if k_max as i32 > MAX_ORDER || !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::OutOfEnvelope { n: k_max as i32, x });
    }
    if x == 0.0 {
        let mut out = vec![0.0; k_max as usize + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    let start = start_index(k_max, x);
    let mut out = vec![0.0; k_max as usize + 1];
    let (sum, _) = miller_sweep(start, x, |k, value, rescale| {
        if rescale != 1.0 {
            for v in out.iter_mut() {
                *v *= rescale;
            }
        }
        if k <= k_max {
            out[k as usize] = value;
        }
    });
    for v in out.iter_mut() {
        *v /= sum;
    }
    Ok(out)
}

fn bessel_j_nonneg(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let start = start_index(n, x);
    let mut value = 0.0;
    let (sum, _) = miller_sweep(start, x, |k, v, rescale| {
        value *= rescale;
        if k == n {
            value = v;
        }
    });
    value / sum
}

/// Even starting index well above both `n` and `x`.
fn start_index(n: u32, x: f64) -> u32 {
    let top = (n as f64).max(x);
    let m = top.ceil() as u32 + 25 + (60.0 * top.max(1.0)).sqrt().ceil() as u32;
    m + (m % 2)
}

/// Runs the backward recurrence from `start` down to 0.
///
/// `visit(k, j_k, rescale)` is called once per index with the unnormalized
/// value; `rescale` is the factor just applied to everything seen so far
/// (1.0 when nothing was rescaled). Returns the unnormalized
/// `J_0 + 2 Σ J_{2k}` and the final `J_0`.
fn miller_sweep(start: u32, x: f64, mut visit: impl FnMut(u32, f64, f64)) -> (f64, f64) {
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // j_{k+1}
    let mut current: f64 = 1e-30; // j_k
    let mut sum = 0.0;
    let mut k = start;
    loop {
        let mut rescale = 1.0;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_BY;
            above *= RESCALE_BY;
            sum *= RESCALE_BY;
            rescale = RESCALE_BY;
        }
        visit(k, current, rescale);
        if k == 0 {
            sum += current;
            return (sum, current);
        }
        if k % 2 == 0 {
            sum += 2.0 * current;
        }
        let below = (k as f64) * two_over_x * current - above;
        above = current;
        current = below;
        k -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// J_n(x) = (1/M) Σ_k cos(n τ_k − x sin τ_k), τ_k = 2πk/M. The trapezoid
    /// rule is spectrally exact for this periodic integrand once M exceeds
    /// n + x by a margin; absolute accuracy ~1e-15.
    fn quadrature(n: i32, x: f64) -> f64 {
        let m = 1024;
        let mut s = 0.0;
        for k in 0..m {
            let tau = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            s += (n as f64 * tau - x * tau.sin()).cos();
        }
        s / m as f64
    }

    /// Power series Σ (−1)^k (x/2)^{2k+n} / (k! (k+n)!), free of
    /// cancellation when x²/4 is small against n + 1.
    fn series(n: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut lead = 1.0;
        for k in 1..=n {
            lead *= half / k as f64;
        }
        let mut term = lead;
        let mut sum = term;
        for k in 1..200 {
            term *= -half * half / (k as f64 * (k + n) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for n in [-5, -1, 1, 2, 17, 200] {
            assert_eq!(bessel_j(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_j(0, 2.4048255577).unwrap().abs() < 1e-9);
        // cross-check with an independent route
        assert!(quadrature(0, 2.4048255577).abs() < 1e-9);
    }

    #[test]
    fn phase_boundary_value() {
        // 0.05 J0(2.041) ≈ 0.01
        let j = bessel_j(0, 2.041).unwrap();
        assert!((j - 0.2).abs() < 5e-4, "J0(2.041) = {j}");
    }

    #[test]
    fn agrees_with_quadrature_across_envelope() {
        let xs = [
            0.01, 0.3, 1.0, 1.36, 2.48, 2.81, 3.0, 7.5, 12.0, 25.3, 40.0, 50.0,
        ];
        for &x in &xs {
            for n in (-60..=60).chain([100, 150, 200]) {
                let got = bessel_j(n, x).unwrap();
                let want = quadrature(n, x);
                assert!((got - want).abs() < 1e-14, "J_{n}({x}): {got} vs {want}");
                if want.abs() > 1e-2 {
                    assert!(((got - want) / want).abs() < 1e-12, "J_{n}({x}) relative");
                }
            }
        }
    }

    #[test]
    fn relative_accuracy_small_values() {
        for &(n, x) in &[
            (6u32, 2.48),
            (11, 3.0),
            (4, 1.36),
            (30, 1.0),
            (50, 2.0),
            (120, 10.0),
            (200, 5.0),
        ] {
            let want = series(n, x);
            let got = bessel_j(n as i32, x).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "J_{n}({x}): {got} vs {want}"
            );
        }
    }

    #[test]
    fn parity() {
        for n in 0..40 {
            for &x in &[0.5, 2.48, 9.0, 33.0] {
                let pos = bessel_j(n, x).unwrap();
                let neg = bessel_j(-n, x).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((neg - sign * pos).abs() <= 1e-10 * pos.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn sum_of_squares_is_one() {
        for &x in &[0.1, 1.0, 2.48, 3.0, 10.0, 30.0, 50.0] {
            let mut s = bessel_j(0, x).unwrap().powi(2);
            for n in 1..=200 {
                let j = bessel_j(n, x).unwrap();
                s += 2.0 * j * j;
                if n as f64 > x && j.abs() < 1e-15 {
                    break;
                }
            }
            assert!((s - 1.0).abs() < 1e-10, "x = {x}: {s}");
        }
    }

    #[test]
    fn range_matches_pointwise() {
        let all = bessel_j_range(40, 2.48).unwrap();
        for (k, v) in all.iter().enumerate() {
            let single = bessel_j(k as i32, 2.48).unwrap();
            assert!((v - single).abs() <= 1e-13 * single.abs() + 1e-300);
        }
    }

    #[test]
    fn envelope_enforced() {
        assert!(matches!(
            bessel_j(201, 1.0),
            Err(Error::OutOfEnvelope { .. })
        ));
        assert!(matches!(
            bessel_j(0, 50.5),
            Err(Error::OutOfEnvelope { .. })
        ));
        assert!(matches!(
            bessel_j(0, -0.1),
            Err(Error::OutOfEnvelope { .. })
        ));
        assert!(bessel_j(-200, 50.0).is_ok());
    }
}
