//! Tail sums `T(m) = Σ_{n >= m} n^{-β} e^{-γ n}` in log space.
//!
//! Two routes, both with a certified remainder:
//!
//! * Euler-Maclaurin for `β >= 0` and small `γ`. A short head is summed
//!   directly up to `N`, then the tail from `N` is the integral plus six
//!   Bernoulli correction terms. `x^{-β} e^{-γx}` is completely monotone,
//!   so the remainder is bounded by `2ζ(13)/(2π)^13 |f^{(12)}(N)|`. `N` is
//!   doubled until that bound is negligible against the sum.
//! * Direct summation otherwise, stopped once the geometric ratio bound on
//!   the remaining terms is negligible.
//!
//! With `γ = 0` the first route is the Hurwitz zeta function `ζ(β, m)`.

use alloc::vec;

use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::special::{CompensatedSum, BERNOULLI_OVER_FACTORIAL, GAUSS_LEGENDRE_10};

/// Relative size of the certified remainder we accept.
const REL_TOL: f64 = 1e-16;
/// Hard cap on directly summed terms.
pub(crate) const MAX_TERMS: u64 = 100_000_000;
/// Above this γ the terms decay fast enough that direct summation is cheaper.
const DIRECT_GAMMA: f64 = 0.05;
const EM_START: u64 = 16;
/// `2 ζ(13) / (2π)^13`
const EM_REMAINDER_COEFF: f64 = 8.4091e-11;

#[inline]
fn log_term(beta: f64, gamma: f64, n: f64) -> f64 {
    -beta * libm::log(n) - gamma * n
}

/// `ln Σ_{n >= m} n^{-β} e^{-γ n}`; requires `γ > 0`, or `γ = 0` and `β > 1`.
pub(crate) fn ln_tail(family: Family, beta: f64, gamma: f64, m: u64) -> Result<f64> {
    debug_assert!(m >= 1);
    if gamma < DIRECT_GAMMA && beta >= 0.0 {
        euler_maclaurin(family, beta, gamma, m)
    } else {
        direct(family, beta, gamma, m)
    }
}

fn no_convergence(family: Family, beta: f64, gamma: f64, terms: u64) -> Error {
    let params = match family {
        Family::PowerLaw => vec![beta],
        _ => vec![beta, gamma],
    };
    Error::NoConvergence { family, params, terms }
}

fn euler_maclaurin(family: Family, beta: f64, gamma: f64, m: u64) -> Result<f64> {
    let reference = log_term(beta, gamma, m as f64);
    let mut head = CompensatedSum::default();
    let mut next = m;
    let mut big_n = m.max(EM_START);
    loop {
        while next < big_n {
            head.add(libm::exp(log_term(beta, gamma, next as f64) - reference));
            next += 1;
        }
        let n = big_n as f64;
        let scale = libm::exp(log_term(beta, gamma, n) - reference);
        let d = scaled_derivatives(beta, gamma, n);
        let mut bracket = n * integral_factor(family, beta, gamma, n)? + 0.5;
        for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().take(6).enumerate() {
            bracket += b * d[2 * k + 1];
        }
        let remainder = EM_REMAINDER_COEFF * d[12] * scale;
        let total = head.value() + scale * bracket;
        if remainder <= REL_TOL * total || scale == 0.0 {
            return Ok(reference + libm::log(total));
        }
        if big_n - m > MAX_TERMS {
            return Err(no_convergence(family, beta, gamma, big_n - m));
        }
        big_n = big_n.saturating_mul(2);
    }
}

/// `d_k = (-1)^k f^{(k)}(N) / f(N)` for `f(x) = x^{-β} e^{-γx}`, k = 0..=12.
///
/// Leibniz on the two factors gives `d_k = Σ_j C(k,j) (β)_j N^{-j} γ^{k-j}`
/// with the rising factorial `(β)_j`; every term is nonnegative for `β >= 0`.
fn scaled_derivatives(beta: f64, gamma: f64, n: f64) -> [f64; 13] {
    let mut rising = [1.0f64; 13];
    let mut gpow = [1.0f64; 13];
    for j in 1..13 {
        rising[j] = rising[j - 1] * (beta + (j - 1) as f64) / n;
        gpow[j] = gpow[j - 1] * gamma;
    }
    let mut d = [0.0f64; 13];
    let mut binom = [0.0f64; 13];
    binom[0] = 1.0;
    for k in 0..13 {
        if k > 0 {
            for j in (1..=k).rev() {
                binom[j] += binom[j - 1];
            }
        }
        d[k] = (0..=k).map(|j| binom[j] * rising[j] * gpow[k - j]).sum();
    }
    d
}

/// `∫_N^∞ f(x) dx / (N f(N))`.
///
/// Substituting `x = N e^v` turns the integral into
/// `∫_0^∞ exp((1-β) v - γN (e^v - 1)) dv`, a smooth integrand that is
/// evaluated with composite Gauss-Legendre panels sized to the local slope.
fn integral_factor(family: Family, beta: f64, gamma: f64, n: f64) -> Result<f64> {
    let c = gamma * n;
    if c == 0.0 {
        return Ok(1.0 / (beta - 1.0));
    }
    let a = 1.0 - beta;
    let exponent = |v: f64| a * v - c * libm::expm1(v);
    let v_peak = if a > c { libm::log(a / c) } else { 0.0 };
    let e_max = exponent(v_peak);
    let mut acc = CompensatedSum::default();
    let mut lo = 0.0;
    for _ in 0..100_000 {
        let slope = libm::fabs(a - c * libm::exp(lo));
        let h = if slope > 4.0 { 2.0 / slope } else { 0.5 };
        let mid = lo + 0.5 * h;
        let mut panel = 0.0;
        for &(x, w) in GAUSS_LEGENDRE_10.iter() {
            let dx = 0.5 * h * x;
            panel += w * (libm::exp(exponent(mid - dx) - e_max) + libm::exp(exponent(mid + dx) - e_max));
        }
        acc.add(0.5 * h * panel);
        lo += h;
        if lo > v_peak && exponent(lo) < e_max - 60.0 {
            return Ok(acc.value() * libm::exp(e_max));
        }
    }
    Err(no_convergence(family, beta, gamma, 0))
}

fn direct(family: Family, beta: f64, gamma: f64, m: u64) -> Result<f64> {
    if gamma <= 0.0 {
        return Err(Error::Domain(alloc::format!(
            "direct tail summation needs gamma > 0 (beta = {beta}, gamma = {gamma})"
        )));
    }
    // The largest term: f rises until n = -β/γ when β < 0.
    let peak = if beta < 0.0 { (-beta / gamma).max(m as f64) } else { m as f64 };
    let reference = log_term(beta, gamma, libm::floor(peak)).max(log_term(beta, gamma, libm::ceil(peak)));
    let growth = if beta < 0.0 { -beta } else { 0.0 };
    let mut acc = CompensatedSum::default();
    let mut n = m;
    loop {
        let nf = n as f64;
        let term = libm::exp(log_term(beta, gamma, nf) - reference);
        acc.add(term);
        let ratio = libm::exp(growth * libm::log1p(1.0 / nf) - gamma);
        if ratio < 1.0 {
            let bound = term * ratio / (1.0 - ratio);
            if bound <= REL_TOL * acc.value() {
                return Ok(reference + libm::log(acc.value()));
            }
        }
        if n - m >= MAX_TERMS {
            return Err(no_convergence(family, beta, gamma, n - m));
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force partial sum to `limit` plus the midpoint of the integral
    /// bracket `[∫_{limit+1}^∞, ∫_limit^∞]` for the pure power tail.
    fn brute_power(beta: f64, m: u64, limit: u64) -> f64 {
        let mut s = CompensatedSum::default();
        for n in m..=limit {
            s.add(libm::pow(n as f64, -beta));
        }
        let upper = libm::pow(limit as f64, 1.0 - beta) / (beta - 1.0);
        let lower = libm::pow((limit + 1) as f64, 1.0 - beta) / (beta - 1.0);
        s.value() + 0.5 * (upper + lower)
    }

    #[test]
    fn hurwitz_matches_brute_force() {
        for &(beta, m) in &[(1.49, 1u64), (2.0, 1), (2.5, 3), (3.7, 2), (1.8, 40), (9.5, 1)] {
            let got = libm::exp(ln_tail(Family::PowerLaw, beta, 0.0, m).unwrap());
            let want = brute_power(beta, m, 2_000_000);
            assert!(((got - want) / want).abs() < 1e-11, "beta={beta} m={m} got={got} want={want}");
        }
    }

    #[test]
    fn zeta_two() {
        let got = libm::exp(ln_tail(Family::PowerLaw, 2.0, 0.0, 1).unwrap());
        assert!((got - core::f64::consts::PI * core::f64::consts::PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn both_routes_agree_near_switch() {
        // Euler-Maclaurin just below the switch, direct summation forced above it.
        for &(beta, gamma, m) in &[(2.3, 0.049, 1u64), (1.2, 0.0499, 5), (0.7, 0.03, 2)] {
            let em = euler_maclaurin(Family::PowerLawCutoff, beta, gamma, m).unwrap();
            let dir = direct(Family::PowerLawCutoff, beta, gamma, m).unwrap();
            assert!((em - dir).abs() < 1e-13, "beta={beta} gamma={gamma}: {em} vs {dir}");
        }
    }

    #[test]
    fn direct_handles_negative_exponent() {
        // Σ n e^{-n} from 1 = e^{-1} / (1 - e^{-1})^2
        let got = libm::exp(direct(Family::PowerLawCutoff, -1.0, 1.0, 1).unwrap());
        let q = libm::exp(-1.0);
        assert!((got - q / ((1.0 - q) * (1.0 - q))).abs() < 1e-14);
        // Rising terms up to n = 50 before decay.
        let got = ln_tail(Family::PowerLawCutoff, -5.0, 0.1, 1).unwrap();
        let mut s = CompensatedSum::default();
        for n in 1..5000u64 {
            s.add(libm::exp(5.0 * libm::log(n as f64) - 0.1 * n as f64));
        }
        assert!((got - libm::log(s.value())).abs() < 1e-13);
    }

    #[test]
    fn huge_start_is_finite() {
        let t = ln_tail(Family::PowerLaw, 1.5, 0.0, 1 << 50).unwrap();
        // ~ m^{-0.5} / 0.5
        let approx = -0.5 * libm::log((1u64 << 50) as f64) + libm::log(2.0);
        assert!((t - approx).abs() < 1e-10);
        let t = ln_tail(Family::PowerLawCutoff, 2.0, 0.01, 1 << 40).unwrap();
        assert!(t.is_finite() && t < -1e9);
    }
}
