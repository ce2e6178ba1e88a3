//! Forward-scattering intensity after a delta pulse through a slab of
//! effective thickness ξ, with τ the time in units of the single-nucleus
//! lifetime. Intensities are in units of the incident ℰ₀².
//!
//! The multiple-scattering series
//!     E(τ) = Σ_{n≥1} (−1)^{n−1} ξⁿ τ^{n−1} / ((n−1)! n!)
//! alternates with terms as large as e^{2√(ξτ)}, so partial sums are formed
//! in fixed point with `FRAC_BITS` fractional bits.

use crate::error::{Error, Result};
use crate::specfun::bessel_j1;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, ToPrimitive, Zero};

/// Relative tail size above which a series result is flagged unconverged.
pub const SERIES_TOL: f64 = 1e-10;

const FRAC_BITS: usize = 384;
/// Below this τ the closed form switches to its Taylor continuation.
const SMALL_TAU: f64 = 1e-8;
/// Largest Levin order tried.
const MAX_LEVIN: usize = 24;

/// ξ e^{−τ}/τ · J₁(√(4ξτ))².
pub fn nfs_intensity_closed(xi: f64, tau: f64) -> Result<f64> {
    check(xi, tau)?;
    if tau < SMALL_TAU {
        // J₁(z)/(z/2) = 1 − z²/8 + z⁴/192 with z² = 4ξτ
        let u = xi * tau;
        let r = 1.0 - u / 2.0 + u * u / 12.0;
        return Ok(xi * xi * (-tau).exp() * r * r);
    }
    let j = bessel_j1((4.0 * xi * tau).sqrt());
    Ok(xi * (-tau).exp() / tau * j * j)
}

/// Early-time superradiant form ξ² e^{−(ξ+1)τ}.
pub fn nfs_intensity_early(xi: f64, tau: f64) -> Result<f64> {
    check(xi, tau)?;
    Ok(xi * xi * (-(xi + 1.0) * tau).exp())
}

fn check(xi: f64, tau: f64) -> Result<()> {
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::domain(format!(
            "effective thickness ξ = {xi} must be ≥ 0"
        )));
    }
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::domain(format!("reduced time τ = {tau} must be ≥ 0")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NfsSeries {
    pub intensity: f64,
    /// Field amplitude E(τ) without the e^{−τ/2} factor.
    pub amplitude: f64,
    pub orders: usize,
    /// Estimated relative error of the intensity.
    pub tail_estimate: f64,
    pub converged: bool,
}

fn to_fixed(x: f64) -> BigInt {
    if x == 0.0 {
        return BigInt::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), exp - 1075)
    };
    let shift = FRAC_BITS as i64 + e;
    let m = BigInt::from(mant);
    let v = if shift >= 0 {
        m << shift as usize
    } else {
        m >> (-shift) as usize
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn from_fixed(v: &BigInt) -> f64 {
    // keep ~128 bits above f64 precision before the final scaling
    const KEEP: usize = 180;
    let s: BigInt = v >> (FRAC_BITS - KEEP);
    s.to_f64().unwrap_or(f64::NAN) / 2f64.powi(KEEP as i32)
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> FRAC_BITS
}

/// Terms a_1..a_{n} in fixed point.
fn terms(xi: f64, tau: f64, n: usize) -> Vec<BigInt> {
    let x = to_fixed(xi);
    let q = -mul(&x, &to_fixed(tau));
    let mut out = Vec::with_capacity(n);
    let mut a = x;
    for k in 1..=n {
        out.push(a.clone());
        let d = BigInt::from((k * (k + 1)) as u64);
        a = mul(&a, &q) / d;
    }
    out
}

fn prefactor(tau: f64) -> f64 {
    (-tau).exp()
}

/// Plain partial sum over `orders` scattering orders.
///
/// `orders = 1` is single scattering, ξ² e^{−τ}. The tail bound uses the
/// first omitted term, which majorises the remainder once the terms alternate
/// with decreasing size.
pub fn nfs_intensity_series(xi: f64, tau: f64, orders: usize) -> Result<NfsSeries> {
    check(xi, tau)?;
    if orders == 0 {
        return Err(Error::domain("at least one scattering order is required"));
    }
    let a = terms(xi, tau, orders + 1);
    let s: BigInt = a[..orders].iter().sum();
    let amp = from_fixed(&s);
    let next = from_fixed(&a[orders]).abs();
    let tail = if amp == 0.0 {
        if next == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        2.0 * next / amp.abs()
    };
    // the first omitted term only bounds the tail once terms are decreasing
    let decreasing = (orders * (orders + 1)) as f64 > xi * tau;
    let tail = if decreasing { tail } else { f64::INFINITY };
    Ok(NfsSeries {
        intensity: prefactor(tau) * amp * amp,
        amplitude: amp,
        orders,
        tail_estimate: tail,
        converged: tail <= SERIES_TOL,
    })
}

/// Levin t-transform of the partial sums S_{n0+1..n0+k+1}, with remainder
/// estimates ω_j = a_j. Returns None if a needed term vanishes.
fn levin(a: &[BigInt], partial: &[BigInt], n0: usize, k: usize) -> Option<BigInt> {
    let mut num = BigInt::zero();
    let mut den = BigInt::zero();
    let one = BigInt::one() << (2 * FRAC_BITS);
    for j in 0..=k {
        let w = &a[n0 + j];
        if w.is_zero() {
            return None;
        }
        // C(k,j)(n0+j+1)^{k−1}; the common (n0+k+1)^{k−1} cancels
        let c = binomial(BigInt::from(k as u64), BigInt::from(j as u64))
            * BigInt::from((n0 + j + 1) as u64).pow(k.saturating_sub(1) as u32);
        let inv_w = &one / w; // 1/ω in fixed point
        let t_num = &c * ((&partial[n0 + j] * &inv_w) >> FRAC_BITS);
        let t_den = &c * inv_w;
        if j % 2 == 0 {
            num += t_num;
            den += t_den;
        } else {
            num -= t_num;
            den -= t_den;
        }
    }
    if den.is_zero() {
        return None;
    }
    Some((num << FRAC_BITS) / den)
}

/// Partial sums over `orders` terms, accelerated by a Levin t-transform.
///
/// The estimate uses the highest transform order available from the terms;
/// its error is taken as the change when the last term is dropped.
pub fn nfs_intensity_series_accelerated(xi: f64, tau: f64, orders: usize) -> Result<NfsSeries> {
    let plain = nfs_intensity_series(xi, tau, orders)?;
    if plain.converged || orders < 3 {
        return Ok(plain);
    }
    let a = terms(xi, tau, orders);
    let mut partial = Vec::with_capacity(orders);
    let mut s = BigInt::zero();
    for t in &a {
        s += t;
        partial.push(s.clone());
    }
    let k = (orders - 2).min(MAX_LEVIN);
    let n0 = orders - 1 - k;
    let best = levin(&a, &partial, n0, k);
    let prev = if n0 > 0 {
        levin(&a, &partial, n0 - 1, k)
    } else {
        levin(&a, &partial, 0, k - 1)
    };
    let (Some(best), Some(prev)) = (best, prev) else {
        return Ok(plain);
    };
    let amp = from_fixed(&best);
    let diff = from_fixed(&(&best - &prev)).abs();
    let tail = if amp == 0.0 {
        f64::INFINITY
    } else {
        2.0 * diff / amp.abs()
    };
    if tail >= plain.tail_estimate {
        return Ok(plain);
    }
    Ok(NfsSeries {
        intensity: prefactor(tau) * amp * amp,
        amplitude: amp,
        orders,
        tail_estimate: tail,
        converged: tail <= SERIES_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        assert_eq!(nfs_intensity_closed(10.0, 0.0).unwrap(), 100.0);
        let v = nfs_intensity_closed(10.0, 1e-12).unwrap();
        assert!((v - 100.0).abs() < 1e-8);
        // ξ=10, τ=0.1: √(4ξτ) = 2
        let want = 10.0 * (-0.1f64).exp() / 0.1 * 0.576_724_807_756_873_4f64.powi(2);
        assert!((nfs_intensity_closed(10.0, 0.1).unwrap() - want).abs() < 1e-12);
        assert!((want - 30.10).abs() < 0.005);
    }

    #[test]
    fn small_tau_branch_is_continuous() {
        for &xi in &[0.1, 10.0, 87.0] {
            let lo = nfs_intensity_closed(xi, SMALL_TAU * (1.0 - 1e-9)).unwrap();
            let hi = nfs_intensity_closed(xi, SMALL_TAU * (1.0 + 1e-9)).unwrap();
            assert!((lo - hi).abs() / hi < 1e-8, "ξ={xi}: {lo} vs {hi}");
        }
    }

    #[test]
    fn early_examples() {
        assert_eq!(nfs_intensity_early(10.0, 0.0).unwrap(), 100.0);
        let v = nfs_intensity_early(10.0, 0.01).unwrap();
        assert!((v - 100.0 * (-0.11f64).exp()).abs() < 1e-12);
        assert!((v - 89.58).abs() < 0.005);
    }

    #[test]
    fn single_scattering() {
        let s = nfs_intensity_series(3.0, 0.7, 1).unwrap();
        assert!((s.intensity - 9.0 * (-0.7f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn no_scatterers() {
        let s = nfs_intensity_series(0.0, 1.0, 10).unwrap();
        assert_eq!(s.intensity, 0.0);
        assert!(s.converged);
        assert_eq!(nfs_intensity_closed(0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(nfs_intensity_closed(-1.0, 1.0).is_err());
        assert!(nfs_intensity_early(1.0, -1.0).is_err());
        assert!(nfs_intensity_series(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn fixed_point_round_trip() {
        for &x in &[1.0, -3.5, 1e-30, 87.0, 0.1] {
            assert_eq!(from_fixed(&to_fixed(x)), x);
        }
    }
}
