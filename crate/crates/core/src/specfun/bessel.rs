//! Integer-order Bessel functions of the first kind, J0 and J1.
//!
//! Three regimes: the ascending series near the origin, Miller's backward
//! recurrence (normalised by J0 + 2ΣJ2k = 1) in the middle, and the Hankel
//! asymptotic expansion for large arguments. The plain asymptotic series is
//! only good to about e^{-2x}, so it is not used below x = 25.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_MAX: f64 = 2.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// J1(x). Odd in x.
pub fn bessel_j1(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x <= SERIES_MAX {
        series(x, 1)
    } else if x < ASYMPTOTIC_MIN {
        miller(x).1
    } else {
        hankel(x, 1)
    }
}

/// J0(x). Even in x.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x <= SERIES_MAX {
        series(x, 0)
    } else if x < ASYMPTOTIC_MIN {
        miller(x).0
    } else {
        hankel(x, 0)
    }
}

/// Σ_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!) for n ∈ {0, 1}.
fn series(x: f64, n: u32) -> f64 {
    let h = 0.5 * x;
    let q = -h * h;
    let mut term = if n == 0 { 1.0 } else { h };
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + n as f64));
        sum += term;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Returns (J0, J1) by backward recurrence from an order well above x.
fn miller(x: f64) -> (f64, f64) {
    let start = ((x + 40.0 + 6.0 * x.cbrt()) as usize) | 1; // odd, so J_{start-1} is even-indexed
    let start = start + 1;
    let mut jp1 = 0.0; // J_{n+1}
    let mut jn = 1e-300_f64.sqrt(); // J_n, arbitrary small seed
    let mut even_sum = 0.0;
    let mut j1 = 0.0;
    let mut n = start;
    while n > 0 {
        let jm1 = (2.0 * n as f64 / x) * jn - jp1;
        jp1 = jn;
        jn = jm1;
        n -= 1;
        if n.is_multiple_of(2) && n > 0 {
            even_sum += jn;
        }
        if n == 1 {
            j1 = jn;
        }
        if jn.abs() > 1e250 {
            jn *= 1e-250;
            jp1 *= 1e-250;
            even_sum *= 1e-250;
            j1 *= 1e-250;
        }
    }
    let norm = jn + 2.0 * even_sum;
    (jn / norm, j1 / norm)
}

/// Hankel expansion, accurate to roughly e^{-2x}.
fn hankel(x: f64, n: u32) -> f64 {
    let mu = 4.0 * (n * n) as f64;
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut k = 1u32;
    loop {
        let odd = (2 * k - 1) as f64;
        let next = a * (mu - odd * odd) * inv8x / k as f64;
        if next.abs() >= a.abs() || next.abs() < 1e-18 {
            break;
        }
        a = next;
        // a_k contributes to Q for odd k and to P for even k, with sign (-1)^{⌊k/2⌋}
        let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if k % 2 == 1 {
            q += sign * a;
        } else {
            p += sign * a;
        }
        k += 1;
    }
    let (s, c) = x.sin_cos();
    // ω = x - nπ/2 - π/4
    let (cw, sw) = if n == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(c + s) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cw - q * sw)
}
