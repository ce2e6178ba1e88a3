//! Special functions and quadrature.

mod angular;
mod bessel;
mod quad;

pub use angular::{clebsch_gordan, clebsch_gordan_squared, AngularMomentum, Projection};
pub use bessel::{bessel_j0, bessel_j1};
pub use quad::{debye_integral, integrate, QuadResult};

/// n!! with 0!! = 1!! = 1.
///
/// Overflows `u128` beyond n = 56, which is far past any multipolarity of
/// interest (only `2L+1` is ever requested).
pub fn double_factorial(n: u32) -> u128 {
    let mut acc: u128 = 1;
    let mut k = n;
    while k > 1 {
        acc *= k as u128;
        k -= 2;
    }
    acc
}
