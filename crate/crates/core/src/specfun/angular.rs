use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A non-negative angular momentum stored as twice its value, so 3/2 is `3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AngularMomentum(u32);

impl AngularMomentum {
    pub const fn from_twice(twice: u32) -> Self {
        AngularMomentum(twice)
    }

    pub const fn integer(j: u32) -> Self {
        AngularMomentum(2 * j)
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// 2j+1
    pub const fn multiplicity(self) -> u32 {
        self.0 + 1
    }

    pub fn is_half_integer(self) -> bool {
        self.0 % 2 == 1
    }

    /// All projections -j, -j+1, …, j.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = Projection> + Clone {
        let j = self.0 as i32;
        (0..=self.0 as i32).map(move |k| Projection(-j + 2 * k))
    }

    pub fn admits(self, m: Projection) -> bool {
        m.0.unsigned_abs() <= self.0 && (self.0 as i32 - m.0) % 2 == 0
    }
}

impl fmt::Display for AngularMomentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for AngularMomentum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse {
            context: format!("angular momentum `{s}`"),
            message: "expected a non-negative integer or `n/2`".into(),
        };
        if let Some((n, d)) = s.split_once('/') {
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            if d.trim() != "2" || n.is_multiple_of(2) {
                return Err(bad());
            }
            Ok(AngularMomentum(n))
        } else {
            let n: u32 = s.parse().map_err(|_| bad())?;
            Ok(AngularMomentum(2 * n))
        }
    }
}

impl TryFrom<String> for AngularMomentum {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AngularMomentum> for String {
    fn from(j: AngularMomentum) -> String {
        j.to_string()
    }
}

/// A magnetic projection, twice-valued like [`AngularMomentum`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Projection(pub i32);

impl Projection {
    pub const fn from_twice(twice: i32) -> Self {
        Projection(twice)
    }
    pub const fn twice(self) -> i32 {
        self.0
    }
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::ops::Neg for Projection {
    type Output = Projection;
    fn neg(self) -> Projection {
        Projection(-self.0)
    }
}

impl std::ops::Add for Projection {
    type Output = Projection;
    fn add(self, o: Projection) -> Projection {
        Projection(self.0 + o.0)
    }
}

impl std::ops::Sub for Projection {
    type Output = Projection;
    fn sub(self, o: Projection) -> Projection {
        Projection(self.0 - o.0)
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn check(j: AngularMomentum, m: Projection, name: &str) -> Result<()> {
    if !j.admits(m) {
        return Err(Error::domain(format!(
            "projection {name} = {m} is not valid for j = {j}"
        )));
    }
    Ok(())
}

/// Exact signed square of ⟨j1 m1, j2 m2 | j m⟩ as `(sign, |CG|²)`.
///
/// The sign is -1, 0 or +1. Uses the Racah sum over factorials with
/// arbitrary-precision integers.
pub fn clebsch_gordan_squared(
    j1: AngularMomentum,
    m1: Projection,
    j2: AngularMomentum,
    m2: Projection,
    j: AngularMomentum,
    m: Projection,
) -> Result<(i8, BigRational)> {
    check(j1, m1, "m1")?;
    check(j2, m2, "m2")?;
    check(j, m, "m")?;

    let (tj1, tj2, tj) = (j1.0 as i64, j2.0 as i64, j.0 as i64);
    let (tm1, tm2, tm) = (m1.0 as i64, m2.0 as i64, m.0 as i64);
    let zero = Ok((0, BigRational::zero()));

    if tm1 + tm2 != tm {
        return zero;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return zero;
    }

    // All the following halves are integers once the triangle and parity
    // conditions hold.
    let h = |x: i64| x / 2;
    let a = h(tj1 + tj2 - tj);
    let b = h(tj1 - tj2 + tj);
    let c = h(-tj1 + tj2 + tj);
    let d = h(tj1 + tj2 + tj) + 1;

    let pre = BigRational::new(
        BigInt::from(tj + 1) * factorial(a) * factorial(b) * factorial(c),
        factorial(d),
    );
    let norm = factorial(h(tj1 + tm1))
        * factorial(h(tj1 - tm1))
        * factorial(h(tj2 + tm2))
        * factorial(h(tj2 - tm2))
        * factorial(h(tj + tm))
        * factorial(h(tj - tm));

    // k runs over all values that keep every factorial argument non-negative
    let e1 = h(tj1 - tm1);
    let e2 = h(tj2 + tm2);
    let f1 = h(tj - tj2 + tm1);
    let f2 = h(tj - tj1 - tm2);
    let kmin = 0.max(-f1).max(-f2);
    let kmax = a.min(e1).min(e2);

    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(a - k)
            * factorial(e1 - k)
            * factorial(e2 - k)
            * factorial(f1 + k)
            * factorial(f2 + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    if sum.is_zero() {
        return zero;
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    let sq = pre * BigRational::from_integer(norm) * &sum * &sum;
    Ok((sign, sq))
}

/// ⟨j1 m1, j2 m2 | j m⟩ in the Condon–Shortley convention.
///
/// Exactly zero when `m1 + m2 != m` or the triangle rule fails.
pub fn clebsch_gordan(
    j1: AngularMomentum,
    m1: Projection,
    j2: AngularMomentum,
    m2: Projection,
    j: AngularMomentum,
    m: Projection,
) -> Result<f64> {
    let (sign, sq) = clebsch_gordan_squared(j1, m1, j2, m2, j, m)?;
    if sign == 0 {
        return Ok(0.0);
    }
    let v = sq.to_f64().expect("CG² is a finite rational in [0,1]");
    Ok(sign as f64 * v.sqrt())
}
