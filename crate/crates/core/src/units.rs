//! Thin SI newtypes. Everything inside the crate is SI; the `from_*`/`to_*`
//! helpers exist for the ingestion and CLI boundaries only.

use crate::constants::ELEMENTARY_CHARGE;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Exponents of (M, L, T, I, Θ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dimension {
    pub mass: i8,
    pub length: i8,
    pub time: i8,
    pub current: i8,
    pub temperature: i8,
}

impl Dimension {
    pub const fn new(mass: i8, length: i8, time: i8, current: i8, temperature: i8) -> Self {
        Dimension {
            mass,
            length,
            time,
            current,
            temperature,
        }
    }
    pub const DIMENSIONLESS: Dimension = Dimension::new(0, 0, 0, 0, 0);

    pub const fn mul(self, o: Dimension) -> Dimension {
        Dimension::new(
            self.mass + o.mass,
            self.length + o.length,
            self.time + o.time,
            self.current + o.current,
            self.temperature + o.temperature,
        )
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            ("kg", self.mass),
            ("m", self.length),
            ("s", self.time),
            ("A", self.current),
            ("K", self.temperature),
        ];
        let mut first = true;
        for (sym, e) in parts {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{sym}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A scalar SI quantity tagged with its dimension.
pub trait Quantity: Copy {
    const DIMENSION: Dimension;
    fn si(self) -> f64;
    fn from_si(v: f64) -> Self;
}

macro_rules! quantity {
    ($(#[$m:meta])* $name:ident, $dim:expr) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub f64);

        impl Quantity for $name {
            const DIMENSION: Dimension = $dim;
            #[inline]
            fn si(self) -> f64 {
                self.0
            }
            #[inline]
            fn from_si(v: f64) -> Self {
                $name(v)
            }
        }

        impl std::ops::Add for $name {
            type Output = $name;
            fn add(self, o: $name) -> $name {
                $name(self.0 + o.0)
            }
        }
        impl std::ops::Sub for $name {
            type Output = $name;
            fn sub(self, o: $name) -> $name {
                $name(self.0 - o.0)
            }
        }
        impl std::ops::Mul<f64> for $name {
            type Output = $name;
            fn mul(self, k: f64) -> $name {
                $name(self.0 * k)
            }
        }
        impl std::ops::Div<f64> for $name {
            type Output = $name;
            fn div(self, k: f64) -> $name {
                $name(self.0 / k)
            }
        }
        impl std::ops::Div for $name {
            type Output = f64;
            fn div(self, o: $name) -> f64 {
                self.0 / o.0
            }
        }
    };
}

quantity!(/// Energy [J].
    Energy, Dimension::new(1, 2, -2, 0, 0));
quantity!(/// Time [s].
    Time, Dimension::new(0, 0, 1, 0, 0));
quantity!(/// Length [m].
    Length, Dimension::new(0, 1, 0, 0, 0));
quantity!(/// Area [m²].
    Area, Dimension::new(0, 2, 0, 0, 0));
quantity!(/// Power [W].
    Power, Dimension::new(1, 2, -3, 0, 0));
quantity!(/// Intensity [W/m²].
    Intensity, Dimension::new(1, 0, -3, 0, 0));
quantity!(/// Electric field [V/m].
    ElectricField, Dimension::new(1, 1, -3, -1, 0));
quantity!(/// Number density [m⁻³].
    NumberDensity, Dimension::new(0, -3, 0, 0, 0));
quantity!(/// Temperature [K].
    Temperature, Dimension::new(0, 0, 0, 0, 1));
quantity!(/// Rate or frequency [1/s].
    Frequency, Dimension::new(0, 0, -1, 0, 0));
quantity!(/// Mass [kg].
    Mass, Dimension::new(1, 0, 0, 0, 0));

impl Energy {
    pub fn from_ev(ev: f64) -> Self {
        Energy(ev * ELEMENTARY_CHARGE)
    }
    pub fn from_kev(kev: f64) -> Self {
        Energy::from_ev(kev * 1e3)
    }
    pub fn ev(self) -> f64 {
        self.0 / ELEMENTARY_CHARGE
    }
}

impl Time {
    pub fn from_fs(fs: f64) -> Self {
        Time(fs * 1e-15)
    }
    pub fn from_ns(ns: f64) -> Self {
        Time(ns * 1e-9)
    }
    pub fn fs(self) -> f64 {
        self.0 * 1e15
    }
}

impl Length {
    pub fn from_nm(nm: f64) -> Self {
        Length(nm * 1e-9)
    }
    pub fn from_um(um: f64) -> Self {
        Length(um * 1e-6)
    }
    pub fn from_angstrom(a: f64) -> Self {
        Length(a * 1e-10)
    }
    pub fn nm(self) -> f64 {
        self.0 * 1e9
    }
    pub fn um(self) -> f64 {
        self.0 * 1e6
    }
}

impl Mass {
    pub fn from_u(u: f64) -> Self {
        Mass(u * crate::constants::ATOMIC_MASS_UNIT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_dimensions_compose() {
        // intensity · area = power
        assert_eq!(Intensity::DIMENSION.mul(Area::DIMENSION), Power::DIMENSION);
        // power · time = energy
        assert_eq!(Power::DIMENSION.mul(Time::DIMENSION), Energy::DIMENSION);
        // frequency · time is dimensionless
        assert_eq!(
            Frequency::DIMENSION.mul(Time::DIMENSION),
            Dimension::DIMENSIONLESS
        );
    }

    #[test]
    fn ev_round_trip() {
        let e = Energy::from_kev(14.413);
        assert!((e.ev() - 14413.0).abs() < 1e-9);
    }

    #[test]
    fn display() {
        assert_eq!(ElectricField::DIMENSION.to_string(), "kg·m·s^-3·A^-1");
        assert_eq!(Dimension::DIMENSIONLESS.to_string(), "1");
    }
}
