//! CODATA 2018 exact and recommended values, SI.

/// Planck constant [J s].
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant [J s], h/2π (1.054571817...e-34).
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity [F/m].
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability [N/A^2].
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Elementary charge [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant [J/K].
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Unified atomic mass unit [kg].
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Nuclear magneton [J/T].
pub const NUCLEAR_MAGNETON: f64 = 5.050_783_746_1e-27;
/// One femtometre [m].
pub const FERMI: f64 = 1e-15;
