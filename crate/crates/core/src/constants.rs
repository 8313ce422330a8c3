//! CODATA 2018 constants and the species data used by the interaction
//! estimates. Everything is SI.

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permeability [N A^-2].
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Speed of light [m/s].
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius [m].
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Hartree energy [J].
pub const HARTREE: f64 = 4.359_744_722_2071e-18;
/// Fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
/// Bohr magneton [J/T].
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Atomic mass unit [kg].
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// One Debye [C m].
pub const DEBYE: f64 = 3.335_640_951e-30;

/// Mass of a 6Li atom [kg].
pub const MASS_LI6: f64 = 6.015_122_887_4 * ATOMIC_MASS_UNIT;
/// Mass of a 53Cr atom [kg].
pub const MASS_CR53: f64 = 52.940_648_2 * ATOMIC_MASS_UNIT;
/// Li-Li dispersion coefficient in atomic units (Hartree a0^6).
pub const C6_LI_AU: f64 = 1393.39;

/// Electric dipole of `e a0 / 2.5`, the rounded Debye used in the
/// polar-molecule comparison.
pub const DEBYE_ROUNDED: f64 = ELEMENTARY_CHARGE * BOHR_RADIUS / 2.5;
