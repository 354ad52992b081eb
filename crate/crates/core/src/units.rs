//! Unit conversions and physical constants.
//!
//! All internal arithmetic is carried out in Hartree atomic units
//! (ħ = m_e = e = 1). Conversions to eV, cm⁻¹, Å and Mb happen only at
//! I/O boundaries.

/// 1 hartree in eV (CODATA).
pub const HARTREE_EV: f64 = 27.211386;
/// 1 hartree in cm⁻¹ (CODATA).
pub const HARTREE_CM1: f64 = 219474.6313632;
/// 1 bohr in Å (CODATA).
pub const BOHR_ANGSTROM: f64 = 0.52917721;
/// 1 bohr² in megabarn.
pub const BOHR2_MB: f64 = 28.00285;
/// Boltzmann constant in hartree per kelvin.
pub const KB_HARTREE_PER_K: f64 = 3.166812e-6;
/// Speed of light in atomic units (1/α).
pub const C_AU: f64 = 137.036;
/// 1 unified atomic mass unit in electron masses.
pub const AMU_ME: f64 = 1822.888486209;

pub fn ev_to_hartree(e: f64) -> f64 {
    e / HARTREE_EV
}

pub fn hartree_to_ev(e: f64) -> f64 {
    e * HARTREE_EV
}

pub fn cm1_to_hartree(e: f64) -> f64 {
    e / HARTREE_CM1
}

pub fn hartree_to_cm1(e: f64) -> f64 {
    e * HARTREE_CM1
}

pub fn angstrom_to_bohr(r: f64) -> f64 {
    r / BOHR_ANGSTROM
}

pub fn bohr_to_angstrom(r: f64) -> f64 {
    r * BOHR_ANGSTROM
}

pub fn mb_to_bohr2(s: f64) -> f64 {
    s / BOHR2_MB
}

pub fn bohr2_to_mb(s: f64) -> f64 {
    s * BOHR2_MB
}

/// Reduced mass of two species given their masses in u, in electron masses.
pub fn reduced_mass_me(m1_amu: f64, m2_amu: f64) -> f64 {
    m1_amu * m2_amu / (m1_amu + m2_amu) * AMU_ME
}
