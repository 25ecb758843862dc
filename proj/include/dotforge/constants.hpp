#pragma once

// Unit convention used throughout: energies in meV, lengths in nm, times in ps,
// electric fields in kV/cm, dipole moments in e*nm. Each physical constant below
// is defined exactly once; everything else is derived from these.

namespace dotforge::constants {

// hbar in meV*ps
inline constexpr double hbar = 0.6582119569;

// hbar^2/(2 m0) in meV*nm^2 (m0 = free electron mass)
inline constexpr double hbar2_over_2m0 = 38.0998;

// Coulomb constant e^2/(4 pi eps0) in meV*nm
inline constexpr double coulomb_C = 1439.964;

// Potential-energy slope per unit charge of a 1 kV/cm field, in meV/nm
inline constexpr double field_slope_per_kVcm = 0.1;

inline constexpr double pi = 3.14159265358979323846;

// Planck constant h = 2*pi*hbar in meV*ps (transfer-time convention t = h/V)
inline constexpr double planck_h = 2.0 * pi * hbar;

} // namespace dotforge::constants
