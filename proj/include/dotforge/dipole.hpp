#pragma once

#include "dotforge/core.hpp"

namespace dotforge::dipole {

struct PointDipolePair {
    Vec3 d1; // e*nm
    Vec3 d2; // e*nm
    Vec3 R;  // nm
    double eps_r = 10.0;
};

// Point dipole-dipole energy (C/(eps_r R^3)) (d1.d2 - 3 (d1.Rhat)(d2.Rhat)), in meV.
double dipole_dipole(const PointDipolePair& pair);

// Kronig-Penney s -> p_z transition dipole of an atomic well of half-width x: 32 x / (9 pi^2),
// oriented along z. Returns the magnitude in e*nm.
double atomic_dipole(double halfwidth_x);

// Dipole-dipole Forster coupling with envelope overlap factors O_I, O_II (signed, meV).
// The atomic dipole lies along z (p_z convention).
double forster_dipole(double O_I, double O_II, double halfwidth_x, const Vec3& R, double eps_r);

// On-resonance energy transfer time t = h / V_F, in ps (V_F > 0, meV).
double transfer_time(double V_F);

// Half-transfer time of the two-level dynamics under a constant coupling: pi hbar / (2 V_F).
double half_transfer_time(double V_F);

// Biexciton shift from the two static exciton dipoles (signed, meV).
double vxx_dipole(const Vec3& p_I, const Vec3& p_II, const Vec3& R, double eps_r);

} // namespace dotforge::dipole
