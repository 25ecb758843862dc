#pragma once

#include <Eigen/Dense>

#include "dotforge/basis3d.hpp"
#include "dotforge/core.hpp"
#include "dotforge/coulombk.hpp"

namespace dotforge::qubits {

// Two-dot exciton register in the computational basis {|00>, |01>, |10>, |11>}.
// omega0 is a global offset (default 0); omega1/omega2 are the exciton creation
// energies of dot I and dot II; V_F couples |01> <-> |10>; V_XX shifts |11>.
struct TwoQubitSystem {
    double omega0 = 0;
    double omega1 = 0;
    double omega2 = 0;
    double V_F = 0;
    double V_XX = 0;

    double delta0() const { return omega1 - omega2; }
};

Eigen::Matrix4d hamiltonian4(const TwoQubitSystem& sys);

struct Eigensystem {
    double E00, E01, E10, E11;
    double A;  // sqrt(1 + 4 (V_F/Delta0)^2); infinite at Delta0 = 0
    double c1, c2;
    double delta;  // V_F^2 / Delta0 (IEEE inf at Delta0 = 0 with V_F != 0)
    double eps12, eps21;             // first-order pi-pulse energies
    double eps12_exact, eps21_exact; // exact transition energies E11-E10, E11-E01
};

// Closed-form eigensystem; Delta0 = 0 is served by its continuity limit
// (A -> inf, c1 = c2 = 1/sqrt(2), E01/E10 = omega0+omega1 -+ |V_F|).
Eigensystem eigensystem(const TwoQubitSystem& sys);

// Fidelity 1 - c1^2 of the energy-selective V_XX gate.
double gate_fidelity(const TwoQubitSystem& sys);

// Mixing coefficient from the scaling relation c1 = 37.1 x^2 O_I O_II / (R^3 Delta0),
// with x and R in nm and Delta0 in meV.
double c1_scaling(double Delta0, double halfwidth_x, double R, double O_I, double O_II);

inline constexpr double c1_scaling_constant = 37.1;
// The same constant evaluated from first principles: 2 C / eps_r * (32 / 9 pi^2)^2.
double c1_scaling_constant_first_principles(double eps_r = 10.0);

struct CreationEnergyOptions {
    bool include_coulomb = true; // subtract M00_J and add the singlet M00_K
    basis3d::SolverOptions solver;
    coulombk::KSpaceOptions kspace;
};

// Exciton creation energy of one dot: E_e + E_h - J + K_singlet (spin singlet assumed).
// When `converged` is given it is ANDed with the quadrature convergence flags.
double exciton_creation_energy(const DotGeometry& dot, const MaterialParams& material,
                               const Vec3& field = {0, 0, 0}, const CreationEnergyOptions& opts = {},
                               bool* converged = nullptr);

// Delta0 = omega1 - omega2 of the molecule, optionally with intra-dot Coulomb corrections.
double delta0_from_molecule(const MoleculeConfig& molecule, const CreationEnergyOptions& opts = {},
                            bool* converged = nullptr);

} // namespace dotforge::qubits
