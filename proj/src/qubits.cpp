#include "dotforge/qubits.hpp"

#include <cmath>
#include <limits>

namespace dotforge::qubits {

Eigen::Matrix4d hamiltonian4(const TwoQubitSystem& s) {
    Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
    H(0, 0) = s.omega0;
    H(1, 1) = s.omega0 + s.omega2;
    H(2, 2) = s.omega0 + s.omega1;
    H(1, 2) = H(2, 1) = s.V_F;
    H(3, 3) = s.omega0 + s.omega1 + s.omega2 + s.V_XX;
    return H;
}

Eigensystem eigensystem(const TwoQubitSystem& s) {
    Eigensystem e{};
    const double D = s.delta0();
    e.E00 = s.omega0;
    e.E11 = s.omega0 + s.omega1 + s.omega2 + s.V_XX;

    if (D == 0.0) {
        e.A = std::numeric_limits<double>::infinity();
        e.c1 = e.c2 = 1.0 / std::sqrt(2.0);
        e.E01 = s.omega0 + s.omega1 - std::abs(s.V_F);
        e.E10 = s.omega0 + s.omega1 + std::abs(s.V_F);
        e.delta = s.V_F == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        const double t = s.V_F / D;
        e.A = std::sqrt(1.0 + 4.0 * t * t);
        e.E01 = s.omega0 + s.omega1 - 0.5 * D * (1.0 + e.A);
        e.E10 = s.omega0 + s.omega1 - 0.5 * D * (1.0 - e.A);
        // c1 = sqrt((A-1)/2A) written cancellation-free via A^2-1 = 4t^2
        e.c1 = std::abs(t) * std::sqrt(2.0 / (e.A * (e.A + 1.0)));
        e.c2 = std::sqrt((e.A + 1.0) / (2.0 * e.A));
        e.delta = s.V_F * s.V_F / D;
    }
    e.eps12 = s.omega2 + s.V_XX - e.delta;
    e.eps21 = s.omega1 + s.V_XX + e.delta;
    e.eps12_exact = e.E11 - e.E10;
    e.eps21_exact = e.E11 - e.E01;
    return e;
}

double gate_fidelity(const TwoQubitSystem& s) {
    const double c1 = eigensystem(s).c1;
    return 1.0 - c1 * c1;
}

double c1_scaling(double Delta0, double halfwidth_x, double R, double O_I, double O_II) {
    return c1_scaling_constant * halfwidth_x * halfwidth_x * O_I * O_II / (R * R * R * Delta0);
}

double c1_scaling_constant_first_principles(double eps_r) {
    const double d_over_x = 32.0 / (9.0 * constants::pi * constants::pi);
    return 2.0 * constants::coulomb_C / eps_r * d_over_x * d_over_x;
}

double exciton_creation_energy(const DotGeometry& dot, const MaterialParams& material,
                               const Vec3& field, const CreationEnergyOptions& opts,
                               bool* converged) {
    const double Ee = basis3d::ground_energy(dot, material, Species::electron, opts.solver, field);
    const double Eh = basis3d::ground_energy(dot, material, Species::hole, opts.solver, field);
    double omega = Ee + Eh;
    if (opts.include_coulomb) {
        auto bloch = coulombk::BlochModel::from(material);
        auto J = coulombk::direct_intra(dot, material, bloch, opts.kspace);
        auto K = coulombk::exchange_intra(dot, material, bloch, coulombk::Spin::singlet, opts.kspace);
        omega += -J.value + K.value;
        if (converged) *converged = *converged && J.converged && K.converged;
    }
    return omega;
}

double delta0_from_molecule(const MoleculeConfig& molecule, const CreationEnergyOptions& opts,
                            bool* converged) {
    molecule.validate();
    const double w1 =
        exciton_creation_energy(molecule.dot_I, molecule.material, molecule.field, opts, converged);
    const double w2 =
        exciton_creation_energy(molecule.dot_II, molecule.material, molecule.field, opts, converged);
    return w1 - w2;
}

} // namespace dotforge::qubits
