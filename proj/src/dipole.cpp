#include "dotforge/dipole.hpp"

#include <cmath>
#include <stdexcept>

namespace dotforge::dipole {

double dipole_dipole(const PointDipolePair& pair) {
    const double R = norm(pair.R);
    if (!(R > 0)) throw std::invalid_argument("dipole_dipole: |R| must be > 0");
    const Vec3 rhat{pair.R[0] / R, pair.R[1] / R, pair.R[2] / R};
    const double geom = dot(pair.d1, pair.d2) - 3.0 * dot(pair.d1, rhat) * dot(pair.d2, rhat);
    return constants::coulomb_C / (pair.eps_r * R * R * R) * geom;
}

double atomic_dipole(double halfwidth_x) {
    if (!(halfwidth_x > 0)) throw std::invalid_argument("atomic_dipole: x must be > 0");
    return 32.0 * halfwidth_x / (9.0 * constants::pi * constants::pi);
}

double forster_dipole(double O_I, double O_II, double halfwidth_x, const Vec3& R, double eps_r) {
    const double d = atomic_dipole(halfwidth_x);
    Vec3 dz{0.0, 0.0, d};
    return O_I * O_II * dipole_dipole(PointDipolePair{dz, dz, R, eps_r});
}

double transfer_time(double V_F) {
    if (!(V_F > 0)) throw std::invalid_argument("transfer_time: V_F must be > 0");
    return constants::planck_h / V_F;
}

double half_transfer_time(double V_F) {
    if (!(V_F > 0)) throw std::invalid_argument("half_transfer_time: V_F must be > 0");
    return constants::pi * constants::hbar / (2.0 * V_F);
}

double vxx_dipole(const Vec3& p_I, const Vec3& p_II, const Vec3& R, double eps_r) {
    return dipole_dipole(PointDipolePair{p_I, p_II, R, eps_r});
}

} // namespace dotforge::dipole
