#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dotforge/constants.hpp"

namespace dotforge {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

enum class Species { electron, hole };

// Dipole moments are carried in e*nm; experimental values are usually quoted in e*Angstrom.
inline double dipole_from_eA(double value_eA) { return value_eA / 10.0; }
inline double dipole_to_eA(double value_enm) { return value_enm * 10.0; }

struct MaterialParams {
    double m_e_eff = 0.06;      // electron effective mass, units of m0
    double m_h_eff = 0.6;       // hole effective mass, units of m0
    double V_e = 500.0;         // electron confinement depth, meV
    double V_h = 500.0;         // hole confinement depth, meV
    double eps_r = 10.0;        // relative permittivity
    double kp_halfwidth_x = 0.5; // Kronig-Penney atomic well half-width, nm

    double mass(Species s) const { return s == Species::electron ? m_e_eff : m_h_eff; }
    double depth(Species s) const { return s == Species::electron ? V_e : V_h; }
    // charge in units of +e
    static double charge(Species s) { return s == Species::electron ? -1.0 : +1.0; }

    void validate() const {
        if (!(m_e_eff > 0)) throw std::invalid_argument("MaterialParams: m_e_eff must be > 0");
        if (!(m_h_eff > 0)) throw std::invalid_argument("MaterialParams: m_h_eff must be > 0");
        if (!(V_e > 0)) throw std::invalid_argument("MaterialParams: V_e must be > 0");
        if (!(V_h > 0)) throw std::invalid_argument("MaterialParams: V_h must be > 0");
        if (!(eps_r > 0)) throw std::invalid_argument("MaterialParams: eps_r must be > 0");
        if (!(kp_halfwidth_x > 0)) throw std::invalid_argument("MaterialParams: kp_halfwidth_x must be > 0");
    }
};

// Square-based cuboid: base side 2*base_half, height along z.
struct DotGeometry {
    double base_half = 10.0; // nm
    double height = 20.0;    // nm
    Vec3 center{0.0, 0.0, 0.0};

    // full confinement width along axis 0,1,2 (x,y,z)
    double width(int axis) const { return axis == 2 ? height : 2.0 * base_half; }

    static DotGeometry cube(double a) { return DotGeometry{a, 2.0 * a, {0, 0, 0}}; }       // a = h/2
    static DotGeometry flat_cuboid(double a) { return DotGeometry{a, a / 5.0, {0, 0, 0}}; } // a = 5h

    void validate() const {
        if (!(base_half > 0)) throw std::invalid_argument("DotGeometry: base_half must be > 0");
        if (!(height > 0)) throw std::invalid_argument("DotGeometry: height must be > 0");
    }
};

struct MoleculeConfig {
    DotGeometry dot_I;
    DotGeometry dot_II;
    Vec3 R{0.0, 0.0, 5.0};   // interdot center-to-center separation, nm (stacking axis z)
    MaterialParams material;
    Vec3 field{0.0, 0.0, 0.0}; // applied field, kV/cm (basal by default)

    void validate() const {
        dot_I.validate();
        dot_II.validate();
        material.validate();
        if (!(norm(R) > 0)) throw std::invalid_argument("MoleculeConfig: |R| must be > 0");
    }
};

} // namespace dotforge
