#include "doctest.h"

#include <cmath>

#include "dotforge/dipole.hpp"
#include "dotforge/quad.hpp"

using namespace dotforge;
using namespace dotforge::dipole;
using constants::coulomb_C;
using constants::pi;

TEST_CASE("point dipole geometry factors") {
    const double d = 0.2, R = 3.0, eps = 10.0;
    // parallel dipoles along R
    PointDipolePair along{{0, 0, d}, {0, 0, d}, {0, 0, R}, eps};
    CHECK(dipole_dipole(along) ==
          doctest::Approx(-2.0 * coulomb_C * d * d / (eps * R * R * R)).epsilon(1e-12));
    // parallel dipoles perpendicular to R
    PointDipolePair perp{{d, 0, 0}, {d, 0, 0}, {0, 0, R}, eps};
    CHECK(dipole_dipole(perp) ==
          doctest::Approx(coulomb_C * d * d / (eps * R * R * R)).epsilon(1e-12));
}

TEST_CASE("molecular benchmark: 1.7 eA at 1 nm gives 8.32 meV") {
    const double d = dipole_from_eA(1.7);
    PointDipolePair p{{0, 0, d}, {0, 0, d}, {0, 0, 1.0}, 10.0};
    double v = std::abs(dipole_dipole(p));
    CHECK(v == doctest::Approx(8.32299).epsilon(1e-4));
    CHECK(std::abs(v - 8.3) / 8.3 < 0.02);
}

TEST_CASE("exchange symmetry and tracelessness") {
    PointDipolePair p{{0.1, -0.2, 0.05}, {-0.3, 0.07, 0.2}, {1.0, 2.0, -0.5}, 12.0};
    PointDipolePair swapped{p.d2, p.d1, {-p.R[0], -p.R[1], -p.R[2]}, p.eps_r};
    CHECK(dipole_dipole(p) == doctest::Approx(dipole_dipole(swapped)).epsilon(1e-13));

    // sum of the three orthogonal parallel-dipole orientations vanishes
    double d = 0.15, R = 2.0;
    double sum = 0;
    sum += dipole_dipole({{d, 0, 0}, {d, 0, 0}, {0, 0, R}, 10.0});
    sum += dipole_dipole({{0, d, 0}, {0, d, 0}, {0, 0, R}, 10.0});
    sum += dipole_dipole({{0, 0, d}, {0, 0, d}, {0, 0, R}, 10.0});
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("atomic dipole of the Kronig-Penney cell") {
    CHECK(atomic_dipole(0.5) == doctest::Approx(0.1801263).epsilon(1e-5));
    CHECK(atomic_dipole(1.0) == doctest::Approx(2.0 * atomic_dipole(0.5)).epsilon(1e-13));

    // quadrature oracle: <s|z|p_z> in an infinite well of width 2x
    const double x = 0.5;
    auto integrand = [&](double z) {
        double s = std::cos(pi * z / (2 * x)) / std::sqrt(x);
        double p = std::sin(pi * z / x) / std::sqrt(x);
        return s * z * p;
    };
    double oracle = quad::gauss16_panels(integrand, -x, x, 64);
    CHECK(atomic_dipole(x) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("forster_dipole scaling and symmetry") {
    Vec3 R{0, 0, 5.0};
    double v1 = forster_dipole(0.8, 0.9, 0.5, R, 10.0);
    CHECK(forster_dipole(0.9, 0.8, 0.5, R, 10.0) == doctest::Approx(v1).epsilon(1e-13));
    // V_F proportional to x^2: doubling x quadruples the coupling
    CHECK(forster_dipole(0.8, 0.9, 1.0, R, 10.0) == doctest::Approx(4.0 * v1).epsilon(1e-12));
    // linear in 1/eps_r
    CHECK(forster_dipole(0.8, 0.9, 0.5, R, 20.0) == doctest::Approx(v1 / 2.0).epsilon(1e-12));
}

TEST_CASE("transfer times reproduce the quoted benchmarks") {
    CHECK(transfer_time(0.013) == doctest::Approx(318.0).epsilon(5e-3));
    CHECK(transfer_time(0.45) == doctest::Approx(9.19).epsilon(5e-3));
    // the molecular example: t = h / 8.32299 meV = 496.9 fs
    const double d = dipole_from_eA(1.7);
    double vf = std::abs(dipole_dipole({{0, 0, d}, {0, 0, d}, {0, 0, 1.0}, 10.0}));
    CHECK(transfer_time(vf) * 1000.0 == doctest::Approx(497.0).epsilon(2e-3));
    CHECK_THROWS_AS(transfer_time(0.0), std::invalid_argument);
    // half-transfer of the two-level dynamics is pi hbar / (2 V_F)
    CHECK(half_transfer_time(0.45) == doctest::Approx(pi * constants::hbar / 0.9).epsilon(1e-12));
}

TEST_CASE("vxx from induced dipoles") {
    CHECK(vxx_dipole({0, 0, 0}, {0, 0, 0}, {0, 0, 5.0}, 10.0) == 0.0);
    // basal dipoles perpendicular to the stacking axis: +C p^2 / (eps R^3)
    Vec3 p{-2.0, 0, 0};
    double v = vxx_dipole(p, p, {0, 0, 5.0}, 10.0);
    CHECK(v == doctest::Approx(coulomb_C * 4.0 / (10.0 * 125.0)).epsilon(1e-12));
    CHECK(v > 0);
}
