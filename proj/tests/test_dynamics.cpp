#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "dotforge/dynamics.hpp"

using namespace dotforge;
using namespace dotforge::dynamics;
using constants::hbar;
using constants::pi;

namespace {
State4 basis_state(int i) {
    State4 s = State4::Zero();
    s(i) = 1.0;
    return s;
}
} // namespace

TEST_CASE("concurrence of reference states") {
    State4 bell;
    bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    CHECK(concurrence(bell) == doctest::Approx(1.0));
    CHECK(concurrence(basis_state(2)) == doctest::Approx(0.0));
    State4 circ;
    circ << 0, std::complex<double>(0, 1 / std::sqrt(2.0)), 1 / std::sqrt(2.0), 0;
    CHECK(concurrence(circ) == doctest::Approx(1.0));

    // invariance under local phases
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0, 2 * pi);
    for (int t = 0; t < 20; ++t) {
        State4 psi;
        psi << std::polar(0.5, u(rng)), std::polar(0.5, u(rng)), std::polar(0.5, u(rng)),
            std::polar(0.5, u(rng));
        double c0 = concurrence(psi);
        double a = u(rng), b = u(rng);
        State4 rotated;
        rotated << psi(0), psi(1) * std::polar(1.0, b), psi(2) * std::polar(1.0, a),
            psi(3) * std::polar(1.0, a + b);
        CHECK(concurrence(rotated) == doctest::Approx(c0).epsilon(1e-12));
    }
}

TEST_CASE("degenerate dots follow the two-level Rabi law") {
    const double vf = 0.45;
    qubits::TwoQubitSystem sys{0.0, 10.0, 10.0, vf, 0.0};
    auto traj = evolve(basis_state(2), {{8.0, sys, std::nullopt}}, 5e-4);
    for (size_t i = 0; i < traj.points.size(); i += 97) {
        const auto& p = traj.points[i];
        double expected = std::pow(std::sin(vf * p.t / hbar), 2);
        CHECK(std::abs(std::norm(p.psi(1)) - expected) < 1e-6);
    }
    // norm drift stays tiny across the whole trajectory
    for (const auto& p : traj.points) CHECK(std::abs(p.psi.norm() - 1.0) < 1e-9);
}

TEST_CASE("quarter-period state is the circular Bell state") {
    const double vf = 0.45;
    qubits::TwoQubitSystem sys{0.0, 10.0, 10.0, vf, 0.0};
    double tq = pi * hbar / (4.0 * vf);
    auto traj = evolve(basis_state(2), {{tq, sys, std::nullopt}}, tq / 4096.0);
    const State4& f = traj.final_state();
    CHECK(std::norm(f(1)) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(std::norm(f(2)) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(concurrence(f) == doctest::Approx(1.0).epsilon(1e-8));
    // with V_F > 0 in the Hamiltonian the relative phase is a01/a10 = -i
    std::complex<double> ratio = f(1) / f(2);
    CHECK(std::abs(ratio - std::complex<double>(0, -1)) < 1e-8);
}

TEST_CASE("diagonal hamiltonian freezes populations") {
    qubits::TwoQubitSystem sys{0.0, 13.0, 7.0, 0.0, 3.0};
    State4 start;
    start << 0.5, 0.5, 0.5, 0.5;
    auto traj = evolve(start, {{5.0, sys, std::nullopt}}, 1e-3);
    for (const auto& p : traj.points)
        for (int i = 0; i < 4; ++i) CHECK(std::abs(std::norm(p.psi(i)) - 0.25) < 1e-12);
}

TEST_CASE("undriven propagation equals a brute-force matrix exponential") {
    qubits::TwoQubitSystem sys{0.5, 9.0, 6.5, 0.8, 2.5};
    const double T = 3.7;
    auto traj = evolve(basis_state(1), {{T, sys, std::nullopt}}, T / 2048.0);

    // scaling-and-squaring Taylor exponential, independent of the eigensolver path
    Eigen::Matrix4cd A = std::complex<double>(0, -T / hbar) * hamiltonian4(sys);
    int squarings = 12;
    A /= std::pow(2.0, squarings);
    Eigen::Matrix4cd U = Eigen::Matrix4cd::Identity(), term = Eigen::Matrix4cd::Identity();
    for (int k = 1; k <= 25; ++k) {
        term = term * A / double(k);
        U += term;
    }
    for (int s = 0; s < squarings; ++s) U = U * U;
    State4 expected = U * basis_state(1);
    CHECK((traj.final_state() - expected).norm() < 1e-10);
}

TEST_CASE("step-size precondition is enforced") {
    qubits::TwoQubitSystem sys{0.0, 1000.0, 900.0, 1.0, 0.0};
    CHECK_THROWS_AS(evolve(basis_state(2), {{1.0, sys, std::nullopt}}, 0.01), std::invalid_argument);
}

TEST_CASE("scheme 1: entanglement peaks at the quarter period") {
    const double vf = 0.45, dt = 1e-3;
    qubits::TwoQubitSystem sys{0.0, 10.0, 10.0, vf, 0.0};
    auto traj = evolve(basis_state(2), {{2.5, sys, std::nullopt}}, dt);
    double best_t = 0, best_c = -1;
    for (const auto& p : traj.points) {
        double c = concurrence(p.psi);
        if (c > best_c) {
            best_c = c;
            best_t = p.t;
        }
    }
    CHECK(std::abs(best_t - pi * hbar / (4 * vf)) <= 2 * dt);
}

TEST_CASE("scheme 1: switchable Forster coupling entangles and holds") {
    const double vf = 0.45;
    double hold = pi * hbar / (4.0 * vf);
    CHECK(hold == doctest::Approx(1.1488).epsilon(1e-3));
    auto res = forster_switch_protocol(vf, 0.0, hold, 100.0, 1e-3);
    CHECK(res.concurrence_at_switch >= 0.99);
    CHECK(res.max_concurrence >= 0.99);
    CHECK(res.final_concurrence >= 0.99);
    CHECK(res.post_switch_drift < 1e-8);
    CHECK_FALSE(res.weak_coupling_warning);

    // Detuned two-level dynamics transfers at most P_max = V^2/(V^2 + D^2/4).
    // At V/D = 1 the quarter-period switch point gives C = 0.99875 (< 1): the
    // generalized Rabi phase there is sqrt(5)/2 * pi/4 and P01 = 0.8 sin^2(phase).
    auto eq = forster_switch_protocol(1.0, 1.0, pi * hbar / 4.0, 1.0, 2e-4);
    CHECK(eq.concurrence_at_switch == doctest::Approx(0.998747).epsilon(1e-3));
    CHECK(eq.concurrence_at_switch < 0.9995);

    // At V/D = 1/4 the transfer never crosses 1/2, so the whole-trace maximum is
    // 2 sqrt(P_max (1 - P_max)) = 0.8 with P_max = 1/5.
    auto detuned = forster_switch_protocol(0.25, 1.0, 30.0, 1.0, 5e-4);
    CHECK(detuned.weak_coupling_warning);
    CHECK(detuned.max_concurrence < 1.0);
    CHECK(detuned.max_concurrence == doctest::Approx(0.8).epsilon(0.005));
}

TEST_CASE("energy-selective pi pulse implements a conditional flip") {
    qubits::TwoQubitSystem sys{0.0, 25.0, 20.0, 0.0, 10.0};
    auto res = cnot_pulse(sys, 1, 0.5);
    CHECK_FALSE(res.selectivity_warning);
    CHECK(res.populations(2, 3) > 0.99); // |10> -> |11>
    CHECK(res.populations(0, 1) < 0.01); // |00> leakage into |01>
    CHECK(res.populations(0, 0) > 0.98);
    CHECK(cnot_pulse(sys, 1, 1.5).selectivity_warning);

    // control on the second qubit flips |01> -> |11>
    auto res2 = cnot_pulse(sys, 2, 0.5);
    CHECK(res2.populations(1, 3) > 0.99);
}

TEST_CASE("pi/2 then conditional pi generates a Bell state") {
    qubits::TwoQubitSystem sys{0.0, 25.0, 20.0, 0.0, 10.0};
    auto eig = qubits::eigensystem(sys);
    const double Omega = 0.4;
    DriveSpec pulse1{25.0, Omega, 0.0, {1, 1, 1, 1}};           // pi/2 at omega1
    DriveSpec pulse2{eig.eps12_exact, Omega, 0.0, {1, 1, 1, 1}}; // pi at eps12
    std::vector<PulseSegment> seq = {{pi * hbar / (2 * Omega), sys, pulse1},
                                     {pi * hbar / Omega, sys, pulse2}};
    auto traj = evolve(basis_state(0), seq, 2e-3);
    CHECK(concurrence(traj.final_state()) > 0.98);
    CHECK(std::norm(traj.final_state()(0)) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::norm(traj.final_state()(3)) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("hadamard products entangle under V_XX alone") {
    qubits::TwoQubitSystem sys{0.0, 2.0, 1.5, 0.0, 10.0};
    double wait = 1.2 * pi * hbar / sys.V_XX;
    auto res = hadamard_wait_protocol(sys, wait, 2e-4);
    for (size_t i = 0; i < res.trajectory.points.size(); i += 53) {
        const auto& p = res.trajectory.points[i];
        double expected = std::abs(std::sin(sys.V_XX * p.t / (2 * hbar)));
        CHECK(std::abs(concurrence(p.psi) - expected) < 1e-9);
    }
    CHECK(res.max_concurrence == doctest::Approx(1.0).epsilon(1e-6));
    // first maximum at pi hbar / V_XX = 0.2068 ps for V_XX = 10 meV
    double t_first = pi * hbar / sys.V_XX;
    CHECK(t_first == doctest::Approx(0.2068).epsilon(1e-3));
    CHECK_THROWS_AS(hadamard_wait_protocol({0, 1, 1, 0.5, 10}, 1.0), std::invalid_argument);
}

TEST_CASE("single-qubit rotations reach arbitrary Bloch targets") {
    State2 zero;
    zero << 1.0, 0.0;
    // pi rotation about y maps |0> to |1> up to phase
    State2 one = bloch_rotate(zero, {0, 1, 0}, pi);
    CHECK(std::abs(one(1)) == doctest::Approx(1.0).epsilon(1e-12));
    // identity rotation
    State2 same = bloch_rotate(zero, {1, 0, 0}, 0.0);
    CHECK((same - zero).norm() < 1e-14);

    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        double theta = std::acos(1 - 2 * u(rng));
        double phi = 2 * pi * u(rng);
        State2 target;
        target << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
        State2 got = bloch_rotate(bloch_rotate(zero, {0, 1, 0}, theta), {0, 0, 1}, phi);
        double fidelity = std::norm(target.dot(got));
        CHECK(fidelity == doctest::Approx(1.0).epsilon(1e-10));
    }
}
