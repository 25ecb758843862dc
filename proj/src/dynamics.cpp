#include "dotforge/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace dotforge::dynamics {

using constants::hbar;
using Eigen::Matrix4cd;
using Eigen::Matrix4d;
using Eigen::Vector4d;

namespace {

constexpr int pair_lo[4] = {0, 0, 1, 2}; // |00>-|01>, |00>-|10>, |01>-|11>, |10>-|11>
constexpr int pair_hi[4] = {1, 2, 3, 3};
const double excitations[4] = {0, 1, 1, 2};

// Rotating-frame Hamiltonian of one segment. For a driven segment the lab-frame
// propagator factorizes as exp(-i w N t / hbar) exp(-i H_rot t / hbar); the number
// phases are restored afterwards so that segments compose in a single frame.
Matrix4cd rotating_hamiltonian(const PulseSegment& seg) {
    Matrix4cd H = qubits::hamiltonian4(seg.system).cast<std::complex<double>>();
    if (seg.drive) {
        const auto& d = *seg.drive;
        for (int i = 0; i < 4; ++i) H(i, i) -= d.carrier * excitations[i];
        const std::complex<double> g =
            0.5 * d.rabi * std::exp(std::complex<double>(0.0, d.phase));
        for (int p = 0; p < 4; ++p) {
            H(pair_hi[p], pair_lo[p]) += g * d.pattern[p];
            H(pair_lo[p], pair_hi[p]) += std::conj(g) * d.pattern[p];
        }
    }
    return H;
}

} // namespace

double concurrence(const State4& psi) {
    return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

Trajectory evolve(const State4& start, const std::vector<PulseSegment>& segments, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("evolve: dt must be > 0");

    Trajectory traj;
    State4 psi = start.normalized();
    double t = 0;
    traj.points.push_back({t, psi});

    for (const auto& seg : segments) {
        if (!(seg.duration > 0)) throw std::invalid_argument("evolve: segment duration must be > 0");
        if (seg.drive && seg.drive->rabi < 0)
            throw std::invalid_argument("evolve: Rabi energy must be >= 0");

        Matrix4cd H = rotating_hamiltonian(seg);
        Eigen::SelfAdjointEigenSolver<Matrix4cd> es(H);
        const Vector4d lam = es.eigenvalues();
        const double emax = lam.cwiseAbs().maxCoeff();
        if (dt * emax / hbar >= 0.1)
            throw std::invalid_argument("evolve: dt too coarse for the fastest phase; need dt < " +
                                        std::to_string(0.1 * hbar / std::max(emax, 1e-300)) + " ps");

        const State4 psi0 = psi;
        const double carrier = seg.drive ? seg.drive->carrier : 0.0;
        auto at = [&](double tau) {
            State4 y = es.eigenvectors().adjoint() * psi0;
            for (int i = 0; i < 4; ++i)
                y(i) *= std::exp(std::complex<double>(0.0, -lam(i) * tau / hbar));
            State4 out = es.eigenvectors() * y;
            if (carrier != 0.0)
                for (int i = 0; i < 4; ++i)
                    out(i) *= std::exp(std::complex<double>(0.0, -carrier * excitations[i] * tau / hbar));
            return out;
        };

        const long steps = std::max(1L, (long)std::ceil(seg.duration / dt));
        for (long s = 1; s <= steps; ++s) {
            double tau = std::min(s * dt, seg.duration);
            traj.points.push_back({t + tau, at(tau)});
            if (tau >= seg.duration) break;
        }
        psi = traj.points.back().psi;
        t += seg.duration;
    }
    return traj;
}

SwitchProtocolResult forster_switch_protocol(double V_F_on, double Delta0, double hold_time,
                                             double trail_time, double dt) {
    if (!(V_F_on > 0)) throw std::invalid_argument("forster_switch_protocol: V_F_on must be > 0");
    SwitchProtocolResult out;
    out.weak_coupling_warning = Delta0 != 0.0 && std::abs(V_F_on / Delta0) < 5.0;

    qubits::TwoQubitSystem hold{0.0, 10.0 + Delta0, 10.0, V_F_on, 0.0};
    qubits::TwoQubitSystem off = hold;
    off.V_F = 0.0;

    State4 start = State4::Zero();
    start(2) = 1.0; // |10>
    out.trajectory = evolve(start, {{hold_time, hold, std::nullopt}, {trail_time, off, std::nullopt}}, dt);

    double post_min = 2.0, post_max = -1.0;
    bool seen_switch = false;
    for (const auto& p : out.trajectory.points) {
        double c = concurrence(p.psi);
        out.max_concurrence = std::max(out.max_concurrence, c);
        if (p.t >= hold_time) {
            if (!seen_switch) {
                out.concurrence_at_switch = c;
                seen_switch = true;
            }
            post_min = std::min(post_min, c);
            post_max = std::max(post_max, c);
        }
    }
    out.final_concurrence = concurrence(out.trajectory.final_state());
    out.post_switch_drift = post_max - post_min;
    return out;
}

CnotSummary cnot_pulse(const qubits::TwoQubitSystem& sys, int control, double Omega) {
    if (control != 1 && control != 2) throw std::invalid_argument("cnot_pulse: control must be 1 or 2");
    if (!(Omega > 0)) throw std::invalid_argument("cnot_pulse: Omega must be > 0");

    const auto eig = qubits::eigensystem(sys);
    CnotSummary out;
    out.carrier = (control == 1) ? eig.eps12_exact : eig.eps21_exact;
    out.duration = constants::pi * hbar / Omega; // pi-pulse in the RWA
    out.selectivity_warning = Omega > std::abs(sys.V_XX) / 10.0;

    DriveSpec drive{out.carrier, Omega, 0.0, {1, 1, 1, 1}};
    // the rotating frame leaves only detuning-scale energies in the propagator
    const double scale = std::abs(sys.V_XX) + std::abs(sys.delta0()) + std::abs(sys.V_F) + Omega + 1e-3;
    const double dt = std::min(0.05 * hbar / scale, out.duration / 32.0);
    for (int basis = 0; basis < 4; ++basis) {
        State4 start = State4::Zero();
        start(basis) = 1.0;
        auto traj = evolve(start, {{out.duration, sys, drive}}, dt);
        for (int j = 0; j < 4; ++j) out.populations(basis, j) = std::norm(traj.final_state()(j));
    }
    return out;
}

HadamardWaitResult hadamard_wait_protocol(const qubits::TwoQubitSystem& sys, double wait, double dt) {
    if (sys.V_F != 0.0)
        throw std::invalid_argument("hadamard_wait_protocol: scheme 3 requires V_F = 0");
    State4 start;
    start << 0.5, 0.5, 0.5, 0.5;
    HadamardWaitResult out;
    out.trajectory = evolve(start, {{wait, sys, std::nullopt}}, dt);
    for (const auto& p : out.trajectory.points)
        out.max_concurrence = std::max(out.max_concurrence, concurrence(p.psi));
    return out;
}

State2 bloch_rotate(const State2& state, const Vec3& axis, double angle) {
    const double n = norm(axis);
    if (!(n > 0)) throw std::invalid_argument("bloch_rotate: axis must be nonzero");
    const Vec3 u{axis[0] / n, axis[1] / n, axis[2] / n};
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    Eigen::Matrix2cd R;
    const std::complex<double> I(0, 1);
    R << c - I * s * u[2], -I * s * u[0] - s * u[1], -I * s * u[0] + s * u[1], c + I * s * u[2];
    return R * state;
}

} // namespace dotforge::dynamics
