#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dotforge/core.hpp"
#include "dotforge/qubits.hpp"

namespace dotforge::dynamics {

using State4 = Eigen::Vector4cd;
using State2 = Eigen::Vector2cd;

// Rotating-wave drive at a fixed carrier energy. `pattern` weights the four
// single-excitation transitions {|00>-|01>, |00>-|10>, |01>-|11>, |10>-|11>};
// the default models global illumination with equal transition dipoles.
struct DriveSpec {
    double carrier = 0; // meV
    double rabi = 0;    // Rabi energy Omega, meV
    double phase = 0;   // radians
    std::array<double, 4> pattern = {1, 1, 1, 1};
};

struct PulseSegment {
    double duration = 0; // ps
    qubits::TwoQubitSystem system;
    std::optional<DriveSpec> drive;
};

struct TrajectoryPoint {
    double t = 0; // ps
    State4 psi = State4::Zero();
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    const State4& final_state() const { return points.back().psi; }
};

// Pure-state two-qubit concurrence 2 |a00 a11 - a01 a10|.
double concurrence(const State4& psi);

// Piecewise-constant evolution under Eq.-of-motion i hbar dpsi/dt = H psi. Propagation
// is the exact 4x4 matrix exponential per segment; dt is the sampling interval and must
// resolve the fastest phase (dt * E_max / hbar < 0.1).
Trajectory evolve(const State4& start, const std::vector<PulseSegment>& segments, double dt);

struct SwitchProtocolResult {
    Trajectory trajectory;
    double max_concurrence = 0;
    double concurrence_at_switch = 0;
    double final_concurrence = 0;
    double post_switch_drift = 0;
    bool weak_coupling_warning = false; // V_F/Delta0 < 5 during the hold
};

// Scheme 1: evolve |10> under a constant Forster coupling, then switch V_F off and hold.
SwitchProtocolResult forster_switch_protocol(double V_F_on, double Delta0, double hold_time,
                                             double trail_time = 100.0, double dt = 1e-3);

struct CnotSummary {
    Eigen::Matrix4d populations; // row = prepared basis state, column = final population
    double carrier = 0;
    double duration = 0;
    bool selectivity_warning = false; // Omega > V_XX / 10
};

// Scheme 2: resonant pi-pulse at the conditional transition energy (eps12 for control 1,
// eps21 for control 2), exact transition energies used for the carrier.
CnotSummary cnot_pulse(const qubits::TwoQubitSystem& sys, int control, double Omega);

struct HadamardWaitResult {
    Trajectory trajectory;
    double max_concurrence = 0;
};

// Scheme 3: start from the double-Hadamard product state and let V_XX act alone.
HadamardWaitResult hadamard_wait_protocol(const qubits::TwoQubitSystem& sys, double wait,
                                          double dt = 1e-3);

// Single-qubit Bloch rotation exp(-i angle/2 n.sigma).
State2 bloch_rotate(const State2& state, const Vec3& axis, double angle);

} // namespace dotforge::dynamics
