#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dotforge/constants.hpp"

namespace dotforge::wells1d {

struct Well1DParams {
    double width_w; // full well width, nm
    double depth_V; // well depth, meV
    double mass;    // effective mass, units of m0
    double box_L;   // outer infinite-box full width, nm (unbound states live on it)

    // hbar^2/(2 m*) in meV*nm^2
    double kappa() const { return constants::hbar2_over_2m0 / mass; }

    void validate() const {
        if (!(width_w > 0)) throw std::invalid_argument("Well1DParams: width_w must be > 0");
        if (!(depth_V > 0)) throw std::invalid_argument("Well1DParams: depth_V must be > 0");
        if (!(mass > 0)) throw std::invalid_argument("Well1DParams: mass must be > 0");
        if (!(box_L > width_w)) throw std::invalid_argument("Well1DParams: box_L must exceed width_w");
    }
};

enum class Parity { even, odd };
enum class Kind { bound, unbound };

// One eigenstate of the finite square well centred at x=0. Bound states decay as
// A e^{-alpha|x|} outside the well; unbound states are confined by the outer box and
// vanish exactly at x = +-box_L/2. Coefficients are normalized over (-box_L/2, box_L/2).
struct Well1DState {
    double energy; // meV
    Parity parity;
    Kind kind;
    double k_in;        // wavevector inside the well, nm^-1
    double k_out;       // alpha (bound) or k' (unbound), nm^-1
    double inside_amp;  // amplitude of cos(kx) (even) or sin(kx) (odd) in |x| < w/2
    double outside_amp; // right-side outer amplitude; the left side follows by parity
    double width_w;
    double box_L;
};

// All bound levels, sorted ascending; parities alternate starting even.
std::vector<Well1DState> solve_bound(const Well1DParams& p);

// First n_max levels above the confinement depth, sorted ascending.
std::vector<Well1DState> solve_unbound(const Well1DParams& p, int n_max);

double eval(const Well1DState& s, double x);
double eval_deriv(const Well1DState& s, double x);

// Standard finite-well level count: 1 + floor(sqrt(2 m V) w / (pi hbar)).
int bound_count_estimate(const Well1DParams& p);

} // namespace dotforge::wells1d
