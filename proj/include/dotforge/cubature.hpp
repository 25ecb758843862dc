#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dotforge::cubature {

struct Options {
    double rel_tol = 1e-4;
    double abs_tol = 0.0;
    long max_evals = 50000000;
    int threads = 1; // parallel rule evaluation; the subdivision order is thread-independent
};

struct Result {
    double value = 0;
    double error = 0;
    bool converged = false;
    long evals = 0;
    int regions = 0;
};

using Integrand = std::function<double(std::span<const double>)>;

// Adaptive multidimensional cubature on an axis-aligned box, embedded degree 7/5
// Genz-Malik rules with bisection of the worst regions. Deterministic for a given
// tolerance: region selection is by (error, creation order) and the final sums run
// in creation order with compensated accumulation.
Result integrate(const Integrand& f, std::span<const double> lo, std::span<const double> hi,
                 const Options& opts = {});

} // namespace dotforge::cubature
