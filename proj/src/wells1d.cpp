#include "dotforge/wells1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dotforge::wells1d {

namespace {

// sin(z)/z with a series fallback near z = 0
double sinc(double z) {
    if (std::abs(z) < 1e-4) {
        double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo <= 0) == (fm <= 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Bound-state eigenconditions in eta = k w/2, zeta = k_max w/2. These are the
// pole-free forms of tan(eta) = sqrt(zeta^2-eta^2)/eta (even) and
// cot(eta) = -sqrt(zeta^2-eta^2)/eta (odd).
double g_even(double eta, double zeta) {
    return std::sqrt(std::max(0.0, zeta * zeta - eta * eta)) * std::cos(eta) - eta * std::sin(eta);
}
double g_odd(double eta, double zeta) {
    return std::sqrt(std::max(0.0, zeta * zeta - eta * eta)) * std::sin(eta) + eta * std::cos(eta);
}

Well1DState make_bound(const Well1DParams& p, double eta, Parity parity) {
    const double w = p.width_w, L = p.box_L, kappa = p.kappa();
    const double k = 2.0 * eta / w;
    const double E = kappa * k * k;
    const double alpha = std::sqrt(std::max(0.0, (p.depth_V - E) / kappa));

    double B = 1.0, A;
    if (parity == Parity::even)
        A = B * std::cos(eta) * std::exp(alpha * w / 2.0);
    else
        A = B * std::sin(eta) * std::exp(alpha * w / 2.0);

    const double inside = (parity == Parity::even)
                              ? w / 2.0 + std::sin(k * w) / (2.0 * k)
                              : w / 2.0 - std::sin(k * w) / (2.0 * k);
    const double outside = (alpha > 0) ? A * A / alpha * (std::exp(-alpha * w) - std::exp(-alpha * L)) : 0.0;
    const double nrm = 1.0 / std::sqrt(B * B * inside + outside);

    return Well1DState{E, parity, Kind::bound, k, alpha, B * nrm, A * nrm, w, L};
}

Well1DState make_unbound(const Well1DParams& p, double kp, Parity parity) {
    const double w = p.width_w, L = p.box_L, kappa = p.kappa();
    const double E = p.depth_V + kappa * kp * kp;
    const double k = std::sqrt(E / kappa);
    const double u = kp * (L - w) / 2.0;

    // A from amplitude or current continuity at x = w/2, whichever is better conditioned
    double B = 1.0, A;
    const double su = std::sin(u), cu = std::cos(u);
    if (parity == Parity::even) {
        if (std::abs(su) >= std::abs(cu))
            A = -B * std::cos(k * w / 2.0) / su;
        else
            A = -B * k * std::sin(k * w / 2.0) / (kp * cu);
    } else {
        if (std::abs(su) >= std::abs(cu))
            A = -B * std::sin(k * w / 2.0) / su;
        else
            A = B * k * std::cos(k * w / 2.0) / (kp * cu);
    }

    const double c = (L - w) / 2.0;
    const double inside = (parity == Parity::even)
                              ? w / 2.0 + std::sin(k * w) / (2.0 * k)
                              : w / 2.0 - std::sin(k * w) / (2.0 * k);
    const double outside = A * A * (c - std::sin(2.0 * kp * c) / (2.0 * kp));
    const double nrm = 1.0 / std::sqrt(B * B * inside + outside);

    return Well1DState{E, parity, Kind::unbound, k, kp, B * nrm, A * nrm, w, L};
}

} // namespace

int bound_count_estimate(const Well1DParams& p) {
    const double lam = std::sqrt(p.depth_V / p.kappa()) * p.width_w / constants::pi;
    return 1 + static_cast<int>(std::floor(lam));
}

std::vector<Well1DState> solve_bound(const Well1DParams& p) {
    p.validate();
    const double kappa = p.kappa();
    const double zeta = std::sqrt(p.depth_V / kappa) * p.width_w / 2.0;

    std::vector<Well1DState> out;
    auto scan = [&](Parity parity) {
        auto g = (parity == Parity::even) ? g_even : g_odd;
        const double step = std::min(constants::pi / 64.0, zeta / 32.0);
        double prev_eta = 1e-12 * std::max(1.0, zeta);
        double prev = g(prev_eta, zeta);
        for (double eta = prev_eta + step; prev_eta < zeta; eta += step) {
            eta = std::min(eta, zeta);
            double cur = g(eta, zeta);
            if ((prev <= 0) != (cur <= 0)) {
                double root = bisect([&](double e) { return g(e, zeta); }, prev_eta, eta);
                if (root < zeta * (1.0 - 1e-12))
                    out.push_back(make_bound(p, root, parity));
            }
            prev_eta = eta;
            prev = cur;
            if (eta >= zeta) break;
        }
    };
    scan(Parity::even);
    scan(Parity::odd);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
    return out;
}

std::vector<Well1DState> solve_unbound(const Well1DParams& p, int n_max) {
    p.validate();
    if (n_max < 1) throw std::invalid_argument("solve_unbound: n_max must be >= 1");
    const double w = p.width_w, L = p.box_L, kappa = p.kappa();
    const double kV2 = p.depth_V / kappa;

    // Pole-free eigenconditions (matching determinant divided by k'); u = k'(L-w)/2.
    auto D = [&](double kp, Parity parity) {
        const double k = std::sqrt(kp * kp + kV2);
        const double u = kp * (L - w) / 2.0;
        const double half = k * w / 2.0;
        if (parity == Parity::even)
            return std::cos(half) * std::cos(u) - k * (L - w) / 2.0 * std::sin(half) * sinc(u);
        return std::sin(half) * std::cos(u) + k * (L - w) / 2.0 * std::cos(half) * sinc(u);
    };

    std::vector<Well1DState> out;
    const double step = constants::pi / (4.0 * L);
    const double kp_limit = (n_max + 8) * 64.0 * constants::pi / L;
    for (Parity parity : {Parity::even, Parity::odd}) {
        double prev_kp = step * 1e-6;
        double prev = D(prev_kp, parity);
        int found = 0;
        for (double kp = step; found < n_max; kp += step) {
            if (kp > kp_limit)
                throw std::runtime_error("solve_unbound: root bracketing failed on branch k' in [" +
                                         std::to_string(prev_kp) + ", " + std::to_string(kp_limit) +
                                         "] nm^-1 (box_L too small or n_max too large)");
            double cur = D(kp, parity);
            if ((prev <= 0) != (cur <= 0)) {
                double root = bisect([&](double x) { return D(x, parity); }, prev_kp, kp);
                out.push_back(make_unbound(p, root, parity));
                ++found;
            }
            prev_kp = kp;
            prev = cur;
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.energy < b.energy; });
    out.resize(n_max);
    return out;
}

double eval(const Well1DState& s, double x) {
    const double hw = s.width_w / 2.0, hL = s.box_L / 2.0;
    if (std::abs(x) <= hw)
        return (s.parity == Parity::even) ? s.inside_amp * std::cos(s.k_in * x)
                                          : s.inside_amp * std::sin(s.k_in * x);
    if (s.kind == Kind::bound) {
        double tail = s.outside_amp * std::exp(-s.k_out * std::abs(x));
        return (s.parity == Parity::odd && x < 0) ? -tail : tail;
    }
    if (x > 0) return s.outside_amp * std::sin(s.k_out * (x - hL));
    double left = s.outside_amp * std::sin(s.k_out * (x + hL));
    return (s.parity == Parity::even) ? -left : left;
}

double eval_deriv(const Well1DState& s, double x) {
    const double hw = s.width_w / 2.0, hL = s.box_L / 2.0;
    if (std::abs(x) <= hw)
        return (s.parity == Parity::even) ? -s.inside_amp * s.k_in * std::sin(s.k_in * x)
                                          : s.inside_amp * s.k_in * std::cos(s.k_in * x);
    if (s.kind == Kind::bound) {
        double tail = -s.k_out * s.outside_amp * std::exp(-s.k_out * std::abs(x));
        if (x < 0) tail = (s.parity == Parity::odd) ? tail : -tail;
        return tail;
    }
    if (x > 0) return s.outside_amp * s.k_out * std::cos(s.k_out * (x - hL));
    double left = s.outside_amp * s.k_out * std::cos(s.k_out * (x + hL));
    return (s.parity == Parity::even) ? -left : left;
}

} // namespace dotforge::wells1d
