#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace dotforge::quad {

// 16-point Gauss-Legendre nodes/weights on (-1, 1)
inline constexpr std::array<double, 8> gl16_x = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> gl16_w = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss16(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += gl16_w[i] * (f(c - h * gl16_x[i]) + f(c + h * gl16_x[i]));
    return sum * h;
}

// Composite GL over [a,b] split into n equal panels.
template <class F>
double gauss16_panels(const F& f, double a, double b, int n) {
    double sum = 0.0;
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) sum += gauss16(f, a + i * h, a + (i + 1) * h);
    return sum;
}

// Panel count so that an oscillation of wavenumber kmax is resolved well by GL16.
inline int panels_for(double a, double b, double kmax, int min_panels = 1) {
    double per_panel = 1.5; // radians of phase per panel keeps GL16 at ~1e-14
    int n = static_cast<int>(std::ceil(std::abs(b - a) * std::max(kmax, 1e-9) / per_panel));
    return std::max(min_panels, n);
}

} // namespace dotforge::quad
