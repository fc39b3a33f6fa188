#pragma once

#include "restlab/phase.hpp"

#include <array>
#include <cmath>
#include <cstdint>

namespace restlab {

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; nodes symmetric).
inline constexpr std::array<double, 8> kGL16Nodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGL16Weights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

struct QuadResult {
    Complex value{0.0, 0.0};
    double est_error = 0.0;
    std::int64_t nodes = 0;
    bool converged = false;
};

template <typename F>
Complex gl16_panels(F&& f, double a, double b, int panels) {
    double h = (b - a) / panels;
    CompensatedSum sum;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        double half = 0.5 * h;
        for (std::size_t i = 0; i < kGL16Nodes.size(); ++i) {
            double d = half * kGL16Nodes[i];
            Complex v = f(mid - d) + f(mid + d);
            sum.add(kGL16Weights[i] * half * v);
        }
    }
    return sum.value();
}

// Oscillation-aware panel refinement: start with enough panels that each one
// sees at most ~half a cycle (freq_bound in cycles per unit length), then
// double until two consecutive estimates agree to tol (absolute).
template <typename F>
QuadResult integrate_oscillatory(F&& f, double a, double b, double freq_bound, double tol,
                                 int max_doublings = 10) {
    int panels = static_cast<int>(std::ceil((b - a) * std::max(freq_bound, 0.0) * 2.0)) + 1;
    QuadResult out;
    Complex prev = gl16_panels(f, a, b, panels);
    out.nodes = static_cast<std::int64_t>(panels) * 16;
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        Complex next = gl16_panels(f, a, b, panels);
        out.nodes += static_cast<std::int64_t>(panels) * 16;
        out.est_error = std::abs(next - prev);
        out.value = next;
        if (out.est_error <= tol) {
            out.converged = true;
            return out;
        }
        prev = next;
    }
    return out;
}

} // namespace restlab
