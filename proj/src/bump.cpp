#include "restlab/bump.hpp"

#include "restlab/quadrature.hpp"

#include <cmath>

namespace restlab {

namespace {

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double f0 = std::exp(-1.0 / u);
    double f1 = std::exp(-1.0 / (1.0 - u));
    return f0 / (f0 + f1);
}

double eval_cutoff(double y) {
    double u = std::fabs(y);
    if (u <= 1.0) return 1.0;
    if (u >= 2.0) return 0.0;
    return smooth_step(2.0 - u);
}

double eval_window(double y) {
    if (std::fabs(y) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

double eval_annulus(double t) {
    double u = std::fabs(t);
    if (u <= 0.125 || u >= 1.0) return 0.0;
    double rise = smooth_step((u - 0.125) / 0.125); // 1 beyond 1/4
    double fall = smooth_step((1.0 - u) / 0.5);     // 1 below 1/2
    return rise * fall;
}

} // namespace

const BumpFunction& BumpFunction::cutoff() {
    static BumpFunction b(Kind::cutoff, 2.0);
    return b;
}

const BumpFunction& BumpFunction::window() {
    static BumpFunction b(Kind::window, 1.0);
    return b;
}

const BumpFunction& BumpFunction::annulus() {
    static BumpFunction b(Kind::annulus, 1.0);
    return b;
}

double BumpFunction::operator()(double y) const {
    switch (kind_) {
        case Kind::cutoff: return eval_cutoff(y);
        case Kind::window: return eval_window(y);
        case Kind::annulus: return eval_annulus(y);
    }
    return 0.0;
}

double BumpFunction::integral() const {
    if (integral_ < 0.0) integral_ = transform(0.0);
    return integral_;
}

double BumpFunction::transform(double z) const {
    double R = radius_;
    auto integrand = [&](double u) { return Complex((*this)(u) * std::cos(two_pi * z * u), 0.0); };
    // Even integrand: integrate [0, R] and double. The annulus bump needs
    // resolution below its inner edge width; 64 base panels cover all kinds.
    double freq = std::fabs(z);
    int panels = 64 + static_cast<int>(std::ceil(freq * R * 2.0));
    Complex v = gl16_panels(integrand, 0.0, R, panels);
    return 2.0 * v.real();
}

} // namespace restlab
