#include "restlab/weyl.hpp"

#include "restlab/arith.hpp"
#include "restlab/errors.hpp"
#include "restlab/exp_sums.hpp"
#include "restlab/quadrature.hpp"
#include "restlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace restlab {

namespace {

std::int64_t support_limit(std::int64_t N, const BumpFunction& gamma) {
    return static_cast<std::int64_t>(std::floor(gamma.support_radius() * static_cast<double>(N)));
}

} // namespace

Complex weyl_direct(double t, double x, std::int64_t N, const BumpFunction& gamma) {
    if (N < 1) throw Error("weyl_direct: N must be >= 1");
    std::int64_t L = support_limit(N, gamma);
    CompensatedSum sum;
    for (std::int64_t k = -L; k <= L; ++k) {
        double g = gamma(static_cast<double>(k) / static_cast<double>(N));
        if (g == 0.0) continue;
        double phase = std::fmod(static_cast<double>(k) * x, 1.0) +
                       std::fmod(static_cast<double>(k) * static_cast<double>(k) * t, 1.0);
        sum.add(g * unit_phase(phase));
    }
    return sum.value();
}

Complex weyl_direct(const MajorArcPoint& p, double x, std::int64_t N, const BumpFunction& gamma) {
    if (N < 1) throw Error("weyl_direct: N must be >= 1");
    std::int64_t L = support_limit(N, gamma);
    CompensatedSum sum;
    for (std::int64_t k = -L; k <= L; ++k) {
        double g = gamma(static_cast<double>(k) / static_cast<double>(N));
        if (g == 0.0) continue;
        // k^2 (a/q) reduced exactly; the k^2 phi part stays small in double.
        std::int64_t k2modq = static_cast<std::int64_t>(
            mulmod(static_cast<std::uint64_t>(((k % p.q) + p.q) % p.q),
                   static_cast<std::uint64_t>(((k % p.q) + p.q) % p.q),
                   static_cast<std::uint64_t>(p.q)));
        std::int64_t rational = (k2modq % p.q) * (p.a % p.q) % p.q;
        double phase = static_cast<double>(((rational % p.q) + p.q) % p.q) / static_cast<double>(p.q) +
                       static_cast<double>(k) * static_cast<double>(k) * p.phi +
                       std::fmod(static_cast<double>(k) * x, 1.0);
        sum.add(g * unit_phase(std::fmod(phase, 1.0)));
    }
    return sum.value();
}

Complex oscillatory_J(double x, double phi, std::int64_t m, std::int64_t q, std::int64_t N,
                      const BumpFunction& gamma, double tol) {
    if (q < 1 || N < 1) throw Error("oscillatory_J: need q >= 1 and N >= 1");
    if (tol <= 0.0) tol = 1e-10 * static_cast<double>(N);
    double R = gamma.support_radius() * static_cast<double>(N);
    double c = x + static_cast<double>(m) / static_cast<double>(q);
    auto integrand = [&](double y) {
        double g = gamma(y / static_cast<double>(N));
        if (g == 0.0) return Complex{0.0, 0.0};
        return g * unit_phase(std::fmod(c * y, 1.0) + std::fmod(phi * y * y, 1.0));
    };
    double freq = std::fabs(c) + 2.0 * std::fabs(phi) * R;
    QuadResult r = integrate_oscillatory(integrand, -R, R, freq, tol);
    if (!r.converged) throw QuadratureNotConverged("oscillatory_J: refinement stalled");
    return r.value;
}

Complex weyl_poisson(const MajorArcPoint& p, double x, std::int64_t N, const BumpFunction& gamma,
                     std::int64_t half_window) {
    if (N < 1) throw Error("weyl_poisson: N must be >= 1");
    if (std::gcd(p.a, p.q) != 1 && !(p.a == 0 && p.q == 1))
        throw Error("weyl_poisson: a/q must be reduced");
    bool auto_window = half_window < 0;
    if (auto_window) {
        double w = std::ceil(static_cast<double>(p.q) / static_cast<double>(N)) *
                   std::pow(static_cast<double>(N), 0.1) * 8.0;
        half_window = std::max<std::int64_t>(8, static_cast<std::int64_t>(std::ceil(w)));
    }
    const double tail_tol = 1e-9 * static_cast<double>(N);
    std::int64_t center = std::llround(-x * static_cast<double>(p.q));
    for (int attempt = 0; attempt < 4; ++attempt) {
        CompensatedSum sum;
        double edge = 0.0;
        for (std::int64_t m = center - half_window; m <= center + half_window; ++m) {
            Complex s = quad_sum(p.a, m, p.q).value;
            Complex j = oscillatory_J(x, p.phi, m, p.q, N, gamma);
            Complex term = s * j;
            sum.add(term);
            if (m <= center - half_window + 1 || m >= center + half_window - 1)
                edge = std::max(edge, std::abs(term));
        }
        if (edge <= tail_tol) return sum.value();
        if (!auto_window) break;
        half_window *= 2; // expand and retry before giving up
    }
    throw WindowTooSmall("weyl_poisson: truncation tail above tolerance");
}

MajorArcPoint dirichlet_locate(double t, std::int64_t N) {
    if (N < 1) throw Error("dirichlet_locate: N must be >= 1");
    // Continued-fraction convergents; keep the last with denominator <= N.
    std::int64_t h0 = 1, h1 = static_cast<std::int64_t>(std::floor(t));
    std::int64_t k0 = 0, k1 = 1;
    std::int64_t best_a = h1, best_q = 1;
    double frac = t - std::floor(t);
    for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
        double inv = 1.0 / frac;
        auto digit = static_cast<std::int64_t>(std::floor(inv));
        std::int64_t h2 = digit * h1 + h0;
        std::int64_t k2 = digit * k1 + k0;
        if (k2 > N) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        best_a = h1;
        best_q = k1;
        frac = inv - static_cast<double>(digit);
        if (k1 == N) break;
    }
    double phi = t - static_cast<double>(best_a) / static_cast<double>(best_q);
    return MajorArcPoint{best_a, best_q, phi};
}

ExperimentReport weyl_envelope_check(std::int64_t N, int samples, std::uint64_t seed) {
    if (N < 16) throw Error("weyl_envelope_check: N must be >= 16");
    ExperimentReport report;
    report.name = "weyl_envelope";
    report.params = {{"N", N}, {"samples", samples}, {"seed", seed}};
    report.columns = {"t", "x", "q", "a", "phi", "abs_G", "envelope", "ratio"};
    CounterRng rng(seed, 17);
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        double t = rng.uniform(2 * static_cast<std::uint64_t>(i));
        double x = rng.uniform(2 * static_cast<std::uint64_t>(i) + 1);
        MajorArcPoint arc = dirichlet_locate(t, N);
        if (arc.q > N || std::fabs(arc.phi) > 1.0 / (static_cast<double>(N) * static_cast<double>(arc.q)) + 1e-12)
            throw Error("weyl_envelope_check: Dirichlet locator left the admissible range");
        double absG = std::abs(weyl_direct(arc, x, N));
        double vdc = arc.phi == 0.0 ? static_cast<double>(N)
                                    : std::min(static_cast<double>(N), 1.0 / std::sqrt(std::fabs(arc.phi)));
        double envelope = vdc / std::sqrt(static_cast<double>(arc.q));
        double ratio = absG / envelope;
        ratios.push_back(ratio);
        report.add_row({t, x, static_cast<double>(arc.q), static_cast<double>(arc.a), arc.phi, absG,
                        envelope, ratio});
    }
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        std::size_t idx = static_cast<std::size_t>(p * (sorted.size() - 1));
        return sorted[idx];
    };
    report.summary = {{"max_ratio", sorted.back()},
                      {"q50", quantile(0.5)},
                      {"q90", quantile(0.9)},
                      {"q99", quantile(0.99)}};
    return report;
}

} // namespace restlab
