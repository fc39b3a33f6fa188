#pragma once

#include "restlab/bump.hpp"
#include "restlab/phase.hpp"
#include "restlab/report.hpp"

#include <cstdint>

namespace restlab {

// Rational point a/q plus offset phi on a major arc; gcd(a, q) = 1.
struct MajorArcPoint {
    std::int64_t a;
    std::int64_t q;
    double phi;

    double t() const { return static_cast<double>(a) / static_cast<double>(q) + phi; }
};

// G(t, x) = sum_k gamma(k/N) e(k x + k^2 t), summed over |k| <= 2N.
Complex weyl_direct(double t, double x, std::int64_t N,
                    const BumpFunction& gamma = BumpFunction::cutoff());

// Same sum with the rational part of k^2 t reduced exactly mod 1.
Complex weyl_direct(const MajorArcPoint& p, double x, std::int64_t N,
                    const BumpFunction& gamma = BumpFunction::cutoff());

// J(x, phi, m, q) = integral of gamma(y/N) e((x + m/q) y + phi y^2) dy.
Complex oscillatory_J(double x, double phi, std::int64_t m, std::int64_t q, std::int64_t N,
                      const BumpFunction& gamma = BumpFunction::cutoff(), double tol = -1.0);

// Truncated Poisson expansion sum_m S(a,m,q) J(x,phi,m,q); the window is
// centered on -x q and sized so discarded terms are negligible.
Complex weyl_poisson(const MajorArcPoint& p, double x, std::int64_t N,
                     const BumpFunction& gamma = BumpFunction::cutoff(),
                     std::int64_t half_window = -1);

// Dirichlet approximation: a/q with q <= N, gcd(a,q) = 1, |t - a/q| <= 1/(Nq).
MajorArcPoint dirichlet_locate(double t, std::int64_t N);

// Random sweep of |G| against the (N^eps/sqrt(q)) min(N, |phi|^{-1/2}) envelope.
ExperimentReport weyl_envelope_check(std::int64_t N, int samples, std::uint64_t seed);

} // namespace restlab
