#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "restlab/bump.hpp"
#include "restlab/errors.hpp"
#include "restlab/rng.hpp"
#include "restlab/weyl.hpp"

#include <cmath>
#include <numeric>

using namespace restlab;
using doctest::Approx;

TEST_CASE("bump functions: shape, support, frozen integrals") {
    const auto& cut = BumpFunction::cutoff();
    CHECK(cut(0.0) == 1.0);
    CHECK(cut(0.999) == 1.0);
    CHECK(cut(-1.0) == 1.0);
    CHECK(cut(2.0) == 0.0);
    CHECK(cut(2.5) == 0.0);
    CHECK(cut(1.5) > 0.0);
    CHECK(cut(1.5) < 1.0);
    CHECK(cut.integral() == Approx(3.0).epsilon(1e-10)); // symmetric smooth steps

    const auto& win = BumpFunction::window();
    CHECK(win(0.0) == 1.0);
    CHECK(win(1.0) == 0.0);
    CHECK(win(-1.2) == 0.0);
    CHECK(win(0.5) == Approx(std::exp(1.0 - 1.0 / (1.0 - 0.25))).epsilon(1e-14));
    // mpmath: integral of exp(1 - 1/(1-y^2)) over (-1,1)
    CHECK(win.integral() == Approx(1.2069003224378762).epsilon(1e-10));

    const auto& ann = BumpFunction::annulus();
    CHECK(ann(0.3) == 1.0);
    CHECK(ann(-0.45) == 1.0);
    CHECK(ann(0.1) == 0.0);
    CHECK(ann(1.05) == 0.0);
    CHECK(ann(0.15) > 0.0);
    CHECK(ann(0.7) > 0.0);
    CHECK(ann.integral() == Approx(1.125).epsilon(1e-10));

    // all bumps are even
    for (double y : {0.13, 0.77, 1.31, 0.42}) {
        CHECK(cut(y) == Approx(cut(-y)).epsilon(1e-15));
        CHECK(win(0.9 * y) == Approx(win(-0.9 * y)).epsilon(1e-15));
        CHECK(ann(y) == Approx(ann(-y)).epsilon(1e-15));
    }
}

TEST_CASE("window transform frozen values and decay") {
    const auto& win = BumpFunction::window();
    CHECK(win.transform(0.0) == Approx(win.integral()).epsilon(1e-12));
    CHECK(win.transform(0.5) == Approx(0.49066317626717321).epsilon(1e-9));
    CHECK(win.transform(1.7) == Approx(0.042281982663470167).epsilon(1e-8));
    CHECK(win.transform(2.3) == Approx(win.transform(-2.3)).epsilon(1e-12));
    // rapid decay of a smooth bump's transform
    CHECK(std::abs(win.transform(12.0)) < 1e-3);
    CHECK(std::abs(win.transform(12.0)) < std::abs(win.transform(0.5)));
}

TEST_CASE("weyl sum symmetries") {
    const std::int64_t N = 40;
    CounterRng rng(7, 3);
    for (int i = 0; i < 30; ++i) {
        double t = rng.uniform(2 * i) - 0.5;
        double x = rng.uniform(2 * i + 1) - 0.5;
        Complex g = weyl_direct(t, x, N);
        // gamma is even, so x -> -x leaves the sum unchanged
        CHECK(std::abs(g - weyl_direct(t, -x, N)) < 1e-12);
        // conjugation flips both signs
        CHECK(std::abs(std::conj(g) - weyl_direct(-t, -x, N)) < 1e-12);
        // integer periodicity in both arguments
        CHECK(std::abs(g - weyl_direct(t + 1.0, x, N)) < 1e-9);
        CHECK(std::abs(g - weyl_direct(t, x + 1.0, N)) < 1e-9);
    }
    // t = x = 0 counts the full gamma mass over the integers
    double mass = 0.0;
    for (std::int64_t k = -2 * N; k <= 2 * N; ++k)
        mass += BumpFunction::cutoff()(static_cast<double>(k) / static_cast<double>(N));
    CHECK(weyl_direct(0.0, 0.0, N).real() == Approx(mass).epsilon(1e-13));
}

TEST_CASE("rational-argument overload matches the real-argument sum") {
    const std::int64_t N = 64;
    for (auto [a, q] : {std::pair<std::int64_t, std::int64_t>{1, 3}, {2, 7}, {5, 12}}) {
        MajorArcPoint p{a, q, 3.7e-4};
        Complex exact = weyl_direct(p, 0.21, N);
        Complex generic = weyl_direct(p.t(), 0.21, N);
        CHECK(std::abs(exact - generic) < 1e-9);
    }
}

TEST_CASE("oscillatory integral J basic identities") {
    const std::int64_t N = 50;
    // phi = 0, x + m/q = 0: plain integral of gamma(y/N), equals N * integral(gamma)
    Complex j0 = oscillatory_J(0.0, 0.0, 0, 7, N);
    CHECK(j0.real() == Approx(static_cast<double>(N) * BumpFunction::cutoff().integral())
                           .epsilon(1e-10));
    CHECK(std::abs(j0.imag()) < 1e-10);
    // phi = 0: Fourier transform of an even real function is real
    Complex j1 = oscillatory_J(0.013, 0.0, 2, 7, N);
    CHECK(std::abs(j1.imag()) < 1e-9);
    // conjugate symmetry in (x, phi) -> (-x, -phi)
    Complex jp = oscillatory_J(0.01, 2e-5, 1, 5, N);
    Complex jm = oscillatory_J(-0.01, -2e-5, -1, 5, N);
    CHECK(std::abs(std::conj(jp) - jm) < 1e-8);
}

TEST_CASE("poisson expansion reproduces the weyl sum on major arcs") {
    const std::int64_t N = 100;
    struct Case {
        std::int64_t a, q;
        double phi, x;
    };
    const Case cases[] = {
        {1, 3, 1.0e-5, 0.0},    {1, 3, -2.0e-5, 0.31},  {2, 5, 4.0e-6, -0.12},
        {3, 7, 0.0, 0.5},       {5, 11, 8.0e-6, 0.077}, {7, 13, -5.0e-6, -0.41},
    };
    for (const auto& c : cases) {
        MajorArcPoint p{c.a, c.q, c.phi};
        Complex direct = weyl_direct(p, c.x, N);
        Complex poisson = weyl_poisson(p, c.x, N);
        CHECK(std::abs(direct - poisson) <= 1e-6 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("poisson window validation") {
    MajorArcPoint p{1, 3, 1e-5};
    // a one-term window cannot absorb the m = 0 mass
    CHECK_THROWS_AS(weyl_poisson(p, 0.0, 100, BumpFunction::cutoff(), 0), WindowTooSmall);
}

TEST_CASE("dirichlet locator satisfies the approximation contract") {
    const std::int64_t N = 1000;
    CounterRng rng(19, 4);
    for (int i = 0; i < 200; ++i) {
        double t = rng.uniform(i);
        auto p = dirichlet_locate(t, N);
        CHECK(p.q >= 1);
        CHECK(p.q <= N);
        CHECK(std::gcd(p.a, p.q) == 1);
        double err = std::abs(t - static_cast<double>(p.a) / static_cast<double>(p.q));
        CHECK(err <= 1.0 / (static_cast<double>(N) * static_cast<double>(p.q)) + 1e-15);
        CHECK(std::abs(p.phi - (t - static_cast<double>(p.a) / static_cast<double>(p.q))) < 1e-15);
    }
    // exact rationals locate themselves
    auto r = dirichlet_locate(2.0 / 7.0, 100);
    CHECK(r.a == 2);
    CHECK(r.q == 7);
}

TEST_CASE("envelope sweep stays below the major-arc envelope") {
    auto rep = weyl_envelope_check(200, 150, 5);
    CHECK(rep.rows.size() == 150);
    auto ratio_col = std::find(rep.columns.begin(), rep.columns.end(), "ratio");
    REQUIRE(ratio_col != rep.columns.end());
    std::size_t idx = static_cast<std::size_t>(ratio_col - rep.columns.begin());
    double worst = 0.0;
    for (const auto& row : rep.rows) worst = std::max(worst, row[idx]);
    CHECK(worst == Approx(rep.summary.at("max_ratio").get<double>()).epsilon(1e-12));
    CHECK(worst > 0.0);
    // the envelope should dominate up to a modest constant
    CHECK(worst < 5.0);
}
