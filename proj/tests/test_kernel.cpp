#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "restlab/errors.hpp"
#include "restlab/kernel.hpp"
#include "restlab/rng.hpp"

#include <cmath>
#include <complex>

using namespace restlab;
using doctest::Approx;

TEST_CASE("kernel_direct sums shell phases") {
    auto shell = enumerate_shell(3, 29);
    std::vector<double> zero(3, 0.0);
    CHECK(kernel_direct(shell, zero).real() == Approx(72.0).epsilon(1e-13));
    CHECK(std::abs(kernel_direct(shell, zero).imag()) < 1e-12);
    // shells are symmetric under xi -> -xi, so K is real everywhere
    std::vector<double> x{0.21, -0.44, 0.09};
    CHECK(std::abs(kernel_direct(shell, x).imag()) < 1e-10);
    // empty shell
    auto empty = enumerate_shell(3, 7);
    CHECK(std::abs(kernel_direct(empty, zero)) == 0.0);
}

TEST_CASE("integral representation matches the direct kernel") {
    CounterRng rng(3, 6);
    for (auto [n, lambda] : {std::pair<int, std::int64_t>{2, 25}, {3, 21}, {3, 29}}) {
        auto shell = enumerate_shell(n, lambda);
        std::int64_t N = shell.scale_N();
        for (int i = 0; i < 5; ++i) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d)
                x[static_cast<std::size_t>(d)] =
                    rng.uniform(static_cast<std::uint64_t>(100 * i + d));
            Complex direct = kernel_direct(shell, x);
            Complex integral = kernel_integral(n, lambda, N, x);
            CHECK(std::abs(direct - integral) <= 1e-8 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("integral representation rejects coarse grids") {
    std::vector<double> x(3, 0.1);
    CHECK_THROWS_AS(kernel_integral(3, 29, 6, x, 50), InsufficientNodes);
}

TEST_CASE("prime mollifier has unit mass and valid geometry") {
    const std::int64_t N = 12, Q = 13;
    auto spec = build_mollifier(MollifierVariant::prime, Q, 0, N);
    CHECK(spec.moduli == std::vector<std::int64_t>{13, 17, 19, 23});
    CHECK(spec.fractions.size() == static_cast<std::size_t>(12 + 16 + 18 + 22));
    CHECK(spec.scale == Approx(10.0 * 13.0 * 13.0));
    CHECK(!spec.include_zero_fraction);

    // trapezoid mass over a fine grid (the bumps are smooth and narrow, so
    // sample at ~20 points per arc width)
    const std::int64_t G = 2000000;
    double mass = 0.0;
    for (std::int64_t j = 0; j < G; ++j)
        mass += mollifier_eval(spec, static_cast<double>(j) / static_cast<double>(G));
    mass /= static_cast<double>(G);
    CHECK(mass == Approx(1.0).epsilon(1e-6));

    // nonnegative, vanishing away from every arc
    CHECK(mollifier_eval(spec, 0.5 / 13.0) == 0.0);
    CHECK(mollifier_eval(spec, 1.0 / 13.0) > 0.0);
    for (double t : {0.011, 0.237, 0.613, 0.789})
        CHECK(mollifier_eval(spec, t) >= 0.0);
    // torus periodicity
    CHECK(mollifier_eval(spec, 0.3) == Approx(mollifier_eval(spec, 1.3)).epsilon(1e-13));
    // mean-one in Fourier language
    MollifierTransform tr(spec);
    CHECK(tr.coeff(0) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("prime mollifier parameter validation") {
    CHECK_THROWS_AS(build_mollifier(MollifierVariant::prime, 5, 0, 12), Error);
    CHECK_THROWS_AS(build_mollifier(MollifierVariant::prime, 200, 0, 12), Error);
}

TEST_CASE("mollifier transform agrees with direct arc quadrature") {
    const std::int64_t N = 12, Q = 13, lambda = 139;
    auto spec = build_mollifier(MollifierVariant::prime, Q, 0, N);
    CounterRng rng(41, 7);
    for (int i = 0; i < 25; ++i) {
        std::vector<std::int64_t> k(3);
        for (int d = 0; d < 3; ++d)
            k[static_cast<std::size_t>(d)] =
                static_cast<std::int64_t>(rng.integer_below(
                    static_cast<std::uint64_t>(3 * i + d), 2 * 2 * N + 1)) - 2 * N;
        for (auto tag : {KernelPieceTag::KQ, KernelPieceTag::KminusKQ}) {
            Complex closed = fourier_coefficient(tag, spec, lambda, k);
            Complex quad = fourier_coefficient_quadrature(tag, spec, lambda, k);
            CHECK(std::abs(closed - quad) <= 1e-8 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("kernel piece: quadrature, cached evaluator, and Fourier sum agree") {
    const int n = 3;
    const std::int64_t N = 12, Q = 13, lambda = 139;
    auto spec = build_mollifier(MollifierVariant::prime, Q, 0, N);
    KernelPieceEvaluator fast(spec, n, lambda);
    MollifierTransform tr(spec);

    CounterRng rng(8, 9);
    for (int i = 0; i < 4; ++i) {
        std::vector<double> x(3);
        for (int d = 0; d < 3; ++d)
            x[static_cast<std::size_t>(d)] = rng.uniform(static_cast<std::uint64_t>(3 * i + d));

        KernelSample slow = kernel_piece(spec, n, lambda, x);
        Complex cached = fast(x);
        CHECK(std::abs(slow.value - cached) < 1e-6 * std::max(1.0, std::abs(slow.value)));

        // Fourier synthesis route: sum over the full k box, memoized transform
        std::int64_t L = 2 * N;
        CompensatedSum synth;
        auto gam = [&](std::int64_t k) {
            return BumpFunction::cutoff()(static_cast<double>(k) / static_cast<double>(N));
        };
        for (std::int64_t k1 = -L; k1 <= L; ++k1)
            for (std::int64_t k2 = -L; k2 <= L; ++k2)
                for (std::int64_t k3 = -L; k3 <= L; ++k3) {
                    double g = gam(k1) * gam(k2) * gam(k3);
                    if (g == 0.0) continue;
                    double w = tr.coeff(k1 * k1 + k2 * k2 + k3 * k3 - lambda);
                    if (w == 0.0) continue;
                    double dot = static_cast<double>(k1) * x[0] + static_cast<double>(k2) * x[1] +
                                 static_cast<double>(k3) * x[2];
                    synth.add(g * w * unit_phase(dot));
                }
        CHECK(std::abs(synth.value() - cached) < 1e-6 * std::max(1.0, std::abs(cached)));
    }
}

TEST_CASE("dyadic decomposition partitions the torus") {
    const int n = 1;
    const std::int64_t lambda = 16387, N = 129;
    auto dec = build_dyadic_decomposition(n, lambda, N);
    CHECK(!dec.pieces.empty());
    // Q = 1 block carries the zero fraction
    CHECK(dec.pieces.front().Q == 1);
    CHECK(dec.pieces.front().include_zero_fraction);
    // every Q is dyadic and below N/100
    for (const auto& piece : dec.pieces) {
        CHECK((piece.Q & (piece.Q - 1)) == 0);
        CHECK(100 * piece.Q < N);
        CHECK(piece.Q <= (std::int64_t{1} << piece.s));
        CHECK((std::int64_t{1} << piece.s) <= N);
    }

    // rho + sum eta = 1 identically
    CounterRng rng(15, 8);
    for (int i = 0; i < 1000; ++i) {
        double t = rng.uniform(static_cast<std::uint64_t>(i));
        double total = dec.rho(t);
        for (const auto& piece : dec.pieces) total += mollifier_eval(piece, t);
        CHECK(total == Approx(1.0).epsilon(1e-12));
    }

    // closed-form mean of rho against a grid average
    const std::int64_t G = 400000;
    double mean = 0.0;
    for (std::int64_t j = 0; j < G; ++j)
        mean += dec.rho(static_cast<double>(j) / static_cast<double>(G));
    mean /= static_cast<double>(G);
    CHECK(mean == Approx(dec.rho_mean()).epsilon(1e-5));
    CHECK(dec.rho_mean() > 0.9);
    CHECK(dec.rho_mean() < 1.0);

    // alpha weights are finite and small relative to the main term
    for (const auto& piece : dec.pieces) {
        double a = alpha_qs(dec, piece);
        CHECK(std::isfinite(a));
        CHECK(std::fabs(a) < 1.0);
    }
}

TEST_CASE("sup norm estimate is a lower bound anchored at the origin") {
    auto shell = enumerate_shell(3, 29);
    auto f = [&](std::span<const double> x) { return kernel_direct(shell, x); };
    auto est = sup_norm_estimate(f, 3, 50, 2, 7);
    CHECK(est.value >= static_cast<double>(shell.size()) - 1e-9);
    CHECK(est.evaluations > 50);
    CHECK(est.argmax.size() == 3);
    // reported value is attained at the certificate point
    CHECK(std::abs(f(est.argmax)) == Approx(est.value).epsilon(1e-12));

    auto empty = enumerate_shell(3, 7);
    auto g = [&](std::span<const double> x) { return kernel_direct(empty, x); };
    CHECK(sup_norm_estimate(g, 3, 20, 1, 7).value == 0.0);
}

TEST_CASE("fourier tail sup dominates the tail coefficients") {
    const std::int64_t N = 12, Q = 13, lambda = 139;
    auto spec = build_mollifier(MollifierVariant::prime, Q, 0, N);
    double tail = fourier_tail_sup(spec, 3, lambda);
    CHECK(tail > 0.0);
    MollifierTransform tr(spec);
    // spot values never exceed the reported sup
    for (std::int64_t l : {-139ll, -20ll, 1ll, 57ll, 300ll}) {
        double v = std::fabs((l == 0 ? 1.0 : 0.0) - tr.coeff(l));
        CHECK(v <= tail + 1e-12);
    }
}

TEST_CASE("level-set chain inequalities hold for a random draw") {
    auto shell = enumerate_shell(3, 139);
    const std::size_t P = shell.size();
    CounterRng rng(99, 37);
    std::vector<Complex> a(P);
    double norm2 = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
        a[p] = Complex{rng.normal(2 * p), rng.normal(2 * p + 1)};
        norm2 += std::norm(a[p]);
    }
    for (auto& c : a) c /= std::sqrt(norm2);

    auto rep = levelset_chain_check(shell, a, 1.5, 13, 20000, 4);
    CHECK(rep.measure > 0.0);
    CHECK(rep.measure < 1.0);
    CHECK(rep.correlation >= rep.alpha * rep.measure - 3.0 * rep.correlation_se);
    CHECK(rep.chain1);
    CHECK(rep.chain2);
    CHECK(rep.chain3);
}
