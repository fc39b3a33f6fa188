// Scratch cross-checks used during development; not installed.
#include "restlab/exp_sums.hpp"
#include "restlab/kernel.hpp"
#include "restlab/restriction.hpp"
#include "restlab/weyl.hpp"

#include <cstdio>

using namespace restlab;

int main() {
    // Gauss modulus
    for (std::int64_t q : {3, 5, 7, 9, 15, 101}) {
        double m = std::abs(gauss_sum(q).value);
        std::printf("gauss |G(%ld)| = %.12f (want %.12f)\n", q, m, 1.0 / std::sqrt((double)q));
    }
    // quad sum closed form vs direct
    for (std::int64_t q : {3, 5, 7, 9, 25}) {
        for (std::int64_t a : {1, 2}) {
            if (std::gcd(a, q) != 1) continue;
            auto d = quad_sum(a, 3, q).value;
            auto c = quad_sum_closed(a, 3, q).value;
            std::printf("quad q=%ld a=%ld diff=%.2e\n", q, a, std::abs(d - c));
        }
    }
    // salie
    for (std::int64_t q : {5, 13, 17}) {
        auto d = salie_direct(2, 2, q).value;
        auto e = salie_explicit(2, 2, q).value;
        std::printf("salie q=%ld diff=%.2e\n", q, std::abs(d - e));
    }
    // Poisson identity
    {
        MajorArcPoint arc{1, 7, 0.0003};
        double x = 0.37;
        auto d = weyl_direct(arc, x, 100);
        auto p = weyl_poisson(arc, x, 100);
        std::printf("poisson diff=%.2e (|G|=%.4f)\n", std::abs(d - p), std::abs(d));
    }
    // kernel integral vs direct
    {
        auto shell = enumerate_shell(3, 29);
        std::vector<double> x{0.12, 0.55, 0.91};
        auto kd = kernel_direct(shell, x);
        auto ki = kernel_integral(3, 29, shell.scale_N(), x);
        std::printf("kernel e8 diff=%.2e (|K|=%.4f, P=%zu)\n", std::abs(kd - ki), std::abs(kd),
                    shell.size());
    }
    // mollifier closed form vs quadrature (prime)
    {
        std::int64_t N = 12, lambda = 139, Q = 13;
        auto spec = build_mollifier(MollifierVariant::prime, Q, 0, N);
        std::vector<std::int64_t> k{3, -5, 1};
        auto cf = fourier_coefficient(KernelPieceTag::KminusKQ, spec, lambda, k);
        auto qf = fourier_coefficient_quadrature(KernelPieceTag::KminusKQ, spec, lambda, k);
        std::printf("fourier closed vs quad diff=%.2e (cf=%.6f)\n", std::abs(cf - qf),
                    cf.real());
        // kernel_piece vs evaluator vs Fourier sum route
        std::vector<double> x{0.21, 0.43, 0.08};
        auto piece = kernel_piece(spec, 3, lambda, x);
        KernelPieceEvaluator ev(spec, 3, lambda);
        std::printf("piece quad=%.6f+%.6fi eval=%.6f+%.6fi nodes=%ld\n", piece.value.real(),
                    piece.value.imag(), ev(x).real(), ev(x).imag(), piece.quadrature_nodes);
        // Fourier-sum oracle: sum over k of gamma-prod U(|k|^2-lambda) e(k.x)
        MollifierTransform tr(spec);
        Complex acc = 0.0;
        std::int64_t L = 2 * N;
        for (std::int64_t k1 = -L; k1 <= L; ++k1)
            for (std::int64_t k2 = -L; k2 <= L; ++k2)
                for (std::int64_t k3 = -L; k3 <= L; ++k3) {
                    std::vector<std::int64_t> kk{k1, k2, k3};
                    auto c = fourier_coefficient(KernelPieceTag::KQ, spec, lambda, kk);
                    if (std::abs(c) < 1e-18) continue;
                    acc += c * unit_phase(k1 * x[0] + k2 * x[1] + k3 * x[2]);
                }
        std::printf("fourier-sum route=%.6f+%.6fi\n", acc.real(), acc.imag());
    }
    // dyadic partition of unity (N large enough for nonempty family)
    {
        auto dec = build_dyadic_decomposition(1, 16387, 129);
        std::printf("dyadic pieces=%zu rho_mean=%.6f\n", dec.pieces.size(), dec.rho_mean());
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            double t = (i + 0.5) / 200.0;
            double total = dec.rho(t);
            for (const auto& p : dec.pieces) total += mollifier_eval(p, t);
            worst = std::max(worst, std::fabs(total - 1.0));
        }
        std::printf("dyadic partition worst dev=%.2e\n", worst);
    }
    // restriction basics
    {
        auto shell = enumerate_shell(2, 25);
        auto c = make_coefficients(shell, CoefficientKind::random_gaussian, 5);
        std::printf("parseval grid=%.12f (want 1)\n", lp_norm_grid(c, 2, 101));
        auto est = lp_norm_mc(c, 2.0, 20000, 9);
        std::printf("parseval mc=%.4f +- %.4f\n", est.value, est.std_error);
    }
    return 0;
}
