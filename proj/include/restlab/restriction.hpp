#pragma once

#include "restlab/phase.hpp"
#include "restlab/report.hpp"
#include "restlab/sphere.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace restlab {

enum class CoefficientKind { singleton, constant, random_signs, random_gaussian };

CoefficientKind coefficient_kind_from_string(const std::string& name);
std::string to_string(CoefficientKind kind);

// Coefficients a_xi over a fixed shell; F(x) = sum a_xi e(xi . x).
struct CoefficientVector {
    const SphereShell* shell = nullptr;
    std::vector<Complex> a;
    CoefficientKind kind = CoefficientKind::constant;
    bool normalized = false; // ||a||_2 == 1
    double norm1 = 0.0;
    double norm2 = 0.0;
};

// singleton: delta at the first shell point. constant: a_xi = 1 un-normalized
// (F reproduces the kernel K). random_signs / random_gaussian: normalized.
CoefficientVector make_coefficients(const SphereShell& shell, CoefficientKind kind,
                                    std::uint64_t seed);

Complex extension_eval(const CoefficientVector& c, std::span<const double> x);

struct NormEstimate {
    double p = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

// ((1/M) sum |F(x_i)|^p)^{1/p} over uniform x_i; delta-method standard error.
NormEstimate lp_norm_mc(const CoefficientVector& c, double p, std::int64_t samples,
                        std::uint64_t seed);

// Same estimates for several p on one shared sample set (Jensen-monotone).
std::vector<NormEstimate> lp_norms_mc(const CoefficientVector& c, std::span<const double> ps,
                                      std::int64_t samples, std::uint64_t seed);

// Importance-mixture estimator for sharply peaked F (the kernel): half the
// samples uniform, half from the box |x_i| <= 1/(4N), unbiased via density
// weights. Uniform MC misses the 1/N-width peak that carries the L^p mass.
NormEstimate lp_norm_mc_peaked(const CoefficientVector& c, double p, std::int64_t samples,
                               std::uint64_t seed);

// Exact L^p norm for even p on a uniform G^n grid, exact once G > 2 p N.
double lp_norm_grid(const CoefficientVector& c, int p, std::int64_t G);

struct LevelSetEstimate {
    double alpha = 0.0;
    double measure = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

// |{x : |F(x)| > alpha}| for each alpha (ascending), one shared sample pass.
std::vector<LevelSetEstimate> level_set_mc(const CoefficientVector& c,
                                           std::span<const double> alphas, std::int64_t samples,
                                           std::uint64_t seed);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual = 0.0; // RMS residual of log(value)
};

// Least squares of log(value) against log(N) over (N, value) points.
ExponentFit exponent_fit(std::span<const std::pair<double, double>> points);

// Dyadic grid selection: for each power of two in [lo, hi], the smallest
// lambda >= 2^k whose shell has at least N^{n-2}/4 points (and, for n = 3,
// is not obstructed). Powers of two themselves have degenerate shells
// (r_3(4^a) = 6, r_4(2^k) = 24), which would poison exponent fits.
std::vector<std::int64_t> dyadic_lambda_grid(int n, std::int64_t lo, std::int64_t hi);

// |F(x_i)| at M uniform samples, deterministic order (slot-per-index).
std::vector<double> extension_abs_samples(const CoefficientVector& c, std::int64_t samples,
                                          std::uint64_t seed);

// Lower-bound constructions across a lambda grid: kernel peak on the box
// |x_i| <= 1/(100 N), the kernel L^p ratio with its fitted exponent against
// (n-2)/2 - n/p, and best-of-`draws` random-sign norms vs ||a||_2.
nlohmann::json lower_bound_suite(int n, std::span<const std::int64_t> lambdas, double p,
                                 std::int64_t samples, int draws, std::uint64_t seed);

// Growth-rate experiment: per lambda, best-of-`draws` random-sign L^p norm
// plus the kernel construction; fits the exponent in N and reports it next
// to the predicted max((n-2)/2 - n/p, 0).
nlohmann::json theorem1_experiment(int n, double p, std::span<const std::int64_t> lambdas,
                                   std::int64_t samples, int draws, std::uint64_t seed);

// Flat CSV projection of a theorem1/lower-bound JSON report.
ExperimentReport flatten_per_lambda(const nlohmann::json& report);

} // namespace restlab
