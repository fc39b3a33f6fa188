#pragma once

#include "restlab/arith.hpp"
#include "restlab/bump.hpp"
#include "restlab/phase.hpp"
#include "restlab/sphere.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

namespace restlab {

// K(x) = sum over shell points of e(xi . x)
Complex kernel_direct(const SphereShell& shell, std::span<const double> x);

// Integral representation of K over the t-circle; exact for a uniform grid
// with M nodes once M exceeds the trig-polynomial degree of the integrand.
// Throws InsufficientNodes below that threshold. M = -1 picks the default
// 4 n (2N)^2 + lambda + 1.
Complex kernel_integral(int n, std::int64_t lambda, std::int64_t N, std::span<const double> x,
                        std::int64_t M = -1, const BumpFunction& gamma = BumpFunction::cutoff());

enum class MollifierVariant { prime, dyadic };

// Farey-fraction mollifier: bumps of width 1/scale at each fraction.
//   prime: prime moduli in [Q, 2Q], window bump, scale 10 Q^2, mass one.
//   dyadic: all moduli in [Q, 2Q), annulus bump, scale N 2^s, no normalization.
struct MollifierSpec {
    MollifierVariant variant;
    std::int64_t Q = 0;
    std::int64_t s = 0; // exponent: arc scale is N * 2^s (dyadic only)
    std::int64_t N = 0;
    std::vector<std::int64_t> moduli;
    std::vector<FareyFraction> fractions; // sorted; excludes 0/1
    bool include_zero_fraction = false;   // dyadic block Q = 1 carries 0/1
    double c_Q = 1.0;
    double scale = 0.0;
    const BumpFunction* bump = nullptr;
    double bump_integral = 0.0;

    std::size_t arc_count() const { return fractions.size() + (include_zero_fraction ? 1 : 0); }
};

MollifierSpec build_mollifier(MollifierVariant variant, std::int64_t Q, std::int64_t s,
                              std::int64_t N);

// eta_Q(t) (prime) or eta_{Q,s}(t) (dyadic), t on the torus.
double mollifier_eval(const MollifierSpec& spec, double t);

enum class KernelPieceTag { K, KQ, KQs, Kminor, K1, KminusKQ };

struct KernelSample {
    KernelPieceTag piece;
    std::vector<double> x;
    Complex value;
    std::int64_t quadrature_nodes = 0;
    double est_error = 0.0;
};

// Mollified kernel piece at one point, integrated arc by arc.
KernelSample kernel_piece(const MollifierSpec& spec, int n, std::int64_t lambda,
                          std::span<const double> x, double tol = -1.0,
                          const BumpFunction& gamma = BumpFunction::cutoff());

// Fourier transform of the mollifier at integer frequencies:
// coeff(m) = integral of eta_piece(t) e(m t) dt, real by symmetry. Bump
// transforms are quadrature-cached; the Farey phase sums are exact
// Ramanujan-sum arithmetic.
class MollifierTransform {
public:
    explicit MollifierTransform(const MollifierSpec& spec);
    double coeff(std::int64_t m) const;

private:
    const MollifierSpec* spec_;
    mutable std::map<std::int64_t, double> memo_;
};

// F(piece)(k) in closed form: prod gamma(k_i/N) * w(|k|^2 - lambda), where w
// is the mollifier transform (KQ / KQs) or one minus it (KminusKQ).
Complex fourier_coefficient(KernelPieceTag piece, const MollifierSpec& spec, std::int64_t lambda,
                            std::span<const std::int64_t> k,
                            const BumpFunction& gamma = BumpFunction::cutoff());

// Direct-quadrature oracle for the same coefficient (integrates the
// defining t-integral instead of using Ramanujan-sum arithmetic).
Complex fourier_coefficient_quadrature(KernelPieceTag piece, const MollifierSpec& spec,
                                       std::int64_t lambda, std::span<const std::int64_t> k,
                                       const BumpFunction& gamma = BumpFunction::cutoff());

// Cached fixed-node evaluator for sweeping one kernel piece over many x.
class KernelPieceEvaluator {
public:
    KernelPieceEvaluator(const MollifierSpec& spec, int n, std::int64_t lambda,
                         const BumpFunction& gamma = BumpFunction::cutoff());
    Complex operator()(std::span<const double> x) const;
    std::int64_t node_count() const { return static_cast<std::int64_t>(nodes_.size()); }

private:
    int n_;
    std::int64_t N_;
    std::int64_t L_; // k range limit (2N for the standard cutoff)
    std::vector<double> nodes_;
    std::vector<Complex> weights_; // GL weight * mollifier * e(-lambda t)
    std::vector<double> gamma_k_;  // gamma(k/N), k = -L..L
};

// The dyadic mollifier family: all (Q, s) blocks with dyadic Q below
// N/denominator_cutoff and Q <= 2^s <= N.
struct DyadicDecomposition {
    int n;
    std::int64_t lambda;
    std::int64_t N;
    std::vector<MollifierSpec> pieces;

    double rho(double t) const; // 1 - sum of all eta_{Q,s}(t)
    double rho_mean() const;    // F(rho)(0), exact from bump masses
};

DyadicDecomposition build_dyadic_decomposition(int n, std::int64_t lambda, std::int64_t N,
                                           double q_cutoff = -1.0 /* default N/100 */);

// alpha_{Q,s} = F(K^{Q,s})(0) / F(rho)(0)
double alpha_qs(const DyadicDecomposition& dec, const MollifierSpec& piece,
                const BumpFunction& gamma = BumpFunction::cutoff());

struct SupNormEstimate {
    double value = 0.0;
    std::vector<double> argmax;
    std::int64_t evaluations = 0;
};

// Lower-bound sup-norm search: random starts (origin always included) plus
// coordinate-wise golden-section ascent from the best starts.
SupNormEstimate sup_norm_estimate(const std::function<Complex(std::span<const double>)>& f, int n,
                                  int random_samples, int ascent_sweeps, std::uint64_t seed);

// Level-set duality chain for F = sum a_xi e(xi . x) under ||a||_2 = 1:
//   alpha |E_a| <= <F, f>,   alpha^2 |E_a|^2 <= <K*f, f>,
//   <K*f, f> <= ||K^Q||_inf |E_a|^2 + ||F(K - K^Q)||_inf |E_a|.
struct LevelsetChainReport {
    double alpha = 0.0;
    std::int64_t samples = 0;
    double measure = 0.0, measure_se = 0.0;
    double correlation = 0.0, correlation_se = 0.0;
    double quad_form = 0.0, quad_form_bias = 0.0;
    double sup_kq = 0.0;
    double fourier_tail = 0.0;
    bool chain1 = false, chain2 = false, chain3 = false;
};

LevelsetChainReport levelset_chain_check(const SphereShell& shell,
                                         std::span<const Complex> coefficients, double alpha,
                                         std::int64_t Q, std::int64_t samples, std::uint64_t seed);

// max over k (|k_i| <= 2N) of |F(K - K^Q)(k)|, via the closed form.
double fourier_tail_sup(const MollifierSpec& spec, int n, std::int64_t lambda,
                        const BumpFunction& gamma = BumpFunction::cutoff());

} // namespace restlab
