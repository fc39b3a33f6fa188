#include "restlab/kernel.hpp"

#include "restlab/errors.hpp"
#include "restlab/quadrature.hpp"
#include "restlab/rng.hpp"
#include "restlab/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace restlab {

namespace {

double torus_distance(double t, double c) {
    double d = t - c;
    d -= std::round(d);
    return d;
}

// Frequency content (cycles per unit t) of prod_j G(t, x_j) e(-lambda t).
double integrand_freq(int n, std::int64_t lambda, std::int64_t N) {
    double L = 2.0 * static_cast<double>(N);
    return static_cast<double>(n) * L * L + static_cast<double>(lambda);
}

} // namespace

Complex kernel_direct(const SphereShell& shell, std::span<const double> x) {
    if (shell.empty()) return 0.0;
    std::vector<Complex> phases(shell.size());
    shell_phases(shell, x, phases);
    CompensatedSum sum;
    for (const Complex& v : phases) sum.add(v);
    return sum.value();
}

Complex kernel_integral(int n, std::int64_t lambda, std::int64_t N, std::span<const double> x,
                        std::int64_t M, const BumpFunction& gamma) {
    if (n < 1 || lambda < 1 || N < 1) throw Error("kernel_integral: bad parameters");
    double L = 2.0 * static_cast<double>(N);
    std::int64_t degree = static_cast<std::int64_t>(static_cast<double>(n) * L * L) + lambda;
    if (M < 0) M = 4 * static_cast<std::int64_t>(static_cast<double>(n) * L * L) + lambda + 1;
    if (M < degree + 1)
        throw InsufficientNodes("kernel_integral: grid cannot resolve the integrand degree");
    CompensatedSum sum;
    for (std::int64_t j = 0; j < M; ++j) {
        double t = static_cast<double>(j) / static_cast<double>(M);
        Complex prod = phase_frac(-lambda * j, M); // e(-lambda t) exactly on the grid
        for (int d = 0; d < n; ++d) prod *= weyl_direct(t, x[static_cast<std::size_t>(d)], N, gamma);
        sum.add(prod);
    }
    return sum.value() / static_cast<double>(M);
}

MollifierSpec build_mollifier(MollifierVariant variant, std::int64_t Q, std::int64_t s,
                              std::int64_t N) {
    MollifierSpec spec;
    spec.variant = variant;
    spec.Q = Q;
    spec.s = s;
    spec.N = N;
    if (variant == MollifierVariant::prime) {
        if (!(N <= Q && Q <= N * N)) throw Error("build_mollifier: prime needs N <= Q <= N^2");
        spec.moduli = primes_in(Q, 2 * Q);
        if (spec.moduli.empty()) throw EmptyModuli("build_mollifier: no primes in [Q, 2Q]");
        spec.fractions = farey_set(spec.moduli);
        spec.bump = &BumpFunction::window();
        spec.bump_integral = spec.bump->integral();
        spec.scale = 10.0 * static_cast<double>(Q) * static_cast<double>(Q);
        // c_Q = 10 Q^2 / N_Q for the unit-mass bump; dividing by the raw
        // bump integral makes int eta_Q dt = 1 exactly.
        spec.c_Q = spec.scale /
                   (static_cast<double>(spec.fractions.size()) * spec.bump_integral);
    } else {
        if (!(Q >= 1 && 100 * Q < N)) throw Error("build_mollifier: dyadic needs Q < N/100");
        std::int64_t pow2s = std::int64_t{1} << s;
        if (!(Q <= pow2s && pow2s <= N)) throw Error("build_mollifier: dyadic needs Q <= 2^s <= N");
        for (std::int64_t q = Q; q < 2 * Q; ++q) spec.moduli.push_back(q);
        spec.fractions = farey_set(spec.moduli);
        spec.include_zero_fraction = (Q == 1);
        spec.bump = &BumpFunction::annulus();
        spec.bump_integral = spec.bump->integral();
        spec.scale = static_cast<double>(N) * static_cast<double>(pow2s);
        spec.c_Q = 1.0;
    }
    // Bump supports must be pairwise disjoint: adjacent Farey gaps exceed
    // twice the arc radius 1/scale. Checked exactly by cross multiplication.
    double radius = spec.bump->support_radius() / spec.scale;
    for (std::size_t i = 1; i < spec.fractions.size(); ++i) {
        const auto& lo = spec.fractions[i - 1];
        const auto& hi = spec.fractions[i];
        // hi - lo = (hi.a lo.q - lo.a hi.q) / (hi.q lo.q) > 2 * radius
        auto num = static_cast<__int128>(hi.a) * lo.q - static_cast<__int128>(lo.a) * hi.q;
        auto gap = static_cast<double>(static_cast<std::int64_t>(num)) /
                   (static_cast<double>(hi.q) * static_cast<double>(lo.q));
        if (gap <= 2.0 * radius) throw Error("build_mollifier: overlapping arc supports");
    }
    if (!spec.fractions.empty()) {
        // wraparound gaps to 0 and 1
        double first = spec.fractions.front().value();
        double last = 1.0 - spec.fractions.back().value();
        double edge = spec.include_zero_fraction ? radius : 0.0;
        if (first <= radius + edge || last <= radius + edge)
            throw Error("build_mollifier: arc support crosses the torus seam");
    }
    return spec;
}

double mollifier_eval(const MollifierSpec& spec, double t) {
    t -= std::floor(t);
    double radius = spec.bump->support_radius() / spec.scale;
    double total = 0.0;
    if (spec.include_zero_fraction) {
        double d = torus_distance(t, 0.0);
        if (std::fabs(d) < radius) total += (*spec.bump)(d * spec.scale);
    }
    // fractions are sorted; only a small window can contribute
    auto lo = std::lower_bound(spec.fractions.begin(), spec.fractions.end(), t - radius,
                               [](const FareyFraction& f, double v) { return f.value() < v; });
    for (auto it = lo; it != spec.fractions.end() && it->value() < t + radius; ++it)
        total += (*spec.bump)((t - it->value()) * spec.scale);
    return spec.c_Q * total;
}

KernelSample kernel_piece(const MollifierSpec& spec, int n, std::int64_t lambda,
                          std::span<const double> x, double tol, const BumpFunction& gamma) {
    std::int64_t N = spec.N;
    if (tol <= 0.0) tol = 1e-8 * std::pow(static_cast<double>(N), n);
    double arc_tol = tol / static_cast<double>(std::max<std::size_t>(spec.arc_count(), 1));
    double radius = spec.bump->support_radius() / spec.scale;
    double freq = integrand_freq(n, lambda, N) + spec.scale / 4.0;

    KernelSample sample;
    sample.piece = spec.variant == MollifierVariant::prime ? KernelPieceTag::KQ : KernelPieceTag::KQs;
    sample.x.assign(x.begin(), x.end());

    CompensatedSum total;
    auto add_arc = [&](std::int64_t a, std::int64_t q, double center) {
        auto integrand = [&](double t) {
            double b = (*spec.bump)((t - center) * spec.scale);
            if (b == 0.0) return Complex{0.0, 0.0};
            MajorArcPoint arc{a, q, t - center};
            Complex prod{spec.c_Q * b, 0.0};
            for (int d = 0; d < n; ++d) prod *= weyl_direct(arc, x[static_cast<std::size_t>(d)], N, gamma);
            return prod * phase_frac(-lambda * a, q) * unit_phase(-static_cast<double>(lambda) * (t - center));
        };
        QuadResult r = integrate_oscillatory(integrand, center - radius, center + radius, freq, arc_tol);
        if (!r.converged) throw QuadratureNotConverged("kernel_piece: arc quadrature stalled");
        total.add(r.value);
        sample.quadrature_nodes += r.nodes;
        sample.est_error += r.est_error;
    };

    if (spec.include_zero_fraction) add_arc(0, 1, 0.0);
    for (const auto& f : spec.fractions) add_arc(f.a, f.q, f.value());
    sample.value = total.value();
    return sample;
}

MollifierTransform::MollifierTransform(const MollifierSpec& spec) : spec_(&spec) {}

double MollifierTransform::coeff(std::int64_t m) const {
    auto it = memo_.find(m);
    if (it != memo_.end()) return it->second;
    const MollifierSpec& spec = *spec_;
    // sum of e(m a/q) over all arc centers
    double farey_sum = spec.include_zero_fraction ? 1.0 : 0.0;
    for (std::int64_t q : spec.moduli)
        farey_sum += static_cast<double>(ramanujan_sum(q, m));
    double value = spec.c_Q / spec.scale * spec.bump->transform(static_cast<double>(m) / spec.scale) *
                   farey_sum;
    memo_.emplace(m, value);
    return value;
}

Complex fourier_coefficient(KernelPieceTag piece, const MollifierSpec& spec, std::int64_t lambda,
                            std::span<const std::int64_t> k, const BumpFunction& gamma) {
    std::int64_t norm2 = 0;
    double gprod = 1.0;
    for (std::int64_t ki : k) {
        norm2 += ki * ki;
        gprod *= gamma(static_cast<double>(ki) / static_cast<double>(spec.N));
    }
    std::int64_t l = norm2 - lambda;
    MollifierTransform transform(spec);
    double w = transform.coeff(l);
    switch (piece) {
        case KernelPieceTag::KQ:
        case KernelPieceTag::KQs: return gprod * w;
        case KernelPieceTag::KminusKQ: return gprod * ((l == 0 ? 1.0 : 0.0) - w);
        default: throw Error("fourier_coefficient: unsupported piece");
    }
}

Complex fourier_coefficient_quadrature(KernelPieceTag piece, const MollifierSpec& spec,
                                       std::int64_t lambda, std::span<const std::int64_t> k,
                                       const BumpFunction& gamma) {
    std::int64_t norm2 = 0;
    double gprod = 1.0;
    for (std::int64_t ki : k) {
        norm2 += ki * ki;
        gprod *= gamma(static_cast<double>(ki) / static_cast<double>(spec.N));
    }
    std::int64_t l = norm2 - lambda;
    double radius = spec.bump->support_radius() / spec.scale;
    double freq = std::fabs(static_cast<double>(l)) + spec.scale / 4.0;
    CompensatedSum sum;
    auto add_arc = [&](std::int64_t a, std::int64_t q, double center) {
        auto integrand = [&](double t) {
            double b = (*spec.bump)((t - center) * spec.scale);
            return Complex{spec.c_Q * b, 0.0} * phase_frac(l * a, q) *
                   unit_phase(static_cast<double>(l) * (t - center));
        };
        QuadResult r = integrate_oscillatory(integrand, center - radius, center + radius, freq, 1e-12);
        if (!r.converged) throw QuadratureNotConverged("fourier_coefficient_quadrature");
        sum.add(r.value);
    };
    if (spec.include_zero_fraction) add_arc(0, 1, 0.0);
    for (const auto& f : spec.fractions) add_arc(f.a, f.q, f.value());
    Complex w = sum.value();
    switch (piece) {
        case KernelPieceTag::KQ:
        case KernelPieceTag::KQs: return gprod * w;
        case KernelPieceTag::KminusKQ: return gprod * (Complex{l == 0 ? 1.0 : 0.0, 0.0} - w);
        default: throw Error("fourier_coefficient_quadrature: unsupported piece");
    }
}

KernelPieceEvaluator::KernelPieceEvaluator(const MollifierSpec& spec, int n, std::int64_t lambda,
                                           const BumpFunction& gamma)
    : n_(n), N_(spec.N) {
    L_ = static_cast<std::int64_t>(std::floor(gamma.support_radius() * static_cast<double>(N_)));
    gamma_k_.resize(static_cast<std::size_t>(2 * L_ + 1));
    for (std::int64_t k = -L_; k <= L_; ++k)
        gamma_k_[static_cast<std::size_t>(k + L_)] =
            gamma(static_cast<double>(k) / static_cast<double>(N_));

    double radius = spec.bump->support_radius() / spec.scale;
    double freq = integrand_freq(n, lambda, N_);
    int panels = 1 + static_cast<int>(std::ceil(2.0 * radius * freq));

    auto add_arc = [&](double center) {
        double h = 2.0 * radius / panels;
        for (int p = 0; p < panels; ++p) {
            double mid = center - radius + (p + 0.5) * h;
            double half = 0.5 * h;
            for (std::size_t i = 0; i < kGL16Nodes.size(); ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    double t = mid + sgn * half * kGL16Nodes[i];
                    double b = (*spec.bump)((t - center) * spec.scale);
                    nodes_.push_back(t);
                    weights_.push_back(kGL16Weights[i] * half * spec.c_Q * b *
                                       unit_phase(-static_cast<double>(lambda) * t));
                }
            }
        }
    };
    if (spec.include_zero_fraction) add_arc(0.0);
    for (const auto& f : spec.fractions) add_arc(f.value());
}

Complex KernelPieceEvaluator::operator()(std::span<const double> x) const {
    // Per-coordinate folded phase vectors w_j[k] = gamma_k (e(kx_j) + e(-kx_j))
    std::size_t K = static_cast<std::size_t>(L_) + 1;
    std::vector<Complex> folded(static_cast<std::size_t>(n_) * K);
    for (int j = 0; j < n_; ++j) {
        Complex step = unit_phase(x[static_cast<std::size_t>(j)]);
        Complex cur = step;
        folded[static_cast<std::size_t>(j) * K] =
            Complex{gamma_k_[static_cast<std::size_t>(L_)], 0.0};
        for (std::size_t k = 1; k < K; ++k) {
            double g = gamma_k_[static_cast<std::size_t>(L_) + k];
            folded[static_cast<std::size_t>(j) * K + k] = g * (cur + std::conj(cur));
            cur *= step;
        }
    }

    CompensatedSum total;
    std::vector<Complex> quad(K);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        double t = nodes_[i];
        // e(k^2 t) by second-order recurrence
        Complex e2t = unit_phase(std::fmod(2.0 * t, 1.0));
        Complex rot = unit_phase(t); // e((2k+1) t) at k = 0
        Complex cur = 1.0;           // e(k^2 t)
        for (std::size_t k = 0; k < K; ++k) {
            quad[k] = cur;
            cur *= rot;
            rot *= e2t;
        }
        Complex prod = weights_[i];
        for (int j = 0; j < n_; ++j) {
            Complex g = 0.0;
            const Complex* w = folded.data() + static_cast<std::size_t>(j) * K;
            for (std::size_t k = 0; k < K; ++k) g += quad[k] * w[k];
            prod *= g;
        }
        total.add(prod);
    }
    return total.value();
}

DyadicDecomposition build_dyadic_decomposition(int n, std::int64_t lambda, std::int64_t N,
                                           double q_cutoff) {
    if (q_cutoff <= 0.0) q_cutoff = static_cast<double>(N) / 100.0;
    DyadicDecomposition dec;
    dec.n = n;
    dec.lambda = lambda;
    dec.N = N;
    for (std::int64_t Q = 1; static_cast<double>(Q) < q_cutoff; Q *= 2) {
        for (std::int64_t s = 0; (std::int64_t{1} << s) <= N; ++s) {
            if ((std::int64_t{1} << s) < Q) continue;
            dec.pieces.push_back(build_mollifier(MollifierVariant::dyadic, Q, s, N));
        }
    }
    return dec;
}

double DyadicDecomposition::rho(double t) const {
    double total = 1.0;
    for (const auto& piece : pieces) total -= mollifier_eval(piece, t);
    return total;
}

double DyadicDecomposition::rho_mean() const {
    double total = 1.0;
    for (const auto& piece : pieces)
        total -= static_cast<double>(piece.arc_count()) * piece.bump_integral / piece.scale;
    return total;
}

double alpha_qs(const DyadicDecomposition& dec, const MollifierSpec& piece, const BumpFunction&) {
    MollifierTransform transform(piece);
    return transform.coeff(-dec.lambda) / dec.rho_mean();
}

SupNormEstimate sup_norm_estimate(const std::function<Complex(std::span<const double>)>& f, int n,
                                  int random_samples, int ascent_sweeps, std::uint64_t seed) {
    CounterRng rng(seed, 23);
    SupNormEstimate best;
    std::vector<std::pair<double, std::vector<double>>> starts;

    auto probe = [&](const std::vector<double>& x) {
        double v = std::abs(f(x));
        ++best.evaluations;
        return v;
    };

    std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    starts.emplace_back(probe(origin), origin);
    for (int i = 0; i < random_samples; ++i) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d)
            x[static_cast<std::size_t>(d)] =
                rng.uniform(static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
                            static_cast<std::uint64_t>(d));
        starts.emplace_back(probe(x), x);
    }
    std::sort(starts.begin(), starts.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (starts.size() > 10) starts.resize(10);

    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (auto& [value, x] : starts) {
        double radius = 0.05;
        for (int sweep = 0; sweep < ascent_sweeps; ++sweep) {
            for (int d = 0; d < n; ++d) {
                double lo = x[static_cast<std::size_t>(d)] - radius;
                double hi = x[static_cast<std::size_t>(d)] + radius;
                double c1 = hi - golden * (hi - lo);
                double c2 = lo + golden * (hi - lo);
                auto eval_at = [&](double c) {
                    std::vector<double> y = x;
                    y[static_cast<std::size_t>(d)] = c;
                    return probe(y);
                };
                double f1 = eval_at(c1), f2 = eval_at(c2);
                for (int it = 0; it < 12; ++it) {
                    if (f1 < f2) {
                        lo = c1;
                        c1 = c2;
                        f1 = f2;
                        c2 = lo + golden * (hi - lo);
                        f2 = eval_at(c2);
                    } else {
                        hi = c2;
                        c2 = c1;
                        f2 = f1;
                        c1 = hi - golden * (hi - lo);
                        f1 = eval_at(c1);
                    }
                }
                double mid = 0.5 * (lo + hi);
                double fm = eval_at(mid);
                if (fm > value) {
                    value = fm;
                    x[static_cast<std::size_t>(d)] = mid;
                }
            }
            radius *= 0.4;
        }
        if (value > best.value) {
            best.value = value;
            best.argmax = x;
        }
    }
    return best;
}

double fourier_tail_sup(const MollifierSpec& spec, int n, std::int64_t lambda,
                        const BumpFunction& gamma) {
    std::int64_t L = static_cast<std::int64_t>(std::floor(gamma.support_radius() *
                                                          static_cast<double>(spec.N)));
    std::int64_t lmax = static_cast<std::int64_t>(n) * L * L - lambda;
    MollifierTransform transform(spec);
    double best = 0.0;
    for (std::int64_t l = -lambda; l <= lmax; ++l) {
        double v = std::fabs((l == 0 ? 1.0 : 0.0) - transform.coeff(l));
        best = std::max(best, v);
    }
    return best;
}

LevelsetChainReport levelset_chain_check(const SphereShell& shell,
                                         std::span<const Complex> coefficients, double alpha,
                                         std::int64_t Q, std::int64_t samples, std::uint64_t seed) {
    const int n = shell.dim();
    const std::int64_t N = shell.scale_N();
    const std::int64_t lambda = shell.lambda();
    const std::size_t P = shell.size();
    if (coefficients.size() != P) throw Error("levelset_chain_check: coefficient size mismatch");

    LevelsetChainReport report;
    report.alpha = alpha;
    report.samples = samples;

    MollifierSpec spec = build_mollifier(MollifierVariant::prime, Q, 0, N);
    KernelPieceEvaluator kq(spec, n, lambda);
    SupNormEstimate sup = sup_norm_estimate(
        [&](std::span<const double> x) { return kq(x); }, n, 200, 3, seed ^ 0x5u);
    report.sup_kq = sup.value;
    report.fourier_tail = fourier_tail_sup(spec, n, lambda);

    CounterRng rng(seed, 31);
    // Pass 1: F at each sample; pass 2 accumulates the shell projections of f.
    std::vector<Complex> fvals(static_cast<std::size_t>(samples));
    std::vector<Complex> phases(P);
    double m_sum = 0.0, c_sum = 0.0, c_sq = 0.0;
    std::vector<Complex> proj(P, Complex{0.0, 0.0});
    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < samples; ++i) {
        for (int d = 0; d < n; ++d)
            x[static_cast<std::size_t>(d)] = rng.uniform(
                static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
                static_cast<std::uint64_t>(d));
        shell_phases(shell, x, phases);
        Complex F = 0.0;
        for (std::size_t p = 0; p < P; ++p) F += coefficients[p] * phases[p];
        double absF = std::abs(F);
        if (absF > alpha) {
            m_sum += 1.0;
            c_sum += absF;
            c_sq += absF * absF;
            Complex f = F / absF; // f(x) = F/|F| on E_alpha
            for (std::size_t p = 0; p < P; ++p) proj[p] += f * std::conj(phases[p]);
        }
    }
    double M = static_cast<double>(samples);
    report.measure = m_sum / M;
    report.measure_se = std::sqrt(std::max(report.measure * (1.0 - report.measure), 0.0) / M);
    report.correlation = c_sum / M;
    double c_var = c_sq / M - report.correlation * report.correlation;
    report.correlation_se = std::sqrt(std::max(c_var, 0.0) / M);

    // <K*f, f> = sum_xi |F(f)(xi)|^2; subtract the MC variance bias of the
    // squared projections.
    double quad = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
        Complex g = proj[p] / M;
        quad += std::norm(g);
    }
    double bias = (static_cast<double>(P) * report.measure - quad) / M;
    report.quad_form_bias = bias;
    report.quad_form = quad - bias;

    double sm = report.measure, se = report.measure_se;
    report.chain1 = alpha * sm <= report.correlation + 3.0 * (alpha * se + report.correlation_se);
    report.chain2 = alpha * alpha * sm * sm <=
                    report.quad_form + std::fabs(bias) + 3.0 * (2.0 * alpha * alpha * sm * se);
    double rhs = report.sup_kq * sm * sm + report.fourier_tail * sm;
    double rhs_slack = 3.0 * (report.sup_kq * 2.0 * sm * se + report.fourier_tail * se);
    report.chain3 = report.quad_form <= rhs + rhs_slack + std::fabs(bias);
    return report;
}

} // namespace restlab
