#include "restlab/restriction.hpp"

#include "restlab/errors.hpp"
#include "restlab/parallel.hpp"
#include "restlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace restlab {

namespace {

constexpr std::uint64_t kSampleStream = 41;

// Uniform sample x_i on the torus, coordinate d at counter i*n + d.
void sample_point(const CounterRng& rng, std::int64_t i, int n, std::span<double> x) {
    for (int d = 0; d < n; ++d)
        x[static_cast<std::size_t>(d)] = rng.uniform(
            static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) +
            static_cast<std::uint64_t>(d));
}

Complex dot_with_phases(const CoefficientVector& c, std::span<const Complex> phases) {
    CompensatedSum sum;
    for (std::size_t p = 0; p < phases.size(); ++p) sum.add(c.a[p] * phases[p]);
    return sum.value();
}

// Mean of values^p with a delta-method standard error on the p-th root.
NormEstimate root_mean_power(std::span<const double> values, std::span<const double> weights,
                             double p) {
    double M = static_cast<double>(values.size());
    double mean = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = std::pow(values[i], p) * (weights.empty() ? 1.0 : weights[i]);
        double y = v - comp;
        double t = mean + y;
        comp = (t - mean) - y;
        mean = t;
    }
    mean /= M;
    double var = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = std::pow(values[i], p) * (weights.empty() ? 1.0 : weights[i]);
        var += (v - mean) * (v - mean);
    }
    var /= M * std::max(M - 1.0, 1.0);
    NormEstimate est;
    est.p = p;
    est.samples = static_cast<std::int64_t>(values.size());
    est.value = std::pow(mean, 1.0 / p);
    est.std_error = mean > 0.0 ? est.value / (p * mean) * std::sqrt(var) : 0.0;
    return est;
}

} // namespace

CoefficientKind coefficient_kind_from_string(const std::string& name) {
    if (name == "singleton") return CoefficientKind::singleton;
    if (name == "constant") return CoefficientKind::constant;
    if (name == "random_signs") return CoefficientKind::random_signs;
    if (name == "random_gaussian") return CoefficientKind::random_gaussian;
    throw ParseError("unknown coefficient kind: " + name);
}

std::string to_string(CoefficientKind kind) {
    switch (kind) {
        case CoefficientKind::singleton: return "singleton";
        case CoefficientKind::constant: return "constant";
        case CoefficientKind::random_signs: return "random_signs";
        case CoefficientKind::random_gaussian: return "random_gaussian";
    }
    return "?";
}

CoefficientVector make_coefficients(const SphereShell& shell, CoefficientKind kind,
                                    std::uint64_t seed) {
    if (shell.empty()) throw EmptyShell("make_coefficients: shell has no points");
    std::size_t P = shell.size();
    CoefficientVector c;
    c.shell = &shell;
    c.kind = kind;
    c.a.assign(P, Complex{0.0, 0.0});
    CounterRng rng(seed, 37);
    switch (kind) {
        case CoefficientKind::singleton:
            c.a[0] = 1.0;
            c.normalized = true;
            break;
        case CoefficientKind::constant:
            // un-normalized by design: F coincides with the kernel K
            std::fill(c.a.begin(), c.a.end(), Complex{1.0, 0.0});
            c.normalized = false;
            break;
        case CoefficientKind::random_signs: {
            double scale = 1.0 / std::sqrt(static_cast<double>(P));
            for (std::size_t p = 0; p < P; ++p)
                c.a[p] = (rng.bits(p) & 1u) ? scale : -scale;
            c.normalized = true;
            break;
        }
        case CoefficientKind::random_gaussian: {
            double norm2 = 0.0;
            for (std::size_t p = 0; p < P; ++p) {
                double re = rng.normal(2 * p);
                double im = rng.normal(2 * p + 1);
                c.a[p] = Complex{re, im};
                norm2 += re * re + im * im;
            }
            double scale = 1.0 / std::sqrt(norm2);
            for (auto& v : c.a) v *= scale;
            c.normalized = true;
            break;
        }
    }
    for (const auto& v : c.a) {
        c.norm1 += std::abs(v);
        c.norm2 += std::norm(v);
    }
    c.norm2 = std::sqrt(c.norm2);
    return c;
}

Complex extension_eval(const CoefficientVector& c, std::span<const double> x) {
    std::vector<Complex> phases(c.shell->size());
    shell_phases(*c.shell, x, phases);
    return dot_with_phases(c, phases);
}

std::vector<double> extension_abs_samples(const CoefficientVector& c, std::int64_t samples,
                                          std::uint64_t seed) {
    const int n = c.shell->dim();
    CounterRng rng(seed, kSampleStream);
    std::vector<double> out(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        std::vector<double> x(static_cast<std::size_t>(n));
        sample_point(rng, static_cast<std::int64_t>(i), n, x);
        out[i] = std::abs(extension_eval(c, x));
    });
    return out;
}

NormEstimate lp_norm_mc(const CoefficientVector& c, double p, std::int64_t samples,
                        std::uint64_t seed) {
    if (p < 1.0) throw Error("lp_norm_mc: p must be >= 1");
    if (samples < 1000) throw Error("lp_norm_mc: need at least 1000 samples");
    std::vector<double> vals = extension_abs_samples(c, samples, seed);
    return root_mean_power(vals, {}, p);
}

std::vector<NormEstimate> lp_norms_mc(const CoefficientVector& c, std::span<const double> ps,
                                      std::int64_t samples, std::uint64_t seed) {
    if (samples < 1000) throw Error("lp_norms_mc: need at least 1000 samples");
    std::vector<double> vals = extension_abs_samples(c, samples, seed);
    std::vector<NormEstimate> out;
    out.reserve(ps.size());
    for (double p : ps) out.push_back(root_mean_power(vals, {}, p));
    return out;
}

NormEstimate lp_norm_mc_peaked(const CoefficientVector& c, double p, std::int64_t samples,
                               std::uint64_t seed) {
    if (p < 1.0) throw Error("lp_norm_mc_peaked: p must be >= 1");
    if (samples < 1000) throw Error("lp_norm_mc_peaked: need at least 1000 samples");
    const int n = c.shell->dim();
    const double w = 1.0 / (4.0 * static_cast<double>(c.shell->scale_N()));
    const double box_vol = std::pow(2.0 * w, n);
    CounterRng rng(seed, 43);
    std::vector<double> vals(static_cast<std::size_t>(samples));
    std::vector<double> weights(static_cast<std::size_t>(samples));
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        std::uint64_t base = static_cast<std::uint64_t>(i) * (static_cast<std::uint64_t>(n) + 1);
        bool in_box_component = rng.bits(base) & 1u;
        std::vector<double> x(static_cast<std::size_t>(n));
        bool inside = true;
        for (int d = 0; d < n; ++d) {
            double u = rng.uniform(base + 1 + static_cast<std::uint64_t>(d));
            double xd = in_box_component ? (2.0 * u - 1.0) * w : u;
            xd -= std::floor(xd);
            x[static_cast<std::size_t>(d)] = xd;
            double dist = std::fabs(xd - std::round(xd));
            inside = inside && dist <= w;
        }
        double density = 0.5 + (inside ? 0.5 / box_vol : 0.0);
        vals[i] = std::abs(extension_eval(c, x));
        weights[i] = 1.0 / density;
    });
    return root_mean_power(vals, weights, p);
}

double lp_norm_grid(const CoefficientVector& c, int p, std::int64_t G) {
    if (p < 2 || p % 2 != 0) throw Error("lp_norm_grid: p must be a positive even integer");
    const int n = c.shell->dim();
    const std::int64_t N = c.shell->scale_N();
    if (G <= 2 * static_cast<std::int64_t>(p) * N)
        throw InsufficientNodes("lp_norm_grid: grid side must exceed 2 p N");
    double total_points = std::pow(static_cast<double>(G), n);
    if (total_points > 2.5e8) throw BudgetExceeded("lp_norm_grid: grid too large");

    std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    double sum = 0.0, comp = 0.0;
    std::int64_t count = static_cast<std::int64_t>(total_points);
    for (std::int64_t flat = 0; flat < count; ++flat) {
        for (int d = 0; d < n; ++d)
            x[static_cast<std::size_t>(d)] =
                static_cast<double>(idx[static_cast<std::size_t>(d)]) / static_cast<double>(G);
        double v = std::pow(std::abs(extension_eval(c, x)), p);
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        for (int d = n - 1; d >= 0; --d) {
            if (++idx[static_cast<std::size_t>(d)] < G) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
    }
    return std::pow(sum / static_cast<double>(count), 1.0 / p);
}

std::vector<LevelSetEstimate> level_set_mc(const CoefficientVector& c,
                                           std::span<const double> alphas, std::int64_t samples,
                                           std::uint64_t seed) {
    if (!std::is_sorted(alphas.begin(), alphas.end()))
        throw Error("level_set_mc: alphas must be ascending");
    std::vector<double> vals = extension_abs_samples(c, samples, seed);
    std::vector<LevelSetEstimate> out;
    out.reserve(alphas.size());
    double M = static_cast<double>(samples);
    for (double alpha : alphas) {
        LevelSetEstimate e;
        e.alpha = alpha;
        e.samples = samples;
        std::int64_t hits = 0;
        for (double v : vals) hits += v > alpha;
        e.measure = static_cast<double>(hits) / M;
        e.std_error = std::sqrt(std::max(e.measure * (1.0 - e.measure), 0.0) / M);
        out.push_back(e);
    }
    return out;
}

ExponentFit exponent_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw DegenerateFit("exponent_fit: need at least 3 points");
    std::size_t k = points.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (points[i].first <= 0.0 || points[i].second <= 0.0)
            throw DegenerateFit("exponent_fit: nonpositive datum");
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
        sx += lx[i];
        sy += ly[i];
    }
    double mx = sx / static_cast<double>(k), my = sy / static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx < 1e-12) throw DegenerateFit("exponent_fit: N values not distinct");
    ExponentFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / static_cast<double>(k));
    double dof = static_cast<double>(k) - 2.0;
    fit.slope_stderr = dof > 0.0 ? std::sqrt(rss / dof / sxx) : 0.0;
    return fit;
}

std::vector<std::int64_t> dyadic_lambda_grid(int n, std::int64_t lo, std::int64_t hi) {
    if (lo < 2 || hi < lo) throw Error("dyadic_lambda_grid: need 2 <= lo <= hi");
    std::vector<std::int64_t> out;
    std::int64_t base = 2;
    while (base < lo) base *= 2;
    for (; base <= hi; base *= 2) {
        std::int64_t stop = 2 * base - 1; // whole octave, even past hi
        auto counts = shell_count_table(n, stop);
        std::int64_t chosen = -1;
        for (std::int64_t lam = base; lam <= stop; ++lam) {
            double N = std::floor(std::sqrt(static_cast<double>(lam))) + 1.0;
            double floor_size = std::pow(N, n - 2) / 4.0;
            if (counts[static_cast<std::size_t>(lam)] <
                static_cast<std::int64_t>(std::ceil(floor_size)))
                continue;
            if (n == 3 && three_square_obstructed(lam)) continue;
            chosen = lam;
            break;
        }
        if (chosen < 0) {
            std::cerr << "dyadic_lambda_grid: no admissible lambda in [" << base << ", " << stop
                      << "), skipping octave\n";
            continue;
        }
        out.push_back(chosen);
    }
    return out;
}

namespace {

// |F_r(x_i)| for several coefficient vectors on one shared shell, computing
// the shell phases once per sample. Output is [draw][sample].
std::vector<std::vector<double>> multi_draw_abs(const SphereShell& shell,
                                                const std::vector<CoefficientVector>& draws,
                                                std::int64_t samples, std::uint64_t seed) {
    const int n = shell.dim();
    const std::size_t P = shell.size();
    const std::size_t R = draws.size();
    CounterRng rng(seed, kSampleStream);
    std::vector<std::vector<double>> out(R, std::vector<double>(static_cast<std::size_t>(samples)));
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t i) {
        std::vector<double> x(static_cast<std::size_t>(n));
        sample_point(rng, static_cast<std::int64_t>(i), n, x);
        std::vector<Complex> phases(P);
        shell_phases(shell, x, phases);
        for (std::size_t r = 0; r < R; ++r) {
            Complex f = 0.0;
            const Complex* a = draws[r].a.data();
            for (std::size_t p = 0; p < P; ++p) f += a[p] * phases[p];
            out[r][i] = std::abs(f);
        }
    });
    return out;
}

nlohmann::json norm_json(const std::string& kind, const NormEstimate& e) {
    return {{"kind", kind},
            {"p", e.p},
            {"value", e.value},
            {"std_error", e.std_error},
            {"samples", e.samples}};
}

} // namespace

nlohmann::json theorem1_experiment(int n, double p, std::span<const std::int64_t> lambdas,
                                   std::int64_t samples, int draws, std::uint64_t seed) {
    if (n < 3) throw Error("theorem1_experiment: need n >= 3");
    if (lambdas.size() < 4) throw Error("theorem1_experiment: need at least 4 lambda values");
    nlohmann::json report;
    report["params"] = {{"n", n},          {"p", p},
                        {"lambdas", std::vector<std::int64_t>(lambdas.begin(), lambdas.end())},
                        {"samples", samples}, {"draws", draws},
                        {"seed", seed},
                        {"selection_rule", "smallest lambda >= 2^k with |shell| >= N^(n-2)/4"}};
    double predicted = std::max((static_cast<double>(n) - 2.0) / 2.0 - static_cast<double>(n) / p, 0.0);
    report["predicted_slope"] = predicted;

    std::vector<std::pair<double, double>> fit_pts, kernel_pts;
    report["per_lambda"] = nlohmann::json::array();
    for (std::int64_t lambda : lambdas) {
        SphereShell shell = enumerate_shell(n, lambda);
        if (shell.empty()) {
            std::cerr << "theorem1_experiment: empty shell at lambda=" << lambda << ", skipping\n";
            continue;
        }
        std::vector<CoefficientVector> sign_draws;
        sign_draws.reserve(static_cast<std::size_t>(draws));
        for (int r = 0; r < draws; ++r)
            sign_draws.push_back(make_coefficients(shell, CoefficientKind::random_signs,
                                                   seed + 1000003ull * static_cast<std::uint64_t>(r)));
        auto abs_vals = multi_draw_abs(shell, sign_draws, samples, seed);

        NormEstimate best;
        for (const auto& vals : abs_vals) {
            NormEstimate e = root_mean_power(vals, {}, p);
            if (e.value > best.value) best = e;
        }
        CoefficientVector kern = make_coefficients(shell, CoefficientKind::constant, seed);
        NormEstimate kn = lp_norm_mc_peaked(kern, p, samples, seed);
        double kernel_ratio = kn.value / kern.norm2; // ||K||_p / ||a||_2

        std::vector<double> alphas{0.5, 1.0, 2.0, 4.0};
        nlohmann::json levels = nlohmann::json::array();
        {
            double M = static_cast<double>(samples);
            for (double alpha : alphas) {
                std::int64_t hits = 0;
                for (double v : abs_vals[0]) hits += v > alpha;
                double m = static_cast<double>(hits) / M;
                levels.push_back({{"alpha", alpha},
                                  {"measure", m},
                                  {"std_error", std::sqrt(std::max(m * (1.0 - m), 0.0) / M)},
                                  {"samples", samples}});
            }
        }

        double N = static_cast<double>(shell.scale_N());
        // Lower bound for the restriction constant: max over the random
        // draws and the structured constructions (singleton gives exactly 1,
        // constant coefficients give the kernel ratio).
        double best_construction = std::max({best.value, kernel_ratio, 1.0});
        fit_pts.emplace_back(N, best_construction);
        kernel_pts.emplace_back(N, kernel_ratio);
        report["per_lambda"].push_back(
            {{"lambda", lambda},
             {"N", shell.scale_N()},
             {"shell_size", shell.size()},
             {"norms", nlohmann::json::array({norm_json("random_signs_best", best),
                                              norm_json("kernel", kn)})},
             {"kernel_ratio", kernel_ratio},
             {"best_construction", best_construction},
             {"level_sets", levels}});
    }
    ExponentFit fit = exponent_fit(fit_pts);
    ExponentFit kfit = exponent_fit(kernel_pts);
    report["fit"] = {{"slope", fit.slope}, {"stderr", fit.slope_stderr}, {"residual", fit.residual}};
    report["kernel_fit"] = {{"slope", kfit.slope}, {"stderr", kfit.slope_stderr},
                            {"residual", kfit.residual}};
    return report;
}

nlohmann::json lower_bound_suite(int n, std::span<const std::int64_t> lambdas, double p,
                                 std::int64_t samples, int draws, std::uint64_t seed) {
    if (lambdas.size() < 3) throw Error("lower_bound_suite: need at least 3 lambda values");
    nlohmann::json report;
    report["params"] = {{"n", n},          {"p", p},
                        {"lambdas", std::vector<std::int64_t>(lambdas.begin(), lambdas.end())},
                        {"samples", samples}, {"draws", draws},
                        {"seed", seed}};
    double predicted = (static_cast<double>(n) - 2.0) / 2.0 - static_cast<double>(n) / p;
    report["predicted_slope"] = predicted;

    std::vector<std::pair<double, double>> ratio_pts;
    report["per_lambda"] = nlohmann::json::array();
    CounterRng peak_rng(seed, 47);
    for (std::int64_t lambda : lambdas) {
        SphereShell shell = enumerate_shell(n, lambda);
        if (shell.empty()) {
            std::cerr << "lower_bound_suite: empty shell at lambda=" << lambda << ", skipping\n";
            continue;
        }
        double P = static_cast<double>(shell.size());
        double N = static_cast<double>(shell.scale_N());
        CoefficientVector kern = make_coefficients(shell, CoefficientKind::constant, seed);

        // (i) kernel peak: |K(x)| >= P/2 on the box |x_i| <= 1/(100 N)
        double w = 1.0 / (100.0 * N);
        double peak_min = std::abs(extension_eval(kern, std::vector<double>(n, 0.0))) / P;
        for (int i = 0; i < 64; ++i) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d) {
                std::uint64_t ctr = (static_cast<std::uint64_t>(lambda) * 64 +
                                     static_cast<std::uint64_t>(i)) * static_cast<std::uint64_t>(n) +
                                    static_cast<std::uint64_t>(d);
                double xd = (2.0 * peak_rng.uniform(ctr) - 1.0) * w;
                x[static_cast<std::size_t>(d)] = xd - std::floor(xd);
            }
            peak_min = std::min(peak_min, std::abs(extension_eval(kern, x)) / P);
        }

        // (ii) kernel L^p ratio against the predicted exponent
        NormEstimate kn = lp_norm_mc_peaked(kern, p, samples, seed);
        double ratio = kn.value / kern.norm2;

        // (iii) best-of-draws random signs vs ||a||_2 = 1
        std::vector<CoefficientVector> sign_draws;
        for (int r = 0; r < draws; ++r)
            sign_draws.push_back(make_coefficients(shell, CoefficientKind::random_signs,
                                                   seed + 1000003ull * static_cast<std::uint64_t>(r)));
        auto abs_vals = multi_draw_abs(shell, sign_draws, samples, seed);
        double best_sign = 0.0;
        for (const auto& vals : abs_vals)
            best_sign = std::max(best_sign, root_mean_power(vals, {}, p).value);

        ratio_pts.emplace_back(N, ratio);
        report["per_lambda"].push_back({{"lambda", lambda},
                                        {"N", shell.scale_N()},
                                        {"shell_size", shell.size()},
                                        {"peak_min_ratio", peak_min},
                                        {"kernel_norm", kn.value},
                                        {"kernel_ratio", ratio},
                                        {"best_sign_norm", best_sign}});
    }
    ExponentFit fit = exponent_fit(ratio_pts);
    report["fit"] = {{"slope", fit.slope}, {"stderr", fit.slope_stderr}, {"residual", fit.residual}};
    return report;
}

ExperimentReport flatten_per_lambda(const nlohmann::json& report) {
    ExperimentReport flat;
    flat.name = "per_lambda";
    flat.params = report.value("params", nlohmann::json::object());
    flat.summary = nlohmann::json::object();
    if (report.contains("fit")) flat.summary["fit"] = report["fit"];
    if (report.contains("predicted_slope")) flat.summary["predicted_slope"] = report["predicted_slope"];
    const auto& rows = report.at("per_lambda");
    if (rows.empty()) return flat;

    for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
        if (it.value().is_number()) flat.columns.push_back(it.key());
    bool has_norms = rows.front().contains("norms");
    std::size_t norm_count = has_norms ? rows.front()["norms"].size() : 0;
    for (std::size_t j = 0; j < norm_count; ++j)
        flat.columns.push_back("norm_" + rows.front()["norms"][j]["kind"].get<std::string>());

    for (const auto& entry : rows) {
        std::vector<double> row;
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
            if (it.value().is_number()) row.push_back(entry.at(it.key()).get<double>());
        for (std::size_t j = 0; j < norm_count; ++j)
            row.push_back(entry["norms"][j]["value"].get<double>());
        flat.add_row(std::move(row));
    }
    return flat;
}

} // namespace restlab
