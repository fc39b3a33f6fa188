// restlab command-line front end: reproducible experiments with CSV/JSON
// reports. Every randomized command requires an explicit --seed.
#include "restlab/arith.hpp"
#include "restlab/errors.hpp"
#include "restlab/exp_sums.hpp"
#include "restlab/kernel.hpp"
#include "restlab/parallel.hpp"
#include "restlab/restriction.hpp"
#include "restlab/rng.hpp"
#include "restlab/weyl.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace restlab;

// Flat key=value config (UTF-8, '#' comments). Duplicate keys: last wins
// with a warning. Flags given on the command line override these.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string trimmed = strip(line);
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ParseError("config:" + std::to_string(lineno) + ": expected key=value");
        std::string key = strip(trimmed.substr(0, eq));
        std::string value = strip(trimmed.substr(eq + 1));
        if (key.empty()) throw ParseError("config:" + std::to_string(lineno) + ": empty key");
        if (out.count(key))
            std::cerr << "warning: config:" << lineno << ": duplicate key '" << key
                      << "', last value wins\n";
        out[key] = value;
    }
    return out;
}

std::map<std::string, std::string> g_cfg;

// Seed `var` from the config (making the flag optional) or mark the flag
// required when the caller asked for that and no config value exists.
template <typename T>
void wire(CLI::Option* opt, const std::string& key, T& var, bool required = false) {
    auto it = g_cfg.find(key);
    if (it != g_cfg.end()) {
        if constexpr (std::is_same_v<T, std::string>) {
            var = it->second;
        } else {
            std::istringstream ss(it->second);
            ss >> var;
            if (ss.fail()) throw ParseError("config: bad value for key '" + key + "'");
        }
        opt->required(false);
    } else if (required) {
        opt->required();
    }
}

void write_report(const ExperimentReport& report, const std::string& path,
                  const std::string& format) {
    report.write(path, format);
    std::cout << "report written to " << path << " (" << format << ")\n";
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    os << j.dump(2) << '\n';
    std::cout << "report written to " << path << " (json)\n";
}

std::vector<std::int64_t> parse_lambdas(const std::string& text, int n) {
    // "lo:hi:dyadic" -> filtered dyadic grid; otherwise comma list
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        auto colon2 = text.find(':', colon + 1);
        if (colon2 == std::string::npos || text.substr(colon2 + 1) != "dyadic")
            throw ParseError("--lambdas: expected lo:hi:dyadic or a comma list");
        std::int64_t lo = std::stoll(text.substr(0, colon));
        std::int64_t hi = std::stoll(text.substr(colon + 1, colon2 - colon - 1));
        return dyadic_lambda_grid(n, lo, hi);
    }
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    if (out.empty()) throw ParseError("--lambdas: empty list");
    return out;
}

int run_selftest();

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"restlab: lattice-shell restriction experiments"};
    app.require_subcommand(1);

    // pre-scan for --config so its values can seed option defaults
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                g_cfg = load_config(argv[i + 1]);
            } catch (const ParseError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
        }
    }
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file");
    int threads = 0;
    wire(app.add_option("--threads", threads, "worker thread cap"), "threads", threads);
    app.callback([&] {
        if (threads > 0) set_thread_count(threads);
    });
    app.immediate_callback(); // apply --threads before any subcommand runs
    app.fallthrough();        // accept global flags after the subcommand too

    std::string out_path; // empty -> per-command default
    std::string format = "json";
    std::uint64_t seed = 0;
    auto add_io = [&](CLI::App* cmd) {
        wire(cmd->add_option("--out", out_path, "output file path"), "out", out_path);
        wire(cmd->add_option("--format", format, "csv or json")
                 ->check(CLI::IsMember({"csv", "json"})),
             "format", format);
    };
    auto add_seed = [&](CLI::App* cmd) {
        wire(cmd->add_option("--seed", seed, "RNG seed (no wall-clock default)"), "seed", seed,
             /*required=*/true);
    };
    auto out_or = [&](const char* fallback) {
        return out_path.empty() ? std::string(fallback) : out_path;
    };

    // ---- shell ----
    auto* shell_cmd = app.add_subcommand("shell", "enumerate or count a lattice shell");
    int sh_n = 3;
    std::int64_t sh_lambda = 0;
    bool sh_count_only = false;
    wire(shell_cmd->add_option("--n", sh_n, "dimension"), "n", sh_n);
    wire(shell_cmd->add_option("--lambda", sh_lambda, "squared radius"), "lambda", sh_lambda, true);
    shell_cmd->add_flag("--count", sh_count_only, "print the count only");
    add_io(shell_cmd);
    shell_cmd->callback([&] {
        if (sh_count_only) {
            std::cout << shell_count(sh_n, sh_lambda) << "\n";
            return;
        }
        SphereShell shell = enumerate_shell(sh_n, sh_lambda);
        std::string path = out_or("shell_report.json");
        std::ofstream os(path, std::ios::binary);
        if (format == "csv")
            shell.write_csv(os);
        else {
            nlohmann::json j{{"n", sh_n},
                             {"lambda", sh_lambda},
                             {"N", shell.scale_N()},
                             {"count", shell.size()},
                             {"obstructed", sh_n == 3 && three_square_obstructed(sh_lambda)}};
            nlohmann::json pts = nlohmann::json::array();
            for (std::size_t i = 0; i < shell.size(); ++i) {
                auto p = shell.point(i);
                pts.push_back(std::vector<int>(p.begin(), p.end()));
            }
            j["points"] = pts;
            os << j.dump(2) << '\n';
        }
        std::cout << "|F_{" << sh_n << "," << sh_lambda << "}| = " << shell.size() << "\n";
        std::cout << "report written to " << path << " (" << format << ")\n";
    });

    // ---- sums ----
    auto* sums_cmd = app.add_subcommand("sums", "exponential-sum sweeps");
    sums_cmd->require_subcommand(1);
    std::int64_t su_q = 5, su_a = 1, su_b = 1, su_m = 0, su_lambda = 0, su_X = 100;
    int su_n = 4;
    bool su_check = false;
    auto* g_cmd = sums_cmd->add_subcommand("gauss", "normalized Gauss sum G(q)");
    wire(g_cmd->add_option("--q", su_q, "modulus"), "q", su_q);
    g_cmd->callback([&] {
        auto v = gauss_sum(su_q).value;
        std::cout << "G(" << su_q << ") = " << v.real() << " + " << v.imag()
                  << "i, |G| = " << std::abs(v) << "\n";
    });
    auto* q_cmd = sums_cmd->add_subcommand("quad", "quadratic sum S(a,m,q)");
    wire(q_cmd->add_option("--q", su_q, "modulus"), "q", su_q);
    wire(q_cmd->add_option("--a", su_a, "quadratic coefficient"), "a", su_a);
    wire(q_cmd->add_option("--m", su_m, "linear twist"), "m", su_m);
    q_cmd->callback([&] {
        auto d = quad_sum(su_a, su_m, su_q).value;
        std::cout << "S(" << su_a << "," << su_m << "," << su_q << ") = " << d.real() << " + "
                  << d.imag() << "i\n";
        if (su_q % 2 == 1 && std::gcd(su_a, su_q) == 1) {
            auto c = quad_sum_closed(su_a, su_m, su_q).value;
            std::cout << "closed form diff = " << std::abs(d - c) << "\n";
        }
    });
    auto* k_cmd = sums_cmd->add_subcommand("kloosterman", "K(a,b,q) and the Weil bound");
    wire(k_cmd->add_option("--q", su_q, "modulus"), "q", su_q);
    wire(k_cmd->add_option("--a", su_a, "first parameter"), "a", su_a);
    wire(k_cmd->add_option("--b", su_b, "second parameter"), "b", su_b);
    k_cmd->callback([&] {
        auto v = kloosterman(su_a, su_b, su_q).value;
        std::cout << "K(" << su_a << "," << su_b << "," << su_q << ") = " << v.real()
                  << ", Weil bound 2*sqrt(q) = " << 2.0 * std::sqrt((double)su_q) << "\n";
    });
    auto* s_cmd = sums_cmd->add_subcommand("salie", "Salié sum, direct and closed form");
    wire(s_cmd->add_option("--q", su_q, "odd modulus"), "q", su_q);
    wire(s_cmd->add_option("--a", su_a, "first parameter"), "a", su_a);
    wire(s_cmd->add_option("--b", su_b, "second parameter"), "b", su_b);
    s_cmd->add_flag("--check-explicit", su_check, "also evaluate the prime closed form");
    s_cmd->callback([&] {
        auto d = salie_direct(su_a, su_b, su_q).value;
        std::cout << "K2(" << su_a << "," << su_b << "," << su_q << ") = " << d.real() << " + "
                  << d.imag() << "i\n";
        if (su_check) {
            auto e = salie_explicit(su_a, su_b, su_q).value;
            std::cout << "explicit = " << e.real() << " + " << e.imag()
                      << "i, diff = " << std::abs(d - e) << "\n";
        }
    });
    auto* sig_cmd = sums_cmd->add_subcommand("sigma", "singular series factor Sigma(s)");
    wire(sig_cmd->add_option("--q", su_q, "modulus s"), "q", su_q);
    wire(sig_cmd->add_option("--n", su_n, "dimension (length of m_vec)"), "n", su_n);
    wire(sig_cmd->add_option("--lambda", su_lambda, "lambda"), "lambda", su_lambda);
    wire(sig_cmd->add_option("--m", su_m, "constant m_vec entry"), "m", su_m);
    sig_cmd->callback([&] {
        SingularParams p{std::vector<std::int64_t>(static_cast<std::size_t>(su_n), su_m), su_lambda,
                         su_q};
        auto v = singular_sigma(p).value;
        std::cout << "Sigma(" << su_q << ") = " << v.real() << " + " << v.imag() << "i\n";
        if (su_q % 2 == 1) {
            auto c = singular_sigma_closed(p).value;
            std::cout << "closed form diff = " << std::abs(v - c) << "\n";
        }
    });
    auto* sel_cmd = sums_cmd->add_subcommand("selberg", "partial sums of K(m,n,q)/q");
    wire(sel_cmd->add_option("--a", su_a, "first index m"), "a", su_a);
    wire(sel_cmd->add_option("--b", su_b, "second index n"), "b", su_b);
    wire(sel_cmd->add_option("--x-max", su_X, "upper cutoff X"), "x-max", su_X);
    add_io(sel_cmd);
    sel_cmd->callback([&] {
        auto partials = selberg_partial(su_a, su_b, su_X);
        ExperimentReport report;
        report.name = "selberg_partials";
        report.params = {{"m", su_a}, {"n", su_b}, {"X", su_X}};
        report.columns = {"q", "partial_re", "partial_im"};
        for (std::size_t i = 0; i < partials.size(); ++i)
            report.add_row({static_cast<double>(i + 2), partials[i].real(), partials[i].imag()});
        report.summary = {{"final_re", partials.back().real()},
                          {"final_im", partials.back().imag()}};
        std::cout << "final partial sum = " << partials.back().real() << "\n";
        write_report(report, out_or("selberg_report.json"), format);
    });

    // ---- weyl ----
    auto* weyl_cmd = app.add_subcommand("weyl", "Weyl-sum checks");
    weyl_cmd->require_subcommand(1);
    std::int64_t w_N = 100;
    int w_samples = 200;
    auto* wp_cmd = weyl_cmd->add_subcommand("poisson-check", "direct vs Poisson expansion");
    wire(wp_cmd->add_option("--N", w_N, "scale N"), "N", w_N);
    wire(wp_cmd->add_option("--samples", w_samples, "number of cases"), "samples", w_samples);
    add_seed(wp_cmd);
    add_io(wp_cmd);
    wp_cmd->callback([&] {
        CounterRng rng(seed, 11);
        ExperimentReport report;
        report.name = "poisson_check";
        report.params = {{"N", w_N}, {"samples", w_samples}, {"seed", seed}};
        report.columns = {"t", "x", "q", "abs_G", "rel_error"};
        double worst = 0.0;
        for (int i = 0; i < w_samples; ++i) {
            double t = rng.uniform(2 * static_cast<std::uint64_t>(i));
            double x = rng.uniform(2 * static_cast<std::uint64_t>(i) + 1);
            MajorArcPoint arc = dirichlet_locate(t, w_N);
            Complex d = weyl_direct(arc, x, w_N);
            Complex p = weyl_poisson(arc, x, w_N);
            double rel = std::abs(d - p) / std::max(std::abs(d), 1.0);
            worst = std::max(worst, rel);
            report.add_row({t, x, static_cast<double>(arc.q), std::abs(d), rel});
        }
        report.summary = {{"worst_rel_error", worst}};
        std::cout << "worst relative error over " << w_samples << " cases: " << worst << "\n";
        write_report(report, out_or("poisson_report.json"), format);
    });
    auto* we_cmd = weyl_cmd->add_subcommand("envelope", "major-arc envelope sweep");
    wire(we_cmd->add_option("--N", w_N, "scale N"), "N", w_N);
    wire(we_cmd->add_option("--samples", w_samples, "number of samples"), "samples", w_samples);
    add_seed(we_cmd);
    add_io(we_cmd);
    we_cmd->callback([&] {
        ExperimentReport report = weyl_envelope_check(w_N, w_samples, seed);
        std::cout << "max ratio |G| / envelope = " << report.summary["max_ratio"].get<double>()
                  << " (q90 = " << report.summary["q90"].get<double>() << ")\n";
        write_report(report, out_or("envelope_report.json"), format);
    });

    // ---- kernel ----
    auto* kernel_cmd = app.add_subcommand("kernel", "kernel pieces and mollifiers");
    kernel_cmd->require_subcommand(1);
    int kn_n = 3;
    std::int64_t kn_lambda = 29, kn_Q = 13, kn_s = 0, kn_samples = 100000;
    double kn_alpha = 0.0;
    std::string kn_variant = "prime";
    std::vector<double> kn_x;
    auto wire_kernel = [&](CLI::App* c) {
        wire(c->add_option("--n", kn_n, "dimension"), "n", kn_n);
        wire(c->add_option("--lambda", kn_lambda, "squared radius"), "lambda", kn_lambda);
    };
    auto* kd_cmd = kernel_cmd->add_subcommand("direct", "K(x) at random points vs integral form");
    wire_kernel(kd_cmd);
    add_seed(kd_cmd);
    add_io(kd_cmd);
    kd_cmd->callback([&] {
        SphereShell shell = enumerate_shell(kn_n, kn_lambda);
        CounterRng rng(seed, 13);
        ExperimentReport report;
        report.name = "kernel_direct";
        report.params = {{"n", kn_n}, {"lambda", kn_lambda}, {"seed", seed}};
        report.columns = {"abs_K", "integral_rel_error"};
        for (int i = 0; i < 10; ++i) {
            std::vector<double> x(static_cast<std::size_t>(kn_n));
            for (int d = 0; d < kn_n; ++d)
                x[static_cast<std::size_t>(d)] = rng.uniform(static_cast<std::uint64_t>(i * kn_n + d));
            Complex kd = kernel_direct(shell, x);
            Complex ki = kernel_integral(kn_n, kn_lambda, shell.scale_N(), x);
            report.add_row({std::abs(kd), std::abs(kd - ki) / std::max(1.0, std::abs(kd))});
        }
        report.summary = {{"shell_size", shell.size()}};
        std::cout << "shell size " << shell.size() << ", 10 random points checked\n";
        write_report(report, out_or("kernel_direct_report.json"), format);
    });
    auto* ki_cmd = kernel_cmd->add_subcommand("integral", "integral representation at one point");
    wire_kernel(ki_cmd);
    add_seed(ki_cmd);
    ki_cmd->callback([&] {
        SphereShell shell = enumerate_shell(kn_n, kn_lambda);
        CounterRng rng(seed, 13);
        std::vector<double> x(static_cast<std::size_t>(kn_n));
        for (int d = 0; d < kn_n; ++d)
            x[static_cast<std::size_t>(d)] = rng.uniform(static_cast<std::uint64_t>(d));
        Complex kd = kernel_direct(shell, x);
        Complex ki = kernel_integral(kn_n, kn_lambda, shell.scale_N(), x);
        std::cout << "K = " << kd.real() << ", integral = " << ki.real()
                  << ", diff = " << std::abs(kd - ki) << "\n";
    });
    auto* kp_cmd = kernel_cmd->add_subcommand("piece", "mollified kernel piece at a point");
    wire_kernel(kp_cmd);
    wire(kp_cmd->add_option("--Q", kn_Q, "mollifier block Q"), "Q", kn_Q);
    wire(kp_cmd->add_option("--s", kn_s, "dyadic scale exponent (dyadic)"), "s", kn_s);
    wire(kp_cmd->add_option("--variant", kn_variant, "prime or dyadic")
             ->check(CLI::IsMember({"prime", "dyadic"})),
         "variant", kn_variant);
    kp_cmd->add_option("--x", kn_x, "evaluation point (n coordinates)");
    kp_cmd->callback([&] {
        SphereShell shell = enumerate_shell(kn_n, kn_lambda);
        if (kn_x.empty()) kn_x.assign(static_cast<std::size_t>(kn_n), 0.0);
        if (static_cast<int>(kn_x.size()) != kn_n) throw Error("--x needs n coordinates");
        auto variant = kn_variant == "prime" ? MollifierVariant::prime : MollifierVariant::dyadic;
        MollifierSpec spec = build_mollifier(variant, kn_Q, kn_s, shell.scale_N());
        KernelSample sample = kernel_piece(spec, kn_n, kn_lambda, kn_x);
        Complex k = kernel_direct(shell, kn_x);
        std::cout << "K^" << kn_variant << "(x) = " << sample.value.real() << " + "
                  << sample.value.imag() << "i  (nodes " << sample.quadrature_nodes << ", est err "
                  << sample.est_error << ")\n"
                  << "K(x) = " << k.real() << " + " << k.imag() << "i\n";
    });
    auto* kf_cmd = kernel_cmd->add_subcommand("fourier", "Fourier tail of K - K^Q");
    wire_kernel(kf_cmd);
    wire(kf_cmd->add_option("--Q", kn_Q, "mollifier block Q"), "Q", kn_Q);
    add_io(kf_cmd);
    kf_cmd->callback([&] {
        std::int64_t N = static_cast<std::int64_t>(std::sqrt((double)kn_lambda)) + 1;
        MollifierSpec spec = build_mollifier(MollifierVariant::prime, kn_Q, 0, N);
        double sup = fourier_tail_sup(spec, kn_n, kn_lambda);
        std::cout << "sup_k |F(K - K^Q)(k)| = " << sup << " (Q = " << kn_Q << ")\n";
        ExperimentReport report;
        report.name = "kernel_fourier_tail";
        report.params = {{"n", kn_n}, {"lambda", kn_lambda}, {"Q", kn_Q}};
        report.columns = {"sup_tail"};
        report.add_row({sup});
        write_report(report, out_or("kernel_fourier_report.json"), format);
    });
    auto* ks_cmd = kernel_cmd->add_subcommand("supnorm", "sup-norm lower bound of K^Q");
    wire_kernel(ks_cmd);
    wire(ks_cmd->add_option("--Q", kn_Q, "mollifier block Q"), "Q", kn_Q);
    add_seed(ks_cmd);
    ks_cmd->callback([&] {
        std::int64_t N = static_cast<std::int64_t>(std::sqrt((double)kn_lambda)) + 1;
        MollifierSpec spec = build_mollifier(MollifierVariant::prime, kn_Q, 0, N);
        KernelPieceEvaluator eval(spec, kn_n, kn_lambda);
        SupNormEstimate est = sup_norm_estimate(
            [&](std::span<const double> x) { return eval(x); }, kn_n, 200, 3, seed);
        std::cout << "||K^Q||_inf >= " << est.value << " (" << est.evaluations << " evaluations)\n";
    });
    auto* kl_cmd = kernel_cmd->add_subcommand("levelchain", "level-set duality chain check");
    wire_kernel(kl_cmd);
    wire(kl_cmd->add_option("--Q", kn_Q, "mollifier block Q"), "Q", kn_Q);
    wire(kl_cmd->add_option("--alpha", kn_alpha, "level threshold"), "alpha", kn_alpha);
    wire(kl_cmd->add_option("--samples", kn_samples, "MC samples"), "samples", kn_samples);
    add_seed(kl_cmd);
    add_io(kl_cmd);
    kl_cmd->callback([&] {
        SphereShell shell = enumerate_shell(kn_n, kn_lambda);
        auto coeffs = make_coefficients(shell, CoefficientKind::random_gaussian, seed);
        double alpha =
            kn_alpha > 0.0 ? kn_alpha : std::pow(static_cast<double>(shell.scale_N()), 0.8);
        auto rep = levelset_chain_check(shell, coeffs.a, alpha, kn_Q, kn_samples, seed);
        nlohmann::json j{{"alpha", rep.alpha},     {"samples", rep.samples},
                         {"measure", rep.measure}, {"measure_se", rep.measure_se},
                         {"correlation", rep.correlation},
                         {"quad_form", rep.quad_form},
                         {"sup_kq", rep.sup_kq},   {"fourier_tail", rep.fourier_tail},
                         {"chain1", rep.chain1},   {"chain2", rep.chain2},
                         {"chain3", rep.chain3}};
        std::cout << "chain: " << (rep.chain1 ? "ok" : "FAIL") << " "
                  << (rep.chain2 ? "ok" : "FAIL") << " " << (rep.chain3 ? "ok" : "FAIL") << "\n";
        write_json_file(j, out_or("levelchain_report.json"));
        if (!(rep.chain1 && rep.chain2 && rep.chain3)) std::exit(2);
    });

    // ---- restrict ----
    auto* restrict_cmd = app.add_subcommand("restrict", "extension-norm experiments");
    restrict_cmd->require_subcommand(1);
    int r_n = 4, r_draws = 32;
    double r_p = 8.0;
    std::int64_t r_lambda = 0, r_samples = 10000;
    std::string r_lambdas, r_kind = "random_gaussian";
    std::vector<double> r_alphas;
    auto* rn_cmd = restrict_cmd->add_subcommand("norms", "L^p norms of one coefficient draw");
    wire(rn_cmd->add_option("--n", r_n, "dimension"), "n", r_n);
    wire(rn_cmd->add_option("--lambda", r_lambda, "squared radius"), "lambda", r_lambda, true);
    wire(rn_cmd->add_option("--p", r_p, "exponent"), "p", r_p);
    wire(rn_cmd->add_option("--samples", r_samples, "MC samples"), "samples", r_samples);
    wire(rn_cmd->add_option("--kind", r_kind, "coefficient kind"), "kind", r_kind);
    add_seed(rn_cmd);
    add_io(rn_cmd);
    rn_cmd->callback([&] {
        SphereShell shell = enumerate_shell(r_n, r_lambda);
        auto c = make_coefficients(shell, coefficient_kind_from_string(r_kind), seed);
        std::vector<double> ps{2.0, r_p};
        auto norms = lp_norms_mc(c, ps, r_samples, seed);
        ExperimentReport report;
        report.name = "lp_norms";
        report.params = {{"n", r_n},
                         {"lambda", r_lambda},
                         {"kind", r_kind},
                         {"samples", r_samples},
                         {"seed", seed}};
        report.columns = {"p", "value", "std_error"};
        for (const auto& e : norms) {
            report.add_row({e.p, e.value, e.std_error});
            std::cout << "||F||_" << e.p << " = " << e.value << " +- " << e.std_error << "\n";
        }
        write_report(report, out_or("norms_report.json"), format);
    });
    auto* rl_cmd = restrict_cmd->add_subcommand("levelsets", "level-set measures");
    wire(rl_cmd->add_option("--n", r_n, "dimension"), "n", r_n);
    wire(rl_cmd->add_option("--lambda", r_lambda, "squared radius"), "lambda", r_lambda, true);
    wire(rl_cmd->add_option("--samples", r_samples, "MC samples"), "samples", r_samples);
    wire(rl_cmd->add_option("--kind", r_kind, "coefficient kind"), "kind", r_kind);
    rl_cmd->add_option("--alphas", r_alphas, "thresholds, ascending");
    add_seed(rl_cmd);
    add_io(rl_cmd);
    rl_cmd->callback([&] {
        SphereShell shell = enumerate_shell(r_n, r_lambda);
        auto c = make_coefficients(shell, coefficient_kind_from_string(r_kind), seed);
        if (r_alphas.empty()) r_alphas = {0.5, 1.0, 2.0, 4.0};
        auto levels = level_set_mc(c, r_alphas, r_samples, seed);
        ExperimentReport report;
        report.name = "level_sets";
        report.params = {{"n", r_n},
                         {"lambda", r_lambda},
                         {"kind", r_kind},
                         {"samples", r_samples},
                         {"seed", seed}};
        report.columns = {"alpha", "measure", "std_error"};
        for (const auto& e : levels) {
            report.add_row({e.alpha, e.measure, e.std_error});
            std::cout << "|E_" << e.alpha << "| = " << e.measure << " +- " << e.std_error << "\n";
        }
        write_report(report, out_or("levelsets_report.json"), format);
    });
    auto* rt_cmd = restrict_cmd->add_subcommand("theorem1", "growth-exponent experiment");
    wire(rt_cmd->add_option("--n", r_n, "dimension"), "n", r_n);
    wire(rt_cmd->add_option("--p", r_p, "exponent"), "p", r_p);
    wire(rt_cmd->add_option("--lambdas", r_lambdas, "lo:hi:dyadic or comma list"), "lambdas",
         r_lambdas, true);
    wire(rt_cmd->add_option("--samples", r_samples, "MC samples"), "samples", r_samples);
    wire(rt_cmd->add_option("--draws", r_draws, "random draws per lambda"), "draws", r_draws);
    add_seed(rt_cmd);
    add_io(rt_cmd);
    rt_cmd->callback([&] {
        auto lambdas = parse_lambdas(r_lambdas, r_n);
        auto j = theorem1_experiment(r_n, r_p, lambdas, r_samples, r_draws, seed);
        std::cout << "fitted slope " << j["fit"]["slope"].get<double>() << " (predicted "
                  << j["predicted_slope"].get<double>() << ")\n";
        std::string path = out_or("theorem1_report.json");
        if (format == "csv")
            write_report(flatten_per_lambda(j), path, "csv");
        else
            write_json_file(j, path);
    });
    auto* rb_cmd = restrict_cmd->add_subcommand("lowerbounds", "lower-bound constructions");
    wire(rb_cmd->add_option("--n", r_n, "dimension"), "n", r_n);
    wire(rb_cmd->add_option("--p", r_p, "exponent"), "p", r_p);
    wire(rb_cmd->add_option("--lambdas", r_lambdas, "lo:hi:dyadic or comma list"), "lambdas",
         r_lambdas, true);
    wire(rb_cmd->add_option("--samples", r_samples, "MC samples"), "samples", r_samples);
    wire(rb_cmd->add_option("--draws", r_draws, "random draws per lambda"), "draws", r_draws);
    add_seed(rb_cmd);
    add_io(rb_cmd);
    rb_cmd->callback([&] {
        auto lambdas = parse_lambdas(r_lambdas, r_n);
        auto j = lower_bound_suite(r_n, lambdas, r_p, r_samples, r_draws, seed);
        std::cout << "kernel-ratio slope " << j["fit"]["slope"].get<double>() << " (predicted "
                  << j["predicted_slope"].get<double>() << ")\n";
        std::string path = out_or("lowerbounds_report.json");
        if (format == "csv")
            write_report(flatten_per_lambda(j), path, "csv");
        else
            write_json_file(j, path);
    });

    // ---- selftest ----
    auto* self_cmd = app.add_subcommand("selftest", "run the cross-method invariant suite");
    self_cmd->callback([&] { std::exit(run_selftest()); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const restlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

namespace {

int run_selftest() {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
        failures += !ok;
    };
    {
        bool ok = true;
        for (std::int64_t q = 3; q <= 199; q += 2)
            ok = ok && std::fabs(std::abs(gauss_sum(q).value) - 1.0 / std::sqrt((double)q)) < 1e-10;
        check("gauss modulus |G(q)| = q^-1/2", ok);
    }
    {
        bool ok = true;
        for (std::int64_t q = 3; q <= 45; q += 2)
            for (std::int64_t a = 1; a < q; ++a) {
                if (std::gcd(a, q) != 1) continue;
                ok = ok && std::abs(quad_sum(a, 3, q).value - quad_sum_closed(a, 3, q).value) < 1e-10;
            }
        check("completed-square identity", ok);
    }
    {
        bool ok = true;
        for (std::int64_t q : {5, 7, 11, 13, 17, 19, 23}) {
            for (std::int64_t a = 1; a < q; ++a)
                for (std::int64_t b = 1; b < q; ++b) {
                    if (jacobi_symbol(a * b % q, q) != 1) continue;
                    ok = ok &&
                         std::abs(salie_direct(a, b, q).value - salie_explicit(a, b, q).value) < 1e-8;
                }
        }
        check("salie closed form vs direct", ok);
    }
    {
        bool ok = true;
        CounterRng rng(99, 11);
        for (int i = 0; i < 10; ++i) {
            double t = rng.uniform(2 * static_cast<std::uint64_t>(i));
            double x = rng.uniform(2 * static_cast<std::uint64_t>(i) + 1);
            MajorArcPoint arc = dirichlet_locate(t, 100);
            Complex d = weyl_direct(arc, x, 100);
            Complex p = weyl_poisson(arc, x, 100);
            ok = ok && std::abs(d - p) / std::max(std::abs(d), 1.0) < 1e-6;
        }
        check("poisson expansion matches direct sum", ok);
    }
    {
        SphereShell shell = enumerate_shell(3, 29);
        CounterRng rng(7, 13);
        bool ok = true;
        for (int i = 0; i < 5; ++i) {
            std::vector<double> x(3);
            for (int d = 0; d < 3; ++d) x[d] = rng.uniform(static_cast<std::uint64_t>(3 * i + d));
            Complex kd = kernel_direct(shell, x);
            Complex ki = kernel_integral(3, 29, shell.scale_N(), x);
            ok = ok && std::abs(kd - ki) / std::max(1.0, std::abs(kd)) < 1e-6;
        }
        check("kernel integral representation", ok);
    }
    {
        MollifierSpec spec = build_mollifier(MollifierVariant::prime, 13, 0, 12);
        bool ok = true;
        for (std::int64_t k1 : {0, 3, -7})
            for (std::int64_t k2 : {1, -4}) {
                std::vector<std::int64_t> k{k1, k2, 2};
                Complex cf = fourier_coefficient(KernelPieceTag::KminusKQ, spec, 139, k);
                Complex qf = fourier_coefficient_quadrature(KernelPieceTag::KminusKQ, spec, 139, k);
                ok = ok && std::abs(cf - qf) < 1e-8;
            }
        check("fourier coefficients closed form vs quadrature", ok);
    }
    {
        SphereShell shell = enumerate_shell(2, 25);
        bool ok = true;
        for (std::uint64_t s = 1; s <= 3; ++s) {
            auto c = make_coefficients(shell, CoefficientKind::random_gaussian, s);
            ok = ok && std::fabs(lp_norm_grid(c, 2, 101) - 1.0) < 1e-10;
        }
        check("parseval on exact grid", ok);
    }
    {
        bool ok = true;
        for (std::int64_t lam = 1; lam <= 200; ++lam)
            ok = ok && (three_square_obstructed(lam) == (shell_count(3, lam) == 0));
        check("three-square obstruction matches enumeration", ok);
    }
    std::cout << (failures ? "selftest: FAILED\n" : "selftest: all checks passed\n");
    return failures ? 2 : 0;
}

} // namespace
