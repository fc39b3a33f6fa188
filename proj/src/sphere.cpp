#include "restlab/sphere.hpp"

#include "restlab/errors.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace restlab {

namespace {

std::int64_t isqrt_floor(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

void descend(int n, int depth, std::int64_t remaining, std::vector<std::int16_t>& prefix,
             std::vector<std::int16_t>& out, std::int64_t max_points) {
    if (depth == n) {
        if (remaining != 0) return;
        if (static_cast<std::int64_t>(out.size() / static_cast<std::size_t>(n)) >= max_points)
            throw BudgetExceeded("enumerate_shell: point budget exceeded");
        out.insert(out.end(), prefix.begin(), prefix.end());
        return;
    }
    std::int64_t bound = isqrt_floor(remaining);
    for (std::int64_t c = -bound; c <= bound; ++c) {
        prefix.push_back(static_cast<std::int16_t>(c));
        descend(n, depth + 1, remaining - c * c, prefix, out, max_points);
        prefix.pop_back();
    }
}

} // namespace

SphereShell::SphereShell(int n, std::int64_t lambda, std::vector<std::int16_t> coords)
    : n_(n), lambda_(lambda), N_(isqrt_floor(lambda) + 1), coords_(std::move(coords)) {}

SphereShell enumerate_shell(int n, std::int64_t lambda, std::int64_t max_points) {
    if (n < 1 || lambda < 1) throw Error("enumerate_shell: need n >= 1 and lambda >= 1");
    if (lambda >= (std::int64_t{1} << 30))
        throw BudgetExceeded("enumerate_shell: lambda exceeds 16-bit coordinate range");
    std::vector<std::int16_t> coords;
    std::vector<std::int16_t> prefix;
    prefix.reserve(static_cast<std::size_t>(n));
    descend(n, 0, lambda, prefix, coords, max_points);
    return SphereShell(n, lambda, std::move(coords));
}

std::vector<std::int64_t> shell_count_table(int n, std::int64_t lambda) {
    if (n < 1 || lambda < 0) throw Error("shell_count_table: need n >= 1 and lambda >= 0");
    std::size_t len = static_cast<std::size_t>(lambda) + 1;
    // r_1[m] = #{k in Z : k^2 = m}
    std::vector<std::int64_t> current(len, 0);
    current[0] = 1;
    for (std::int64_t k = 1; k * k <= lambda; ++k) current[static_cast<std::size_t>(k * k)] = 2;
    std::vector<std::int64_t> base = current;
    for (int j = 1; j < n; ++j) {
        std::vector<std::int64_t> next(len, 0);
        for (std::size_t v = 0; v < len; ++v) {
            if (current[v] == 0) continue;
            next[v] += current[v]; // k = 0 term of base
            for (std::int64_t k = 1;; ++k) {
                std::size_t sq = static_cast<std::size_t>(k * k);
                if (v + sq >= len) break;
                next[v + sq] += 2 * current[v];
            }
        }
        current = std::move(next);
    }
    return current;
}

std::int64_t shell_count(int n, std::int64_t lambda) {
    return shell_count_table(n, lambda)[static_cast<std::size_t>(lambda)];
}

bool three_square_obstructed(std::int64_t lambda) {
    if (lambda < 1) throw Error("three_square_obstructed: lambda must be positive");
    while (lambda % 4 == 0) lambda /= 4;
    return lambda % 8 == 7;
}

void shell_phases(const SphereShell& shell, std::span<const double> x, std::span<Complex> out) {
    int n = shell.dim();
    std::int64_t N = shell.scale_N();
    // tables[d][c + N] = e(c * x_d), built by rotation from e(x_d)
    std::vector<std::vector<Complex>> tables(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        auto& tab = tables[static_cast<std::size_t>(d)];
        tab.resize(static_cast<std::size_t>(2 * N + 1));
        Complex step = unit_phase(x[static_cast<std::size_t>(d)]);
        tab[static_cast<std::size_t>(N)] = 1.0;
        for (std::int64_t c = 1; c <= N; ++c) {
            tab[static_cast<std::size_t>(N + c)] = tab[static_cast<std::size_t>(N + c - 1)] * step;
            tab[static_cast<std::size_t>(N - c)] = std::conj(tab[static_cast<std::size_t>(N + c)]);
        }
    }
    for (std::size_t i = 0; i < shell.size(); ++i) {
        auto p = shell.point(i);
        Complex v = 1.0;
        for (int d = 0; d < n; ++d)
            v *= tables[static_cast<std::size_t>(d)][static_cast<std::size_t>(p[static_cast<std::size_t>(d)] + N)];
        out[i] = v;
    }
}

void SphereShell::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < size(); ++i) {
        auto p = point(i);
        for (int j = 0; j < n_; ++j) {
            if (j) os << ',';
            os << p[static_cast<std::size_t>(j)];
        }
        os << '\n';
    }
}

void SphereShell::write_binary(std::ostream& os) const {
    os.write("SHEL", 4);
    auto put = [&os](const void* p, std::size_t n) { os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); };
    std::uint8_t n8 = static_cast<std::uint8_t>(n_);
    std::uint64_t lam = static_cast<std::uint64_t>(lambda_);
    std::uint64_t count = size();
    put(&n8, 1);
    put(&lam, 8);
    put(&count, 8);
    put(coords_.data(), coords_.size() * sizeof(std::int16_t));
}

SphereShell SphereShell::read_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SHEL", 4) != 0) throw ParseError("SphereShell: bad magic");
    std::uint8_t n8;
    std::uint64_t lam, count;
    is.read(reinterpret_cast<char*>(&n8), 1);
    is.read(reinterpret_cast<char*>(&lam), 8);
    is.read(reinterpret_cast<char*>(&count), 8);
    std::vector<std::int16_t> coords(static_cast<std::size_t>(count) * n8);
    is.read(reinterpret_cast<char*>(coords.data()),
            static_cast<std::streamsize>(coords.size() * sizeof(std::int16_t)));
    if (!is) throw ParseError("SphereShell: truncated binary payload");
    return SphereShell(static_cast<int>(n8), static_cast<std::int64_t>(lam), std::move(coords));
}

} // namespace restlab
