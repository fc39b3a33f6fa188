#pragma once

#include "restlab/phase.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace restlab {

// Integer points on the sphere |xi|^2 = lambda in Z^n, 16-bit coordinates.
class SphereShell {
public:
    SphereShell(int n, std::int64_t lambda, std::vector<std::int16_t> coords);

    int dim() const { return n_; }
    std::int64_t lambda() const { return lambda_; }
    std::int64_t scale_N() const { return N_; } // [sqrt(lambda)] + 1
    std::size_t size() const { return coords_.size() / static_cast<std::size_t>(n_); }
    bool empty() const { return coords_.empty(); }

    std::span<const std::int16_t> point(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    std::span<const std::int16_t> raw() const { return coords_; }

    void write_csv(std::ostream& os) const;
    void write_binary(std::ostream& os) const; // magic "SHEL", little-endian
    static SphereShell read_binary(std::istream& is);

private:
    int n_;
    std::int64_t lambda_;
    std::int64_t N_;
    std::vector<std::int16_t> coords_; // row-major, canonical lexicographic order
};

// Complete enumeration by recursive descent with square-budget pruning;
// throws BudgetExceeded when the shell would exceed max_points.
SphereShell enumerate_shell(int n, std::int64_t lambda, std::int64_t max_points = 100000000);

// |F_{n,lambda}| without materializing points (sum-of-squares convolution).
std::int64_t shell_count(int n, std::int64_t lambda);

// Counts for every value 0..lambda at once; shell_count is row [lambda].
std::vector<std::int64_t> shell_count_table(int n, std::int64_t lambda);

// lambda = 4^a (8m + 7)?
bool three_square_obstructed(std::int64_t lambda);

// e(xi . x) for every shell point, via per-coordinate phase tables.
void shell_phases(const SphereShell& shell, std::span<const double> x, std::span<Complex> out);

} // namespace restlab
