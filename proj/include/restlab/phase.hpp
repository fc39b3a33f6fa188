#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace restlab {

using Complex = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// e(z) = exp(2*pi*i*z)
inline Complex unit_phase(double z) {
    double arg = two_pi * z;
    return {std::cos(arg), std::sin(arg)};
}

// e(num/den) with the argument reduced modulo den in exact integer
// arithmetic, so large numerators lose no phase precision.
inline Complex phase_frac(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return unit_phase(static_cast<double>(r) / static_cast<double>(den));
}

// Table of e(j/q), j = 0..q-1, for inner loops over residues.
class PhaseTable {
public:
    explicit PhaseTable(std::int64_t q) : q_(q), table_(static_cast<std::size_t>(q)) {
        for (std::int64_t j = 0; j < q; ++j)
            table_[static_cast<std::size_t>(j)] =
                unit_phase(static_cast<double>(j) / static_cast<double>(q));
    }

    std::int64_t modulus() const { return q_; }

    // e(num/q), num arbitrary.
    Complex operator()(std::int64_t num) const {
        std::int64_t r = num % q_;
        if (r < 0) r += q_;
        return table_[static_cast<std::size_t>(r)];
    }

private:
    std::int64_t q_;
    std::vector<Complex> table_;
};

// Kahan-compensated complex accumulator for long sums.
class CompensatedSum {
public:
    void add(Complex v) {
        add_part(re_, cre_, v.real());
        add_part(im_, cim_, v.imag());
    }
    Complex value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void add_part(double& s, double& c, double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

} // namespace restlab
