#pragma once

#include "restlab/phase.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace restlab {

enum class SumMethod { direct, closed_form };

struct ExpSumValue {
    Complex value;
    std::vector<std::int64_t> params;
    SumMethod method;
};

struct SingularParams {
    std::vector<std::int64_t> m_vec; // length n
    std::int64_t lambda;
    std::int64_t s; // modulus, >= 2
};

// G(q) = (1/q) sum_k e(k^2/q)
ExpSumValue gauss_sum(std::int64_t q);

// S(a,m,q) = (1/q) sum_k e(k^2 a/q - k m/q), direct summation.
ExpSumValue quad_sum(std::int64_t a, std::int64_t m, std::int64_t q);

// Completed-square identity S(a,m,q) = e(-4* a* m^2/q) (a/q) G(q);
// requires q odd and gcd(a,q) = 1.
ExpSumValue quad_sum_closed(std::int64_t a, std::int64_t m, std::int64_t q);

// K(a,b,q) = sum over invertible k of e(k a/q + k* b/q)
ExpSumValue kloosterman(std::int64_t a, std::int64_t b, std::int64_t q);

// K2(a,b,q) = sum over invertible k of (k/q) e(k a/q + k* b/q), odd q.
ExpSumValue salie_direct(std::int64_t a, std::int64_t b, std::int64_t q);

// Prime-modulus closed form K2 = 2 q cos(4 pi x / q) G(q) with x^2 = ab (q);
// throws NoSquareRoot when ab is a non-residue or divisible by q.
ExpSumValue salie_explicit(std::int64_t a, std::int64_t b, std::int64_t q);

// Sigma(s) = sum over reduced a of prod_j S(a, m_j, s) e(-lambda a/s)
ExpSumValue singular_sigma(const SingularParams& p);

// Odd-modulus reduction Sigma(q) = G(q)^n sum (a/q)^n e(-4* mt a*/q - lambda a/q).
ExpSumValue singular_sigma_closed(const SingularParams& p);

// Running partials of sum_{q <= X} K(m, n, q) / q, one entry per q = 2..X.
std::vector<Complex> selberg_partial(std::int64_t m, std::int64_t n, std::int64_t X);

} // namespace restlab
