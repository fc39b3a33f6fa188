#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace restlab {

struct Residue {
    std::int64_t value;   // in [0, q)
    std::int64_t modulus; // q >= 1
};

// Reduced fraction a/q in (0,1); ordering is exact (cross multiplication).
struct FareyFraction {
    std::int64_t a;
    std::int64_t q;

    double value() const { return static_cast<double>(a) / static_cast<double>(q); }

    friend bool operator<(const FareyFraction& lhs, const FareyFraction& rhs) {
        return static_cast<__int128>(lhs.a) * rhs.q < static_cast<__int128>(rhs.a) * lhs.q;
    }
    friend bool operator==(const FareyFraction& lhs, const FareyFraction& rhs) {
        return lhs.a == rhs.a && lhs.q == rhs.q;
    }
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// Inverse of x modulo q; throws NotInvertible when gcd(x, q) > 1.
Residue mod_inverse(std::int64_t x, std::int64_t q);

// Jacobi symbol (a/q) for odd q >= 1; throws EvenModulus otherwise.
int jacobi_symbol(std::int64_t a, std::int64_t q);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(std::uint64_t q);

// Strictly increasing primes in [lo, hi]; throws EmptyRange when hi < lo.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

std::int64_t euler_phi(std::int64_t q);

// All reduced a/q with q in moduli and 1 <= a <= q-1, sorted by value.
std::vector<FareyFraction> farey_set(std::span<const std::int64_t> moduli);

// Ramanujan sum c_q(m) = sum over reduced residues a of e(m a / q).
std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m);

// Square root of n modulo odd prime p (exhaustive for small p, then
// Tonelli-Shanks); throws NoSquareRoot when none exists.
std::int64_t sqrt_mod_prime(std::int64_t n, std::int64_t p);

} // namespace restlab
