#include "restlab/arith.hpp"

#include "restlab/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace restlab {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

Residue mod_inverse(std::int64_t x, std::int64_t q) {
    if (q < 1) throw Error("mod_inverse: modulus must be positive");
    std::int64_t r0 = q, r1 = ((x % q) + q) % q;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t k = r0 / r1;
        std::int64_t r2 = r0 - k * r1;
        std::int64_t s2 = s0 - k * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1)
        throw NotInvertible("mod_inverse: gcd(" + std::to_string(x) + ", " + std::to_string(q) +
                            ") = " + std::to_string(r0));
    std::int64_t inv = ((s0 % q) + q) % q;
    return Residue{inv, q};
}

int jacobi_symbol(std::int64_t a, std::int64_t q) {
    if (q < 1 || q % 2 == 0) throw EvenModulus("jacobi_symbol: modulus must be odd and positive");
    a %= q;
    if (a < 0) a += q;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            std::int64_t r = q % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, q);
        if (a % 4 == 3 && q % 4 == 3) result = -result;
        a %= q;
    }
    return q == 1 ? result : 0;
}

bool is_prime(std::uint64_t q) {
    if (q < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (q == p) return true;
        if (q % p == 0) return false;
    }
    std::uint64_t d = q - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // This witness set is deterministic for all 64-bit integers.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, q);
        if (x == 1 || x == q - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, q);
            if (x == q - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw EmptyRange("primes_in: hi < lo");
    std::vector<std::int64_t> out;
    for (std::int64_t q = std::max<std::int64_t>(lo, 2); q <= hi; ++q)
        if (is_prime(static_cast<std::uint64_t>(q))) out.push_back(q);
    return out;
}

std::int64_t euler_phi(std::int64_t q) {
    if (q < 1) throw Error("euler_phi: argument must be positive");
    std::int64_t result = q;
    std::int64_t m = q;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

std::vector<FareyFraction> farey_set(std::span<const std::int64_t> moduli) {
    std::vector<FareyFraction> out;
    for (std::int64_t q : moduli) {
        if (q < 2) continue; // q = 1 contributes no fraction in (0,1)
        for (std::int64_t a = 1; a <= q - 1; ++a)
            if (std::gcd(a, q) == 1) out.push_back(FareyFraction{a, q});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t ramanujan_sum(std::int64_t q, std::int64_t m) {
    if (q < 1) throw Error("ramanujan_sum: modulus must be positive");
    m %= q;
    if (m < 0) m += q;
    // c_q(m) = sum over d | gcd(m, q) of d * mu(q/d)
    std::int64_t g = (m == 0) ? q : std::gcd(m, q);
    std::vector<std::int64_t> divisors;
    for (std::int64_t d = 1; d * d <= g; ++d) {
        if (g % d != 0) continue;
        divisors.push_back(d);
        if (d != g / d) divisors.push_back(g / d);
    }
    std::int64_t total = 0;
    for (std::int64_t d : divisors) {
        std::int64_t k = q / d;
        int mu = 1;
        bool squarefree = true;
        for (std::int64_t p = 2; p * p <= k; ++p) {
            if (k % p == 0) {
                k /= p;
                mu = -mu;
                if (k % p == 0) {
                    squarefree = false;
                    break;
                }
            }
        }
        if (!squarefree) continue;
        if (k > 1) mu = -mu;
        total += d * mu;
    }
    return total;
}

std::int64_t sqrt_mod_prime(std::int64_t n, std::int64_t p) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
        throw Error("sqrt_mod_prime: modulus must be an odd prime");
    n %= p;
    if (n < 0) n += p;
    if (n == 0) return 0;
    if (jacobi_symbol(n, p) != 1)
        throw NoSquareRoot("sqrt_mod_prime: " + std::to_string(n) + " is not a residue mod " +
                           std::to_string(p));
    if (p <= 10000) {
        for (std::int64_t x = 1; x <= p / 2; ++x)
            if (mulmod(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(x),
                       static_cast<std::uint64_t>(p)) == static_cast<std::uint64_t>(n))
                return x;
        throw NoSquareRoot("sqrt_mod_prime: exhaustive search failed"); // unreachable for residues
    }
    // Tonelli-Shanks
    std::uint64_t up = static_cast<std::uint64_t>(p), un = static_cast<std::uint64_t>(n);
    std::uint64_t q = up - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::uint64_t z = 2;
    while (jacobi_symbol(static_cast<std::int64_t>(z), p) != -1) ++z;
    std::uint64_t m = static_cast<std::uint64_t>(s);
    std::uint64_t c = powmod(z, q, up);
    std::uint64_t t = powmod(un, q, up);
    std::uint64_t r = powmod(un, (q + 1) / 2, up);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, up);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, up);
        m = i;
        c = mulmod(b, b, up);
        t = mulmod(t, c, up);
        r = mulmod(r, b, up);
    }
    return static_cast<std::int64_t>(r);
}

} // namespace restlab
