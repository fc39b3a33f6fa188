#include "restlab/exp_sums.hpp"

#include "restlab/arith.hpp"
#include "restlab/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>

namespace restlab {

namespace {

// Residue-level tables reused across calls with the same modulus; sweeps
// fix q and vary (a, b), so this caches the expensive part.
struct ResidueTables {
    std::int64_t q = 0;
    std::vector<std::int64_t> inv; // inv[k], 0 when k not invertible
    std::vector<std::int8_t> jac;  // (k/q), odd q only
    std::unique_ptr<PhaseTable> phases;
};

thread_local ResidueTables g_tables;

const ResidueTables& tables_for(std::int64_t q, bool need_jacobi) {
    if (g_tables.q != q) {
        g_tables.q = q;
        g_tables.inv.assign(static_cast<std::size_t>(q), 0);
        for (std::int64_t k = 1; k < q; ++k) {
            if (std::gcd(k, q) != 1) continue;
            g_tables.inv[static_cast<std::size_t>(k)] = mod_inverse(k, q).value;
        }
        g_tables.jac.clear();
        g_tables.phases = std::make_unique<PhaseTable>(q);
    }
    if (need_jacobi && g_tables.jac.empty()) {
        g_tables.jac.resize(static_cast<std::size_t>(q));
        for (std::int64_t k = 0; k < q; ++k)
            g_tables.jac[static_cast<std::size_t>(k)] = static_cast<std::int8_t>(jacobi_symbol(k, q));
    }
    return g_tables;
}

std::int64_t reduce(std::int64_t x, std::int64_t q) {
    x %= q;
    return x < 0 ? x + q : x;
}

Complex gauss_sum_value(std::int64_t q) {
    thread_local std::unordered_map<std::int64_t, Complex> cache;
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    PhaseTable phases(q);
    CompensatedSum sum;
    std::int64_t r = 0; // k^2 mod q, updated incrementally
    for (std::int64_t k = 0; k < q; ++k) {
        sum.add(phases(r));
        r += 2 * k + 1;
        r %= q;
    }
    Complex v = sum.value() / static_cast<double>(q);
    cache.emplace(q, v);
    return v;
}

} // namespace

ExpSumValue gauss_sum(std::int64_t q) {
    if (q < 1) throw Error("gauss_sum: modulus must be positive");
    return {gauss_sum_value(q), {q}, SumMethod::direct};
}

ExpSumValue quad_sum(std::int64_t a, std::int64_t m, std::int64_t q) {
    if (q < 1) throw Error("quad_sum: modulus must be positive");
    const auto& tab = tables_for(q, false);
    std::int64_t ar = reduce(a, q), mr = reduce(m, q);
    CompensatedSum sum;
    // phase residue of k^2 a - k m, advanced by a(2k+1) - m per step
    std::int64_t r = 0;
    for (std::int64_t k = 0; k < q; ++k) {
        sum.add((*tab.phases)(r));
        r = reduce(r + ar * (2 * k + 1) - mr, q);
    }
    return {sum.value() / static_cast<double>(q), {a, m, q}, SumMethod::direct};
}

ExpSumValue quad_sum_closed(std::int64_t a, std::int64_t m, std::int64_t q) {
    if (q < 1 || q % 2 == 0) throw EvenModulus("quad_sum_closed: modulus must be odd");
    std::int64_t inv4 = mod_inverse(4, q).value;
    std::int64_t inva = mod_inverse(a, q).value; // throws NotInvertible when (a,q) > 1
    std::int64_t m2 = mulmod(static_cast<std::uint64_t>(reduce(m, q)),
                             static_cast<std::uint64_t>(reduce(m, q)),
                             static_cast<std::uint64_t>(q));
    std::int64_t expo = static_cast<std::int64_t>(
        mulmod(mulmod(static_cast<std::uint64_t>(inv4), static_cast<std::uint64_t>(inva),
                      static_cast<std::uint64_t>(q)),
               static_cast<std::uint64_t>(m2), static_cast<std::uint64_t>(q)));
    Complex v = phase_frac(-expo, q) * static_cast<double>(jacobi_symbol(a, q)) * gauss_sum_value(q);
    return {v, {a, m, q}, SumMethod::closed_form};
}

ExpSumValue kloosterman(std::int64_t a, std::int64_t b, std::int64_t q) {
    if (q < 2) throw Error("kloosterman: modulus must be >= 2");
    const auto& tab = tables_for(q, false);
    std::int64_t ar = reduce(a, q), br = reduce(b, q);
    CompensatedSum sum;
    for (std::int64_t k = 1; k < q; ++k) {
        std::int64_t kinv = tab.inv[static_cast<std::size_t>(k)];
        if (kinv == 0) continue;
        sum.add((*tab.phases)(k * ar + kinv * br));
    }
    return {sum.value(), {a, b, q}, SumMethod::direct};
}

ExpSumValue salie_direct(std::int64_t a, std::int64_t b, std::int64_t q) {
    if (q < 3 || q % 2 == 0) throw EvenModulus("salie_direct: modulus must be odd and >= 3");
    const auto& tab = tables_for(q, true);
    std::int64_t ar = reduce(a, q), br = reduce(b, q);
    CompensatedSum sum;
    for (std::int64_t k = 1; k < q; ++k) {
        std::int64_t kinv = tab.inv[static_cast<std::size_t>(k)];
        if (kinv == 0) continue;
        double chi = tab.jac[static_cast<std::size_t>(k)];
        sum.add(chi * (*tab.phases)(k * ar + kinv * br));
    }
    return {sum.value(), {a, b, q}, SumMethod::direct};
}

ExpSumValue salie_explicit(std::int64_t a, std::int64_t b, std::int64_t q) {
    if (q < 3 || q % 2 == 0) throw EvenModulus("salie_explicit: modulus must be odd and >= 3");
    if (!is_prime(static_cast<std::uint64_t>(q))) throw Error("salie_explicit: modulus must be prime");
    std::int64_t ab = static_cast<std::int64_t>(mulmod(static_cast<std::uint64_t>(reduce(a, q)),
                                                       static_cast<std::uint64_t>(reduce(b, q)),
                                                       static_cast<std::uint64_t>(q)));
    if (ab == 0) throw NoSquareRoot("salie_explicit: ab = 0 mod q");
    std::int64_t x = sqrt_mod_prime(ab, q); // throws NoSquareRoot for non-residues
    // The character factor (a/q) is forced by the substitution k -> k a*;
    // with ab a residue it is +-1 and the two roots still agree.
    double chi = static_cast<double>(jacobi_symbol(reduce(a, q), q));
    auto evaluate = [&](std::int64_t root) {
        double angle = 4.0 * std::numbers::pi * static_cast<double>(root) / static_cast<double>(q);
        return chi * 2.0 * static_cast<double>(q) * std::cos(angle) * gauss_sum_value(q);
    };
    Complex v = evaluate(x);
    Complex v2 = evaluate(q - x); // both roots must give the same value
    if (std::abs(v - v2) > 1e-9 * static_cast<double>(q))
        throw Error("salie_explicit: root ambiguity exceeds tolerance");
    return {v, {a, b, q}, SumMethod::closed_form};
}

ExpSumValue singular_sigma(const SingularParams& p) {
    std::int64_t s = p.s;
    if (s < 2) throw Error("singular_sigma: modulus must be >= 2");
    const auto& tab = tables_for(s, false);
    std::int64_t n = static_cast<std::int64_t>(p.m_vec.size());
    CompensatedSum total;
    for (std::int64_t a = 1; a < s; ++a) {
        if (std::gcd(a, s) != 1) continue;
        Complex term = (*tab.phases)(-reduce(p.lambda, s) * a);
        for (std::int64_t j = 0; j < n; ++j) {
            // S(a, m_j, s) by direct summation with the shared phase table
            std::int64_t ar = reduce(a, s), mr = reduce(p.m_vec[static_cast<std::size_t>(j)], s);
            CompensatedSum inner;
            std::int64_t r = 0;
            for (std::int64_t k = 0; k < s; ++k) {
                inner.add((*tab.phases)(r));
                r = reduce(r + ar * (2 * k + 1) - mr, s);
            }
            term *= inner.value() / static_cast<double>(s);
        }
        total.add(term);
    }
    return {total.value(), {p.lambda, p.s}, SumMethod::direct};
}

ExpSumValue singular_sigma_closed(const SingularParams& p) {
    std::int64_t s = p.s;
    if (s < 2) throw Error("singular_sigma_closed: modulus must be >= 2");
    if (s % 2 == 0) throw EvenModulus("singular_sigma_closed: modulus must be odd");
    const auto& tab = tables_for(s, true);
    std::int64_t n = static_cast<std::int64_t>(p.m_vec.size());
    std::int64_t mt = 0; // m_1^2 + ... + m_n^2 mod s
    for (std::int64_t mj : p.m_vec)
        mt = reduce(mt + static_cast<std::int64_t>(mulmod(static_cast<std::uint64_t>(reduce(mj, s)),
                                                          static_cast<std::uint64_t>(reduce(mj, s)),
                                                          static_cast<std::uint64_t>(s))),
                    s);
    std::int64_t inv4 = mod_inverse(4, s).value;
    std::int64_t c = static_cast<std::int64_t>(mulmod(static_cast<std::uint64_t>(inv4),
                                                      static_cast<std::uint64_t>(mt),
                                                      static_cast<std::uint64_t>(s)));
    std::int64_t lam = reduce(p.lambda, s);
    CompensatedSum total;
    for (std::int64_t a = 1; a < s; ++a) {
        std::int64_t ainv = tab.inv[static_cast<std::size_t>(a)];
        if (ainv == 0) continue;
        double chin = (n % 2 == 0) ? 1.0 : static_cast<double>(tab.jac[static_cast<std::size_t>(a)]);
        total.add(chin * (*tab.phases)(-(c * ainv + lam * a)));
    }
    Complex g = gauss_sum_value(s);
    Complex gn = 1.0;
    for (std::int64_t j = 0; j < n; ++j) gn *= g;
    return {gn * total.value(), {p.lambda, p.s}, SumMethod::closed_form};
}

std::vector<Complex> selberg_partial(std::int64_t m, std::int64_t n, std::int64_t X) {
    if (X < 2) throw Error("selberg_partial: X must be >= 2");
    std::vector<Complex> partials;
    partials.reserve(static_cast<std::size_t>(X - 1));
    Complex running = 0.0;
    for (std::int64_t q = 2; q <= X; ++q) {
        running += kloosterman(m, n, q).value / static_cast<double>(q);
        partials.push_back(running);
    }
    return partials;
}

} // namespace restlab
