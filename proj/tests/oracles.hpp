#pragma once

// Test-side reference computations, written independently of the library
// code paths they check.

#include "frobdist/curves.hpp"
#include "frobdist/ff.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <iterator>
#include <map>
#include <vector>

namespace oracle {

using Laurent = std::map<long, mpz_class>;

// T^g h(T + q/T) expanded term by term as a Laurent polynomial in T.
inline Laurent expand_real_weil(const std::vector<mpz_class> &b, const mpz_class &q)
{
    const long g = static_cast<long>(b.size());
    Laurent out;
    for (long k = 0; k <= g; ++k) {
        const mpz_class bk = k == 0 ? mpz_class(1) : b[static_cast<std::size_t>(k - 1)];
        // (T + q/T)^(g-k) by repeated multiplication.
        Laurent p{{0, 1}};
        for (long m = 0; m < g - k; ++m) {
            Laurent next;
            for (const auto &[e, c] : p) {
                next[e + 1] += c;
                next[e - 1] += c * q;
            }
            p = next;
        }
        for (const auto &[e, c] : p)
            out[e + g] += bk * c;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// T^2g + a_1 T^(2g-1) + ... + a_g T^g + a_(g-1) q T^(g-1) + ... + q^g.
inline Laurent reciprocal(const std::vector<mpz_class> &a, const mpz_class &q)
{
    const long g = static_cast<long>(a.size());
    Laurent out;
    out[2 * g] = 1;
    mpz_class qp = 1;
    for (long k = 1; k <= g; ++k)
        out[2 * g - k] += a[static_cast<std::size_t>(k - 1)];
    for (long k = g - 1; k >= 0; --k) {
        qp *= q;
        const mpz_class ak = k == 0 ? mpz_class(1) : a[static_cast<std::size_t>(k - 1)];
        out[k] += ak * qp;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// 1 + #{(x, y) in F^2 : y^2 = f(x)} by walking every pair.
inline std::uint64_t brute_count(const frobdist::curves::HyperellipticCurveG2 &c, unsigned k)
{
    const auto field = frobdist::ff::ext_field_build(c.p, k);
    const std::uint64_t size = field->size();
    std::vector<frobdist::ff::FieldElem> elems;
    for (std::uint64_t code = 0; code < size; ++code)
        elems.push_back(field->from_code(code));
    std::uint64_t n = 1;
    for (const auto &x : elems) {
        frobdist::ff::FieldElem fx = field->one();
        for (int i = 4; i >= 0; --i)
            fx = fx * x + field->from_base(c.f[static_cast<std::size_t>(i)]);
        for (const auto &y : elems)
            n += (y * y == fx) ? 1 : 0;
    }
    return n;
}

} // namespace oracle
