#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frobdist/symplectic.hpp"

#include <cmath>
#include <map>

using namespace frobdist;
using namespace frobdist::symplectic;

namespace {

// Determinant by Gaussian elimination mod p; independent of the Hessenberg code.
u64 det_mod(std::vector<std::vector<u64>> a, u64 p)
{
    const std::size_t n = a.size();
    u64 det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0)
            ++piv;
        if (piv == n)
            return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = (p - det) % p;
        }
        det = det * a[c][c] % p;
        const u64 inv = numth::invmod_prime(a[c][c], p);
        for (std::size_t r = c + 1; r < n; ++r) {
            const u64 f = a[r][c] * inv % p;
            for (std::size_t k = c; k < n; ++k)
                a[r][k] = (a[r][k] + (p - f) * a[c][k]) % p;
        }
    }
    return det;
}

u64 brute_projective_order(const SympMatrix &m)
{
    SympMatrix x = m;
    for (u64 r = 1;; ++r) {
        if (x.is_scalar())
            return r;
        x = x * m;
    }
}

std::vector<u64> poly_mul(const std::vector<u64> &a, const std::vector<u64> &b, u64 p)
{
    std::vector<u64> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return c;
}

SympMatrix diag(int g, u32 ell, const std::vector<u64> &d)
{
    SympMatrix m(g, ell);
    for (int i = 0; i < 2 * g; ++i)
        m.set(i, i, d[static_cast<std::size_t>(i)]);
    return m;
}

} // namespace

TEST_CASE("group orders")
{
    CHECK(group_order(2, 3).sp == 51840);
    CHECK(group_order(1, 5).sp == 120);
    CHECK(group_order(2, 5).sp == 9360000);
    CHECK(group_order(2, 5).psp == 4680000);
    CHECK(group_order(3, 3).sp == mpz_class("9170703360"));
    CHECK_THROWS(group_order(4, 3));
    CHECK_THROWS(group_order(2, 9));
}

TEST_CASE("similitude multiplier")
{
    CHECK(similitude_check(SympMatrix::identity(2, 5)) == 1u);
    for (u32 lambda = 1; lambda < 7; ++lambda)
        CHECK(similitude_check(SympMatrix::scalar(2, 7, lambda)) == lambda * lambda % 7);
    CHECK(similitude_check(SympMatrix::form(2, 5)) == 1u);

    // diag(c, 1) is a similitude with multiplier c.
    CHECK(similitude_check(diag(2, 11, {3, 3, 1, 1})) == 3u);
    // A generic upper-triangular matrix is not.
    const std::vector<u64> e{1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    CHECK_FALSE(similitude_check(SympMatrix::from_entries(2, 5, e)).has_value());
    CHECK(SympMatrix::scalar(2, 5, 0).is_scalar());
    CHECK_FALSE(SympMatrix::form(2, 5).is_scalar());
}

TEST_CASE("characteristic polynomials of simple matrices")
{
    const auto id = char_poly(SympMatrix::identity(2, 7));
    CHECK(id.a[0] == 7 - 4);
    CHECK(id.a[1] == 6);
    CHECK(id.q == 1);

    const auto minus = char_poly(SympMatrix::scalar(2, 7, 6));
    CHECK(minus.a[0] == 4);
    CHECK(minus.a[1] == 6);

    // (T - 2)^2 (T - 4)^2 over F_7
    const auto d = char_poly(diag(2, 7, {2, 2, 4, 4}));
    std::vector<u64> expected = {1};
    for (u64 root : {2, 2, 4, 4})
        expected = poly_mul(expected, {1, 7 - root}, 7);
    CHECK(d.a[0] == expected[1]);
    CHECK(d.a[1] == expected[2]);
    CHECK(d.q == 1);

    CHECK_THROWS_AS(char_poly(SympMatrix::from_entries(2, 5, std::vector<u64>{1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1})),
                    std::domain_error);
}

TEST_CASE("characteristic polynomial agrees with determinant evaluation")
{
    std::mt19937_64 rng(5);
    for (int g = 1; g <= 3; ++g) {
        for (u32 ell : {5u, 7u, 13u}) {
            for (int t = 0; t < 20; ++t) {
                const SympMatrix a = random_symplectic(ell, g, rng);
                // Mix in a similitude with multiplier 3 to exercise q != 1.
                std::vector<u64> scale(static_cast<std::size_t>(2 * g), 1);
                for (int i = 0; i < g; ++i)
                    scale[static_cast<std::size_t>(i)] = 3;
                const SympMatrix m = a * diag(g, ell, scale) * random_symplectic(ell, g, rng);
                const auto c = full_char_poly(m);
                const int n = 2 * g;
                for (u64 x = 0; x < ell; ++x) {
                    std::vector<std::vector<u64>> xm(static_cast<std::size_t>(n), std::vector<u64>(static_cast<std::size_t>(n)));
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            xm[i][j] = ((i == j ? x : 0) + ell - m(i, j)) % ell;
                    u64 value = 0;
                    for (u32 coef : c)
                        value = (value * x + coef) % ell;
                    CHECK(value == det_mod(xm, ell));
                }
                const auto cp = char_poly(m);
                CHECK(cp.q == 3);
            }
        }
    }
}

TEST_CASE("projective order")
{
    CHECK(projective_order(SympMatrix::identity(2, 5)) == 1);
    CHECK(projective_order(SympMatrix::scalar(2, 5, 4)) == 1);
    CHECK(projective_order(SympMatrix::form(2, 5)) == 2);

    std::mt19937_64 rng(17);
    for (int g = 1; g <= 3; ++g) {
        for (u32 ell : {3u, 5u, 7u}) {
            const ProjectiveOrderSolver solver(g, ell);
            for (int t = 0; t < 40; ++t) {
                const SympMatrix m = random_symplectic(ell, g, rng);
                CHECK(solver(m) == brute_projective_order(m));
            }
        }
    }
    // A regular unipotent element of Sp4(F_3) has order 9, not 3.
    const std::vector<u64> levi{1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 2, 1};
    const std::vector<u64> shear{1, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1};
    const SympMatrix u = SympMatrix::from_entries(2, 3, levi) * SympMatrix::from_entries(2, 3, shear);
    REQUIRE(similitude_check(u) == 1u);
    CHECK(brute_projective_order(u) == 9);
    CHECK(projective_order(u) == 9);
}

TEST_CASE("conjugation invariance of the projective order")
{
    std::mt19937_64 rng(23);
    for (u32 ell : {5u, 11u}) {
        for (int t = 0; t < 50; ++t) {
            const SympMatrix m = random_symplectic(ell, 2, rng);
            const SympMatrix p = random_symplectic(ell, 2, rng);
            const SympMatrix conj = p * m * p.similitude_inverse();
            CHECK(projective_order(conj) == projective_order(m));
            CHECK((p * p.similitude_inverse()).is_identity());
        }
    }
}

TEST_CASE("uniform sampler")
{
    std::mt19937_64 a(99);
    std::mt19937_64 b(99);
    for (int t = 0; t < 10; ++t) {
        const SympMatrix x = random_symplectic(7, 2, a);
        CHECK(similitude_check(x) == 1u);
        CHECK(x == random_symplectic(7, 2, b));
    }

    // The first basis vector is uniform over the 624 nonzero vectors of F_5^4.
    std::mt19937_64 rng(2024);
    const int samples = 1000000;
    std::vector<long> counts(625, 0);
    for (int t = 0; t < samples; ++t) {
        const SympMatrix x = random_symplectic(5, 2, rng);
        std::size_t code = 0;
        for (int i = 3; i >= 0; --i)
            code = code * 5 + x(0, i);
        ++counts[code];
    }
    CHECK(counts[0] == 0);
    const double expected = samples / 624.0;
    double chi2 = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        chi2 += (counts[c] - expected) * (counts[c] - expected) / expected;
    CHECK(chi2 < 623 + 5 * std::sqrt(2.0 * 623));

    // Scalar elements of Sp4(F_3) have probability 2/51840.
    std::mt19937_64 rng3(3);
    const long n = 10000000;
    long scalars = 0;
    for (long t = 0; t < n; ++t)
        scalars += random_symplectic(3, 2, rng3).is_scalar() ? 1 : 0;
    const double p = 2.0 / 51840.0;
    const double mean = n * p;
    CHECK(std::abs(scalars - mean) < 5 * std::sqrt(n * p * (1 - p)));
}

TEST_CASE("census of Sp4(F_3)")
{
    long count = 0;
    long bad = 0;
    std::map<u64, long> orders;
    const ProjectiveOrderSolver solver(2, 3);
    census(3, 2, [&](const SympMatrix &m) {
        ++count;
        if (similitude_check(m) != 1u)
            ++bad;
        const u64 r = solver(m);
        ++orders[r];
        if (!m.pow(r).is_scalar())
            ++bad;
        for (const auto &[p, e] : numth::factorize(r)) {
            if (m.pow(r / p).is_scalar())
                ++bad;
        }
    });
    CHECK(count == 51840);
    CHECK(bad == 0);
    CHECK(orders[1] == 2);

    CHECK_THROWS(check_census_supported(7, 2, {}));
    CHECK_NOTHROW(check_census_supported(7, 2, {true, 1}));
    CHECK_THROWS(check_census_supported(11, 2, {true, 1}));
    CHECK_NOTHROW(check_census_supported(13, 1, {}));
}

TEST_CASE("census block results do not depend on worker count")
{
    auto run = [](unsigned jobs) {
        return census_blocks<std::map<u64, long>>(
            3, 2, CensusOptions{false, jobs}, [] { return std::map<u64, long>{}; },
            [](std::map<u64, long> &acc, const SympMatrix &m) { ++acc[full_char_poly(m)[1]]; });
    };
    const auto one = run(1);
    const auto three = run(3);
    CHECK(one == three);
    long total = 0;
    for (const auto &block : one)
        for (const auto &[k, v] : block)
            total += v;
    CHECK(total == 51840);

    long sl2 = 0;
    census(13, 1, [&](const SympMatrix &) { ++sl2; });
    CHECK(sl2 == 13 * 168);
}
