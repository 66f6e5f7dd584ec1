#include "frobdist/curves.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace frobdist::curves {

namespace {

void check_prime(u64 p)
{
    if (p < 3 || p > kMaxCurvePrime || !numth::is_prime(p))
        throw std::invalid_argument("curve field must be an odd prime <= " + std::to_string(kMaxCurvePrime) +
                                    ", got " + std::to_string(p));
}

// chi[v] in {0, 1, -1} for every residue v.
std::vector<int8_t> character_table(u64 p)
{
    std::vector<int8_t> chi(p, -1);
    chi[0] = 0;
    for (u64 x = 1; x <= p / 2; ++x)
        chi[x * x % p] = 1;
    return chi;
}

// F_{p^2} = F_p[t]/(t^2 + m1 t + m0), elements a + b t.
struct Quad {
    u64 a = 0, b = 0;
};

struct QuadArith {
    const ff::PrimeField &F;
    u64 m0, m1;

    Quad add(Quad x, Quad y) const { return {F.add(x.a, y.a), F.add(x.b, y.b)}; }
    Quad sub(Quad x, Quad y) const { return {F.sub(x.a, y.a), F.sub(x.b, y.b)}; }
    Quad mul(Quad x, Quad y) const
    {
        const u64 bd = F.mul(x.b, y.b);
        return {F.sub(F.mul(x.a, y.a), F.mul(m0, bd)),
                F.sub(F.add(F.mul(x.a, y.b), F.mul(x.b, y.a)), F.mul(m1, bd))};
    }
    u64 norm(Quad x) const
    {
        return F.add(F.sub(F.mul(x.a, x.a), F.mul(m1, F.mul(x.a, x.b))), F.mul(m0, F.mul(x.b, x.b)));
    }
};

u64 count_base(const HyperellipticCurveG2 &c)
{
    const ff::PrimeField F(c.p);
    const auto chi = character_table(c.p);
    const auto f = c.poly();
    std::int64_t n = 1;
    for (u64 x = 0; x < c.p; ++x)
        n += 1 + chi[ff::poly::eval(f, x, F)];
    return static_cast<u64>(n);
}

// Forward differences in the t-coordinate: for fixed a, b -> f(a + b t) is a
// quintic in b, so five additions replace each Horner evaluation.
u64 count_quadratic(const HyperellipticCurveG2 &c)
{
    const u64 p = c.p;
    const auto field = ff::ext_field_build(p, 2);
    const ff::PrimeField F(p);
    const QuadArith Q{F, field->modulus_poly()[0], field->modulus_poly()[1]};
    const auto chi = character_table(p);

    auto eval = [&](Quad z) {
        Quad acc{1, 0};
        for (int i = 4; i >= 0; --i)
            acc = Q.add(Q.mul(acc, z), Quad{c.f[static_cast<std::size_t>(i)], 0});
        return acc;
    };

    std::int64_t n = 1;
    for (u64 a = 0; a < p; ++a) {
        std::array<Quad, 6> d{};
        for (u64 b = 0; b < 6; ++b)
            d[b] = eval(Quad{a, b % p});
        // In place: d[k] becomes the k-th forward difference at b = 0.
        for (int k = 1; k < 6; ++k)
            for (int i = 5; i >= k; --i)
                d[static_cast<std::size_t>(i)] = Q.sub(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(i - 1)]);
        for (u64 b = 0; b < p; ++b) {
            n += 1 + chi[Q.norm(d[0])];
            for (int i = 0; i < 5; ++i)
                d[static_cast<std::size_t>(i)] = Q.add(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(i + 1)]);
        }
    }
    return static_cast<u64>(n);
}

} // namespace

ff::poly::Poly HyperellipticCurveG2::poly() const
{
    return {f[0], f[1], f[2], f[3], f[4], 1};
}

HyperellipticCurveG2 make_curve(u64 p, const std::array<u64, 5> &f)
{
    check_prime(p);
    HyperellipticCurveG2 c{p, {}};
    for (std::size_t i = 0; i < 5; ++i)
        c.f[i] = f[i] % p;
    if (!ff::poly::is_square_free(c.poly(), ff::PrimeField(p)))
        throw std::invalid_argument("f is not square-free");
    return c;
}

RandomCurve random_curve(u64 p, std::mt19937_64 &rng)
{
    check_prime(p);
    if (p <= 5)
        throw std::invalid_argument("random curves need p > 5");
    const ff::PrimeField F(p);
    std::uniform_int_distribution<u64> coeff(0, p - 1);
    for (int attempt = 1; attempt <= kMaxCurveTries; ++attempt) {
        HyperellipticCurveG2 c{p, {}};
        for (auto &x : c.f)
            x = coeff(rng);
        if (ff::poly::is_square_free(c.poly(), F))
            return {c, attempt};
    }
    throw std::runtime_error("no square-free quintic after " + std::to_string(kMaxCurveTries) + " draws");
}

u64 count_points(const HyperellipticCurveG2 &c, int extension_degree)
{
    check_prime(c.p);
    if (extension_degree == 1)
        return count_base(c);
    if (extension_degree == 2)
        return count_quadratic(c);
    throw std::invalid_argument("count_points supports F_p and F_{p^2} only");
}

PointCounts point_counts(const HyperellipticCurveG2 &c)
{
    return {count_points(c, 1), count_points(c, 2)};
}

FrobeniusCoeffs frobenius_charpoly(const PointCounts &counts, u64 p)
{
    const auto P = static_cast<std::int64_t>(p);
    const std::int64_t a1 = static_cast<std::int64_t>(counts.n1) - P - 1;
    const std::int64_t t2 = P * P + 1 - static_cast<std::int64_t>(counts.n2);
    // |a1| <= 4 sqrt(p) and |sum of squared roots| <= 4p.
    if (a1 * a1 > 16 * P || std::llabs(t2) > 4 * P)
        throw std::domain_error("point counts violate the Weil bounds");
    const std::int64_t num = a1 * a1 - t2;
    if (num % 2 != 0)
        throw std::domain_error("point counts give a non-integral a2");
    return {a1, num / 2};
}

std::int64_t jacobian_order(const FrobeniusCoeffs &a, u64 p)
{
    const auto P = static_cast<std::int64_t>(p);
    return 1 + a.a1 + a.a2 + P * a.a1 + P * P;
}

void write_corpus_header(std::ostream &out)
{
    out << "p,f4,f3,f2,f1,f0,n1,n2,a1,a2\n";
}

void write_corpus_row(std::ostream &out, const HyperellipticCurveG2 &c, const PointCounts &n, const FrobeniusCoeffs &a)
{
    out << c.p;
    for (int i = 4; i >= 0; --i)
        out << ',' << c.f[static_cast<std::size_t>(i)];
    out << ',' << n.n1 << ',' << n.n2 << ',' << a.a1 << ',' << a.a2 << '\n';
}

} // namespace frobdist::curves
