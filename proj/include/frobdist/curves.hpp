#pragma once

// Genus-2 curves y^2 = f(x), f monic square-free of degree 5, over small
// prime fields: random generation, naive point counts over F_p and F_{p^2},
// and the Frobenius coefficients recovered from those counts.

#include "frobdist/ff.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>

namespace frobdist::curves {

using u64 = std::uint64_t;

/// Naive F_{p^2} counting costs p^2 character evaluations.
inline constexpr u64 kMaxCurvePrime = 50000;
inline constexpr int kMaxCurveTries = 1000;

struct HyperellipticCurveG2 {
    u64 p = 0;
    /// f = x^5 + f[4] x^4 + f[3] x^3 + f[2] x^2 + f[1] x + f[0].
    std::array<u64, 5> f{};

    ff::poly::Poly poly() const;
    bool operator==(const HyperellipticCurveG2 &) const = default;
};

/// Validates p (odd prime up to kMaxCurvePrime), reduces the coefficients
/// and rejects a non-square-free f with std::invalid_argument.
HyperellipticCurveG2 make_curve(u64 p, const std::array<u64, 5> &f);

struct RandomCurve {
    HyperellipticCurveG2 curve;
    int attempts = 0;
};

/// Uniform monic square-free quintic by rejection; p > 5. Throws
/// std::runtime_error after kMaxCurveTries rejections.
RandomCurve random_curve(u64 p, std::mt19937_64 &rng);

/// #C(F_{p^k}) for k in {1, 2}, including the single point at infinity.
u64 count_points(const HyperellipticCurveG2 &c, int extension_degree);

struct PointCounts {
    u64 n1 = 0;
    u64 n2 = 0;
};

PointCounts point_counts(const HyperellipticCurveG2 &c);

/// chi(T) = T^4 + a1 T^3 + a2 T^2 + p a1 T + p^2.
struct FrobeniusCoeffs {
    std::int64_t a1 = 0;
    std::int64_t a2 = 0;
};

/// a1 = n1 - p - 1, a2 = (a1^2 - (p^2 + 1 - n2)) / 2. Throws
/// std::domain_error on a Weil-bound violation or an odd numerator.
FrobeniusCoeffs frobenius_charpoly(const PointCounts &counts, u64 p);

/// chi(1) = #Jac(C)(F_p).
std::int64_t jacobian_order(const FrobeniusCoeffs &a, u64 p);

void write_corpus_header(std::ostream &out);
/// One row of `p,f4,f3,f2,f1,f0,n1,n2,a1,a2`.
void write_corpus_row(std::ostream &out, const HyperellipticCurveG2 &c, const PointCounts &n, const FrobeniusCoeffs &a);

} // namespace frobdist::curves
