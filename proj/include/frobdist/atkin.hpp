#pragma once

// Candidate characteristic-polynomial coefficients mod ell for a Frobenius
// element of known projective order r, in dimensions g = 1, 2, 3.
//
// With chi(T) = T^g h(T + q/T), the roots mu_i of h satisfy mu_i^2 = q eta_i,
// eta_i = zeta_i + 1/zeta_i + 2, where the zeta_i are r-th roots of unity
// (lcm of their orders r, or r/2 when r is even). The classical form
// t^2 = q (zeta + 1/zeta)^2 is the same statement after zeta -> zeta^2.

#include "frobdist/classdist.hpp"
#include "frobdist/ff.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace frobdist::atkin {

using u64 = std::uint64_t;

inline constexpr int kMaxG = 3;

/// a_n = sum_j C(g - n + 2j, j) q^j b_(n-2j), b_0 = 1, n = 1..g.
std::vector<mpz_class> real_to_char(const std::vector<mpz_class> &b, const mpz_class &q);
std::vector<mpz_class> char_to_real(const std::vector<mpz_class> &a, const mpz_class &q);
std::vector<u64> real_to_char(const std::vector<u64> &b, u64 q, const ff::PrimeField &F);
std::vector<u64> char_to_real(const std::vector<u64> &a, u64 q, const ff::PrimeField &F);

/// Solves k a_k = S_k + S_(k-1) a_1 + ... + S_1 a_(k-1) over the integers;
/// throws std::domain_error if a division is not exact.
std::vector<mpz_class> newton_coeffs(const std::vector<mpz_class> &power_sums);
/// Same recurrence mod ell; throws std::domain_error when ell <= count.
std::vector<u64> newton_coeffs(const std::vector<u64> &power_sums, const ff::PrimeField &F);

/// Largest divisor of r coprime to ell.
u64 strip_ell_part(u64 r, u64 ell);

struct ZetaTuple {
    std::vector<ff::FieldElem> zeta;
    std::vector<u64> orders;
    u64 r = 0;
};

/// True when lcm(orders) = r, or r is even and lcm(orders) in {r, r/2}.
bool lcm_admissible(const std::vector<u64> &orders, u64 r);

/// All ordered g-tuples of r-th roots of unity meeting the lcm condition, in
/// the smallest F_{ell^k} containing them. Throws ff::InsufficientFieldDegree
/// if that needs k > 2g.
std::vector<ZetaTuple> zeta_tuples(u64 r, int g, u64 ell);

struct Witness {
    /// Codes of zeta_1..zeta_g in the field of the given degree.
    std::vector<u64> zeta_codes;
    unsigned field_degree = 0;
    /// Real Weil coefficients (b_1..b_g) fixed by the chosen signs.
    std::vector<u64> b;
};

enum class CandidateMode {
    /// One sign per sqrt(eta_i), propagated to every b_k.
    Linked,
    /// a_1 and the remaining coefficients taken from the squared relations
    /// independently.
    Squared,
};

struct CandidateSet {
    u64 ell = 0;
    u64 q = 0;
    u64 r = 0;
    int g = 0;
    /// Sorted, duplicate-free coefficient tuples (a_1..a_g) with witnesses.
    std::map<std::vector<u64>, std::vector<Witness>> entries;

    bool contains(const std::vector<u64> &a) const { return entries.count(a) != 0; }
    std::size_t size() const { return entries.size(); }
};

/// Requires gcd(r, ell) = 1 and q != 0 mod ell. Roots are taken from
/// F_{ell^(2g)} and, for g = 3, also from F_{ell^4}: together these contain
/// every eigenvalue field of a 2g x 2g similitude.
CandidateSet candidates(int g, u64 ell, u64 q, u64 r, CandidateMode mode = CandidateMode::Linked);

/// Candidates generated from an explicit list of zeta tuples, all in one field.
CandidateSet candidates_from_tuples(int g, u64 ell, u64 q, u64 r, const std::vector<ZetaTuple> &tuples,
                                    CandidateMode mode = CandidateMode::Linked);

struct WeightedCandidate {
    std::vector<u64> a;
    mpq_class weight;
};

/// Candidates for g = 2 over the orders in scope (all orders of dist when
/// empty), each tuple weighted by sum P(r) / |candidates(r)|; sorted by
/// descending weight, then lexicographically.
std::vector<WeightedCandidate> weighted_candidates(u64 ell, u64 q, const classdist::OrderDistribution &dist,
                                                   const std::vector<u64> &orders = {});

} // namespace frobdist::atkin
