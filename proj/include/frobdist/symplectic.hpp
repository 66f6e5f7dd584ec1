#pragma once

// Matrices of Sp_2g(F_ell) and GSp_2g(F_ell) for g <= 3 with the standard
// form Omega = [[0, I], [-I, 0]]: similitude test, characteristic polynomial,
// projective order, uniform sampling and exhaustive census.

#include "frobdist/numth.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace frobdist::symplectic {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

inline constexpr int kMaxG = 3;
inline constexpr int kMaxDim = 2 * kMaxG;

/// Matrix entries are kept as 32-bit residues; row dot products must fit
/// 32 bits before reduction, which holds for ell below this bound.
inline constexpr u32 kMaxMatrixPrime = 1U << 14U;

/// Lemire's remainder-by-multiplication for a fixed 32-bit divisor.
struct FastMod {
    u64 magic;
    u32 divisor;

    explicit FastMod(u32 d) : magic(~u64{0} / d + 1), divisor(d) {}
    u32 operator()(u32 a) const noexcept
    {
        const u64 low = magic * a;
        return static_cast<u32>((static_cast<numth::u128>(low) * divisor) >> 64U);
    }
};

class SympMatrix {
public:
    SympMatrix(int g, u32 ell);

    static SympMatrix identity(int g, u32 ell);
    static SympMatrix scalar(int g, u32 ell, u32 lambda);
    /// The fixed skew form Omega.
    static SympMatrix form(int g, u32 ell);
    /// Row-major entries; each is reduced mod ell.
    static SympMatrix from_entries(int g, u32 ell, std::span<const u64> entries);

    int g() const noexcept { return g_; }
    int dim() const noexcept { return 2 * g_; }
    u32 ell() const noexcept { return mod_.divisor; }

    u32 operator()(int i, int j) const noexcept { return a_[static_cast<std::size_t>(i * kMaxDim + j)]; }
    void set(int i, int j, u64 v) noexcept { a_[static_cast<std::size_t>(i * kMaxDim + j)] = static_cast<u32>(v % ell()); }

    bool is_scalar() const noexcept;
    bool is_identity() const noexcept;

    SympMatrix operator*(const SympMatrix &o) const noexcept;
    SympMatrix pow(u64 e) const noexcept;
    SympMatrix transpose() const noexcept;
    /// Inverse of a similitude with multiplier c: Omega M^T Omega^{-1} / c.
    SympMatrix similitude_inverse() const;

    bool operator==(const SympMatrix &o) const noexcept { return g_ == o.g_ && a_ == o.a_; }

private:
    int g_;
    FastMod mod_;
    std::array<u32, kMaxDim * kMaxDim> a_{};
};

struct GroupOrder {
    mpz_class sp;
    mpz_class psp;
};

/// |Sp_2g(F_ell)| = ell^(g^2) prod_{i<=g} (ell^(2i) - 1) and |PSp| = |Sp| / 2.
GroupOrder group_order(int g, u64 ell);

/// Multiplier c with M Omega M^T = c Omega, c != 0; empty otherwise.
std::optional<u32> similitude_check(const SympMatrix &m);

/// Coefficients of T^2g + a_1 T^(2g-1) + ... + a_g T^g + a_(g-1) q T^(g-1) + ... + q^g.
struct CharPolyCoeffs {
    int g = 0;
    std::array<u32, kMaxG> a{};
    u32 q = 0;
    u32 ell = 0;

    bool operator==(const CharPolyCoeffs &) const = default;
};

/// det(T I - M) as the monic coefficient list [1, c_1, ..., c_n] over F_ell.
std::vector<u32> full_char_poly(const SympMatrix &m);

/// Throws std::domain_error if M is not a similitude or the polynomial is
/// not reciprocal with respect to the multiplier.
CharPolyCoeffs char_poly(const SympMatrix &m);

/// Exponent multiple for projective orders in GSp_2g(F_ell): the semisimple
/// part lives in F_{ell^k} for k in {1,2} (g=1), {1,2,4} (g=2) or
/// {1,2,3,4,6} (g=3), the unipotent part has order the least ell^m >= 2g.
numth::Factorization projective_exponent(int g, u64 ell);

/// Reusable projective-order evaluator for a fixed (g, ell).
class ProjectiveOrderSolver {
public:
    ProjectiveOrderSolver(int g, u32 ell);
    u64 operator()(const SympMatrix &m) const;

private:
    u64 solve(const SympMatrix &x, std::size_t lo, std::size_t hi) const;

    int g_;
    u32 ell_;
    std::vector<std::pair<u64, unsigned>> prime_powers_;
    std::vector<u64> prime_power_values_;
};

/// Least r >= 1 with M^r scalar.
u64 projective_order(const SympMatrix &m);

/// Exactly uniform element of Sp_2g(F_ell), built one hyperbolic pair at a
/// time: each basis vector is uniform among the admissible vectors given the
/// earlier ones.
SympMatrix random_symplectic(u32 ell, int g, std::mt19937_64 &rng);

/// Enumerates Sp_2g(F_ell) by choosing symplectic bases row by row. Every
/// element is produced exactly once; nothing is stored. Work is indexed by
/// the first basis vector so disjoint index ranges can go to different
/// workers.
class SymplecticBasisEnumerator {
public:
    SymplecticBasisEnumerator(u32 ell, int g);

    /// Number of choices for the first basis vector (ell^2g - 1).
    std::size_t first_vector_count() const noexcept { return nonzero_.size(); }

    template <class Visitor>
    void run(std::size_t first_begin, std::size_t first_end, Visitor &&visit) const
    {
        SympMatrix m(g_, ell_);
        for (std::size_t idx = first_begin; idx < first_end && idx < nonzero_.size(); ++idx) {
            const Vec &e = all_[nonzero_[idx]];
            place(m, 0, e);
            for (u32 id = 0; id < all_.size(); ++id) {
                if (form_value(e, all_[id]) == 1)
                    continue_pair(m, 0, e, all_[id], all_ids_, visit);
            }
        }
    }

private:
    using Vec = std::array<u32, kMaxDim>;

    u32 form_value(const Vec &u, const Vec &v) const noexcept;
    void place(SympMatrix &m, int row, const Vec &v) const noexcept;

    template <class Visitor>
    void continue_pair(SympMatrix &m, int level, const Vec &e, const Vec &f, const std::vector<u32> &space,
                       Visitor &visit) const
    {
        place(m, g_ + level, f);
        if (level + 1 == g_) {
            visit(static_cast<const SympMatrix &>(m));
            return;
        }
        std::vector<u32> next;
        next.reserve(space.size());
        for (u32 id : space) {
            if (form_value(all_[id], e) == 0 && form_value(all_[id], f) == 0)
                next.push_back(id);
        }
        for (u32 e_id : next) {
            const Vec &e2 = all_[e_id];
            if (e_id == zero_id_)
                continue;
            place(m, level + 1, e2);
            for (u32 f_id : next) {
                if (form_value(e2, all_[f_id]) == 1)
                    continue_pair(m, level + 1, e2, all_[f_id], next, visit);
            }
        }
    }

    u32 ell_;
    int g_;
    std::vector<Vec> all_;
    std::vector<u32> all_ids_;
    std::vector<u32> nonzero_;
    u32 zero_id_ = 0;
};

struct CensusOptions {
    /// Permits ell = 7 for g = 2 (about 2.8e8 elements).
    bool allow_big = false;
    unsigned jobs = 1;
};

/// Throws std::invalid_argument for (g, ell) outside the supported census
/// range: any odd ell for g = 1; ell in {3, 5} for g = 2, ell = 7 with allow_big.
void check_census_supported(u32 ell, int g, const CensusOptions &opts);

/// Streams every element of Sp_2g(F_ell) to visit (single worker).
void census(u32 ell, int g, const std::function<void(const SympMatrix &)> &visit, const CensusOptions &opts = {});

/// Parallel census with per-worker accumulators. make() builds an empty
/// accumulator, visit(acc, M) folds an element into it; the returned vector
/// holds one accumulator per contiguous block of first vectors, in block
/// order, so merging it is independent of the worker count.
template <class Acc, class Make, class Visit>
std::vector<Acc> census_blocks(u32 ell, int g, const CensusOptions &opts, Make make, Visit visit);

} // namespace frobdist::symplectic

#include "frobdist/detail/census_parallel.hpp"
