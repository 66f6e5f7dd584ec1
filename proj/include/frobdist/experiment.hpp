#pragma once

// Attempt-count comparison on random genus-2 curves: how many (a1, a2) mod ell
// guesses a Schoof-style search tests in plain lexicographic order versus in
// the order of the probability-weighted candidate list.

#include "frobdist/atkin.hpp"
#include "frobdist/curves.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace frobdist::experiment {

using u64 = std::uint64_t;

/// (a1, a2) reduced mod ell.
struct Pair {
    u64 a1 = 0;
    u64 a2 = 0;
    bool operator==(const Pair &) const = default;
};

/// 1-based rank of the pair in lexicographic order over F_ell^2, a1 major.
u64 classical_attempts(const Pair &truth, u64 ell);

/// 1-based rank in L if present, else |L| plus the lexicographic rank among
/// the pairs missing from L.
u64 list_attempts(const Pair &truth, const std::vector<atkin::WeightedCandidate> &list, u64 ell);

/// Primes 5 <= ell <= max_ell with p = 1 mod ell and ell != p.
std::vector<u64> eligible_ells(u64 p, u64 max_ell = 100);

enum class OrderScope {
    /// {(ell - 1)/2, (ell + 1)/2} for each ell.
    Half,
    /// Every order with nonzero probability.
    All,
    /// The orders listed in ExperimentConfig::orders, for every ell.
    Explicit,
};

struct ExperimentConfig {
    u64 p = 0;
    std::vector<u64> ells;
    u64 curves = 0;
    u64 seed = 0;
    OrderScope scope = OrderScope::Half;
    std::vector<u64> orders;
    unsigned jobs = 1;
    /// Replaces the random curves when set; `curves` is then ignored.
    std::optional<std::vector<curves::HyperellipticCurveG2>> injected;
};

/// Throws std::invalid_argument for an ell that is not a prime >= 5 with
/// p = 1 mod ell, or an empty run.
void validate(const ExperimentConfig &cfg);

/// The orders fed to weighted_candidates for one ell.
std::vector<u64> scope_orders(const ExperimentConfig &cfg, u64 ell);

struct EllRecord {
    u64 ell = 0;
    Pair truth;
    u64 classical = 0;
    u64 list = 0;
    bool in_list = false;
};

struct CurveRecord {
    u64 index = 0;
    curves::HyperellipticCurveG2 curve;
    curves::PointCounts counts;
    curves::FrobeniusCoeffs coeffs;
    std::vector<EllRecord> per_ell;
};

struct EllStats {
    u64 ell = 0;
    std::vector<u64> orders;
    u64 list_size = 0;
    u64 n_curves = 0;
    u64 hits = 0;
    double mean_classical = 0;
    double mean_list = 0;
    /// 100 (1 - mean_list / mean_classical).
    double reduction_pct = 0;
};

struct AttemptStats {
    ExperimentConfig config;
    std::vector<EllStats> per_ell;
    std::vector<CurveRecord> records;
};

AttemptStats run_experiment(const ExperimentConfig &cfg);

/// Reference band for the list strategy's saving, in percent.
inline constexpr double kReferenceBandLow = 1.0;
inline constexpr double kReferenceBandHigh = 12.0;

/// {config, per_ell, curves} as one JSON document.
void write_json(std::ostream &out, const AttemptStats &stats);
/// `p,ell,n_curves,mean_classical,mean_list,reduction_pct`.
void write_summary_csv(std::ostream &out, const AttemptStats &stats);
/// Curve corpus rows for every record.
void write_corpus(std::ostream &out, const AttemptStats &stats);

/// x = residues[i] mod moduli[i] for pairwise coprime moduli, lifted to the
/// symmetric range (-M/2, M/2].
struct CrtResult {
    std::int64_t value = 0;
    u64 modulus = 1;
};
CrtResult crt_combine(const std::vector<u64> &residues, const std::vector<u64> &moduli);

struct CrtDemo {
    curves::HyperellipticCurveG2 curve;
    curves::FrobeniusCoeffs truth;
    std::vector<u64> ells;
    std::vector<Pair> residues;
    curves::FrobeniusCoeffs recovered;
    bool ok = false;
};

/// Counts one seeded curve, reduces (a1, a2) modulo the smallest primes
/// ell != p until their product exceeds twice the Weil bound 6p on |a2|, and
/// recombines.
CrtDemo crt_demo(u64 p, u64 seed);

} // namespace frobdist::experiment
