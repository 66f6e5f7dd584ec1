#pragma once

// Distribution of projective orders of elements of Sp4(F_ell): the closed
// form assembled from the conjugacy classes, the exact census, Monte Carlo
// estimates, moments, modes, bucketed averages and normalized histograms.

#include "frobdist/symplectic.hpp"

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace frobdist::classdist {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

enum class Method { ClosedForm, Census, MonteCarlo };

std::string method_name(Method m);
Method parse_method(const std::string &name);

struct OrderDistribution {
    u64 ell = 0;
    Method method = Method::ClosedForm;
    u64 samples = 0;
    u64 seed = 0;
    std::map<u64, mpq_class> entries;

    mpq_class total() const;
    mpq_class probability(u64 order) const;
};

/// Conjugacy classes sharing a label, a centralizer size and a parameter
/// space. classes_by_order counts the classes of each projective order.
struct ClassFamily {
    std::string label;
    int arity = 0;
    mpz_class centralizer;
    std::map<u64, u64> classes_by_order;

    u64 class_count() const;
    /// Probability of one class of this family, 1 / centralizer.
    mpq_class class_probability() const { return mpq_class(1, centralizer); }
};

struct ClosedFormOptions {
    /// Allow ell in {3, 5}. The class table itself is unchanged.
    bool allow_small_ell = false;
    /// At ell = 3 a regular unipotent element has order 9 rather than ell;
    /// set to use the true order for the A4 classes.
    bool fix_ell3_unipotent = false;
};

/// Every family of conjugacy classes of Sp4(F_ell), ell odd. Throws
/// std::logic_error if the class sizes do not add up to |Sp4(F_ell)|.
std::vector<ClassFamily> class_families(u64 ell, const ClosedFormOptions &opts = {});

OrderDistribution closed_form(u64 ell, const ClosedFormOptions &opts = {});

/// Exact frequencies from the full enumeration of Sp4(F_ell).
OrderDistribution census_distribution(u32 ell, const symplectic::CensusOptions &opts = {});

/// Samples are drawn in fixed blocks with seeds derived from (seed, block),
/// so the result is independent of jobs.
OrderDistribution monte_carlo(u32 ell, u64 samples, u64 seed, unsigned jobs = 1);

inline constexpr u64 kMonteCarloBlock = 1U << 15U;

struct DistributionRequest {
    Method method = Method::ClosedForm;
    u64 samples = 0;
    std::optional<u64> seed;
    unsigned jobs = 1;
    bool allow_big = false;
    ClosedFormOptions closed;
};

/// Dispatches on the method; rejects unsupported (ell, method) combinations
/// with std::invalid_argument.
OrderDistribution order_distribution(u64 ell, const DistributionRequest &req);

double total_variation(const OrderDistribution &a, const OrderDistribution &b);

struct MomentReport {
    double mean = 0;
    double variance = 0;
    bool exact = false;
    mpq_class exact_mean;
    mpq_class exact_variance;
};

/// psi(ell), the degree-10 polynomial in the asymptotic variance, exactly.
mpz_class psi(u64 ell);

/// Asymptotic mean and variance in double precision.
MomentReport moments_closed_form(u64 ell);

MomentReport moments_exact(const OrderDistribution &dist);

/// Top k orders by probability, ties broken by the smaller order.
std::vector<u64> modes(const OrderDistribution &dist, std::size_t k);

/// Buckets of the averaged order table. Exact-value buckets take precedence
/// over the range buckets; ranges are half-open (a, b]. Order 1 has its own
/// bucket so that the buckets partition the support.
enum class Bucket {
    Trivial,
    HalfMinus,      // (l-1)/2
    HalfPlus,       // (l+1)/2
    EllMinus,       // l-1
    OtherSmall,     // other in (1, l]
    EllPlus,        // l+1
    OtherMedium,    // other in (l, 2l]
    QuarterSqMinus, // (l^2-1)/4
    QuarterSqPlus,  // (l^2+1)/4
    HalfSqMinus,    // (l^2-1)/2
    HalfSqPlus,     // (l^2+1)/2
    OtherLarge,     // other in (2l, (l^2+1)/2]
    Top,            // ((l^2+1)/2, l(l+1)]
};

inline constexpr std::size_t kBucketCount = 13;

std::string bucket_label(Bucket b);
/// Reference percentage for the bucket, empty for the trivial bucket.
std::optional<double> bucket_reference_percent(Bucket b);

/// Throws std::domain_error when the order lies outside every bucket.
Bucket classify(u64 order, u64 ell);

std::array<mpq_class, kBucketCount> bucket_masses(const OrderDistribution &dist);

struct Table3 {
    std::vector<u64> primes;
    /// Mean over primes of 100 * bucket mass.
    std::array<double, kBucketCount> percent{};
};

/// Closed-form bucket masses averaged over the primes (each >= 7).
Table3 table3_aggregate(const std::vector<u64> &primes, unsigned jobs = 1);

struct HeatmapRow {
    u64 ell = 0;
    std::vector<double> mass;
};

struct Heatmap {
    /// Normalized orders ord / ell^2 are binned over [0, upper].
    mpq_class upper;
    std::size_t bins = 0;
    std::vector<HeatmapRow> rows;

    double bin_lo(std::size_t b) const;
    double bin_hi(std::size_t b) const;
};

/// upper = 1 + 1/min(primes), the largest possible normalized order. Bins are
/// [lo, hi) except the last, which is closed.
Heatmap heatmap_data(const std::vector<u64> &primes, std::size_t bins, unsigned jobs = 1);

/// Bin index of ord / ell^2 for a heatmap with the given upper bound.
std::size_t heatmap_bin(u64 order, u64 ell, const mpq_class &upper, std::size_t bins);

void write_distribution_csv(std::ostream &out, const OrderDistribution &dist);
/// Reads the rows written by write_distribution_csv; '#' lines are skipped.
std::map<u64, mpq_class> read_distribution_csv(std::istream &in);

void write_heatmap_csv(std::ostream &out, const Heatmap &h);
void write_table3_csv(std::ostream &out, const Table3 &t);

} // namespace frobdist::classdist
