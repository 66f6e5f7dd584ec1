#include "frobdist/classdist.hpp"

#include "frobdist/numth.hpp"
#include "frobdist/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace frobdist::classdist {

namespace {

mpz_class to_mpz(u64 v) { return mpz_class(static_cast<unsigned long>(v)); }

u64 pairs(u64 k) { return k < 2 ? 0 : k * (k - 1) / 2; }

int mobius(u64 n)
{
    int sign = 1;
    for (const auto &[p, e] : numth::factorize(n)) {
        if (e > 1)
            return 0;
        sign = -sign;
    }
    return sign;
}

// Order rule shared by the primed C families: s is the order of the
// eigenvalue paired with -1.
u64 primed_order(u64 s)
{
    if (s % 2 == 1)
        return 2 * s;
    if (s % 4 == 2)
        return s / 2;
    return s;
}

// B1 and B2: the parameter runs over Z/N modulo {+-1, +-ell}; classes are
// grouped by g = gcd(i, N) and the order is (N/2) / gcd(i, N/2).
std::map<u64, u64> cyclic_orbit_classes(u64 ell, u64 n, bool split_torus)
{
    std::map<u64, u64> out;
    const u64 half = n / 2;
    for (u64 g : numth::divisors(numth::factorize(n))) {
        if (g == n || g == half)
            continue;
        if (split_torus && (g % (ell + 1) == 0 || g % (ell - 1) == 0))
            continue;
        const u64 phi = numth::euler_phi(numth::factorize(n / g));
        if (phi % 4 != 0)
            throw std::logic_error("class table: orbit count is not a multiple of 4");
        out[half / std::gcd(g, half)] += phi / 4;
    }
    return out;
}

// B3 and B4: unordered pairs 1 <= i < j <= m with order N / gcd(N, i+j, j-i).
// Counted by Moebius inversion over d = gcd(N, i+j, j-i) instead of a double loop.
std::map<u64, u64> two_parameter_classes(u64 n, u64 m)
{
    const auto divs = numth::divisors(numth::factorize(n));
    std::map<u64, u64> at_least;
    for (u64 d : divs) {
        if (d % 2 == 1) {
            at_least[d] = pairs(m / d);
        } else {
            const u64 k = m / (d / 2);
            at_least[d] = pairs((k + 1) / 2) + pairs(k / 2);
        }
    }
    std::map<u64, u64> out;
    for (u64 d : divs) {
        std::int64_t exact = 0;
        for (u64 d2 : divs) {
            if (d2 % d == 0)
                exact += mobius(d2 / d) * static_cast<std::int64_t>(at_least[d2]);
        }
        if (exact < 0)
            throw std::logic_error("class table: negative class count");
        if (exact > 0)
            out[n / d] += static_cast<u64>(exact);
    }
    return out;
}

// B5: i in 1..(l-1)/2, j in 1..(l-3)/2 with order
// (l^2-1) / gcd(l^2-1, i(l-1) + j(l+1), 2i(l-1)), which depends on i and j
// only through gcd(i, l+1) and gcd(j, l-1).
std::map<u64, u64> mixed_torus_classes(u64 ell)
{
    const u64 n = ell * ell - 1;
    std::map<u64, u64> by_i;
    std::map<u64, u64> by_j;
    for (u64 i = 1; i <= (ell - 1) / 2; ++i)
        ++by_i[std::gcd(i, ell + 1)];
    for (u64 j = 1; j + 3 <= ell && j <= (ell - 3) / 2; ++j)
        ++by_j[std::gcd(j, ell - 1)];
    std::map<u64, u64> out;
    for (const auto &[gi, ci] : by_i) {
        for (const auto &[gj, cj] : by_j) {
            const u64 d = std::gcd(std::gcd(n, gi * (ell - 1) + gj * (ell + 1)), 2 * gi * (ell - 1));
            out[n / d] += ci * cj;
        }
    }
    return out;
}

template <class OrderOf>
std::map<u64, u64> one_parameter_classes(u64 first, u64 last, OrderOf order_of)
{
    std::map<u64, u64> out;
    for (u64 i = first; i <= last; ++i)
        ++out[order_of(i)];
    return out;
}

void check_odd_prime(u64 ell)
{
    if (ell < 3 || !numth::is_prime(ell))
        throw std::invalid_argument("ell must be an odd prime, got " + std::to_string(ell));
}

} // namespace

std::string method_name(Method m)
{
    switch (m) {
    case Method::ClosedForm:
        return "closed";
    case Method::Census:
        return "census";
    case Method::MonteCarlo:
        return "mc";
    }
    return "?";
}

Method parse_method(const std::string &name)
{
    if (name == "closed")
        return Method::ClosedForm;
    if (name == "census")
        return Method::Census;
    if (name == "mc")
        return Method::MonteCarlo;
    throw std::invalid_argument("unknown method '" + name + "' (expected closed, census or mc)");
}

mpq_class OrderDistribution::total() const
{
    mpq_class s = 0;
    for (const auto &[r, p] : entries)
        s += p;
    return s;
}

mpq_class OrderDistribution::probability(u64 order) const
{
    const auto it = entries.find(order);
    return it == entries.end() ? mpq_class(0) : it->second;
}

u64 ClassFamily::class_count() const
{
    u64 n = 0;
    for (const auto &[r, c] : classes_by_order)
        n += c;
    return n;
}

std::vector<ClassFamily> class_families(u64 ell, const ClosedFormOptions &opts)
{
    check_odd_prime(ell);
    if (ell < 7 && !opts.allow_small_ell)
        throw std::invalid_argument("closed form: ell < 7 needs the small-ell override");

    const mpz_class l = to_mpz(ell);
    const mpz_class lm = l - 1;
    const mpz_class lp = l + 1;
    const mpz_class l2m = l * l - 1;
    const mpz_class group = symplectic::group_order(2, ell).sp;

    std::vector<ClassFamily> fams;
    auto add = [&fams](std::string label, int arity, mpz_class centralizer, std::map<u64, u64> classes) {
        fams.push_back({std::move(label), arity, std::move(centralizer), std::move(classes)});
    };

    const u64 regular_unipotent = (ell == 3 && opts.fix_ell3_unipotent) ? 9 : ell;
    add("A1", 0, group, {{1, 2}});
    add("A2", 0, 2 * l * l * l * l * l2m, {{ell, 4}});
    add("A31", 0, 2 * l * l * l * lm, {{ell, 2}});
    add("A32", 0, 2 * l * l * l * lp, {{ell, 2}});
    add("A4", 0, 2 * l * l, {{regular_unipotent, 4}});

    add("B1", 1, l * l + 1, cyclic_orbit_classes(ell, ell * ell + 1, false));
    add("B2", 1, l2m, cyclic_orbit_classes(ell, ell * ell - 1, true));
    add("B3", 2, lm * lm, two_parameter_classes(ell - 1, (ell - 3) / 2));
    add("B4", 2, lp * lp, two_parameter_classes(ell + 1, (ell - 1) / 2));
    add("B5", 2, l2m, mixed_torus_classes(ell));

    const u64 hp = (ell + 1) / 2;
    const u64 hm = (ell - 1) / 2;
    add("B6", 1, l * lp * l2m, one_parameter_classes(1, hm, [&](u64 i) { return hp / std::gcd(i, hp); }));
    add("B7", 1, l * lp, one_parameter_classes(1, hm, [&](u64 i) { return ell * hp / std::gcd(i, ell * hp); }));
    add("B8", 1, l * lm * l2m, one_parameter_classes(1, hm - 1, [&](u64 i) { return hm / std::gcd(i, hm); }));
    add("B9", 1, l * lm, one_parameter_classes(1, hm - 1, [&](u64 i) { return ell * hm / std::gcd(i, ell * hm); }));

    add("C1", 1, l * lp * l2m, one_parameter_classes(1, hm, [&](u64 i) { return (ell + 1) / std::gcd(i, ell + 1); }));
    add("C1'", 1, l * lp * l2m,
        one_parameter_classes(1, hm, [&](u64 i) { return primed_order((ell + 1) / std::gcd(i, ell + 1)); }));
    auto c2 = one_parameter_classes(1, hm, [&](u64 i) { return ell * (ell + 1) / std::gcd(i, ell * (ell + 1)); });
    auto c2p = one_parameter_classes(
        1, hm, [&](u64 i) { return primed_order(ell * (ell + 1) / std::gcd(i, ell * (ell + 1))); });
    for (auto &[r, c] : c2)
        c *= 2;
    for (auto &[r, c] : c2p)
        c *= 2;
    add("C2", 1, 2 * l * lp, c2);
    add("C2'", 1, 2 * l * lp, c2p);

    add("C3", 1, l * lm * l2m, one_parameter_classes(1, hm - 1, [&](u64 i) { return (ell - 1) / std::gcd(i, ell - 1); }));
    add("C3'", 1, l * lm * l2m,
        one_parameter_classes(1, hm - 1, [&](u64 i) { return primed_order((ell - 1) / std::gcd(i, ell - 1)); }));
    auto c4 = one_parameter_classes(1, hm - 1, [&](u64 i) { return ell * (ell - 1) / std::gcd(i, ell * (ell - 1)); });
    auto c4p = one_parameter_classes(
        1, hm - 1, [&](u64 i) { return primed_order(ell * (ell - 1) / std::gcd(i, ell * (ell - 1))); });
    for (auto &[r, c] : c4)
        c *= 2;
    for (auto &[r, c] : c4p)
        c *= 2;
    add("C4", 1, 2 * l * lm, c4);
    add("C4'", 1, 2 * l * lm, c4p);

    add("D1", 0, l * l * l2m * l2m, {{2, 1}});
    add("D2", 0, 2 * l * l * l2m, {{2 * ell, 4}});
    add("D3", 0, 4 * l * l, {{2 * ell, 4}});

    mpz_class mass = 0;
    for (const auto &f : fams) {
        if (!mpz_divisible_p(group.get_mpz_t(), f.centralizer.get_mpz_t()))
            throw std::logic_error("class table: centralizer of " + f.label + " does not divide |Sp4|");
        mass += (group / f.centralizer) * to_mpz(f.class_count());
    }
    if (mass != group)
        throw std::logic_error("class table: class sizes do not sum to |Sp4(F_" + std::to_string(ell) + ")|");
    return fams;
}

OrderDistribution closed_form(u64 ell, const ClosedFormOptions &opts)
{
    OrderDistribution d;
    d.ell = ell;
    d.method = Method::ClosedForm;
    for (const auto &f : class_families(ell, opts)) {
        const mpq_class p = f.class_probability();
        for (const auto &[r, c] : f.classes_by_order)
            d.entries[r] += p * to_mpz(c);
    }
    for (auto &[r, p] : d.entries)
        p.canonicalize();
    if (d.total() != 1)
        throw std::logic_error("closed form: probabilities do not sum to 1");
    return d;
}

OrderDistribution census_distribution(u32 ell, const symplectic::CensusOptions &opts)
{
    const symplectic::ProjectiveOrderSolver solver(2, ell);
    const auto blocks = symplectic::census_blocks<std::map<u64, u64>>(
        ell, 2, opts, [] { return std::map<u64, u64>{}; },
        [&solver](std::map<u64, u64> &acc, const symplectic::SympMatrix &m) { ++acc[solver(m)]; });
    std::map<u64, u64> counts;
    for (const auto &b : blocks)
        for (const auto &[r, c] : b)
            counts[r] += c;
    OrderDistribution d;
    d.ell = ell;
    d.method = Method::Census;
    const mpz_class group = symplectic::group_order(2, ell).sp;
    mpz_class seen = 0;
    for (const auto &[r, c] : counts) {
        d.entries[r] = mpq_class(to_mpz(c), group);
        d.entries[r].canonicalize();
        seen += to_mpz(c);
    }
    if (seen != group)
        throw std::logic_error("census: element count differs from |Sp4|");
    return d;
}

OrderDistribution monte_carlo(u32 ell, u64 samples, u64 seed, unsigned jobs)
{
    if (samples == 0)
        throw std::invalid_argument("monte carlo: sample count must be positive");
    const symplectic::ProjectiveOrderSolver solver(2, ell);
    const std::size_t blocks = static_cast<std::size_t>((samples + kMonteCarloBlock - 1) / kMonteCarloBlock);
    std::vector<std::map<u64, u64>> partial(blocks);
    parallel_for(blocks, jobs, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        const u64 n = std::min<u64>(kMonteCarloBlock, samples - b * kMonteCarloBlock);
        auto &acc = partial[b];
        for (u64 t = 0; t < n; ++t)
            ++acc[solver(symplectic::random_symplectic(ell, 2, rng))];
    });
    std::map<u64, u64> counts;
    for (const auto &b : partial)
        for (const auto &[r, c] : b)
            counts[r] += c;
    OrderDistribution d;
    d.ell = ell;
    d.method = Method::MonteCarlo;
    d.samples = samples;
    d.seed = seed;
    for (const auto &[r, c] : counts) {
        d.entries[r] = mpq_class(to_mpz(c), to_mpz(samples));
        d.entries[r].canonicalize();
    }
    return d;
}

OrderDistribution order_distribution(u64 ell, const DistributionRequest &req)
{
    check_odd_prime(ell);
    switch (req.method) {
    case Method::ClosedForm:
        return closed_form(ell, req.closed);
    case Method::Census:
        if (ell >= symplectic::kMaxMatrixPrime)
            throw std::invalid_argument("census: unsupported ell");
        return census_distribution(static_cast<u32>(ell), {req.allow_big, req.jobs});
    case Method::MonteCarlo:
        if (!req.seed)
            throw std::invalid_argument("monte carlo: a seed is required");
        if (ell >= symplectic::kMaxMatrixPrime)
            throw std::invalid_argument("monte carlo: ell must be below 2^14");
        return monte_carlo(static_cast<u32>(ell), req.samples, *req.seed, req.jobs);
    }
    throw std::invalid_argument("unsupported method");
}

double total_variation(const OrderDistribution &a, const OrderDistribution &b)
{
    mpq_class s = 0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() || ib != b.entries.end()) {
        if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
            s += abs(ia->second);
            ++ia;
        } else if (ia == a.entries.end() || ib->first < ia->first) {
            s += abs(ib->second);
            ++ib;
        } else {
            s += abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return s.get_d() / 2;
}

mpz_class psi(u64 ell)
{
    static constexpr long kCoeffs[] = {6, -27, 420, -1443, 828, 3375, -3804, -825, 2550, -1080, 0};
    const mpz_class l = to_mpz(ell);
    mpz_class acc = 0;
    for (long c : kCoeffs)
        acc = acc * l + c;
    return acc;
}

MomentReport moments_closed_form(u64 ell)
{
    if (ell < 3)
        throw std::invalid_argument("moments: ell must be at least 3");
    const double l = static_cast<double>(ell);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double base = l * (l * l - 1);
    const double poly = (((((2 * l + 15) * l - 47) * l + 1) * l + 65) * l - 40);
    MomentReport m;
    m.mean = pi2 / (48 * base) * poly / std::log(l);
    const double scale = std::numbers::pi / (24 * base);
    m.variance = scale * scale * psi(ell).get_d() / std::log(l) - m.mean * m.mean;
    return m;
}

MomentReport moments_exact(const OrderDistribution &dist)
{
    mpq_class mean = 0;
    mpq_class second = 0;
    for (const auto &[r, p] : dist.entries) {
        const mpq_class rr(to_mpz(r));
        mean += rr * p;
        second += rr * rr * p;
    }
    MomentReport m;
    m.exact = true;
    m.exact_mean = mean;
    m.exact_variance = second - mean * mean;
    m.exact_variance.canonicalize();
    m.mean = m.exact_mean.get_d();
    m.variance = m.exact_variance.get_d();
    return m;
}

std::vector<u64> modes(const OrderDistribution &dist, std::size_t k)
{
    std::vector<std::pair<u64, const mpq_class *>> items;
    for (const auto &[r, p] : dist.entries)
        items.emplace_back(r, &p);
    std::stable_sort(items.begin(), items.end(), [](const auto &a, const auto &b) {
        const int c = cmp(*a.second, *b.second);
        return c != 0 ? c > 0 : a.first < b.first;
    });
    std::vector<u64> out;
    for (std::size_t i = 0; i < items.size() && i < k; ++i)
        out.push_back(items[i].first);
    return out;
}

std::string bucket_label(Bucket b)
{
    static const char *const kLabels[kBucketCount] = {
        "1",           "(l-1)/2",     "(l+1)/2",     "l-1",         "other (1,l]",
        "l+1",         "other (l,2l]", "(l^2-1)/4",  "(l^2+1)/4",   "(l^2-1)/2",
        "(l^2+1)/2",   "other (2l,(l^2+1)/2]",      "((l^2+1)/2,l(l+1)]",
    };
    return kLabels[static_cast<std::size_t>(b)];
}

std::optional<double> bucket_reference_percent(Bucket b)
{
    static constexpr double kPercent[kBucketCount] = {-1, 4.0, 4.0, 5.0, 6.3, 5.0, 1.5, 6.6, 5.0, 13.4, 15.7, 29.7, 3.8};
    const double v = kPercent[static_cast<std::size_t>(b)];
    if (v < 0)
        return std::nullopt;
    return v;
}

Bucket classify(u64 order, u64 ell)
{
    const u64 sq = ell * ell;
    if (order == 1)
        return Bucket::Trivial;
    if (2 * order == ell - 1)
        return Bucket::HalfMinus;
    if (2 * order == ell + 1)
        return Bucket::HalfPlus;
    if (order == ell - 1)
        return Bucket::EllMinus;
    if (order == ell + 1)
        return Bucket::EllPlus;
    if (4 * order == sq - 1)
        return Bucket::QuarterSqMinus;
    if (4 * order == sq + 1)
        return Bucket::QuarterSqPlus;
    if (2 * order == sq - 1)
        return Bucket::HalfSqMinus;
    if (2 * order == sq + 1)
        return Bucket::HalfSqPlus;
    if (order <= ell)
        return Bucket::OtherSmall;
    if (order <= 2 * ell)
        return Bucket::OtherMedium;
    if (2 * order <= sq + 1)
        return Bucket::OtherLarge;
    if (order <= ell * (ell + 1))
        return Bucket::Top;
    throw std::domain_error("order " + std::to_string(order) + " lies outside every bucket for ell = " +
                            std::to_string(ell));
}

std::array<mpq_class, kBucketCount> bucket_masses(const OrderDistribution &dist)
{
    std::array<mpq_class, kBucketCount> out;
    out.fill(0);
    for (const auto &[r, p] : dist.entries)
        out[static_cast<std::size_t>(classify(r, dist.ell))] += p;
    return out;
}

Table3 table3_aggregate(const std::vector<u64> &primes, unsigned jobs)
{
    if (primes.empty())
        throw std::invalid_argument("table3: empty prime list");
    std::vector<std::array<double, kBucketCount>> rows(primes.size());
    parallel_for(primes.size(), jobs, [&](std::size_t i) {
        if (primes[i] < 7)
            throw std::invalid_argument("table3: every prime must be at least 7");
        const auto masses = bucket_masses(closed_form(primes[i]));
        for (std::size_t b = 0; b < kBucketCount; ++b)
            rows[i][b] = masses[b].get_d();
    });
    Table3 t;
    t.primes = primes;
    for (const auto &row : rows)
        for (std::size_t b = 0; b < kBucketCount; ++b)
            t.percent[b] += 100.0 * row[b];
    for (auto &v : t.percent)
        v /= static_cast<double>(primes.size());
    return t;
}

std::size_t heatmap_bin(u64 order, u64 ell, const mpq_class &upper, std::size_t bins)
{
    // floor((order / ell^2) * bins / upper)
    const mpq_class x = mpq_class(to_mpz(order), to_mpz(ell) * to_mpz(ell)) * to_mpz(bins) / upper;
    const mpz_class idx = x.get_num() / x.get_den();
    if (idx >= to_mpz(bins))
        return bins - 1;
    return static_cast<std::size_t>(idx.get_ui());
}

double Heatmap::bin_lo(std::size_t b) const { return upper.get_d() * static_cast<double>(b) / static_cast<double>(bins); }
double Heatmap::bin_hi(std::size_t b) const { return upper.get_d() * static_cast<double>(b + 1) / static_cast<double>(bins); }

Heatmap heatmap_data(const std::vector<u64> &primes, std::size_t bins, unsigned jobs)
{
    if (bins == 0)
        throw std::invalid_argument("heatmap: bins must be positive");
    if (primes.empty())
        throw std::invalid_argument("heatmap: empty prime list");
    Heatmap h;
    h.bins = bins;
    const u64 smallest = *std::min_element(primes.begin(), primes.end());
    h.upper = mpq_class(to_mpz(smallest + 1), to_mpz(smallest));
    h.rows.resize(primes.size());
    parallel_for(primes.size(), jobs, [&](std::size_t i) {
        const OrderDistribution d = closed_form(primes[i], {true, false});
        std::vector<mpq_class> mass(bins, mpq_class(0));
        for (const auto &[r, p] : d.entries)
            mass[heatmap_bin(r, primes[i], h.upper, bins)] += p;
        h.rows[i].ell = primes[i];
        for (const auto &m : mass)
            h.rows[i].mass.push_back(m.get_d());
    });
    return h;
}

void write_distribution_csv(std::ostream &out, const OrderDistribution &dist)
{
    out << "order,probability_num,probability_den,probability_float\n";
    std::ostringstream f;
    f.precision(17);
    for (const auto &[r, p] : dist.entries) {
        f.str("");
        f << p.get_d();
        out << r << ',' << p.get_num().get_str() << ',' << p.get_den().get_str() << ',' << f.str() << '\n';
    }
}

std::map<u64, mpq_class> read_distribution_csv(std::istream &in)
{
    std::map<u64, mpq_class> out;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            if (line != "order,probability_num,probability_den,probability_float")
                throw std::runtime_error("distribution csv: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::string order;
        std::string num;
        std::string den;
        if (!std::getline(row, order, ',') || !std::getline(row, num, ',') || !std::getline(row, den, ','))
            throw std::runtime_error("distribution csv: malformed row '" + line + "'");
        mpq_class p{mpz_class(num), mpz_class(den)};
        p.canonicalize();
        out[std::stoull(order)] = p;
    }
    return out;
}

void write_heatmap_csv(std::ostream &out, const Heatmap &h)
{
    out << "ell,bin_lo,bin_hi,mass\n";
    out.precision(12);
    for (const auto &row : h.rows) {
        for (std::size_t b = 0; b < h.bins; ++b)
            out << row.ell << ',' << h.bin_lo(b) << ',' << h.bin_hi(b) << ',' << row.mass[b] << '\n';
    }
}

void write_table3_csv(std::ostream &out, const Table3 &t)
{
    out << "bucket,percent,reference_percent\n";
    out.precision(6);
    for (std::size_t b = 0; b < kBucketCount; ++b) {
        const auto ref = bucket_reference_percent(static_cast<Bucket>(b));
        out << '"' << bucket_label(static_cast<Bucket>(b)) << "\"," << std::fixed << t.percent[b] << ',';
        if (ref)
            out << *ref;
        out << '\n';
        out.unsetf(std::ios::fixed);
    }
}

} // namespace frobdist::classdist
