#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frobdist/classdist.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

using namespace frobdist;
using namespace frobdist::classdist;

namespace {

const ClassFamily &family(const std::vector<ClassFamily> &fams, const std::string &label)
{
    for (const auto &f : fams)
        if (f.label == label)
            return f;
    throw std::runtime_error("no family " + label);
}

std::map<u64, u64> count_orders(const std::vector<u64> &orders)
{
    std::map<u64, u64> m;
    for (u64 r : orders)
        ++m[r];
    return m;
}

// Orbit representatives of Z/N under multiplication by {+-1, +-ell}, found by
// marking, with the table's order formula applied to each representative.
std::map<u64, u64> brute_orbits(u64 ell, u64 n, bool split)
{
    std::vector<bool> seen(n, false);
    std::vector<u64> orders;
    for (u64 i = 1; i < n; ++i) {
        if (seen[i] || i == n / 2)
            continue;
        if (split && (i % (ell + 1) == 0 || i % (ell - 1) == 0))
            continue;
        u64 x = i;
        for (int k = 0; k < 4; ++k) {
            seen[x] = true;
            seen[n - x] = true;
            x = x * ell % n;
        }
        orders.push_back((n / 2) / std::gcd(i, n / 2));
    }
    return count_orders(orders);
}

std::map<u64, u64> brute_pairs(u64 n, u64 m)
{
    std::vector<u64> orders;
    for (u64 i = 1; i <= m; ++i)
        for (u64 j = i + 1; j <= m; ++j)
            orders.push_back(n / std::gcd(std::gcd(n, i + j), j - i));
    return count_orders(orders);
}

std::map<u64, u64> brute_mixed(u64 ell)
{
    const u64 n = ell * ell - 1;
    std::vector<u64> orders;
    for (u64 i = 1; i <= (ell - 1) / 2; ++i)
        for (u64 j = 1; j <= (ell - 3) / 2; ++j)
            orders.push_back(n / std::gcd(std::gcd(n, i * (ell - 1) + j * (ell + 1)), 2 * i * (ell - 1)));
    return count_orders(orders);
}

mpq_class frac(const mpz_class &a, const mpz_class &b)
{
    mpq_class x(a, b);
    x.canonicalize();
    return x;
}

OrderDistribution point_mass(u64 ell, u64 r)
{
    OrderDistribution d;
    d.ell = ell;
    d.entries[r] = 1;
    return d;
}

} // namespace

TEST_CASE("class counts per family")
{
    for (u64 ell : numth::primes_in_range(7, 200)) {
        const auto fams = class_families(ell);
        const u64 l = ell;
        CHECK(family(fams, "B1").class_count() == (l * l - 1) / 4);
        CHECK(family(fams, "B2").class_count() == (l - 1) * (l - 1) / 4);
        CHECK(family(fams, "B3").class_count() == (l - 3) * (l - 5) / 8);
        CHECK(family(fams, "B4").class_count() == (l - 1) * (l - 3) / 8);
        CHECK(family(fams, "B5").class_count() == (l - 1) * (l - 3) / 4);
        CHECK(family(fams, "B6").class_count() == (l - 1) / 2);
        CHECK(family(fams, "B7").class_count() == (l - 1) / 2);
        CHECK(family(fams, "B8").class_count() == (l - 3) / 2);
        CHECK(family(fams, "B9").class_count() == (l - 3) / 2);
        CHECK(family(fams, "C1").class_count() + family(fams, "C1'").class_count() == l - 1);
        CHECK(family(fams, "C2").class_count() + family(fams, "C2'").class_count() == 2 * (l - 1));
        CHECK(family(fams, "C3").class_count() + family(fams, "C3'").class_count() == l - 3);
        CHECK(family(fams, "C4").class_count() + family(fams, "C4'").class_count() == 2 * (l - 3));
        u64 total = 0;
        for (const auto &f : fams)
            total += f.class_count();
        CHECK(total == l * l + 5 * l + 10);
    }
}

TEST_CASE("grouped class enumeration matches direct loops")
{
    for (u64 ell : numth::primes_in_range(7, 61)) {
        const auto fams = class_families(ell);
        CHECK(family(fams, "B1").classes_by_order == brute_orbits(ell, ell * ell + 1, false));
        CHECK(family(fams, "B2").classes_by_order == brute_orbits(ell, ell * ell - 1, true));
        CHECK(family(fams, "B3").classes_by_order == brute_pairs(ell - 1, (ell - 3) / 2));
        CHECK(family(fams, "B4").classes_by_order == brute_pairs(ell + 1, (ell - 1) / 2));
        CHECK(family(fams, "B5").classes_by_order == brute_mixed(ell));
    }
}

TEST_CASE("closed form is a probability distribution")
{
    for (u64 ell : numth::primes_in_range(7, 400)) {
        const auto d = closed_form(ell);
        CHECK(d.total() == 1);
        for (const auto &[r, p] : d.entries) {
            CHECK(p > 0);
            CHECK(r <= ell * (ell + 1));
        }
    }
    CHECK_THROWS_AS(closed_form(5), std::invalid_argument);
    CHECK_THROWS_AS(closed_form(9, {true, false}), std::invalid_argument);
    CHECK(closed_form(5, {true, false}).total() == 1);
}

TEST_CASE("small-ell distributions against the census")
{
    const auto census3 = census_distribution(3);
    CHECK(census3.probability(1) == frac(2, 51840));
    CHECK(family(class_families(3, {true, false}), "D1").class_probability() == frac(1, 576));
    CHECK(census3.probability(2) >= frac(1, 576));

    // The verbatim table puts the regular unipotent classes at order 3.
    const auto verbatim = closed_form(3, {true, false});
    const auto fixed = closed_form(3, {true, true});
    CHECK(fixed.entries == census3.entries);
    CHECK_FALSE(verbatim.entries == census3.entries);
    std::set<u64> differing;
    for (u64 r : {1, 2, 3, 4, 5, 6, 9, 10, 12})
        if (verbatim.probability(r) != census3.probability(r))
            differing.insert(r);
    CHECK(differing == std::set<u64>{3, 9});
    CHECK(census3.probability(9) == frac(4, 2 * 9));

    // Census mean equals direct summation over the group.
    mpz_class sum = 0;
    const symplectic::ProjectiveOrderSolver solver(2, 3);
    symplectic::census(3, 2, [&](const symplectic::SympMatrix &m) { sum += static_cast<unsigned long>(solver(m)); });
    CHECK(moments_exact(census3).exact_mean == frac(sum, 51840));
}

TEST_CASE("exact moments")
{
    const auto pm = moments_exact(point_mass(7, 5));
    CHECK(pm.mean == 5);
    CHECK(pm.variance == 0);

    OrderDistribution u;
    u.ell = 7;
    u.entries[1] = mpq_class(1, 2);
    u.entries[3] = mpq_class(1, 2);
    const auto mu = moments_exact(u);
    CHECK(mu.exact_mean == 2);
    CHECK(mu.exact_variance == 1);
}

TEST_CASE("asymptotic moments")
{
    const double ratio = moments_closed_form(2017).mean / moments_closed_form(1009).mean;
    CHECK(std::abs(ratio / 4 - 1) < 0.10);

    // Direct evaluation at ell = 101.
    const double l = 101;
    const double pi2 = M_PI * M_PI;
    const double mu = pi2 / (48 * l * (l * l - 1)) * (2 * std::pow(l, 5) + 15 * std::pow(l, 4) - 47 * std::pow(l, 3) + l * l + 65 * l - 40) /
                      std::log(l);
    CHECK(moments_closed_form(101).mean == doctest::Approx(mu).epsilon(1e-12));

    // psi is evaluated exactly; compare with a Horner-free sum at 3571.
    const mpz_class x(3571);
    mpz_class direct = 0;
    const long c[] = {6, -27, 420, -1443, 828, 3375, -3804, -825, 2550, -1080};
    for (int i = 0; i < 10; ++i) {
        mpz_class t;
        mpz_pow_ui(t.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(10 - i));
        direct += c[i] * t;
    }
    CHECK(psi(3571) == direct);
    CHECK(moments_closed_form(3571).variance > 0);

    // The asymptotic mean underestimates the exact one by a factor that
    // grows with ell (about 2.58 at ell = 101).
    const double exact101 = moments_exact(closed_form(101)).mean;
    CHECK(exact101 / moments_closed_form(101).mean == doctest::Approx(2.578).epsilon(0.01));
}

TEST_CASE("modes")
{
    CHECK(modes(point_mass(7, 12), 2) == std::vector<u64>{12});
    CHECK(modes(closed_form(3571), 2) == std::vector<u64>{6376021, 6376020});
    CHECK(modes(closed_form(5, {true, false}), 2) == std::vector<u64>{13, 12});
    // At ell = 3 orders 6 and 9 tie at 2/9; neither is (ell^2 +- 1)/2.
    CHECK(modes(closed_form(3, {true, true}), 2) == std::vector<u64>{6, 9});

    OrderDistribution tie;
    tie.ell = 7;
    tie.entries[8] = mpq_class(1, 2);
    tie.entries[4] = mpq_class(1, 2);
    CHECK(modes(tie, 2) == std::vector<u64>{4, 8});
}

TEST_CASE("bucket classification")
{
    const u64 l = 13;
    CHECK(classify(1, l) == Bucket::Trivial);
    CHECK(classify(6, l) == Bucket::HalfMinus);
    CHECK(classify(7, l) == Bucket::HalfPlus);
    CHECK(classify(12, l) == Bucket::EllMinus);
    CHECK(classify(13, l) == Bucket::OtherSmall);
    CHECK(classify(2, l) == Bucket::OtherSmall);
    CHECK(classify(14, l) == Bucket::EllPlus);
    CHECK(classify(26, l) == Bucket::OtherMedium);
    CHECK(classify(27, l) == Bucket::OtherLarge);
    CHECK(classify(42, l) == Bucket::QuarterSqMinus);
    CHECK(classify(84, l) == Bucket::HalfSqMinus);
    CHECK(classify(85, l) == Bucket::HalfSqPlus);
    CHECK(classify(86, l) == Bucket::Top);
    CHECK(classify(182, l) == Bucket::Top);
    CHECK_THROWS_AS(classify(183, l), std::domain_error);
    // Exact values win over ranges: (49-1)/4 = 12 <= 2 * 7.
    CHECK(classify(12, 7) == Bucket::QuarterSqMinus);

    const auto masses = bucket_masses(point_mass(13, 85));
    CHECK(masses[static_cast<std::size_t>(Bucket::HalfSqPlus)] == 1);

    const auto t = table3_aggregate({11, 13});
    double total = 0;
    for (double v : t.percent)
        total += v;
    CHECK(total == doctest::Approx(100.0).epsilon(1e-12));
    CHECK_THROWS(table3_aggregate({5}));
    CHECK(table3_aggregate({11, 13}, 2).percent == t.percent);
}

TEST_CASE("heatmap")
{
    const auto h = heatmap_data({11}, 4);
    REQUIRE(h.rows.size() == 1);
    // Oracle: bin each order of the closed form with floating-point edges.
    const auto d = closed_form(11);
    std::vector<double> expected(4, 0.0);
    const double upper = 12.0 / 11.0;
    for (const auto &[r, p] : d.entries) {
        const double x = static_cast<double>(r) / 121.0;
        CHECK(x <= upper);
        std::size_t b = static_cast<std::size_t>(x / (upper / 4));
        expected[std::min<std::size_t>(b, 3)] += p.get_d();
    }
    for (std::size_t b = 0; b < 4; ++b)
        CHECK(h.rows[0].mass[b] == doctest::Approx(expected[b]).epsilon(1e-12));

    const auto wide = heatmap_data(numth::primes_in_range(7, 200), 50, 2);
    for (const auto &row : wide.rows) {
        double s = 0;
        for (double m : row.mass)
            s += m;
        CHECK(std::abs(s - 1) < 1e-12);
    }
    CHECK(heatmap_bin(11 * 12, 11, mpq_class(12, 11), 4) == 3);
    CHECK(heatmap_bin(0, 11, mpq_class(12, 11), 4) == 0);
}

TEST_CASE("distribution csv round trip")
{
    const auto d = closed_form(13);
    std::stringstream ss;
    ss << "# comment\n";
    write_distribution_csv(ss, d);
    const auto back = read_distribution_csv(ss);
    CHECK(back == d.entries);
    mpq_class s = 0;
    for (const auto &[r, p] : back)
        s += p;
    CHECK(s == 1);
}

TEST_CASE("monte carlo")
{
    const auto a = monte_carlo(7, 100000, 42, 1);
    const auto b = monte_carlo(7, 100000, 42, 3);
    CHECK(a.entries == b.entries);
    CHECK(a.total() == 1);
    CHECK(total_variation(a, closed_form(7)) < 0.02);
    CHECK(total_variation(closed_form(7), closed_form(7)) == 0);

    DistributionRequest req;
    req.method = Method::MonteCarlo;
    req.samples = 10;
    CHECK_THROWS_AS(order_distribution(7, req), std::invalid_argument);
    req.method = Method::Census;
    CHECK_THROWS_AS(order_distribution(7, req), std::invalid_argument);
    CHECK(parse_method("mc") == Method::MonteCarlo);
    CHECK_THROWS(parse_method("exact"));
}
