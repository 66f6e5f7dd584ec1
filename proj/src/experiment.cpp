#include "frobdist/experiment.hpp"

#include "frobdist/classdist.hpp"
#include "frobdist/parallel.hpp"
#include "frobdist/version.hpp"

#include "json.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>
#include <numeric>
#include <string>
#include <tuple>
#include <cstdio>

namespace frobdist::experiment {

namespace {

u64 reduce_signed(std::int64_t v, u64 m)
{
    const auto M = static_cast<std::int64_t>(m);
    return static_cast<u64>(((v % M) + M) % M);
}

// rank[a1 * ell + a2] = list_attempts of that pair.
std::vector<u64> rank_table(const std::vector<atkin::WeightedCandidate> &list, u64 ell)
{
    std::vector<u64> rank(ell * ell, 0);
    u64 pos = 0;
    for (const auto &c : list)
        rank[c.a[0] * ell + c.a[1]] = ++pos;
    for (u64 i = 0; i < ell * ell; ++i)
        if (rank[i] == 0)
            rank[i] = ++pos;
    return rank;
}

// Inverse of a unit a modulo m by the extended Euclidean algorithm.
u64 inverse_mod(u64 a, u64 m)
{
    std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::pair(r1, r0 - q * r1);
        std::tie(t0, t1) = std::pair(t1, t0 - q * t1);
    }
    return reduce_signed(t0, m);
}

const char *scope_name(OrderScope s)
{
    switch (s) {
    case OrderScope::Half:
        return "half";
    case OrderScope::All:
        return "all";
    case OrderScope::Explicit:
        return "explicit";
    }
    return "?";
}

} // namespace

u64 classical_attempts(const Pair &truth, u64 ell)
{
    if (truth.a1 >= ell || truth.a2 >= ell)
        throw std::invalid_argument("pair is not reduced mod ell");
    return truth.a1 * ell + truth.a2 + 1;
}

u64 list_attempts(const Pair &truth, const std::vector<atkin::WeightedCandidate> &list, u64 ell)
{
    const u64 classical = classical_attempts(truth, ell);
    u64 earlier_in_list = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Pair c{list[i].a[0], list[i].a[1]};
        if (c == truth)
            return i + 1;
        if (classical_attempts(c, ell) < classical)
            ++earlier_in_list;
    }
    return list.size() + classical - earlier_in_list;
}

std::vector<u64> eligible_ells(u64 p, u64 max_ell)
{
    std::vector<u64> out;
    for (u64 ell : numth::primes_in_range(5, max_ell))
        if (ell != p && p % ell == 1)
            out.push_back(ell);
    return out;
}

void validate(const ExperimentConfig &cfg)
{
    if (cfg.p <= 5 || !numth::is_prime(cfg.p))
        throw std::invalid_argument("experiment needs a prime p > 5");
    if (cfg.ells.empty())
        throw std::invalid_argument("experiment needs at least one ell");
    for (u64 ell : cfg.ells)
        if (ell < 5 || !numth::is_prime(ell) || ell == cfg.p || cfg.p % ell != 1)
            throw std::invalid_argument("ell = " + std::to_string(ell) + " is not a prime >= 5 with p = 1 mod ell");
    if (cfg.injected ? cfg.injected->empty() : cfg.curves == 0)
        throw std::invalid_argument("experiment needs at least one curve");
    if (cfg.injected)
        for (const auto &c : *cfg.injected)
            if (c.p != cfg.p)
                throw std::invalid_argument("injected curve is over the wrong field");
    if (cfg.scope == OrderScope::Explicit && cfg.orders.empty())
        throw std::invalid_argument("explicit order scope needs orders");
}

std::vector<u64> scope_orders(const ExperimentConfig &cfg, u64 ell)
{
    switch (cfg.scope) {
    case OrderScope::Half:
        return {(ell - 1) / 2, (ell + 1) / 2};
    case OrderScope::All:
        return {};
    case OrderScope::Explicit:
        return cfg.orders;
    }
    return {};
}

AttemptStats run_experiment(const ExperimentConfig &cfg)
{
    validate(cfg);
    AttemptStats stats;
    stats.config = cfg;

    std::vector<std::vector<u64>> ranks;
    for (u64 ell : cfg.ells) {
        classdist::ClosedFormOptions opts;
        opts.allow_small_ell = ell < 7;
        const auto dist = classdist::closed_form(ell, opts);
        EllStats s;
        s.ell = ell;
        s.orders = scope_orders(cfg, ell);
        const auto list = atkin::weighted_candidates(ell, cfg.p % ell, dist, s.orders);
        s.list_size = list.size();
        ranks.push_back(rank_table(list, ell));
        stats.per_ell.push_back(s);
    }

    const u64 n = cfg.injected ? cfg.injected->size() : cfg.curves;
    stats.records.resize(n);
    parallel_for(n, cfg.jobs, [&](std::size_t i) {
        CurveRecord rec;
        rec.index = i;
        if (cfg.injected) {
            rec.curve = (*cfg.injected)[i];
        } else {
            std::mt19937_64 rng(derive_seed(cfg.seed, i));
            rec.curve = curves::random_curve(cfg.p, rng).curve;
        }
        rec.counts = curves::point_counts(rec.curve);
        rec.coeffs = curves::frobenius_charpoly(rec.counts, cfg.p);
        for (std::size_t j = 0; j < cfg.ells.size(); ++j) {
            const u64 ell = cfg.ells[j];
            EllRecord e;
            e.ell = ell;
            e.truth = {reduce_signed(rec.coeffs.a1, ell), reduce_signed(rec.coeffs.a2, ell)};
            e.classical = classical_attempts(e.truth, ell);
            e.list = ranks[j][e.truth.a1 * ell + e.truth.a2];
            e.in_list = e.list <= stats.per_ell[j].list_size;
            rec.per_ell.push_back(e);
        }
        stats.records[i] = std::move(rec);
    });

    for (std::size_t j = 0; j < stats.per_ell.size(); ++j) {
        auto &s = stats.per_ell[j];
        u64 sum_classical = 0, sum_list = 0;
        for (const auto &rec : stats.records) {
            sum_classical += rec.per_ell[j].classical;
            sum_list += rec.per_ell[j].list;
            s.hits += rec.per_ell[j].in_list ? 1 : 0;
        }
        s.n_curves = n;
        s.mean_classical = static_cast<double>(sum_classical) / static_cast<double>(n);
        s.mean_list = static_cast<double>(sum_list) / static_cast<double>(n);
        s.reduction_pct = 100.0 * (1.0 - static_cast<double>(sum_list) / static_cast<double>(sum_classical));
    }
    return stats;
}

void write_json(std::ostream &out, const AttemptStats &stats)
{
    using nlohmann::ordered_json;
    const auto &cfg = stats.config;
    ordered_json doc;
    doc["config"] = {{"version", kVersion},
                     {"p", cfg.p},
                     {"ells", cfg.ells},
                     {"curves", stats.records.size()},
                     {"seed", cfg.seed},
                     {"injected", cfg.injected.has_value()},
                     {"order_scope", scope_name(cfg.scope)},
                     {"orders", cfg.orders},
                     {"classical_order", "lexicographic (a1, a2), residues 0..ell-1"},
                     {"reference_band_pct", {kReferenceBandLow, kReferenceBandHigh}}};
    ordered_json per_ell = ordered_json::array();
    for (const auto &s : stats.per_ell)
        per_ell.push_back({{"ell", s.ell},
                           {"orders", s.orders},
                           {"list_size", s.list_size},
                           {"n_curves", s.n_curves},
                           {"hits", s.hits},
                           {"mean_classical", s.mean_classical},
                           {"mean_list", s.mean_list},
                           {"reduction_pct", s.reduction_pct}});
    doc["per_ell"] = per_ell;
    ordered_json recs = ordered_json::array();
    for (const auto &r : stats.records) {
        ordered_json e = ordered_json::array();
        for (const auto &x : r.per_ell)
            e.push_back({{"ell", x.ell},
                         {"a1", x.truth.a1},
                         {"a2", x.truth.a2},
                         {"classical", x.classical},
                         {"list", x.list},
                         {"in_list", x.in_list}});
        recs.push_back({{"index", r.index},
                        {"f", {r.curve.f[4], r.curve.f[3], r.curve.f[2], r.curve.f[1], r.curve.f[0]}},
                        {"n1", r.counts.n1},
                        {"n2", r.counts.n2},
                        {"a1", r.coeffs.a1},
                        {"a2", r.coeffs.a2},
                        {"per_ell", e}});
    }
    doc["curves"] = recs;
    out << doc.dump(2) << '\n';
}

void write_summary_csv(std::ostream &out, const AttemptStats &stats)
{
    out << "p,ell,n_curves,mean_classical,mean_list,reduction_pct\n";
    for (const auto &s : stats.per_ell) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.6f,%.6f,%.4f\n", static_cast<unsigned long long>(stats.config.p),
                      static_cast<unsigned long long>(s.ell), static_cast<unsigned long long>(s.n_curves),
                      s.mean_classical, s.mean_list, s.reduction_pct);
        out << buf;
    }
}

void write_corpus(std::ostream &out, const AttemptStats &stats)
{
    curves::write_corpus_header(out);
    for (const auto &r : stats.records)
        curves::write_corpus_row(out, r.curve, r.counts, r.coeffs);
}

CrtResult crt_combine(const std::vector<u64> &residues, const std::vector<u64> &moduli)
{
    if (residues.size() != moduli.size())
        throw std::invalid_argument("crt_combine: size mismatch");
    numth::u128 x = 0, m = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
        const u64 mi = moduli[i];
        if (mi < 2)
            throw std::invalid_argument("crt_combine: modulus below 2");
        const u64 m_mod = static_cast<u64>(m % mi);
        if (std::gcd(m_mod, mi) != 1)
            throw std::invalid_argument("crt_combine: moduli are not coprime");
        // x + m t = r (mod mi).
        const u64 diff = (residues[i] % mi + mi - static_cast<u64>(x % mi)) % mi;
        const u64 t = numth::mulmod(diff, inverse_mod(m_mod, mi), mi);
        x += m * t;
        m *= mi;
        if (m > (numth::u128(1) << 62U))
            throw std::overflow_error("crt_combine: modulus too large");
    }
    CrtResult r;
    r.modulus = static_cast<u64>(m);
    r.value = static_cast<std::int64_t>(x);
    if (2 * x > m)
        r.value -= static_cast<std::int64_t>(m);
    return r;
}

CrtDemo crt_demo(u64 p, u64 seed)
{
    CrtDemo d;
    std::mt19937_64 rng(derive_seed(seed, 0));
    d.curve = curves::random_curve(p, rng).curve;
    d.truth = curves::frobenius_charpoly(curves::point_counts(d.curve), p);
    u64 product = 1;
    for (u64 ell : numth::primes_in_range(3, 1000)) {
        if (product > 12 * p)
            break;
        if (ell == p)
            continue;
        d.ells.push_back(ell);
        d.residues.push_back({reduce_signed(d.truth.a1, ell), reduce_signed(d.truth.a2, ell)});
        product *= ell;
    }
    std::vector<u64> r1, r2;
    for (const auto &r : d.residues) {
        r1.push_back(r.a1);
        r2.push_back(r.a2);
    }
    d.recovered = {crt_combine(r1, d.ells).value, crt_combine(r2, d.ells).value};
    d.ok = d.recovered.a1 == d.truth.a1 && d.recovered.a2 == d.truth.a2;
    return d;
}

} // namespace frobdist::experiment
