#include "frobdist/cli.hpp"

#include "frobdist/atkin.hpp"
#include "frobdist/classdist.hpp"
#include "frobdist/curves.hpp"
#include "frobdist/experiment.hpp"
#include "frobdist/parallel.hpp"
#include "frobdist/symplectic.hpp"
#include "frobdist/version.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <concepts>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace frobdist::cli {

namespace {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

struct Flags {
    u64 ell = 0;
    std::vector<u64> ells;
    int g = 2;
    u64 q = 1;
    u64 r = 0;
    std::string method = "closed";
    u64 samples = 0;
    u64 seed = 0;
    bool has_seed = false;
    std::size_t primes = 500;
    std::size_t bins = 50;
    std::size_t top = 2;
    u64 p = 0;
    u64 curves = 0;
    std::string orders;
    std::string f;
    std::string out;
    unsigned jobs = 1;
    bool big = false;
    bool allow_small = false;
    bool fix_ell3 = false;
};

using Config = std::vector<std::pair<std::string, std::string>>;

class Sink {
public:
    Sink(const std::string &path, std::ostream &fallback)
    {
        if (path.empty()) {
            os_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_)
            throw std::runtime_error("cannot open " + path + " for writing");
        os_ = file_.get();
    }
    std::ostream &operator*() { return *os_; }
    bool is_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream *os_ = nullptr;
};

void header(std::ostream &os, const std::string &command, const Config &cfg)
{
    os << "# frobdist " << kVersion << '\n' << "# command: " << command << '\n' << "# config:";
    for (const auto &[k, v] : cfg)
        os << ' ' << k << '=' << v;
    os << '\n';
}

std::string str(bool v) { return v ? "true" : "false"; }
template <std::integral T>
std::string str(T v)
{
    return std::to_string(v);
}

std::string seed_str(const Flags &f) { return f.has_seed ? str(f.seed) : "none"; }

void require_seed(const Flags &f, const std::string &command)
{
    if (!f.has_seed)
        throw std::invalid_argument(command + " is stochastic and needs an explicit --seed");
}

std::vector<u64> parse_list(const std::string &text)
{
    std::vector<u64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(item, &pos);
        if (pos != item.size())
            throw std::invalid_argument("bad list entry '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string join(const std::vector<u64> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ";" : "") + std::to_string(v[i]);
    return s.empty() ? "none" : s;
}

// First n primes, dropping those below 7.
std::vector<u64> sweep_primes(std::size_t n)
{
    auto ps = numth::first_primes(n);
    ps.erase(std::remove_if(ps.begin(), ps.end(), [](u64 x) { return x < 7; }), ps.end());
    if (ps.empty())
        throw std::invalid_argument("--primes leaves no prime >= 7");
    return ps;
}

std::vector<u64> ells_or_sweep(const Flags &f, const CLI::App &sub)
{
    if (sub.count("--ell"))
        return {f.ell};
    return sweep_primes(f.primes);
}

classdist::ClosedFormOptions closed_options(const Flags &f)
{
    return {f.allow_small, f.fix_ell3};
}

std::string q_str(const mpq_class &x)
{
    return x.get_num().get_str() + "," + x.get_den().get_str();
}

int cmd_dist(const Flags &f, std::ostream &out)
{
    classdist::DistributionRequest req;
    req.method = classdist::parse_method(f.method);
    req.samples = f.samples;
    req.jobs = f.jobs;
    req.allow_big = f.big;
    req.closed = closed_options(f);
    if (req.method == classdist::Method::MonteCarlo) {
        require_seed(f, "dist --method mc");
        req.seed = f.seed;
    }
    const auto dist = classdist::order_distribution(f.ell, req);
    Sink sink(f.out, out);
    header(*sink, "dist",
           {{"ell", str(f.ell)}, {"method", f.method}, {"samples", str(f.samples)}, {"seed", seed_str(f)},
            {"allow_small", str(f.allow_small)}, {"fix_ell3", str(f.fix_ell3)}, {"big", str(f.big)}, {"jobs", str(f.jobs)}});
    classdist::write_distribution_csv(*sink, dist);
    return 0;
}

int cmd_moments(const Flags &f, const CLI::App &sub, std::ostream &out)
{
    const auto ells = ells_or_sweep(f, sub);
    Sink sink(f.out, out);
    header(*sink, "moments", {{"ells", sub.count("--ell") ? str(f.ell) : "first " + str(f.primes) + " primes >= 7"},
                              {"allow_small", str(f.allow_small)}, {"fix_ell3", str(f.fix_ell3)}});
    *sink << "ell,exact_mean,exact_variance,mu4,delta4,relative_deviation\n";
    for (u64 ell : ells) {
        const auto exact = classdist::moments_exact(classdist::closed_form(ell, closed_options(f)));
        const auto asym = classdist::moments_closed_form(ell);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%llu,%.10g,%.10g,%.10g,%.10g,%.10g\n", static_cast<unsigned long long>(ell),
                      exact.mean, exact.variance, asym.mean, asym.variance, std::abs(asym.mean - exact.mean) / exact.mean);
        *sink << buf;
    }
    return 0;
}

int cmd_modes(const Flags &f, const CLI::App &sub, std::ostream &out)
{
    const auto ells = ells_or_sweep(f, sub);
    Sink sink(f.out, out);
    header(*sink, "modes", {{"ells", sub.count("--ell") ? str(f.ell) : "first " + str(f.primes) + " primes >= 7"},
                            {"top", str(static_cast<u64>(f.top))}, {"allow_small", str(f.allow_small)},
                            {"fix_ell3", str(f.fix_ell3)}});
    *sink << "ell,rank,order,probability_num,probability_den\n";
    for (u64 ell : ells) {
        const auto dist = classdist::closed_form(ell, closed_options(f));
        const auto m = classdist::modes(dist, f.top);
        for (std::size_t i = 0; i < m.size(); ++i)
            *sink << ell << ',' << i + 1 << ',' << m[i] << ',' << q_str(dist.probability(m[i])) << '\n';
    }
    return 0;
}

int cmd_table3(const Flags &f, std::ostream &out)
{
    const auto t = classdist::table3_aggregate(sweep_primes(f.primes), f.jobs);
    Sink sink(f.out, out);
    header(*sink, "table3", {{"primes", str(static_cast<u64>(f.primes))}, {"averaged_over", str(static_cast<u64>(t.primes.size()))},
                             {"jobs", str(f.jobs)}});
    classdist::write_table3_csv(*sink, t);
    return 0;
}

int cmd_heatmap(const Flags &f, std::ostream &out)
{
    const auto h = classdist::heatmap_data(sweep_primes(f.primes), f.bins, f.jobs);
    Sink sink(f.out, out);
    header(*sink, "heatmap", {{"primes", str(static_cast<u64>(f.primes))}, {"bins", str(static_cast<u64>(f.bins))},
                              {"upper", h.upper.get_str()}, {"jobs", str(f.jobs)}});
    classdist::write_heatmap_csv(*sink, h);
    return 0;
}

int cmd_census(const Flags &f, std::ostream &out)
{
    const symplectic::CensusOptions opts{f.big, f.jobs};
    symplectic::check_census_supported(static_cast<u32>(f.ell), f.g, opts);
    const u32 ell = static_cast<u32>(f.ell);
    const symplectic::ProjectiveOrderSolver solver(f.g, ell);
    const auto blocks = symplectic::census_blocks<std::map<u64, u64>>(
        ell, f.g, opts, [] { return std::map<u64, u64>{}; },
        [&solver](std::map<u64, u64> &acc, const symplectic::SympMatrix &m) { ++acc[solver(m)]; });
    std::map<u64, u64> counts;
    u64 total = 0;
    for (const auto &b : blocks)
        for (const auto &[r, c] : b) {
            counts[r] += c;
            total += c;
        }
    if (mpz_class(std::to_string(total)) != symplectic::group_order(f.g, ell).sp)
        throw std::logic_error("census: element count differs from the group order");
    Sink sink(f.out, out);
    header(*sink, "census", {{"ell", str(f.ell)}, {"g", std::to_string(f.g)}, {"big", str(f.big)}, {"jobs", str(f.jobs)}});
    *sink << "# total_elements: " << total << '\n' << "order,count\n";
    for (const auto &[r, c] : counts)
        *sink << r << ',' << c << '\n';
    if (sink.is_file())
        out << "census: " << total << " elements of Sp" << 2 * f.g << "(F_" << f.ell << ")\n";
    return 0;
}

int cmd_sample(const Flags &f, std::ostream &out)
{
    require_seed(f, "sample");
    if (f.samples == 0)
        throw std::invalid_argument("sample needs --samples > 0");
    const u32 ell = static_cast<u32>(f.ell);
    const symplectic::ProjectiveOrderSolver solver(f.g, ell);
    std::vector<std::string> rows(f.samples);
    parallel_for(f.samples, f.jobs, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(f.seed, i));
        const auto m = symplectic::random_symplectic(ell, f.g, rng);
        const auto cp = symplectic::char_poly(m);
        std::string row = std::to_string(i) + ',' + std::to_string(solver(m));
        for (int k = 0; k < f.g; ++k)
            row += ',' + std::to_string(cp.a[static_cast<std::size_t>(k)]);
        row += ',';
        for (int a = 0; a < m.dim(); ++a)
            for (int b = 0; b < m.dim(); ++b)
                row += (a || b ? " " : "") + std::to_string(m(a, b));
        rows[i] = std::move(row);
    });
    Sink sink(f.out, out);
    header(*sink, "sample", {{"ell", str(f.ell)}, {"g", std::to_string(f.g)}, {"samples", str(f.samples)},
                             {"seed", seed_str(f)}, {"jobs", str(f.jobs)}});
    *sink << "index,projective_order";
    for (int k = 1; k <= f.g; ++k)
        *sink << ",a" << k;
    *sink << ",entries\n";
    for (const auto &row : rows)
        *sink << row << '\n';
    return 0;
}

int cmd_candidates(const Flags &f, const CLI::App &sub, std::ostream &out)
{
    Sink sink(f.out, out);
    if (sub.count("--orders")) {
        if (f.g != 2)
            throw std::invalid_argument("weighted candidate lists exist for g = 2 only");
        const auto dist = classdist::closed_form(f.ell, {true, f.fix_ell3});
        const auto orders = f.orders == "all" ? std::vector<u64>{} : parse_list(f.orders);
        const auto list = atkin::weighted_candidates(f.ell, f.q % f.ell, dist, orders);
        header(*sink, "candidates", {{"g", "2"}, {"ell", str(f.ell)}, {"q", str(f.q)}, {"orders", f.orders},
                                     {"fix_ell3", str(f.fix_ell3)}});
        *sink << "rank,a1,a2,weight_num,weight_den,weight_float\n";
        for (std::size_t i = 0; i < list.size(); ++i)
            *sink << i + 1 << ',' << list[i].a[0] << ',' << list[i].a[1] << ',' << q_str(list[i].weight) << ','
                  << list[i].weight.get_d() << '\n';
        return 0;
    }
    if (!sub.count("--r"))
        throw std::invalid_argument("candidates needs --r or --orders");
    const auto set = atkin::candidates(f.g, f.ell, f.q % f.ell, f.r);
    header(*sink, "candidates", {{"g", std::to_string(f.g)}, {"ell", str(f.ell)}, {"q", str(f.q)}, {"r", str(f.r)}});
    for (int k = 1; k <= f.g; ++k)
        *sink << 'a' << k << ',';
    *sink << "witnesses\n";
    for (const auto &[a, w] : set.entries) {
        for (u64 x : a)
            *sink << x << ',';
        *sink << w.size() << '\n';
    }
    if (sink.is_file())
        out << "candidates: " << set.size() << " tuples\n";
    return 0;
}

int cmd_count_curve(const Flags &f, const CLI::App &sub, std::ostream &out)
{
    std::vector<curves::HyperellipticCurveG2> cs;
    if (sub.count("--f")) {
        const auto c = parse_list(f.f);
        if (c.size() != 5)
            throw std::invalid_argument("--f takes five coefficients f4,f3,f2,f1,f0");
        cs.push_back(curves::make_curve(f.p, {c[4], c[3], c[2], c[1], c[0]}));
    } else {
        require_seed(f, "count-curve without --f");
        const u64 n = std::max<u64>(f.curves, 1);
        for (u64 i = 0; i < n; ++i) {
            std::mt19937_64 rng(derive_seed(f.seed, i));
            cs.push_back(curves::random_curve(f.p, rng).curve);
        }
    }
    std::vector<curves::PointCounts> counts(cs.size());
    parallel_for(cs.size(), f.jobs, [&](std::size_t i) { counts[i] = curves::point_counts(cs[i]); });
    Sink sink(f.out, out);
    header(*sink, "count-curve", {{"p", str(f.p)}, {"f", f.f.empty() ? "random" : f.f}, {"curves", str(static_cast<u64>(cs.size()))},
                                  {"seed", seed_str(f)}});
    curves::write_corpus_header(*sink);
    for (std::size_t i = 0; i < cs.size(); ++i)
        curves::write_corpus_row(*sink, cs[i], counts[i], curves::frobenius_charpoly(counts[i], f.p));
    return 0;
}

int cmd_experiment(const Flags &f, const CLI::App &sub, std::ostream &out)
{
    require_seed(f, "experiment");
    experiment::ExperimentConfig cfg;
    cfg.p = f.p;
    cfg.ells = sub.count("--ell") ? f.ells : experiment::eligible_ells(f.p);
    cfg.curves = f.curves ? f.curves : 200;
    cfg.seed = f.seed;
    cfg.jobs = f.jobs;
    if (f.orders.empty() || f.orders == "half") {
        cfg.scope = experiment::OrderScope::Half;
    } else if (f.orders == "all") {
        cfg.scope = experiment::OrderScope::All;
    } else {
        cfg.scope = experiment::OrderScope::Explicit;
        cfg.orders = parse_list(f.orders);
    }
    const auto stats = experiment::run_experiment(cfg);
    if (!f.out.empty()) {
        Sink sink(f.out, out);
        experiment::write_json(*sink, stats);
    }
    header(out, "experiment", {{"p", str(f.p)}, {"ells", join(cfg.ells)}, {"curves", str(cfg.curves)}, {"seed", seed_str(f)},
                               {"orders", f.orders.empty() ? "half" : f.orders}, {"jobs", str(f.jobs)}});
    out << "# reference band: " << experiment::kReferenceBandLow << "-" << experiment::kReferenceBandHigh << " %\n";
    experiment::write_summary_csv(out, stats);
    return 0;
}

int cmd_crt_demo(const Flags &f, std::ostream &out)
{
    require_seed(f, "crt-demo");
    const auto d = experiment::crt_demo(f.p, f.seed);
    Sink sink(f.out, out);
    header(*sink, "crt-demo", {{"p", str(f.p)}, {"seed", seed_str(f)}});
    *sink << "ell,a1_residue,a2_residue\n";
    for (std::size_t i = 0; i < d.ells.size(); ++i)
        *sink << d.ells[i] << ',' << d.residues[i].a1 << ',' << d.residues[i].a2 << '\n';
    *sink << "# recovered: a1=" << d.recovered.a1 << " a2=" << d.recovered.a2 << '\n';
    *sink << "# counted: a1=" << d.truth.a1 << " a2=" << d.truth.a2 << '\n';
    *sink << "# match: " << (d.ok ? "yes" : "no") << '\n';
    return d.ok ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Frobenius order distributions on Sp4(F_ell), Atkin-style candidate sets and a genus-2 "
                 "point-counting experiment",
                 "frobdist"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Flags f;

    auto jobs = [&](CLI::App *s) { s->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::Range(1U, 256U)); };
    auto out_opt = [&](CLI::App *s) { s->add_option("--out", f.out, "Output file (stdout when omitted)"); };
    auto seed = [&](CLI::App *s) { s->add_option("--seed", f.seed, "Master seed"); };
    auto small = [&](CLI::App *s) {
        s->add_flag("--allow-small", f.allow_small, "Allow ell in {3, 5} for the closed form");
        s->add_flag("--fix-ell3", f.fix_ell3, "Use order 9 for the regular unipotent classes at ell = 3");
    };

    auto *dist = app.add_subcommand("dist", "Projective order distribution of Sp4(F_ell)");
    dist->add_option("--ell", f.ell, "Odd prime")->required();
    dist->add_option("--method", f.method, "closed, census or mc")->check(CLI::IsMember({"closed", "census", "mc"}));
    dist->add_option("--samples", f.samples, "Monte Carlo sample count");
    dist->add_flag("--big", f.big, "Allow the ell = 7 census");
    seed(dist), jobs(dist), out_opt(dist), small(dist);

    auto *moments = app.add_subcommand("moments", "Exact and asymptotic mean and variance");
    moments->add_option("--ell", f.ell, "Single prime");
    moments->add_option("--primes", f.primes, "Sweep the first N primes (those >= 7)");
    out_opt(moments), small(moments);

    auto *modes = app.add_subcommand("modes", "Most likely projective orders");
    modes->add_option("--ell", f.ell, "Single prime");
    modes->add_option("--primes", f.primes, "Sweep the first N primes (those >= 7)");
    modes->add_option("--top", f.top, "Number of modes")->check(CLI::PositiveNumber);
    out_opt(modes), small(modes);

    auto *table3 = app.add_subcommand("table3", "Bucketed order masses averaged over primes");
    table3->add_option("--primes", f.primes, "First N primes (those >= 7 are averaged)");
    jobs(table3), out_opt(table3);

    auto *heatmap = app.add_subcommand("heatmap", "Histogram of order / ell^2 per prime");
    heatmap->add_option("--primes", f.primes, "First N primes (those >= 7)");
    heatmap->add_option("--bins", f.bins, "Bin count")->check(CLI::PositiveNumber);
    jobs(heatmap), out_opt(heatmap);

    auto *census = app.add_subcommand("census", "Exhaustive projective-order counts of Sp_2g(F_ell)");
    census->add_option("--ell", f.ell, "Odd prime")->required();
    census->add_option("--g", f.g, "Genus (1 or 2)")->check(CLI::Range(1, 2));
    census->add_flag("--big", f.big, "Allow ell = 7 for g = 2");
    jobs(census), out_opt(census);

    auto *sample = app.add_subcommand("sample", "Uniform random elements of Sp_2g(F_ell)");
    sample->add_option("--ell", f.ell, "Odd prime")->required();
    sample->add_option("--g", f.g, "Genus (1 to 3)")->check(CLI::Range(1, 3));
    sample->add_option("--samples", f.samples, "Sample count")->required();
    seed(sample), jobs(sample), out_opt(sample);

    auto *cands = app.add_subcommand("candidates", "Characteristic coefficient candidates mod ell");
    cands->add_option("--ell", f.ell, "Odd prime")->required();
    cands->add_option("--g", f.g, "Dimension (1 to 3)")->check(CLI::Range(1, 3));
    cands->add_option("--q", f.q, "Field size (reduced mod ell)");
    cands->add_option("--r", f.r, "Projective order");
    cands->add_option("--orders", f.orders, "Weighted list over these orders, or 'all' (g = 2)");
    out_opt(cands);
    cands->add_flag("--fix-ell3", f.fix_ell3, "Use order 9 for the regular unipotent classes at ell = 3");

    auto *count = app.add_subcommand("count-curve", "Point counts and Frobenius coefficients of genus-2 curves");
    count->add_option("--p", f.p, "Odd prime")->required();
    count->add_option("--f", f.f, "Coefficients f4,f3,f2,f1,f0 of a fixed curve");
    count->add_option("--curves", f.curves, "Number of seeded random curves");
    seed(count), jobs(count), out_opt(count);

    auto *exp = app.add_subcommand("experiment", "Classical versus list-ordered attempt counts");
    exp->add_option("--p", f.p, "Prime field of the curves")->required();
    exp->add_option("--ell", f.ells, "Primes ell with p = 1 mod ell (default: all eligible up to 100)");
    exp->add_option("--curves", f.curves, "Curve count (default 200)");
    exp->add_option("--orders", f.orders, "half ((ell-1)/2 and (ell+1)/2, the default), all, or a comma list of orders");
    seed(exp), jobs(exp), out_opt(exp);

    auto *crt = app.add_subcommand("crt-demo", "Recover (a1, a2) of one curve from residues");
    crt->add_option("--p", f.p, "Odd prime")->required();
    seed(crt), out_opt(crt);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        const auto *active = app.get_subcommands().front();
        const auto *seed_opt = active->get_option_no_throw("--seed");
        f.has_seed = seed_opt != nullptr && seed_opt->count() > 0;
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        if (*dist)
            return cmd_dist(f, out);
        if (*moments)
            return cmd_moments(f, *moments, out);
        if (*modes)
            return cmd_modes(f, *modes, out);
        if (*table3)
            return cmd_table3(f, out);
        if (*heatmap)
            return cmd_heatmap(f, out);
        if (*census)
            return cmd_census(f, out);
        if (*sample)
            return cmd_sample(f, out);
        if (*cands)
            return cmd_candidates(f, *cands, out);
        if (*count)
            return cmd_count_curve(f, *count, out);
        if (*exp)
            return cmd_experiment(f, *exp, out);
        if (*crt)
            return cmd_crt_demo(f, out);
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

} // namespace frobdist::cli
