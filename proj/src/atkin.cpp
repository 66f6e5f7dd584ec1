#include "frobdist/atkin.hpp"

#include "frobdist/numth.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace frobdist::atkin {

namespace {

using ff::FieldElem;
using ff::PrimeField;

mpz_class binomial(unsigned long n, unsigned long k)
{
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), n, k);
    return c;
}

void check_g(std::size_t g)
{
    if (g < 1 || g > static_cast<std::size_t>(kMaxG))
        throw std::invalid_argument("dimension must lie in 1..3");
}

// Coefficient C(g - n + 2j, j) q^j in a_n = sum_j C(...) q^j b_(n-2j).
mpz_class conversion_weight(std::size_t g, std::size_t n, std::size_t j, const mpz_class &q)
{
    mpz_class qj;
    mpz_pow_ui(qj.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(j));
    return binomial(static_cast<unsigned long>(g - n + 2 * j), static_cast<unsigned long>(j)) * qj;
}

std::vector<u64> to_residues(const std::vector<mpz_class> &v, u64 ell)
{
    std::vector<u64> out;
    const mpz_class m(static_cast<unsigned long>(ell));
    for (const auto &x : v) {
        mpz_class r;
        mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
        out.push_back(r.get_ui());
    }
    return out;
}

std::vector<mpz_class> to_integers(const std::vector<u64> &v)
{
    std::vector<mpz_class> out;
    for (u64 x : v)
        out.emplace_back(static_cast<unsigned long>(x));
    return out;
}

struct Generator {
    int g;
    u64 q;
    CandidateMode mode;
    const PrimeField &F;
    CandidateSet &out;

    void emit(const std::vector<u64> &a, const Witness &w) { out.entries[a].push_back(w); }

    void run(const std::vector<FieldElem> &zeta, const Witness &base)
    {
        const auto &field = zeta.front().field();
        const FieldElem qe = field.from_base(q);
        std::vector<FieldElem> x;
        for (const auto &z : zeta)
            x.push_back(qe * (z + z.inverse() + field.from_base(2)));

        if (g == 1) {
            if (!x[0].in_base_field())
                return;
            for (u64 t : ff::fp_sqrt(x[0].base_value(), F)) {
                Witness w = base;
                w.b = {t};
                emit({t}, w);
            }
            return;
        }
        if (g == 2) {
            const FieldElem e1 = x[0] + x[1];
            const FieldElem e2 = x[0] * x[1];
            if (!e1.in_base_field() || !e2.in_base_field())
                return;
            emit_genus2(e1.base_value(), e2.base_value(), base);
            return;
        }
        const FieldElem e1 = x[0] + x[1] + x[2];
        const FieldElem e2 = x[0] * x[1] + x[0] * x[2] + x[1] * x[2];
        const FieldElem e3 = x[0] * x[1] * x[2];
        if (!e1.in_base_field() || !e2.in_base_field() || !e3.in_base_field())
            return;
        emit_genus3(e1.base_value(), e2.base_value(), e3.base_value(), base);
    }

    // E1 = x1 + x2, E2 = x1 x2 with x_i = mu_i^2; b2 = mu1 mu2, b1^2 = E1 + 2 b2.
    void emit_genus2(u64 big_e1, u64 big_e2, const Witness &base)
    {
        const auto products = ff::fp_sqrt(big_e2, F);
        std::vector<u64> firsts;
        for (u64 s : products) {
            for (u64 b1 : ff::fp_sqrt(F.add(big_e1, F.add(s, s)), F)) {
                if (mode == CandidateMode::Linked) {
                    Witness w = base;
                    w.b = {b1, s};
                    const auto a = real_to_char(w.b, q, F);
                    check_genus2(a, big_e1, big_e2);
                    emit(a, w);
                } else {
                    firsts.push_back(b1);
                }
            }
        }
        if (mode == CandidateMode::Squared) {
            for (u64 a1 : firsts) {
                for (u64 s : products) {
                    Witness w = base;
                    const std::vector<u64> a{a1, F.add(s, F.add(q, q))};
                    w.b = char_to_real(a, q, F);
                    emit(a, w);
                }
            }
        }
    }

    void check_genus2(const std::vector<u64> &a, u64 big_e1, u64 big_e2) const
    {
        const u64 c = F.sub(a[1], F.add(q, q));
        if (F.mul(a[0], a[0]) != F.add(big_e1, F.add(c, c)) || F.mul(c, c) != big_e2)
            throw std::logic_error("candidate fails the genus-2 square relations");
    }

    // Elementary symmetric e_k of mu_1..mu_3 satisfy e1^2 = E1 + 2 e2,
    // e2^2 = E2 + 2 e1 e3, e3^2 = E3; e1 is found by scanning F_ell.
    void emit_genus3(u64 big_e1, u64 big_e2, u64 big_e3, const Witness &base)
    {
        const u64 ell = F.modulus();
        const u64 half = F.inv(2);
        std::vector<std::pair<u64, u64>> solutions; // (e1, e3)
        const auto thirds = ff::fp_sqrt(big_e3, F);
        for (u64 e3 : thirds) {
            for (u64 e1 = 0; e1 < ell; ++e1) {
                const u64 e2 = F.mul(F.sub(F.mul(e1, e1), big_e1), half);
                if (F.mul(e2, e2) == F.add(big_e2, F.mul(2, F.mul(e1, e3))))
                    solutions.emplace_back(e1, e3);
            }
        }
        if (mode == CandidateMode::Linked) {
            for (const auto &[e1, e3] : solutions) {
                Witness w = base;
                const u64 e2 = F.mul(F.sub(F.mul(e1, e1), big_e1), half);
                w.b = {F.neg(e1), e2, F.neg(e3)};
                const auto a = real_to_char(w.b, q, F);
                check_genus3(a, big_e1, big_e3);
                emit(a, w);
            }
            return;
        }
        std::vector<u64> firsts;
        for (const auto &[e1, e3] : solutions)
            firsts.push_back(F.neg(e1));
        std::sort(firsts.begin(), firsts.end());
        firsts.erase(std::unique(firsts.begin(), firsts.end()), firsts.end());
        for (u64 a1 : firsts) {
            // 2 a2 = a1^2 + 6q - E1 and (a3 - 2 q a1)^2 = E3.
            const u64 a2 = F.mul(F.sub(F.add(F.mul(a1, a1), F.mul(6 % ell, q)), big_e1), half);
            for (u64 t : thirds) {
                const std::vector<u64> a{a1, a2, F.add(t, F.mul(F.add(q, q), a1))};
                Witness w = base;
                w.b = char_to_real(a, q, F);
                emit(a, w);
            }
        }
    }

    void check_genus3(const std::vector<u64> &a, u64 big_e1, u64 big_e3) const
    {
        const u64 two_a2 = F.add(a[1], a[1]);
        const u64 rhs = F.sub(F.add(F.mul(a[0], a[0]), F.mul(6 % F.modulus(), q)), big_e1);
        const u64 c = F.sub(a[2], F.mul(F.add(q, q), a[0]));
        if (two_a2 != rhs || F.mul(c, c) != big_e3)
            throw std::logic_error("candidate fails the genus-3 square relations");
    }
};

u64 lcm_of(const std::vector<u64> &orders)
{
    u64 l = 1;
    for (u64 o : orders)
        l = std::lcm(l, o);
    return l;
}

void check_inputs(int g, u64 ell, u64 q, u64 r)
{
    check_g(static_cast<std::size_t>(g));
    if (ell < 3 || !numth::is_prime(ell))
        throw std::invalid_argument("ell must be an odd prime");
    if (r == 0 || std::gcd(r, ell) != 1)
        throw std::invalid_argument("r must be positive and prime to ell; strip the ell-part first");
    if (q % ell == 0)
        throw std::invalid_argument("q must be nonzero mod ell");
}

} // namespace

std::vector<mpz_class> real_to_char(const std::vector<mpz_class> &b, const mpz_class &q)
{
    const std::size_t g = b.size();
    check_g(g);
    std::vector<mpz_class> a(g);
    for (std::size_t n = 1; n <= g; ++n) {
        mpz_class s = 0;
        for (std::size_t j = 0; 2 * j <= n; ++j) {
            const mpz_class bk = (n == 2 * j) ? mpz_class(1) : b[n - 2 * j - 1];
            s += conversion_weight(g, n, j, q) * bk;
        }
        a[n - 1] = s;
    }
    return a;
}

std::vector<mpz_class> char_to_real(const std::vector<mpz_class> &a, const mpz_class &q)
{
    const std::size_t g = a.size();
    check_g(g);
    std::vector<mpz_class> b(g);
    for (std::size_t n = 1; n <= g; ++n) {
        mpz_class s = a[n - 1];
        for (std::size_t j = 1; 2 * j <= n; ++j) {
            const mpz_class bk = (n == 2 * j) ? mpz_class(1) : b[n - 2 * j - 1];
            s -= conversion_weight(g, n, j, q) * bk;
        }
        b[n - 1] = s;
    }
    return b;
}

std::vector<u64> real_to_char(const std::vector<u64> &b, u64 q, const PrimeField &F)
{
    return to_residues(real_to_char(to_integers(b), mpz_class(static_cast<unsigned long>(q))), F.modulus());
}

std::vector<u64> char_to_real(const std::vector<u64> &a, u64 q, const PrimeField &F)
{
    return to_residues(char_to_real(to_integers(a), mpz_class(static_cast<unsigned long>(q))), F.modulus());
}

std::vector<mpz_class> newton_coeffs(const std::vector<mpz_class> &s)
{
    std::vector<mpz_class> a;
    for (std::size_t k = 1; k <= s.size(); ++k) {
        mpz_class acc = s[k - 1];
        for (std::size_t j = 1; j < k; ++j)
            acc += s[k - j - 1] * a[j - 1];
        if (!mpz_divisible_ui_p(acc.get_mpz_t(), static_cast<unsigned long>(k)))
            throw std::domain_error("newton_coeffs: power sums are not those of an integer polynomial");
        a.push_back(acc / static_cast<unsigned long>(k));
    }
    return a;
}

std::vector<u64> newton_coeffs(const std::vector<u64> &s, const PrimeField &F)
{
    if (F.modulus() <= s.size())
        throw std::domain_error("newton_coeffs: k is not invertible mod ell for k = " + std::to_string(F.modulus()));
    std::vector<u64> a;
    for (std::size_t k = 1; k <= s.size(); ++k) {
        u64 acc = F.reduce(s[k - 1]);
        for (std::size_t j = 1; j < k; ++j)
            acc = F.add(acc, F.mul(F.reduce(s[k - j - 1]), a[j - 1]));
        a.push_back(F.mul(acc, F.inv(k)));
    }
    return a;
}

u64 strip_ell_part(u64 r, u64 ell)
{
    if (r == 0)
        throw std::invalid_argument("strip_ell_part: r must be positive");
    while (r % ell == 0)
        r /= ell;
    return r;
}

bool lcm_admissible(const std::vector<u64> &orders, u64 r)
{
    const u64 l = lcm_of(orders);
    return l == r || (r % 2 == 0 && 2 * l == r);
}

std::vector<ZetaTuple> zeta_tuples(u64 r, int g, u64 ell)
{
    check_g(static_cast<std::size_t>(g));
    const auto k = ff::degree_containing_roots(r, ell, static_cast<unsigned>(2 * g));
    if (!k)
        throw ff::InsufficientFieldDegree("no extension of degree <= 2g contains the r-th roots of unity");
    const auto field = ff::ext_field_build(ell, *k);
    const auto roots = ff::roots_of_unity(r, *field);
    std::vector<ZetaTuple> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(g), 0);
    for (;;) {
        ZetaTuple t;
        t.r = r;
        for (std::size_t i : idx) {
            t.zeta.push_back(roots[i].value);
            t.orders.push_back(roots[i].order);
        }
        if (lcm_admissible(t.orders, r))
            out.push_back(std::move(t));
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == roots.size())
            idx[pos++] = 0;
        if (pos == idx.size())
            break;
    }
    return out;
}

CandidateSet candidates_from_tuples(int g, u64 ell, u64 q, u64 r, const std::vector<ZetaTuple> &tuples,
                                    CandidateMode mode)
{
    check_inputs(g, ell, q, r);
    const PrimeField F(ell);
    CandidateSet out{ell, q % ell, r, g, {}};
    Generator gen{g, q % ell, mode, F, out};
    for (const auto &t : tuples) {
        if (t.zeta.size() != static_cast<std::size_t>(g))
            throw std::invalid_argument("candidates: tuple length differs from g");
        Witness w;
        w.field_degree = t.zeta.front().field().degree();
        for (const auto &z : t.zeta)
            w.zeta_codes.push_back(z.code());
        gen.run(t.zeta, w);
    }
    return out;
}

CandidateSet candidates(int g, u64 ell, u64 q, u64 r, CandidateMode mode)
{
    check_inputs(g, ell, q, r);
    const PrimeField F(ell);
    CandidateSet out{ell, q % ell, r, g, {}};
    Generator gen{g, q % ell, mode, F, out};

    std::vector<unsigned> degrees{static_cast<unsigned>(2 * g)};
    if (g == 3)
        degrees.push_back(4);
    for (unsigned k : degrees) {
        const auto field = ff::ext_field_build(ell, k);
        const u64 m = std::gcd(r, field->size() - 1);
        if (m % (r % 2 == 0 ? r / 2 : r) != 0)
            continue; // no admissible tuple can live in this field
        // zeta and 1/zeta give the same eta, so keep one of each pair.
        struct Root {
            FieldElem value;
            u64 order;
        };
        std::vector<Root> roots;
        for (const auto &z : ff::roots_of_unity(m, *field)) {
            if (z.value.code() <= z.value.inverse().code())
                roots.push_back({z.value, z.order});
        }
        std::vector<std::size_t> idx(static_cast<std::size_t>(g), 0);
        std::vector<FieldElem> zeta;
        std::vector<u64> orders;
        for (;;) {
            zeta.clear();
            orders.clear();
            for (std::size_t i : idx) {
                zeta.push_back(roots[i].value);
                orders.push_back(roots[i].order);
            }
            if (lcm_admissible(orders, r)) {
                Witness w;
                w.field_degree = k;
                for (const auto &z : zeta)
                    w.zeta_codes.push_back(z.code());
                gen.run(zeta, w);
            }
            // Next non-decreasing index tuple.
            std::size_t pos = idx.size();
            while (pos > 0 && idx[pos - 1] + 1 == roots.size())
                --pos;
            if (pos == 0)
                break;
            ++idx[pos - 1];
            for (std::size_t j = pos; j < idx.size(); ++j)
                idx[j] = idx[pos - 1];
        }
    }
    return out;
}

std::vector<WeightedCandidate> weighted_candidates(u64 ell, u64 q, const classdist::OrderDistribution &dist,
                                                   const std::vector<u64> &orders)
{
    std::vector<u64> scope = orders;
    if (scope.empty()) {
        for (const auto &[r, p] : dist.entries)
            scope.push_back(r);
    }
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

    std::map<u64, CandidateSet> cache;
    std::map<std::vector<u64>, mpq_class> weights;
    for (u64 r : scope) {
        const mpq_class p = dist.probability(r);
        if (p == 0)
            continue;
        const u64 r0 = strip_ell_part(r, ell);
        auto it = cache.find(r0);
        if (it == cache.end())
            it = cache.emplace(r0, candidates(2, ell, q, r0)).first;
        const CandidateSet &set = it->second;
        if (set.size() == 0)
            continue;
        mpq_class share = p / mpz_class(static_cast<unsigned long>(set.size()));
        share.canonicalize();
        for (const auto &[a, w] : set.entries)
            weights[a] += share;
    }
    std::vector<WeightedCandidate> out;
    for (auto &[a, w] : weights) {
        w.canonicalize();
        out.push_back({a, w});
    }
    std::stable_sort(out.begin(), out.end(), [](const WeightedCandidate &x, const WeightedCandidate &y) {
        const int c = cmp(x.weight, y.weight);
        return c != 0 ? c > 0 : x.a < y.a;
    });
    return out;
}

} // namespace frobdist::atkin
