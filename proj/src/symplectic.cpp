#include "frobdist/symplectic.hpp"

#include <stdexcept>
#include <string>

namespace frobdist::symplectic {

namespace {

void check_shape(int g, u32 ell)
{
    if (g < 1 || g > kMaxG)
        throw std::invalid_argument("SympMatrix: g must lie in 1..3");
    if (ell < 3 || ell >= kMaxMatrixPrime || !numth::is_prime(ell))
        throw std::invalid_argument("SympMatrix: ell must be an odd prime below 2^14, got " + std::to_string(ell));
}

template <int N>
void mul_kernel(const u32 *a, const u32 *b, u32 *c, const FastMod &mod) noexcept
{
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            u32 s = 0;
            for (int k = 0; k < N; ++k)
                s += a[i * kMaxDim + k] * b[k * kMaxDim + j];
            c[i * kMaxDim + j] = mod(s);
        }
    }
}

} // namespace

SympMatrix::SympMatrix(int g, u32 ell) : g_(g), mod_((check_shape(g, ell), ell)) {}

SympMatrix SympMatrix::identity(int g, u32 ell) { return scalar(g, ell, 1); }

SympMatrix SympMatrix::scalar(int g, u32 ell, u32 lambda)
{
    SympMatrix m(g, ell);
    for (int i = 0; i < 2 * g; ++i)
        m.set(i, i, lambda);
    return m;
}

SympMatrix SympMatrix::form(int g, u32 ell)
{
    SympMatrix m(g, ell);
    for (int i = 0; i < g; ++i) {
        m.set(i, g + i, 1);
        m.set(g + i, i, ell - 1);
    }
    return m;
}

SympMatrix SympMatrix::from_entries(int g, u32 ell, std::span<const u64> entries)
{
    SympMatrix m(g, ell);
    const int n = 2 * g;
    if (entries.size() != static_cast<std::size_t>(n * n))
        throw std::invalid_argument("SympMatrix::from_entries: expected (2g)^2 entries");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            m.set(i, j, entries[static_cast<std::size_t>(i * n + j)]);
    }
    return m;
}

bool SympMatrix::is_scalar() const noexcept
{
    const int n = dim();
    const u32 d = (*this)(0, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if ((*this)(i, j) != (i == j ? d : 0))
                return false;
        }
    }
    return true;
}

bool SympMatrix::is_identity() const noexcept { return (*this)(0, 0) == 1 && is_scalar(); }

SympMatrix SympMatrix::operator*(const SympMatrix &o) const noexcept
{
    SympMatrix r(*this);
    switch (g_) {
    case 1:
        mul_kernel<2>(a_.data(), o.a_.data(), r.a_.data(), mod_);
        break;
    case 2:
        mul_kernel<4>(a_.data(), o.a_.data(), r.a_.data(), mod_);
        break;
    default:
        mul_kernel<6>(a_.data(), o.a_.data(), r.a_.data(), mod_);
        break;
    }
    return r;
}

SympMatrix SympMatrix::pow(u64 e) const noexcept
{
    if (e == 0) {
        SympMatrix r(*this);
        r.a_.fill(0);
        for (int i = 0; i < dim(); ++i)
            r.set(i, i, 1);
        return r;
    }
    SympMatrix b = *this;
    while ((e & 1U) == 0) {
        b = b * b;
        e >>= 1U;
    }
    SympMatrix result = b;
    e >>= 1U;
    while (e != 0) {
        b = b * b;
        if (e & 1U)
            result = result * b;
        e >>= 1U;
    }
    return result;
}

SympMatrix SympMatrix::transpose() const noexcept
{
    SympMatrix r(*this);
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            r.a_[static_cast<std::size_t>(i * kMaxDim + j)] = (*this)(j, i);
    }
    return r;
}

SympMatrix SympMatrix::similitude_inverse() const
{
    const auto c = similitude_check(*this);
    if (!c)
        throw std::domain_error("similitude_inverse: matrix is not a similitude");
    const u32 l = ell();
    const SympMatrix omega = form(g_, l);
    const SympMatrix omega_inv = scalar(g_, l, l - 1) * omega;
    const u32 c_inv = static_cast<u32>(numth::invmod_prime(*c, l));
    return scalar(g_, l, c_inv) * (omega * transpose() * omega_inv);
}

GroupOrder group_order(int g, u64 ell)
{
    if (g < 1 || g > kMaxG)
        throw std::invalid_argument("group_order: g must lie in 1..3");
    if (ell < 3 || !numth::is_prime(ell))
        throw std::invalid_argument("group_order: ell must be an odd prime");
    mpz_class l(static_cast<unsigned long>(ell));
    mpz_class sp;
    mpz_pow_ui(sp.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(g * g));
    for (int i = 1; i <= g; ++i) {
        mpz_class t;
        mpz_pow_ui(t.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(2 * i));
        sp *= t - 1;
    }
    return {sp, sp / 2};
}

std::optional<u32> similitude_check(const SympMatrix &m)
{
    const int g = m.g();
    const SympMatrix omega = SympMatrix::form(g, m.ell());
    const SympMatrix p = m * omega * m.transpose();
    const u32 c = p(0, g);
    if (c == 0)
        return std::nullopt;
    if (!(p == SympMatrix::scalar(g, m.ell(), c) * omega))
        return std::nullopt;
    return c;
}

std::vector<u32> full_char_poly(const SympMatrix &m)
{
    const int n = m.dim();
    const u64 p = m.ell();
    auto md = [p](u64 v) { return v % p; };
    auto inv = [p](u64 v) { return numth::invmod_prime(v, p); };

    std::vector<std::vector<u64>> h(static_cast<std::size_t>(n), std::vector<u64>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            h[i][j] = m(i, j);
    }

    // Similarity reduction to upper Hessenberg form.
    for (int j = 0; j + 2 < n; ++j) {
        int pivot = -1;
        for (int i = j + 1; i < n; ++i) {
            if (h[i][j] != 0) {
                pivot = i;
                break;
            }
        }
        if (pivot < 0)
            continue;
        if (pivot != j + 1) {
            std::swap(h[pivot], h[j + 1]);
            for (int r = 0; r < n; ++r)
                std::swap(h[r][pivot], h[r][j + 1]);
        }
        const u64 pinv = inv(h[j + 1][j]);
        for (int i = j + 2; i < n; ++i) {
            const u64 u = md(h[i][j] * pinv);
            if (u == 0)
                continue;
            for (int c = 0; c < n; ++c)
                h[i][c] = md(h[i][c] + (p - u) * h[j + 1][c]);
            for (int r = 0; r < n; ++r)
                h[r][j + 1] = md(h[r][j + 1] + u * h[r][i]);
        }
    }

    // polys[m] holds the characteristic polynomial of the leading m x m block,
    // stored highest degree first.
    std::vector<std::vector<u64>> polys(static_cast<std::size_t>(n + 1));
    polys[0] = {1};
    for (int k = 1; k <= n; ++k) {
        std::vector<u64> next(static_cast<std::size_t>(k + 1), 0);
        const auto &prev = polys[k - 1];
        for (int i = 0; i < k; ++i) {
            next[i] = md(next[i] + prev[i]);
            next[i + 1] = md(next[i + 1] + (p - h[k - 1][k - 1]) * prev[i]);
        }
        u64 sub_product = 1;
        for (int i = 1; i < k; ++i) {
            sub_product = md(sub_product * h[k - i][k - i - 1]);
            const u64 coef = md(h[k - 1 - i][k - 1] * sub_product);
            if (coef == 0)
                continue;
            const auto &lower = polys[k - 1 - i];
            const std::size_t shift = static_cast<std::size_t>(k) + 1 - lower.size();
            for (std::size_t t = 0; t < lower.size(); ++t)
                next[t + shift] = md(next[t + shift] + (p - coef) * lower[t]);
        }
        polys[k] = std::move(next);
    }
    std::vector<u32> out(polys[n].begin(), polys[n].end());
    return out;
}

CharPolyCoeffs char_poly(const SympMatrix &m)
{
    const auto q = similitude_check(m);
    if (!q)
        throw std::domain_error("char_poly: matrix is not a symplectic similitude");
    const std::vector<u32> c = full_char_poly(m);
    const int g = m.g();
    const u64 ell = m.ell();
    u64 q_power = 1;
    for (int k = g; k >= 0; --k) {
        // c_{2g-k} == q^{g-k} c_k
        if (c[static_cast<std::size_t>(2 * g - k)] != (q_power * c[static_cast<std::size_t>(k)]) % ell)
            throw std::domain_error("char_poly: characteristic polynomial is not reciprocal");
        q_power = q_power * *q % ell;
    }
    CharPolyCoeffs out;
    out.g = g;
    out.q = *q;
    out.ell = m.ell();
    for (int k = 1; k <= g; ++k)
        out.a[static_cast<std::size_t>(k - 1)] = c[static_cast<std::size_t>(k)];
    return out;
}

numth::Factorization projective_exponent(int g, u64 ell)
{
    numth::Factorization semisimple;
    auto lcm_into = [&semisimple](const numth::Factorization &f) {
        for (const auto &[p, e] : f)
            semisimple[p] = std::max(semisimple[p], e);
    };
    switch (g) {
    case 1:
        lcm_into(numth::factorize_power_minus_one(ell, 2));
        break;
    case 2:
        lcm_into(numth::factorize_power_minus_one(ell, 4));
        break;
    case 3:
        lcm_into(numth::factorize_power_minus_one(ell, 4));
        lcm_into(numth::factorize_power_minus_one(ell, 6));
        break;
    default:
        throw std::invalid_argument("projective_exponent: g must lie in 1..3");
    }
    u64 unipotent = numth::smallest_power_at_least(ell, static_cast<u64>(2 * g));
    unsigned m = 0;
    while (unipotent > 1) {
        unipotent /= ell;
        ++m;
    }
    semisimple[ell] += m;
    return semisimple;
}

ProjectiveOrderSolver::ProjectiveOrderSolver(int g, u32 ell) : g_(g), ell_(ell)
{
    for (const auto &[p, e] : projective_exponent(g, ell)) {
        prime_powers_.emplace_back(p, e);
        prime_power_values_.push_back(numth::ipow(p, e));
    }
}

u64 ProjectiveOrderSolver::solve(const SympMatrix &x, std::size_t lo, std::size_t hi) const
{
    if (x.is_scalar())
        return 1;
    if (hi - lo == 1) {
        const auto [p, e] = prime_powers_[lo];
        SympMatrix y = x;
        u64 pj = 1;
        for (unsigned j = 1; j <= e; ++j) {
            y = y.pow(p);
            pj *= p;
            if (y.is_scalar())
                return pj;
        }
        throw std::logic_error("ProjectiveOrderSolver: exponent bound is not a multiple of the order");
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    SympMatrix left = x;
    for (std::size_t i = mid; i < hi; ++i)
        left = left.pow(prime_power_values_[i]);
    SympMatrix right = x;
    for (std::size_t i = lo; i < mid; ++i)
        right = right.pow(prime_power_values_[i]);
    return solve(left, lo, mid) * solve(right, mid, hi);
}

u64 ProjectiveOrderSolver::operator()(const SympMatrix &m) const
{
    if (m.g() != g_ || m.ell() != ell_)
        throw std::invalid_argument("ProjectiveOrderSolver: matrix shape does not match solver");
    return solve(m, 0, prime_powers_.size());
}

u64 projective_order(const SympMatrix &m)
{
    const ProjectiveOrderSolver solver(m.g(), m.ell());
    return solver(m);
}

namespace {

using Vec = std::array<u32, kMaxDim>;

u32 form_of(const Vec &u, const Vec &v, int g, u32 ell)
{
    u64 s = 0;
    for (int i = 0; i < g; ++i)
        s += static_cast<u64>(u[i]) * v[g + i] + static_cast<u64>(ell - u[g + i]) * v[i];
    return static_cast<u32>(s % ell);
}

} // namespace

SympMatrix random_symplectic(u32 ell, int g, std::mt19937_64 &rng)
{
    SympMatrix m(g, ell);
    std::uniform_int_distribution<u32> residue(0, ell - 1);
    const int n = 2 * g;
    std::vector<std::pair<Vec, Vec>> pairs;

    // Projection onto the symplectic complement of the chosen pairs; it is
    // linear, onto, and fixes the complement, so it maps uniform vectors to
    // uniform vectors of the complement.
    auto draw_in_complement = [&]() {
        Vec x{};
        for (int i = 0; i < n; ++i)
            x[i] = residue(rng);
        for (const auto &[e, f] : pairs) {
            const u64 xf = form_of(x, f, g, ell);
            const u64 xe = form_of(x, e, g, ell);
            for (int i = 0; i < n; ++i)
                x[i] = static_cast<u32>((x[i] + (ell - xf) * e[i] + xe * f[i]) % ell);
        }
        return x;
    };

    for (int t = 0; t < g; ++t) {
        Vec e{};
        for (;;) {
            e = draw_in_complement();
            bool zero = true;
            for (int i = 0; i < n; ++i)
                zero = zero && e[i] == 0;
            if (!zero)
                break;
        }
        Vec f{};
        do {
            f = draw_in_complement();
        } while (form_of(e, f, g, ell) != 1);
        for (int i = 0; i < n; ++i) {
            m.set(t, i, e[i]);
            m.set(g + t, i, f[i]);
        }
        pairs.emplace_back(e, f);
    }
    return m;
}

SymplecticBasisEnumerator::SymplecticBasisEnumerator(u32 ell, int g) : ell_(ell), g_(g)
{
    check_shape(g, ell);
    const int n = 2 * g;
    const u64 count = numth::ipow(ell, static_cast<unsigned>(n));
    if (count > (u64{1} << 24U))
        throw std::invalid_argument("SymplecticBasisEnumerator: vector space too large to enumerate");
    all_.resize(count);
    for (u64 code = 0; code < count; ++code) {
        u64 rest = code;
        Vec v{};
        for (int i = 0; i < n; ++i) {
            v[i] = static_cast<u32>(rest % ell);
            rest /= ell;
        }
        all_[code] = v;
        all_ids_.push_back(static_cast<u32>(code));
        if (code != 0)
            nonzero_.push_back(static_cast<u32>(code));
    }
    zero_id_ = 0;
}

u32 SymplecticBasisEnumerator::form_value(const Vec &u, const Vec &v) const noexcept
{
    return form_of(u, v, g_, ell_);
}

void SymplecticBasisEnumerator::place(SympMatrix &m, int row, const Vec &v) const noexcept
{
    for (int i = 0; i < 2 * g_; ++i)
        m.set(row, i, v[i]);
}

void check_census_supported(u32 ell, int g, const CensusOptions &opts)
{
    if (g == 1) {
        if (ell < 3 || ell >= kMaxMatrixPrime || !numth::is_prime(ell))
            throw std::invalid_argument("census: ell must be an odd prime");
        return;
    }
    if (g == 2) {
        if (ell == 3 || ell == 5)
            return;
        if (ell == 7) {
            if (opts.allow_big)
                return;
            throw std::invalid_argument("census: ell = 7 enumerates 276595200 matrices; pass the big flag");
        }
        throw std::invalid_argument("census: Sp4 census supports ell in {3, 5} (7 with the big flag)");
    }
    throw std::invalid_argument("census: only g = 1 and g = 2 are enumerable");
}

void census(u32 ell, int g, const std::function<void(const SympMatrix &)> &visit, const CensusOptions &opts)
{
    check_census_supported(ell, g, opts);
    const SymplecticBasisEnumerator enumerator(ell, g);
    enumerator.run(0, enumerator.first_vector_count(), visit);
}

} // namespace frobdist::symplectic
