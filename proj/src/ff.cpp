#include "frobdist/ff.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace frobdist::ff {

PrimeField::PrimeField(u64 modulus) : p_(modulus), barrett_(0)
{
    if (modulus < 3 || (modulus & 1U) == 0 || !numth::is_prime(modulus))
        throw std::invalid_argument("PrimeField: modulus " + std::to_string(modulus) + " is not an odd prime");
    barrett_ = ~u64{0} / modulus;
}

u64 PrimeField::inv(u64 a) const
{
    if (a % p_ == 0)
        throw std::domain_error("PrimeField::inv: zero has no inverse");
    return numth::invmod_prime(a, p_);
}

u64 PrimeField::from_signed(std::int64_t v) const noexcept
{
    const auto m = static_cast<std::int64_t>(p_);
    std::int64_t r = v % m;
    if (r < 0)
        r += m;
    return static_cast<u64>(r);
}

int PrimeField::legendre(u64 a) const noexcept
{
    a %= p_;
    if (a == 0)
        return 0;
    return pow(a, (p_ - 1) / 2) == 1 ? 1 : -1;
}

std::vector<u64> fp_sqrt(u64 a, const PrimeField &field)
{
    const u64 p = field.modulus();
    a %= p;
    if (a == 0)
        return {0};
    if (field.legendre(a) != 1)
        return {};

    u64 x = 0;
    if (p % 4 == 3) {
        x = field.pow(a, (p + 1) / 4);
    } else {
        u64 q = p - 1;
        unsigned s = 0;
        while ((q & 1U) == 0) {
            q >>= 1U;
            ++s;
        }
        u64 z = 2;
        while (field.legendre(z) != -1)
            ++z;
        u64 m = s;
        u64 c = field.pow(z, q);
        u64 t = field.pow(a, q);
        x = field.pow(a, (q + 1) / 2);
        while (t != 1) {
            u64 i = 0;
            u64 t2 = t;
            while (t2 != 1) {
                t2 = field.mul(t2, t2);
                ++i;
            }
            u64 b = c;
            for (u64 j = 0; j + 1 < m - i; ++j)
                b = field.mul(b, b);
            m = i;
            c = field.mul(b, b);
            t = field.mul(t, c);
            x = field.mul(x, b);
        }
    }
    const u64 y = p - x;
    return {std::min(x, y), std::max(x, y)};
}

namespace poly {

void trim(Poly &f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

int degree(const Poly &f)
{
    for (std::size_t i = f.size(); i > 0; --i) {
        if (f[i - 1] != 0)
            return static_cast<int>(i - 1);
    }
    return -1;
}

Poly add(const Poly &a, const Poly &b, const PrimeField &F)
{
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Poly sub(const Poly &a, const Poly &b, const PrimeField &F)
{
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
    trim(r);
    return r;
}

Poly mul(const Poly &a, const Poly &b, const PrimeField &F)
{
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    trim(r);
    return r;
}

Poly mod(const Poly &a, const Poly &b, const PrimeField &F)
{
    const int db = degree(b);
    if (db < 0)
        throw std::domain_error("poly::mod: division by zero polynomial");
    Poly r = a;
    trim(r);
    const u64 lead_inv = F.inv(b[static_cast<std::size_t>(db)]);
    for (int dr = degree(r); dr >= db; dr = degree(r)) {
        const u64 factor = F.mul(r[static_cast<std::size_t>(dr)], lead_inv);
        const int shift = dr - db;
        for (int i = 0; i <= db; ++i) {
            auto &slot = r[static_cast<std::size_t>(i + shift)];
            slot = F.sub(slot, F.mul(factor, b[static_cast<std::size_t>(i)]));
        }
        trim(r);
    }
    return r;
}

Poly gcd(Poly a, Poly b, const PrimeField &F)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, F);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const u64 li = F.inv(a.back());
        for (auto &c : a)
            c = F.mul(c, li);
    }
    return a;
}

Poly derivative(const Poly &f, const PrimeField &F)
{
    if (f.size() <= 1)
        return {};
    Poly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i)
        d[i - 1] = F.mul(f[i], i % F.modulus());
    trim(d);
    return d;
}

Poly powmod(const Poly &base, u64 exp, const Poly &modulus, const PrimeField &F)
{
    Poly result = mod(Poly{1}, modulus, F);
    Poly b = mod(base, modulus, F);
    while (exp != 0) {
        if (exp & 1U)
            result = mod(mul(result, b, F), modulus, F);
        b = mod(mul(b, b, F), modulus, F);
        exp >>= 1U;
    }
    return result;
}

u64 eval(const Poly &f, u64 x, const PrimeField &F)
{
    u64 acc = 0;
    for (std::size_t i = f.size(); i > 0; --i)
        acc = F.add(F.mul(acc, x), f[i - 1]);
    return acc;
}

bool is_irreducible(const Poly &f, const PrimeField &F)
{
    const int d = degree(f);
    if (d <= 0)
        return false;
    if (d == 1)
        return true;
    const Poly x{0, 1};
    Poly xp = x;
    for (int i = 1; i <= d / 2; ++i) {
        xp = powmod(xp, F.modulus(), f, F);
        if (degree(gcd(sub(xp, x, F), f, F)) != 0)
            return false;
    }
    return true;
}

bool is_square_free(const Poly &f, const PrimeField &F)
{
    const Poly d = derivative(f, F);
    if (d.empty())
        return degree(f) <= 0;
    return degree(gcd(f, d, F)) == 0;
}

} // namespace poly

ExtField::ExtField(u64 ell, unsigned degree, poly::Poly modulus_poly)
    : base_(ell), k_(degree), modulus_(std::move(modulus_poly)), size_(0)
{
    if (k_ < 1 || k_ > kMaxDegree)
        throw std::invalid_argument("ExtField: degree must lie in 1.." + std::to_string(kMaxDegree));
    if (k_ > 1 && ell >= (u64{1} << 28U))
        throw std::invalid_argument("ExtField: characteristic too large for extension arithmetic");
    poly::trim(modulus_);
    if (poly::degree(modulus_) != static_cast<int>(k_) || modulus_.back() != 1)
        throw std::invalid_argument("ExtField: modulus must be monic of the field degree");
    if (!poly::is_irreducible(modulus_, base_))
        throw std::invalid_argument("ExtField: modulus is reducible");
    numth::u128 size = 1;
    for (unsigned i = 0; i < k_; ++i)
        size *= ell;
    if (size >> 62U)
        throw std::invalid_argument("ExtField: field too large");
    size_ = static_cast<u64>(size);
    unit_factors_ = numth::factorize_power_minus_one(ell, k_);

    for (u64 code = 1; code < size_; ++code) {
        const FieldElem candidate = from_code(code);
        if (mult_order(candidate) == size_ - 1) {
            generator_ = std::make_unique<FieldElem>(candidate);
            break;
        }
    }
}

ExtField::~ExtField() = default;

FieldElem ExtField::zero() const { return {this, Coeffs{}}; }

FieldElem ExtField::one() const { return from_base(1); }

FieldElem ExtField::from_base(u64 v) const
{
    Coeffs c{};
    c[0] = v % base_.modulus();
    return {this, c};
}

FieldElem ExtField::from_coeffs(std::span<const u64> c) const
{
    if (c.size() > k_)
        throw std::invalid_argument("ExtField::from_coeffs: too many coefficients");
    Coeffs out{};
    for (std::size_t i = 0; i < c.size(); ++i)
        out[i] = c[i] % base_.modulus();
    return {this, out};
}

FieldElem ExtField::from_code(u64 code) const
{
    if (code >= size_)
        throw std::out_of_range("ExtField::from_code: code out of range");
    Coeffs c{};
    for (unsigned i = 0; i < k_; ++i) {
        c[i] = code % base_.modulus();
        code /= base_.modulus();
    }
    return {this, c};
}

const FieldElem &ExtField::primitive_element() const { return *generator_; }

Coeffs ExtField::add(const Coeffs &a, const Coeffs &b) const noexcept
{
    Coeffs r{};
    for (unsigned i = 0; i < k_; ++i)
        r[i] = base_.add(a[i], b[i]);
    return r;
}

Coeffs ExtField::sub(const Coeffs &a, const Coeffs &b) const noexcept
{
    Coeffs r{};
    for (unsigned i = 0; i < k_; ++i)
        r[i] = base_.sub(a[i], b[i]);
    return r;
}

Coeffs ExtField::neg(const Coeffs &a) const noexcept
{
    Coeffs r{};
    for (unsigned i = 0; i < k_; ++i)
        r[i] = base_.neg(a[i]);
    return r;
}

Coeffs ExtField::mul(const Coeffs &a, const Coeffs &b) const noexcept
{
    if (k_ == 1) {
        Coeffs r{};
        r[0] = base_.mul(a[0], b[0]);
        return r;
    }
    // Coefficients are below 2^28, so products and their short sums fit in
    // 64 bits without intermediate reduction.
    std::array<u64, 2 * kMaxDegree - 1> t{};
    for (unsigned i = 0; i < k_; ++i) {
        for (unsigned j = 0; j < k_; ++j)
            t[i + j] += a[i] * b[j];
    }
    const u64 p = base_.modulus();
    for (unsigned i = 2 * k_ - 2; i >= k_; --i) {
        const u64 top = base_.reduce(t[i]);
        if (top == 0)
            continue;
        for (unsigned j = 0; j < k_; ++j) {
            if (modulus_[j] != 0)
                t[i - k_ + j] += (p - modulus_[j]) * top;
        }
    }
    Coeffs r{};
    for (unsigned i = 0; i < k_; ++i)
        r[i] = base_.reduce(t[i]);
    return r;
}

u64 ExtField::norm(const FieldElem &x) const
{
    if (k_ == 1)
        return x.coeffs()[0];
    if (k_ == 2) {
        const auto &c = x.coeffs();
        const u64 a2 = base_.mul(c[0], c[0]);
        const u64 ab = base_.mul(c[0], c[1]);
        const u64 b2 = base_.mul(c[1], c[1]);
        return base_.add(base_.sub(a2, base_.mul(modulus_[1], ab)), base_.mul(modulus_[0], b2));
    }
    return x.pow((size_ - 1) / (base_.modulus() - 1)).base_value();
}

bool FieldElem::is_zero() const noexcept
{
    return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

bool FieldElem::is_one() const noexcept { return c_[0] == 1 && in_base_field(); }

bool FieldElem::in_base_field() const noexcept
{
    return std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; });
}

u64 FieldElem::code() const noexcept
{
    u64 code = 0;
    const u64 p = field_->characteristic();
    for (unsigned i = field_->degree(); i > 0; --i)
        code = code * p + c_[i - 1];
    return code;
}

FieldElem FieldElem::pow(u64 e) const noexcept
{
    FieldElem result = field_->one();
    FieldElem b = *this;
    while (e != 0) {
        if (e & 1U)
            result *= b;
        b *= b;
        e >>= 1U;
    }
    return result;
}

FieldElem FieldElem::inverse() const
{
    if (is_zero())
        throw std::domain_error("FieldElem::inverse: zero has no inverse");
    return pow(field_->size() - 2);
}

std::shared_ptr<const ExtField> ext_field_build(u64 ell, unsigned k)
{
    if (k < 1 || k > kMaxDegree)
        throw std::invalid_argument("ext_field_build: degree " + std::to_string(k) + " outside 1.." +
                                    std::to_string(kMaxDegree));
    static std::mutex mutex;
    static std::map<std::pair<u64, unsigned>, std::shared_ptr<const ExtField>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find({ell, k}); it != cache.end())
        return it->second;

    const PrimeField base(ell);
    const u64 count = numth::ipow(ell, k);
    for (u64 code = 0; code < count; ++code) {
        poly::Poly f(k + 1, 0);
        u64 rest = code;
        for (unsigned i = 0; i < k; ++i) {
            f[i] = rest % ell;
            rest /= ell;
        }
        f[k] = 1;
        if (poly::is_irreducible(f, base)) {
            auto field = std::make_shared<const ExtField>(ell, k, std::move(f));
            cache.emplace(std::make_pair(ell, k), field);
            return field;
        }
    }
    throw std::logic_error("ext_field_build: no irreducible polynomial found");
}

u64 mult_order(const FieldElem &x)
{
    if (x.is_zero())
        throw std::invalid_argument("mult_order: zero has no multiplicative order");
    const ExtField &F = x.field();
    u64 order = F.size() - 1;
    for (const auto &[p, e] : F.unit_group_factorization()) {
        for (unsigned i = 0; i < e; ++i) {
            if (order % p == 0 && x.pow(order / p).is_one())
                order /= p;
            else
                break;
        }
    }
    return order;
}

std::optional<unsigned> degree_containing_roots(u64 r, u64 ell, unsigned max_degree)
{
    if (r == 0 || std::gcd(r, ell) != 1)
        return std::nullopt;
    u64 power = 1 % r;
    for (unsigned k = 1; k <= max_degree; ++k) {
        power = numth::mulmod(power, ell % r, r);
        if (power == 1 % r)
            return k;
    }
    return std::nullopt;
}

std::vector<RootOfUnity> roots_of_unity(u64 r, const ExtField &field)
{
    const u64 n = field.size() - 1;
    if (r == 0 || n % r != 0)
        throw InsufficientFieldDegree("roots_of_unity: " + std::to_string(r) + " does not divide " +
                                      std::to_string(field.characteristic()) + "^" +
                                      std::to_string(field.degree()) + " - 1");
    const FieldElem h = field.primitive_element().pow(n / r);
    std::vector<RootOfUnity> out;
    out.reserve(r);
    FieldElem x = field.one();
    for (u64 j = 0; j < r; ++j) {
        out.push_back({x, r / std::gcd(j, r)});
        x *= h;
    }
    std::sort(out.begin(), out.end(),
              [](const RootOfUnity &a, const RootOfUnity &b) { return a.value.code() < b.value.code(); });
    return out;
}

} // namespace frobdist::ff
