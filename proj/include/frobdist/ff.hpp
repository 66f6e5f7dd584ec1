#pragma once

// Exact arithmetic in F_ell and in its extensions F_{ell^k}, k <= 6.
//
// Extension fields use a polynomial basis over the first irreducible monic
// modulus found by a lexicographic scan, so element encodings are the same in
// every run. Fields are interned: ext_field_build returns the same object for
// the same (ell, k), and elements keep a non-owning pointer to it.

#include "frobdist/numth.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace frobdist::ff {

using u64 = std::uint64_t;

inline constexpr unsigned kMaxDegree = 6;

/// Raised when r-th roots of unity do not exist in any supported extension.
class InsufficientFieldDegree : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrimeField {
public:
    explicit PrimeField(u64 modulus);

    u64 modulus() const noexcept { return p_; }

    u64 reduce(u64 x) const noexcept
    {
        const u64 q = static_cast<u64>((static_cast<numth::u128>(x) * barrett_) >> 64U);
        u64 r = x - q * p_;
        while (r >= p_)
            r -= p_;
        return r;
    }

    u64 add(u64 a, u64 b) const noexcept
    {
        const u64 s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    u64 neg(u64 a) const noexcept { return a == 0 ? 0 : p_ - a; }
    u64 mul(u64 a, u64 b) const noexcept { return numth::mulmod(a, b, p_); }
    u64 pow(u64 a, u64 e) const noexcept { return numth::powmod(a, e, p_); }
    u64 inv(u64 a) const;

    /// Canonical residue of a signed integer.
    u64 from_signed(std::int64_t v) const noexcept;

    /// Quadratic character: 0, 1 or -1.
    int legendre(u64 a) const noexcept;

    bool operator==(const PrimeField &other) const noexcept { return p_ == other.p_; }

private:
    u64 p_;
    u64 barrett_;
};

/// Square roots of a in F_ell by Tonelli-Shanks, smaller root first.
/// Empty for non-residues, {0} for zero.
std::vector<u64> fp_sqrt(u64 a, const PrimeField &field);

/// Dense polynomials over F_ell, coefficients stored low degree first.
namespace poly {

using Poly = std::vector<u64>;

void trim(Poly &f);
int degree(const Poly &f);
Poly add(const Poly &a, const Poly &b, const PrimeField &F);
Poly sub(const Poly &a, const Poly &b, const PrimeField &F);
Poly mul(const Poly &a, const Poly &b, const PrimeField &F);
/// Remainder of a modulo a nonzero b.
Poly mod(const Poly &a, const Poly &b, const PrimeField &F);
/// Monic gcd (zero polynomial if both inputs are zero).
Poly gcd(Poly a, Poly b, const PrimeField &F);
Poly derivative(const Poly &f, const PrimeField &F);
Poly powmod(const Poly &base, u64 exp, const Poly &modulus, const PrimeField &F);
u64 eval(const Poly &f, u64 x, const PrimeField &F);
/// Ben-Or test: f irreducible iff gcd(x^(ell^i) - x, f) = 1 for i <= deg/2.
bool is_irreducible(const Poly &f, const PrimeField &F);
bool is_square_free(const Poly &f, const PrimeField &F);

} // namespace poly

using Coeffs = std::array<u64, kMaxDegree>;

class FieldElem;

class ExtField {
public:
    /// modulus_poly is monic of degree `degree`, low coefficient first.
    ExtField(u64 ell, unsigned degree, poly::Poly modulus_poly);

    ExtField(const ExtField &) = delete;
    ExtField &operator=(const ExtField &) = delete;

    const PrimeField &base() const noexcept { return base_; }
    u64 characteristic() const noexcept { return base_.modulus(); }
    unsigned degree() const noexcept { return k_; }
    const poly::Poly &modulus_poly() const noexcept { return modulus_; }
    /// ell^k.
    u64 size() const noexcept { return size_; }
    const numth::Factorization &unit_group_factorization() const noexcept { return unit_factors_; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_base(u64 v) const;
    FieldElem from_coeffs(std::span<const u64> c) const;
    /// Inverse of FieldElem::code().
    FieldElem from_code(u64 code) const;
    /// Smallest-code generator of the multiplicative group.
    const FieldElem &primitive_element() const;

    Coeffs add(const Coeffs &a, const Coeffs &b) const noexcept;
    Coeffs sub(const Coeffs &a, const Coeffs &b) const noexcept;
    Coeffs neg(const Coeffs &a) const noexcept;
    Coeffs mul(const Coeffs &a, const Coeffs &b) const noexcept;

    /// N(x) = x^((ell^k - 1)/(ell - 1)) as a base-field residue.
    u64 norm(const FieldElem &x) const;

    ~ExtField();

private:
    PrimeField base_;
    unsigned k_;
    poly::Poly modulus_;
    u64 size_;
    numth::Factorization unit_factors_;
    std::unique_ptr<FieldElem> generator_;
};

class FieldElem {
public:
    FieldElem(const ExtField *field, const Coeffs &c) noexcept : field_(field), c_(c) {}

    const ExtField &field() const noexcept { return *field_; }
    const Coeffs &coeffs() const noexcept { return c_; }

    bool is_zero() const noexcept;
    bool is_one() const noexcept;
    bool in_base_field() const noexcept;
    /// Constant coefficient; meaningful when in_base_field().
    u64 base_value() const noexcept { return c_[0]; }
    /// sum c_i ell^i, a bijection onto [0, ell^k).
    u64 code() const noexcept;

    FieldElem operator+(const FieldElem &o) const noexcept { return {field_, field_->add(c_, o.c_)}; }
    FieldElem operator-(const FieldElem &o) const noexcept { return {field_, field_->sub(c_, o.c_)}; }
    FieldElem operator-() const noexcept { return {field_, field_->neg(c_)}; }
    FieldElem operator*(const FieldElem &o) const noexcept { return {field_, field_->mul(c_, o.c_)}; }
    FieldElem operator/(const FieldElem &o) const { return *this * o.inverse(); }
    FieldElem &operator+=(const FieldElem &o) noexcept { return *this = *this + o; }
    FieldElem &operator-=(const FieldElem &o) noexcept { return *this = *this - o; }
    FieldElem &operator*=(const FieldElem &o) noexcept { return *this = *this * o; }

    FieldElem pow(u64 e) const noexcept;
    FieldElem inverse() const;

    bool operator==(const FieldElem &o) const noexcept { return field_ == o.field_ && c_ == o.c_; }
    bool operator!=(const FieldElem &o) const noexcept { return !(*this == o); }

private:
    const ExtField *field_;
    Coeffs c_;
};

/// Interned field of size ell^k; rejects k outside 1..kMaxDegree.
std::shared_ptr<const ExtField> ext_field_build(u64 ell, unsigned k);

/// Least n >= 1 with x^n = 1, by stripping prime factors off ell^k - 1.
u64 mult_order(const FieldElem &x);

struct RootOfUnity {
    FieldElem value;
    u64 order;
};

/// Smallest k <= max_degree with r | ell^k - 1.
std::optional<unsigned> degree_containing_roots(u64 r, u64 ell, unsigned max_degree = kMaxDegree);

/// All x in the field with x^r = 1, each tagged with its exact order, sorted
/// by code. Throws InsufficientFieldDegree when r does not divide ell^k - 1.
std::vector<RootOfUnity> roots_of_unity(u64 r, const ExtField &field);

} // namespace frobdist::ff
