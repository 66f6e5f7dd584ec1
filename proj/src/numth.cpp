#include "frobdist/numth.hpp"

#include <stdexcept>

namespace frobdist::numth {

bool is_prime(u64 n)
{
    if (n < 2)
        return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

Factorization factorize(u64 n)
{
    if (n == 0)
        throw std::invalid_argument("factorize: zero has no factorization");
    Factorization f;
    while ((n & 1U) == 0) {
        ++f[2];
        n >>= 1U;
    }
    for (u64 p = 3; p * p <= n; p += 2) {
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    }
    if (n > 1)
        ++f[n];
    return f;
}

void merge_into(Factorization &acc, const Factorization &other)
{
    for (const auto &[p, e] : other)
        acc[p] += e;
}

namespace {

// Integer value of the d-th cyclotomic polynomial at x, via Phi_d(x) =
// (x^d - 1) / prod_{e | d, e < d} Phi_e(x).
u64 cyclotomic_value(u64 x, unsigned d)
{
    u128 value = 1;
    for (unsigned i = 0; i < d; ++i)
        value *= x;
    value -= 1;
    for (unsigned e = 1; e < d; ++e) {
        if (d % e == 0)
            value /= cyclotomic_value(x, e);
    }
    return static_cast<u64>(value);
}

} // namespace

Factorization factorize_power_minus_one(u64 ell, unsigned k)
{
    if (k == 0)
        throw std::invalid_argument("factorize_power_minus_one: k must be positive");
    Factorization f;
    for (unsigned d = 1; d <= k; ++d) {
        if (k % d == 0)
            merge_into(f, factorize(cyclotomic_value(ell, d)));
    }
    return f;
}

u64 euler_phi(const Factorization &f)
{
    u64 phi = 1;
    for (const auto &[p, e] : f)
        phi *= ipow(p, e - 1) * (p - 1);
    return phi;
}

std::vector<u64> divisors(const Factorization &f)
{
    std::vector<u64> out{1};
    for (const auto &[p, e] : f) {
        const std::size_t n = out.size();
        u64 pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(out[i] * pk);
        }
    }
    return out;
}

u64 ipow(u64 base, unsigned exp)
{
    u64 r = 1;
    while (exp-- != 0)
        r *= base;
    return r;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi)
{
    std::vector<u64> out;
    if (hi < 2)
        return out;
    std::vector<bool> composite(hi + 1, false);
    for (u64 i = 2; i <= hi; ++i) {
        if (composite[i])
            continue;
        if (i >= lo)
            out.push_back(i);
        for (u64 j = i * i; j <= hi; j += i)
            composite[j] = true;
    }
    return out;
}

std::vector<u64> first_primes(std::size_t n)
{
    u64 bound = 64;
    for (;;) {
        auto primes = primes_in_range(2, bound);
        if (primes.size() >= n) {
            primes.resize(n);
            return primes;
        }
        bound *= 2;
    }
}

u64 smallest_power_at_least(u64 ell, u64 n)
{
    u64 v = 1;
    while (v < n)
        v *= ell;
    return v;
}

} // namespace frobdist::numth
