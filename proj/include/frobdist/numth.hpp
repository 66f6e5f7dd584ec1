#pragma once

// Small-integer number theory shared by every module: trial-division
// factorization, deterministic primality, modular powers, divisors.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace frobdist::numth {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Prime factorization as {prime -> exponent}.
using Factorization = std::map<u64, unsigned>;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1U)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Inverse of a modulo prime m; a must be nonzero mod m.
inline u64 invmod_prime(u64 a, u64 m) { return powmod(a, m - 2, m); }

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Trial division; fine for n < 2^52 (all uses here stay well below).
Factorization factorize(u64 n);

void merge_into(Factorization &acc, const Factorization &other);

/// Factorization of ell^k - 1 assembled from its cyclotomic pieces, each of
/// which is at most about ell^(k/2), so trial division stays cheap.
Factorization factorize_power_minus_one(u64 ell, unsigned k);

u64 euler_phi(const Factorization &f);

std::vector<u64> divisors(const Factorization &f);

u64 ipow(u64 base, unsigned exp);

/// All primes p with lo <= p <= hi (simple sieve).
std::vector<u64> primes_in_range(u64 lo, u64 hi);

/// The first n primes, starting at 2.
std::vector<u64> first_primes(std::size_t n);

/// Least ell^m >= n.
u64 smallest_power_at_least(u64 ell, u64 n);

} // namespace frobdist::numth
