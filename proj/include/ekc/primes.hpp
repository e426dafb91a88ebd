#pragma once

#include <utility>
#include <vector>

#include "ekc/integer.hpp"

namespace ekc {

// All primes p <= n (sieve of Eratosthenes).
std::vector<i64> primes_up_to(i64 n);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(u64 n);

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 a, u64 e, u64 m);
i64 inv_mod(i64 a, i64 m);

// Kronecker symbol (D | n) for n >= 1.
int kronecker(i64 D, i64 n);

// Square root of a modulo an odd prime p (Tonelli-Shanks); a must be a square.
i64 sqrt_mod(i64 a, i64 p);

// Prime factorization by trial division, as (prime, exponent) pairs.
std::vector<std::pair<i64, int>> factorize(i64 n);

}  // namespace ekc
