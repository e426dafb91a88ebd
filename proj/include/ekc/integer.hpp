#pragma once

#include <cstdint>
#include <string>

namespace ekc {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Overflow-checked 128-bit arithmetic. Any overflow throws std::overflow_error.
i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);
i128 checked_sub(i128 a, i128 b);

// Narrow to 64 bits, throwing std::overflow_error when out of range.
i64 to_i64(i128 v);

// Floor division and nonnegative remainder for b > 0.
i128 floor_div(i128 a, i128 b);
i128 mod_floor(i128 a, i128 b);

i128 gcd(i128 a, i128 b);

// Returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
i128 ext_gcd(i128 a, i128 b, i128& x, i128& y);

// Largest r with r*r <= n, for n >= 0.
i64 isqrt(i64 n);

bool is_squarefree(i64 n);

std::string to_string(i128 v);

}  // namespace ekc
