#include "ekc/integer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ekc {

namespace {

[[noreturn]] void overflow(const char* op) {
    throw std::overflow_error(std::string("128-bit overflow in ") + op);
}

}  // namespace

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) overflow("multiplication");
    return r;
}

i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) overflow("addition");
    return r;
}

i128 checked_sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) overflow("subtraction");
    return r;
}

i64 to_i64(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) overflow("narrowing to 64 bits");
    return static_cast<i64>(v);
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i128 mod_floor(i128 a, i128 b) {
    i128 r = a % b;
    if (r < 0) r += b;
    return r;
}

i128 gcd(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 ext_gcd(i128 a, i128 b, i128& x, i128& y) {
    i128 old_r = a, r = b;
    i128 old_s = 1, s = 0;
    i128 old_t = 0, t = 1;
    while (r != 0) {
        i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

i64 isqrt(i64 n) {
    if (n < 0) throw std::invalid_argument("isqrt of negative number");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<i128>(r) * r > n) --r;
    while (static_cast<i128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_squarefree(i64 n) {
    if (n < 0) n = -n;
    if (n == 0) return false;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    std::string s;
    // Work with negative values so INT128_MIN is representable.
    if (!neg) v = -v;
    while (v != 0) {
        int digit = static_cast<int>(-(v % 10));
        s.push_back(static_cast<char>('0' + digit));
        v /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace ekc
