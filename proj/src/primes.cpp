#include "ekc/primes.hpp"

#include <stdexcept>

namespace ekc {

std::vector<i64> primes_up_to(i64 n) {
    std::vector<i64> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (i64 i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (i64 j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i128 x, y;
    i128 g = ext_gcd(mod_floor(a, m), m, x, y);
    if (g != 1) throw std::domain_error("inv_mod: element not invertible");
    return static_cast<i64>(mod_floor(x, m));
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

int kronecker(i64 D, i64 n) {
    if (n <= 0) throw std::invalid_argument("kronecker: n must be positive");
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        i64 r = mod_floor(D, 8);
        if (r % 2 == 0) return 0;
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi symbol (D | n) for odd n.
    i64 a = static_cast<i64>(mod_floor(D, n));
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

i64 sqrt_mod(i64 a, i64 p) {
    a = static_cast<i64>(mod_floor(a, p));
    if (a == 0) return 0;
    if (p == 2) return a;
    if (pow_mod(a, (p - 1) / 2, p) != 1) throw std::domain_error("sqrt_mod: not a quadratic residue");
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (pow_mod(z, (p - 1) / 2, p) != static_cast<u64>(p - 1)) ++z;
    u64 m = s;
    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    u64 r = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 i = 0;
        u64 tt = t;
        while (tt != 1) {
            tt = mul_mod(tt, tt, p);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return static_cast<i64>(r);
}

std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace ekc
