#include "ekc/selberg_sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "ekc/class_groups.hpp"
#include "ekc/lfunctions.hpp"
#include "ekc/numeric.hpp"
#include "ekc/primes.hpp"

namespace ekc {

namespace {

constexpr std::size_t kMaxSievePrimes = 64;
constexpr std::size_t kMaxExactPrimes = 20;
constexpr i64 kMaxPairCount = 1000000;

bool divides_2310(i64 p) { return p == 2 || p == 3 || p == 5 || p == 7 || p == 11; }

i64 ipow(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r = to_i64(checked_mul(r, b));
    return r;
}

Rational f_prime_power(i64 NP, int k, bool divides_t) {
    i64 rho = divides_t ? 1 : (i64{1} << k);
    return Rational(ipow(NP, k)) / rho;
}

i64 floor_z(double z) { return static_cast<i64>(std::floor(z + 1e-9)); }

}  // namespace

i64 sieve_rho(const ImagQuadField& K, const IdealHNF& t_ideal, const IdealHNF& b) {
    int omega = 0;
    for (const auto& [P, k] : factor_ideal(K, b))
        if (!divides(P.ideal, t_ideal)) omega += k;
    return i64{1} << omega;
}

Rational sieve_f(const ImagQuadField& K, const IdealHNF& t_ideal, const IdealHNF& b) {
    return Rational(b.norm()) / sieve_rho(K, t_ideal, b);
}

Rational sieve_f1(const ImagQuadField& K, const IdealHNF& t_ideal, const IdealHNF& b) {
    Rational r = 1;
    for (const auto& [P, k] : factor_ideal(K, b)) {
        bool dt = divides(P.ideal, t_ideal);
        r *= f_prime_power(P.norm(), k, dt) - f_prime_power(P.norm(), k - 1, dt);
    }
    return r;
}

IdealHNF SieveContext::ideal_of(std::uint64_t mask) const {
    IdealHNF r;
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (mask >> i & 1) r = multiply(K, r, primes[i].ideal);
    return r;
}

SieveContext build_context(const ImagQuadField& K, const FieldElement& t, double z) {
    i128 Nt = norm(K, t);
    if (Nt == 0) throw std::invalid_argument("build_context: t is zero");
    if (Nt == 1) throw std::invalid_argument("build_context: t is a unit");
    if (!(z >= 13.0)) throw std::invalid_argument("build_context: z must be >= 13");

    SieveContext ctx;
    ctx.K = K;
    ctx.t = t;
    ctx.t_ideal = principal_ideal(K, t);
    ctx.z = z;
    for (const auto& P : prime_ideals_up_to(K, z))
        if (!divides_2310(P.p)) ctx.primes.push_back(P);
    if (ctx.primes.size() > kMaxSievePrimes)
        throw std::invalid_argument("build_context: more than 64 sieve primes; lower z");
    for (const auto& P : ctx.primes) ctx.prime_divides_t.push_back(divides(P.ideal, ctx.t_ideal));

    const i64 zf = floor_z(z);
    const std::size_t np = ctx.primes.size();
    std::function<void(std::size_t, SieveDivisor)> dfs = [&](std::size_t from, SieveDivisor d) {
        ctx.divisors.push_back(d);
        for (std::size_t i = from; i < np; ++i) {
            i64 NP = ctx.primes[i].norm();
            if (d.norm > zf / NP) break;
            SieveDivisor e = d;
            e.mask |= std::uint64_t{1} << i;
            e.norm *= NP;
            e.omega += 1;
            e.mu = -e.mu;
            if (!ctx.prime_divides_t[i]) e.rho *= 2;
            dfs(i + 1, e);
        }
    };
    dfs(0, SieveDivisor{});
    std::sort(ctx.divisors.begin(), ctx.divisors.end(), [](const SieveDivisor& l, const SieveDivisor& r) {
        return l.norm != r.norm ? l.norm < r.norm : l.mask < r.mask;
    });

    const std::size_t D = ctx.divisors.size();
    std::vector<double> inv_f1(D);
    for (std::size_t k = 0; k < D; ++k) {
        auto& d = ctx.divisors[k];
        double f = 1.0, f1 = 1.0;
        for (std::size_t i = 0; i < np; ++i) {
            if (!(d.mask >> i & 1)) continue;
            double fP = static_cast<double>(ctx.primes[i].norm()) / (ctx.prime_divides_t[i] ? 1.0 : 2.0);
            f *= fP;
            f1 *= fP - 1.0;
        }
        d.f = f;
        d.f1 = f1;
        inv_f1[k] = 1.0 / f1;
    }

    ctx.exact = np <= kMaxExactPrimes;
    if (ctx.exact) {
        ctx.f_exact.resize(D);
        ctx.f1_exact.resize(D);
        std::vector<Rational> inv_f1_exact(D);
        for (std::size_t k = 0; k < D; ++k) {
            Rational f = 1, f1 = 1;
            for (std::size_t i = 0; i < np; ++i) {
                if (!(ctx.divisors[k].mask >> i & 1)) continue;
                Rational fP = f_prime_power(ctx.primes[i].norm(), 1, ctx.prime_divides_t[i]);
                f *= fP;
                f1 *= fP - 1;
            }
            ctx.f_exact[k] = f;
            ctx.f1_exact[k] = f1;
            inv_f1_exact[k] = 1 / f1;
        }
        auto S_exact = [&](std::uint64_t e, i64 ymax) {
            Rational s = 0;
            for (std::size_t k = 0; k < D && ctx.divisors[k].norm <= ymax; ++k)
                if ((ctx.divisors[k].mask & e) == 0) s += inv_f1_exact[k];
            return s;
        };
        ctx.S_O_exact = S_exact(0, zf);
        ctx.lambda_exact.resize(D);
        for (std::size_t k = 0; k < D; ++k) {
            const auto& e = ctx.divisors[k];
            Rational lam = ctx.f_exact[k] * S_exact(e.mask, zf / e.norm) / (ctx.f1_exact[k] * ctx.S_O_exact);
            ctx.lambda_exact[k] = e.mu > 0 ? lam : Rational(-lam);
            ctx.divisors[k].lambda = static_cast<double>(ctx.lambda_exact[k]);
        }
        ctx.S_O = static_cast<double>(ctx.S_O_exact);
    } else {
        ctx.S_O = sieve_S(ctx, 0, z);
        for (auto& e : ctx.divisors)
            e.lambda = e.mu * e.f * sieve_S(ctx, e.mask, static_cast<double>(zf / e.norm)) / (e.f1 * ctx.S_O);
    }
    return ctx;
}

double sieve_S(const SieveContext& ctx, std::uint64_t e_mask, double y) {
    i64 ymax = floor_z(y);
    CompensatedSum s;
    for (const auto& d : ctx.divisors) {
        if (d.norm > ymax) break;
        if ((d.mask & e_mask) == 0) s.add(1.0 / d.f1);
    }
    return s.value();
}

bool dual_identity_check(const SieveContext& ctx, std::uint64_t a_mask) {
    const std::size_t np = ctx.primes.size();
    if (np < 64 && (a_mask >> np) != 0) throw std::invalid_argument("dual_identity_check: a does not divide P(z)");
    const std::size_t D = ctx.divisors.size();
    std::size_t a_index = D;
    for (std::size_t k = 0; k < D; ++k)
        if (ctx.divisors[k].mask == a_mask) a_index = k;

    if (ctx.exact) {
        Rational lhs = 0;
        for (std::size_t k = 0; k < D; ++k)
            if ((ctx.divisors[k].mask & a_mask) == a_mask) lhs += ctx.lambda_exact[k] / ctx.f_exact[k];
        if (a_index == D) return lhs == 0;
        Rational rhs = 1 / (ctx.f1_exact[a_index] * ctx.S_O_exact);
        if (ctx.divisors[a_index].mu < 0) rhs = -rhs;
        return lhs == rhs;
    }
    CompensatedSum lhs;
    for (const auto& c : ctx.divisors)
        if ((c.mask & a_mask) == a_mask) lhs.add(c.lambda / c.f);
    if (a_index == D) return lhs.value() == 0.0;
    const auto& a = ctx.divisors[a_index];
    double rhs = a.mu / (a.f1 * ctx.S_O);
    return std::abs(lhs.value() - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs));
}

std::vector<FieldElement> elements_up_to(const ImagQuadField& K, i64 u) {
    std::vector<FieldElement> out;
    if (u < 1) return out;
    const i64 T = K.omega_trace;
    const i64 D = -K.d_K;
    // N(x + y omega) = ((2x + T y)^2 + D y^2) / 4.
    i64 ymax = isqrt(4 * u / D);
    for (i64 y = -ymax; y <= ymax; ++y) {
        i64 rem = 4 * u - D * y * y;
        if (rem < 0) continue;
        i64 s = isqrt(rem);
        // |2x + T y| <= s
        i64 xlo = floor_div(-s - T * y + 1, 2);
        i64 xhi = floor_div(s - T * y, 2);
        for (i64 x = xlo - 1; x <= xhi + 1; ++x) {
            FieldElement a{x, y};
            i128 N = norm(K, a);
            if (N >= 1 && N <= u) out.push_back(a);
        }
    }
    return out;
}

std::uint64_t sieve_mask(const SieveContext& ctx, const FieldElement& alpha) {
    FieldElement beta = multiply(ctx.K, ctx.t, alpha) + FieldElement{1, 0};
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < ctx.primes.size(); ++i)
        if (contains(ctx.primes[i].ideal, alpha) || contains(ctx.primes[i].ideal, beta)) m |= std::uint64_t{1} << i;
    return m;
}

double sieve_upper_bound(const SieveContext& ctx, i64 u) {
    if (static_cast<double>(u) < ctx.z * ctx.z) throw std::invalid_argument("sieve_upper_bound: u must be >= z^2");
    std::map<std::uint64_t, i64> hist;
    for (const auto& a : elements_up_to(ctx.K, u)) ++hist[sieve_mask(ctx, a)];

    std::unordered_map<std::uint64_t, i64> count_cache;
    auto count = [&](std::uint64_t L) {
        auto it = count_cache.find(L);
        if (it != count_cache.end()) return it->second;
        i64 c = 0;
        for (const auto& [m, n] : hist)
            if ((m & L) == L) c += n;
        count_cache.emplace(L, c);
        return c;
    };

    const std::size_t D = ctx.divisors.size();
    if (ctx.exact) {
        Rational total = 0;
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) {
                i64 c = count(ctx.divisors[i].mask | ctx.divisors[j].mask);
                if (c != 0) total += ctx.lambda_exact[i] * ctx.lambda_exact[j] * c;
            }
        return static_cast<double>(total);
    }
    CompensatedSum total;
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j)
            total.add(ctx.divisors[i].lambda * ctx.divisors[j].lambda *
                      static_cast<double>(count(ctx.divisors[i].mask | ctx.divisors[j].mask)));
    return total.value();
}

i64 sifted_count(const SieveContext& ctx, i64 u) {
    i64 c = 0;
    for (const auto& a : elements_up_to(ctx.K, u))
        if (sieve_mask(ctx, a) == 0) ++c;
    return c;
}

bool is_prime_element(const ImagQuadField& K, const FieldElement& alpha) {
    i128 N = norm(K, alpha);
    if (N < 2 || N > static_cast<i128>(std::numeric_limits<i64>::max())) return false;
    i64 n = static_cast<i64>(N);
    if (is_prime(static_cast<u64>(n))) return true;
    i64 p = isqrt(n);
    return p * p == n && is_prime(static_cast<u64>(p)) && kronecker(K.d_K, p) == -1;
}

i64 direct_pair_count(const ImagQuadField& K, const FieldElement& t, i64 u) {
    if (u > kMaxPairCount) throw std::invalid_argument("direct_pair_count: u must be <= 1e6");
    i64 c = 0;
    for (const auto& a : elements_up_to(K, u)) {
        if (!is_prime_element(K, a)) continue;
        if (is_prime_element(K, multiply(K, t, a) + FieldElement{1, 0})) ++c;
    }
    return c;
}

double error_term_sum(const SieveContext& ctx) {
    const std::size_t np = ctx.primes.size();
    std::uint64_t t_mask = 0;
    std::vector<double> log_norm(np);
    for (std::size_t i = 0; i < np; ++i) {
        if (ctx.prime_divides_t[i]) t_mask |= std::uint64_t{1} << i;
        log_norm[i] = std::log(static_cast<double>(ctx.primes[i].norm()));
    }
    CompensatedSum s;
    for (const auto& b1 : ctx.divisors)
        for (const auto& b2 : ctx.divisors) {
            std::uint64_t L = b1.mask | b2.mask;
            double logN = 0.0;
            for (std::size_t i = 0; i < np; ++i)
                if (L >> i & 1) logN += log_norm[i];
            double rho = std::ldexp(1.0, std::popcount(L & ~t_mask));
            s.add(std::abs(b1.lambda * b2.lambda) * rho * std::exp(-0.5 * logN));
        }
    return s.value();
}

double error_term_bound(const SieveContext& ctx) {
    ImagQuadField K = ctx.K;
    if (!K.finalized()) class_group(K);
    return std::pow(dedekind_zeta(K, 1.5), 16) * ctx.z;
}

}  // namespace ekc
