#include "ekc/ideal_arith.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "ekc/numeric.hpp"
#include "ekc/primes.hpp"

namespace ekc {

namespace {

// f(b) = N(b + omega) = b^2 + t b + n.
i128 norm_form_at(const ImagQuadField& K, i128 b) {
    return checked_add(checked_mul(b, checked_add(b, K.omega_trace)), K.omega_norm);
}

constexpr double kMaxEnumeration = 1e7;

}  // namespace

bool is_ideal_hnf(const ImagQuadField& K, i64 a, i64 b, i64 c) {
    if (a <= 0 || c <= 0 || b < 0 || b >= a) return false;
    if (a % c != 0 || b % c != 0) return false;
    i64 ap = a / c;
    i64 bp = b / c;
    return mod_floor(norm_form_at(K, bp), ap) == 0;
}

IdealHNF make_ideal(const ImagQuadField& K, i64 a, i64 b, i64 c) {
    if (!is_ideal_hnf(K, a, b, c)) {
        throw std::invalid_argument("make_ideal: (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                    std::to_string(c) + ") is not an ideal in HNF");
    }
    return {a, b, c};
}

IdealHNF hnf_of_module(const ImagQuadField& K, const std::vector<FieldElement>& gens) {
    // Row echelon form of the lattice spanned by (x, y) vectors:
    // pivot row (pb, pc) with pc > 0, and a = gcd of the y-free part.
    i128 a = 0;
    i128 pb = 0, pc = 0;
    for (const auto& g : gens) {
        i128 x = g.x, y = g.y;
        if (y == 0) {
            a = gcd(a, x);
        } else if (pc == 0) {
            pb = y < 0 ? -x : x;
            pc = y < 0 ? -y : y;
        } else {
            i128 s, t;
            i128 gg = ext_gcd(pc, y, s, t);
            i128 nb = checked_add(checked_mul(s, pb), checked_mul(t, x));
            i128 residual = checked_sub(checked_mul(y / gg, pb), checked_mul(pc / gg, x));
            a = gcd(a, residual);
            pb = nb;
            pc = gg;
        }
        if (a != 0 && pc != 0) pb = mod_floor(pb, a);
    }
    if (a == 0 || pc == 0) throw std::invalid_argument("hnf_of_module: generators do not span a full-rank lattice");
    pb = mod_floor(pb, a);
    IdealHNF I{to_i64(a), to_i64(pb), to_i64(pc)};
    if (!is_ideal_hnf(K, I.a, I.b, I.c)) throw std::logic_error("hnf_of_module: module is not an ideal");
    return I;
}

IdealHNF ideal_from_elements(const ImagQuadField& K, const std::vector<FieldElement>& gens) {
    std::vector<FieldElement> all;
    all.reserve(gens.size() * 2);
    const FieldElement omega{0, 1};
    for (const auto& g : gens) {
        all.push_back(g);
        all.push_back(multiply(K, g, omega));
    }
    return hnf_of_module(K, all);
}

IdealHNF principal_ideal(const ImagQuadField& K, const FieldElement& alpha) {
    if (alpha.x == 0 && alpha.y == 0) throw std::invalid_argument("principal_ideal: zero element");
    return ideal_from_elements(K, {alpha});
}

IdealHNF multiply(const ImagQuadField& K, const IdealHNF& I, const IdealHNF& J) {
    const FieldElement i1{I.a, 0}, i2{I.b, I.c};
    const FieldElement j1{J.a, 0}, j2{J.b, J.c};
    return hnf_of_module(K, {multiply(K, i1, j1), multiply(K, i1, j2), multiply(K, i2, j1), multiply(K, i2, j2)});
}

IdealHNF power(const ImagQuadField& K, const IdealHNF& I, int e) {
    if (e < 0) throw std::invalid_argument("power: negative exponent");
    IdealHNF result{1, 0, 1};
    IdealHNF base = I;
    while (e > 0) {
        if (e & 1) result = multiply(K, result, base);
        e >>= 1;
        if (e > 0) base = multiply(K, base, base);
    }
    return result;
}

IdealHNF conjugate(const ImagQuadField& K, const IdealHNF& I) {
    return hnf_of_module(K, {FieldElement{I.a, 0}, conjugate(K, FieldElement{I.b, I.c})});
}

IdealHNF ideal_sum(const ImagQuadField& K, const IdealHNF& I, const IdealHNF& J) {
    return hnf_of_module(K, {FieldElement{I.a, 0}, FieldElement{I.b, I.c}, FieldElement{J.a, 0}, FieldElement{J.b, J.c}});
}

bool contains(const IdealHNF& I, const FieldElement& e) {
    if (mod_floor(e.y, I.c) != 0) return false;
    i128 k = e.y / I.c;
    return mod_floor(checked_sub(e.x, checked_mul(k, I.b)), I.a) == 0;
}

bool divides(const IdealHNF& I, const IdealHNF& J) {
    return contains(I, FieldElement{J.a, 0}) && contains(I, FieldElement{J.b, J.c});
}

bool coprime(const ImagQuadField& K, const IdealHNF& I, const IdealHNF& J) {
    return ideal_sum(K, I, J).norm() == 1;
}

SplittingRecord factor_rational_prime(const ImagQuadField& K, i64 p) {
    if (!is_prime(static_cast<u64>(p))) throw std::invalid_argument("factor_rational_prime: not a prime: " + std::to_string(p));
    SplittingRecord rec;
    rec.p = p;
    int chi = kronecker(K.d_K, p);
    if (chi == -1) {
        rec.kind = Splitting::inert;
        rec.primes.push_back({IdealHNF{p, 0, p}, p, 2, false});
        return rec;
    }
    std::vector<i64> roots;
    if (p == 2) {
        for (i64 r = 0; r < 2; ++r) {
            if (mod_floor(norm_form_at(K, r), 2) == 0) roots.push_back(r);
        }
    } else {
        // (2r + t)^2 = d_K mod p
        i64 s = sqrt_mod(mod_floor(K.d_K, p), p);
        i64 inv2 = (p + 1) / 2;
        for (i64 sg : {s, p - s}) {
            i64 r = static_cast<i64>(mod_floor(static_cast<i128>(sg - K.omega_trace) * inv2, p));
            if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    if (chi == 0) {
        if (roots.size() != 1) throw std::logic_error("factor_rational_prime: ramified prime without double root");
        rec.kind = Splitting::ramified;
        rec.primes.push_back({make_ideal(K, p, roots[0], 1), p, 1, true});
    } else {
        if (roots.size() != 2) throw std::logic_error("factor_rational_prime: split prime without two roots");
        rec.kind = Splitting::split;
        for (i64 r : roots) rec.primes.push_back({make_ideal(K, p, r, 1), p, 1, false});
    }
    return rec;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const ImagQuadField& K, const IdealHNF& I) {
    std::vector<std::pair<PrimeIdeal, int>> out;
    for (auto [p, e] : factorize(I.norm())) {
        (void)e;
        for (const auto& P : factor_rational_prime(K, p).primes) {
            int k = 0;
            IdealHNF Pk = P.ideal;
            while (divides(Pk, I)) {
                ++k;
                Pk = multiply(K, Pk, P.ideal);
            }
            if (k > 0) out.emplace_back(P, k);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first.ideal < r.first.ideal; });
    return out;
}

std::vector<PrimeIdeal> prime_ideals_up_to(const ImagQuadField& K, double x) {
    std::vector<PrimeIdeal> out;
    if (x < 2.0) return out;
    if (x > kMaxEnumeration) throw std::invalid_argument("prime_ideals_up_to: bound exceeds 1e7");
    const i64 n = static_cast<i64>(std::floor(x));
    for (i64 p : primes_up_to(n)) {
        int chi = kronecker(K.d_K, p);
        if (chi == -1) {
            if (p <= n / p) out.push_back({IdealHNF{p, 0, p}, p, 2, false});
            continue;
        }
        for (auto& P : factor_rational_prime(K, p).primes) out.push_back(P);
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& l, const PrimeIdeal& r) { return l.ideal < r.ideal; });
    return out;
}

IdealList enumerate_ideals(const ImagQuadField& K, double x) {
    if (x > kMaxEnumeration) throw std::invalid_argument("enumerate_ideals: bound exceeds 1e7");
    IdealList list;
    list.bound = x;
    if (x < 1.0) return list;
    const i64 n = static_cast<i64>(std::floor(x));
    list.primes = prime_ideals_up_to(K, x);
    const auto& primes = list.primes;

    std::vector<IdealEntry> raw;
    raw.reserve(static_cast<std::size_t>(static_cast<double>(n) * 0.8 + 16));
    raw.push_back({IdealHNF{1, 0, 1}, 0, 0, 0});

    // Depth-first over prime indices in increasing order; each ideal is built
    // once as (ideal with smaller primes) * P^e.
    std::function<void(std::uint32_t, std::size_t)> extend = [&](std::uint32_t parent, std::size_t start) {
        const IdealHNF base = raw[parent].ideal;
        const i64 base_norm = base.norm();
        for (std::size_t i = start; i < primes.size(); ++i) {
            const i64 np = primes[i].norm();
            if (np > n / base_norm) break;
            IdealHNF cur = base;
            i64 cur_norm = base_norm;
            for (std::uint16_t e = 1; np <= n / cur_norm; ++e) {
                cur = multiply(K, cur, primes[i].ideal);
                cur_norm *= np;
                raw.push_back({cur, parent, static_cast<std::uint32_t>(i), e});
                extend(static_cast<std::uint32_t>(raw.size() - 1), i + 1);
            }
        }
    };
    extend(0, 0);

    std::vector<std::uint32_t> order(raw.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t l, std::uint32_t r) { return raw[l].ideal < raw[r].ideal; });
    std::vector<std::uint32_t> position(raw.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    list.entries.resize(raw.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
        IdealEntry e = raw[order[i]];
        e.parent = position[e.parent];
        list.entries[i] = e;
    }
    return list;
}

std::vector<IdealHNF> enumerate_ideals_hnf_scan(const ImagQuadField& K, double x) {
    std::vector<IdealHNF> out;
    if (x < 1.0) return out;
    const i64 n = static_cast<i64>(std::floor(x));
    for (i64 c = 1; c * c <= n; ++c) {
        for (i64 ap = 1; ap <= n / (c * c); ++ap) {
            for (i64 bp = 0; bp < ap; ++bp) {
                if (mod_floor(norm_form_at(K, bp), ap) == 0) out.push_back({ap * c, bp * c, c});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

i64 count_ideals(const ImagQuadField& K, double x) {
    if (x < 1.0) return 0;
    const i64 n = static_cast<i64>(std::floor(x));
    i64 total = 0;
    for (i64 m = 1; m <= n; ++m) total += kronecker(K.d_K, m) * (n / m);
    return total;
}

ArithTable arith_table(const ImagQuadField& K, double x) {
    ArithTable t;
    t.ideals = enumerate_ideals(K, x);
    const auto& entries = t.ideals.entries;
    const std::size_t m = entries.size();
    t.mangoldt.assign(m, 0.0);
    t.mobius.assign(m, 0);
    t.phi.assign(m, 0);
    t.sigma.assign(m, 0);
    t.big_omega.assign(m, 0);
    t.divisor_count.assign(m, 0);
    if (m == 0) return t;
    t.mobius[0] = 1;
    t.phi[0] = 1;
    t.sigma[0] = 1;
    t.divisor_count[0] = 1;
    for (std::size_t i = 1; i < m; ++i) {
        const IdealEntry& e = entries[i];
        const i64 np = t.ideals.primes[e.prime].norm();
        const std::size_t par = e.parent;
        i64 pk = 1;
        i64 geometric = 1;
        for (int k = 1; k <= e.exponent; ++k) {
            pk *= np;
            geometric += pk;
        }
        if (par == 0) t.mangoldt[i] = std::log(static_cast<double>(np));
        t.mobius[i] = e.exponent == 1 ? -t.mobius[par] : 0;
        t.phi[i] = t.phi[par] * (pk / np) * (np - 1);
        t.sigma[i] = t.sigma[par] * geometric;
        t.big_omega[i] = t.big_omega[par] + e.exponent;
        t.divisor_count[i] = t.divisor_count[par] * (e.exponent + 1);
    }
    return t;
}

double mertens_sum(const ImagQuadField& K, double x) {
    CompensatedSum s;
    for (const auto& P : prime_ideals_up_to(K, x)) {
        const double np = static_cast<double>(P.norm());
        s.add(std::log(np) / np);
    }
    return s.value();
}

}  // namespace ekc
