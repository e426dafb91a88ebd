#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "ekc/field_core.hpp"

namespace ekc {

// The integral ideal Z*a + Z*(b + c*omega) in Hermite normal form:
// c | a, c | b, 0 <= b < a. Its norm is a*c.
struct IdealHNF {
    i64 a = 1;
    i64 b = 0;
    i64 c = 1;

    i64 norm() const { return a * c; }

    friend bool operator==(const IdealHNF&, const IdealHNF&) = default;
    // Ordered by (norm, a, b, c).
    friend std::strong_ordering operator<=>(const IdealHNF& l, const IdealHNF& r) {
        if (auto o = l.norm() <=> r.norm(); o != 0) return o;
        if (auto o = l.a <=> r.a; o != 0) return o;
        if (auto o = l.b <=> r.b; o != 0) return o;
        return l.c <=> r.c;
    }
};

struct PrimeIdeal {
    IdealHNF ideal;
    i64 p = 0;
    int f = 1;
    bool ramified = false;

    i64 norm() const { return ideal.norm(); }
};

enum class Splitting { split, inert, ramified };

struct SplittingRecord {
    i64 p = 0;
    Splitting kind = Splitting::split;
    std::vector<PrimeIdeal> primes;
};

// Validating constructor; throws std::invalid_argument unless (a, b, c) is the
// HNF of an ideal of O_K.
IdealHNF make_ideal(const ImagQuadField& K, i64 a, i64 b, i64 c);
bool is_ideal_hnf(const ImagQuadField& K, i64 a, i64 b, i64 c);

// HNF of the Z-module spanned by the given elements; the result must have full rank.
IdealHNF hnf_of_module(const ImagQuadField& K, const std::vector<FieldElement>& gens);

// The O_K-ideal generated by the given elements.
IdealHNF ideal_from_elements(const ImagQuadField& K, const std::vector<FieldElement>& gens);
IdealHNF principal_ideal(const ImagQuadField& K, const FieldElement& alpha);

IdealHNF multiply(const ImagQuadField& K, const IdealHNF& I, const IdealHNF& J);
IdealHNF power(const ImagQuadField& K, const IdealHNF& I, int e);
IdealHNF conjugate(const ImagQuadField& K, const IdealHNF& I);
IdealHNF ideal_sum(const ImagQuadField& K, const IdealHNF& I, const IdealHNF& J);
bool contains(const IdealHNF& I, const FieldElement& e);
// True when I divides J, i.e. J is contained in I.
bool divides(const IdealHNF& I, const IdealHNF& J);
bool coprime(const ImagQuadField& K, const IdealHNF& I, const IdealHNF& J);

SplittingRecord factor_rational_prime(const ImagQuadField& K, i64 p);

// Prime ideal factorization of a nonzero integral ideal, sorted by (norm, HNF).
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const ImagQuadField& K, const IdealHNF& I);

// All prime ideals of norm <= x, sorted by (norm, HNF).
std::vector<PrimeIdeal> prime_ideals_up_to(const ImagQuadField& K, double x);

// One enumerated ideal: ideal = ideals[parent] * primes[prime]^exponent, where
// the parent is coprime to that prime and has strictly smaller norm. The unit
// ideal is entry 0 with parent 0 and exponent 0.
struct IdealEntry {
    IdealHNF ideal;
    std::uint32_t parent = 0;
    std::uint32_t prime = 0;
    std::uint16_t exponent = 0;
};

struct IdealList {
    double bound = 0.0;
    std::vector<PrimeIdeal> primes;
    std::vector<IdealEntry> entries;
};

// Every ideal of norm <= x exactly once, sorted by (norm, HNF). Built by
// multiplicative composition of prime powers. x <= 1e7.
IdealList enumerate_ideals(const ImagQuadField& K, double x);

// Brute-force scan over HNF triples; the test oracle for enumerate_ideals.
std::vector<IdealHNF> enumerate_ideals_hnf_scan(const ImagQuadField& K, double x);

// #{a : Na <= x} = sum_{m <= x} chi_{d_K}(m) floor(x/m).
i64 count_ideals(const ImagQuadField& K, double x);

struct ArithTable {
    IdealList ideals;
    std::vector<double> mangoldt;
    std::vector<int> mobius;
    std::vector<i64> phi;
    std::vector<i64> sigma;
    std::vector<int> big_omega;
    std::vector<i64> divisor_count;
};

ArithTable arith_table(const ImagQuadField& K, double x);

// sum over prime ideals with NP <= x of log NP / NP.
double mertens_sum(const ImagQuadField& K, double x);

}  // namespace ekc
