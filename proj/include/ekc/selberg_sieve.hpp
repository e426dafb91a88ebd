#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ekc/ideal_arith.hpp"

namespace ekc {

using Rational = boost::multiprecision::cpp_rational;

// Weights attached to the shift t. b_(t) is the largest divisor of b coprime
// to (t); rho(b) = 2^Omega(b_(t)), f(b) = Nb / rho(b), f1 = mu * f.
i64 sieve_rho(const ImagQuadField& K, const IdealHNF& t_ideal, const IdealHNF& b);
Rational sieve_f(const ImagQuadField& K, const IdealHNF& t_ideal, const IdealHNF& b);
Rational sieve_f1(const ImagQuadField& K, const IdealHNF& t_ideal, const IdealHNF& b);

// A squarefree divisor e of P(z) with Ne <= z; bit i of mask is set when
// primes[i] divides e.
struct SieveDivisor {
    std::uint64_t mask = 0;
    i64 norm = 1;
    int omega = 0;
    i64 rho = 1;
    int mu = 1;
    double f = 1.0;
    double f1 = 1.0;
    double lambda = 1.0;
};

struct SieveContext {
    ImagQuadField K;
    FieldElement t;
    IdealHNF t_ideal;
    double z = 0.0;
    // Prime ideals dividing P(z): NP <= z and coprime to 2310.
    std::vector<PrimeIdeal> primes;
    std::vector<bool> prime_divides_t;
    // Sorted by (norm, mask); entry 0 is O_K.
    std::vector<SieveDivisor> divisors;
    double S_O = 1.0;
    // Exact values, parallel to divisors; empty when exact is false.
    bool exact = false;
    std::vector<Rational> f_exact;
    std::vector<Rational> f1_exact;
    std::vector<Rational> lambda_exact;
    Rational S_O_exact;

    IdealHNF ideal_of(std::uint64_t mask) const;
};

// Throws std::invalid_argument for t zero or a unit, or z < 13.
SieveContext build_context(const ImagQuadField& K, const FieldElement& t, double z);

// S_e(y) = sum over squarefree a | P(z) coprime to e with Na <= y of 1/f1(a).
double sieve_S(const SieveContext& ctx, std::uint64_t e_mask, double y);

// Checks sum_{c | P(z), a | c} lambda_c / f(c) = mu(a) / (f1(a) S_O(z)) for a
// squarefree a | P(z). When Na > z no c qualifies and the left side must be 0.
bool dual_identity_check(const SieveContext& ctx, std::uint64_t a_mask);

// Every alpha with 1 <= N(alpha) <= u, in order of (y, x).
std::vector<FieldElement> elements_up_to(const ImagQuadField& K, i64 u);

// Bit i set when primes[i] divides alpha (t alpha + 1).
std::uint64_t sieve_mask(const SieveContext& ctx, const FieldElement& alpha);

// sum_{b1, b2} lambda_b1 lambda_b2 #{alpha : 1 <= N(alpha) <= u, [b1, b2] | alpha(t alpha + 1)}.
// Requires u >= z^2.
double sieve_upper_bound(const SieveContext& ctx, i64 u);

// #{alpha : 1 <= N(alpha) <= u, (alpha (t alpha + 1), P(z)) = 1}.
i64 sifted_count(const SieveContext& ctx, i64 u);

// An element is prime when its ideal is a prime ideal.
bool is_prime_element(const ImagQuadField& K, const FieldElement& alpha);

// #{alpha : 1 <= N(alpha) <= u, alpha and t alpha + 1 prime}, u <= 1e6.
i64 direct_pair_count(const ImagQuadField& K, const FieldElement& t, i64 u);

// sum_{b1, b2} |lambda_b1 lambda_b2| rho([b1, b2]) / sqrt(N[b1, b2]).
double error_term_sum(const SieveContext& ctx);

// zeta_K(3/2)^16 z.
double error_term_bound(const SieveContext& ctx);

}  // namespace ekc
