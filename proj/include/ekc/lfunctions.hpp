#pragma once

#include <complex>
#include <vector>

#include "ekc/class_groups.hpp"

namespace ekc {

// Prime ideals up to a bound tagged with their ray classes (index into H, or
// -1 for primes dividing the modulus).
class RayClassPrimeData {
public:
    RayClassPrimeData(const ImagQuadField& K, const RayClassGroup& H, const std::vector<PrimeIdeal>& primes, double bound);
    RayClassPrimeData(const ImagQuadField& K, const RayClassGroup& H, double bound);

    const ImagQuadField& field() const { return field_; }
    const RayClassGroup& group() const { return group_; }
    double bound() const { return bound_; }

    struct Entry {
        i64 norm;
        double log_norm;
        i64 cls;
    };
    const std::vector<Entry>& primes() const { return primes_; }

    // W_c = sum over P^k in class c, NP^k <= x, P coprime to q, of
    // (log NP / NP^k) (x - NP^k)/(x - 1).
    std::vector<double> phi_weights(double x) const;
    // T_c(s) = sum over P^k in class c, NP^k <= bound, P coprime to q, of log NP / NP^{ks}.
    std::vector<double> series_weights(double s) const;

private:
    ImagQuadField field_;
    RayClassGroup group_;
    double bound_;
    std::vector<Entry> primes_;
};

// Phi_chi(x) = (1/(x-1)) int_1^x sum_{Na <= t} Lambda(a)/Na chi([a]) dt. The
// inner sum is a step function of t, so the integral equals
// sum_{Na <= x} Lambda(a)/Na chi([a]) (x - Na)/(x - 1).
std::complex<double> phi_chi(const RayClassCharacter& chi, const RayClassPrimeData& data, double x);
std::vector<std::complex<double>> phi_all(const std::vector<RayClassCharacter>& chars, const RayClassPrimeData& data, double x);

// sum_c chi(c) w_c
std::complex<double> character_sum(const RayClassCharacter& chi, const RayClassGroup& H, const std::vector<double>& w);

// Phi_{chi*}(x) - Phi_chi(x) for chi induced from the class group: the q^k terms.
std::complex<double> imprimitive_correction(const RayClassCharacter& chi, const RayClassPrimeData& data, double x);

struct LogDerivEstimate {
    std::complex<double> value;
    double budget = 0.0;
};

// L'/L(1, chi*) ~ -Phi_{chi*}(x), chi* the primitive character inducing chi,
// with the GRH budget 2010 log(5 |d_K| Nq)/sqrt(x).
LogDerivEstimate log_deriv_L1(const RayClassCharacter& chi, const RayClassPrimeData& data, double x);

// Independent estimator: F(s) = sum Lambda chi*(a)/Na^s truncated at the data
// bound, L'/L(1) ~ -(2 F(1 + d_lo) - F(1 + d_hi)) with d_lo = d_hi / 2.
std::complex<double> log_deriv_L1_series(const RayClassCharacter& chi, const RayClassPrimeData& data,
                                         double delta_hi = 0.1, double delta_lo = 0.05);

// sum over a of Lambda chi*(a) / Na^s for real s, truncated at the data bound.
std::complex<double> dirichlet_log_deriv_series(const RayClassCharacter& chi, const RayClassPrimeData& data, double s);

double grh_character_budget(const ImagQuadField& K, i64 modulus_norm, double x);

struct GammaEstimate {
    i64 d_K = 0;
    i64 modulus_norm = 1;  // 1 for the base field
    double x = 0.0;
    double gamma = 0.0;
    double grh_error_budget = 0.0;
    double imaginary_residue = 0.0;  // |Im| of the character sum before taking the real part
    int characters = 0;
};

// Rational-prime analog sum_{p^k <= x} (log p / p^k) chi(p^k) (x - p^k)/(x - 1)
// for the Kronecker character chi = (D | .); D = 1 gives the trivial character.
double phi_rational(i64 D, double x);

// gamma ~ (x log x - x + 1)/(x - 1) - Phi_0(x).
double euler_gamma_from_primes(double x);

// gamma_K = gamma + L'/L(1, chi_{d_K}) ~ gamma - phi_rational(d_K, x).
GammaEstimate gamma_base(const ImagQuadField& K, double x);

// Second route: (x log x - x + 1)/(x - 1) - Phi_{K, chi_0}(x) over prime ideals.
double gamma_base_ideal_route(const ImagQuadField& K, double x);

// gamma_{K(q)} = gamma_K + sum_{chi != chi_0} L'/L(1, chi*).
GammaEstimate gamma_ray_class_field(const ImagQuadField& K, const FormClassGroup& G, const PrimeIdeal& q, double x);
GammaEstimate gamma_ray_class_field(const RayClassPrimeData& data, const GammaEstimate& base, double x);

// zeta_K(s) for real s >= 1.3, relative accuracy about 1e-6.
double dedekind_zeta(const ImagQuadField& K, double s);

// sum_{n <= X} Lambda(n) n^{-s}
double riemann_log_deriv_series(double s, double X);

}  // namespace ekc
