#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ekc/class_groups.hpp"
#include "ekc/lfunctions.hpp"

namespace ekc {

struct CheckReport {
    std::string name;
    std::string inputs;
    double lhs = 0.0;
    double bound = 0.0;
    // lhs <= bound with a relative slack of 1e-9.
    bool pass = false;
    // Observed error over its natural scale (sqrt(x), sqrt(x) log^2 x, ...).
    double empirical_ratio = 0.0;
    bool grh_conditional = false;
    // The statement's hypothesis is out of reach; the row is informational only.
    bool hypothesis_unmet = false;
    std::string note;
};

CheckReport make_report(std::string name, std::string inputs, double lhs, double bound);

// Gamma_chi(s) = [pi^{-(s+1)/2} Gamma((s+1)/2)]^a [pi^{-s/2} Gamma(s/2)]^{n-a}.
struct GammaFactorParams {
    int n_K = 2;
    int a_chi = 0;
};

struct LatticeCountReport {
    IdealHNF a;
    IdealHNF q;
    FieldElement beta;
    double t2 = 0.0;
    i64 exact = 0;
    double main_term = 0.0;
    // max over b in the inverse class of 1/sqrt(Nb).
    double class_norm_factor = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Ray class index of every enumerated ideal, or -1 when the ideal meets the modulus.
std::vector<i64> ray_class_indices(const RayClassGroup& H, const IdealList& list);

// psi(x, q, c) for every class c of H, plus the q-power terms separately.
struct PsiByClass {
    std::vector<double> by_class;
    double modulus_part = 0.0;
};
PsiByClass psi_by_class(const RayClassPrimeData& data, double x);

// psi(x) = sum_{Na <= x} Lambda(a).
double psi_ideals(const ImagQuadField& K, double x);

// Class-number formula counts.
CheckReport check_ideal_count(const ImagQuadField& K, double x);
CheckReport check_ray_count(const ImagQuadField& K, const RayClassGroup& H, i64 class_index, double x);
LatticeCountReport check_lattice_count(const ImagQuadField& K, const FormClassGroup& G, const IdealHNF& a,
                                       const IdealHNF& q, const FieldElement& beta, double t);

// GRH-conditional prime counts.
CheckReport check_psi(const ImagQuadField& K, double x);
// log |d_{K(q)}| from the conductor-discriminant formula.
double log_ray_class_field_discriminant(const ImagQuadField& K, const RayClassGroup& H);
double disc_bound(const ImagQuadField& K, i64 modulus_norm);
CheckReport check_disc(const ImagQuadField& K, const RayClassGroup& H);
CheckReport check_chebotarev(const ImagQuadField& K, const FormClassGroup& G, const RayClassGroup& H, double x);

// Principal primes with Q/2 < NP <= Q, found by principality tests.
i64 principal_prime_pi_star(const ImagQuadField& K, double Q);
// The same count through class-group discrete logs: pi(Q, sigma_0) - pi(Q/2, sigma_0).
i64 principal_prime_pi_star_by_class(const ImagQuadField& K, const FormClassGroup& G, double Q);
i64 principal_prime_count(const ImagQuadField& K, const FormClassGroup& G, double x);
CheckReport check_principal_prime_count(const ImagQuadField& K, const FormClassGroup& G, double x);

CheckReport check_mertens(const ImagQuadField& K, double x);
CheckReport check_qsum(const ImagQuadField& K, double Q);
// h_K pi*(Q) >= 2Q/(25 log Q), reported with lhs = 2Q/(25 log Q) and bound = h_K pi*(Q).
CheckReport check_comparison(const ImagQuadField& K, double Q);

// Formula evaluators.
std::pair<double, double> eval_ihara_bound(int n_K, double D_K);
double eval_zero_count_bound(int n_K, double abs_d_K, double conductor_norm, double t);
double eval_zero_count_bound_general(int n_K, double abs_d_K, double conductor_norm, double t);
double eval_regamma_bound(const GammaFactorParams& params, std::complex<double> s);
// Re Gamma_chi'/Gamma_chi(s).
double regamma_value(const GammaFactorParams& params, std::complex<double> s);

// Inequality suite.
CheckReport check_residue_bounds(const ImagQuadField& K);
CheckReport check_size(const RayClassGroup& H);
CheckReport check_lem10(const ImagQuadField& K, const ArithTable& table, double x);
CheckReport check_lem11(const ImagQuadField& K, const ArithTable& table, double x);
CheckReport check_lem12(const ImagQuadField& K, const ArithTable& table, double x);
CheckReport check_halllem(double sigma);
CheckReport check_ahnlem(std::complex<double> s);
CheckReport check_regamma(const GammaFactorParams& params, std::complex<double> s);
CheckReport check_lprime(const RayClassCharacter& chi, const RayClassPrimeData& data, double sigma);
// psi(x) = sum_c psi(x, q, c) + q-power terms.
CheckReport check_psi_additivity(const RayClassPrimeData& data, double x);

}  // namespace ekc
