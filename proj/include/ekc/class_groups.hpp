#pragma once

#include <compare>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ekc/field_core.hpp"
#include "ekc/ideal_arith.hpp"

namespace ekc {

// Positive definite form a x^2 + b xy + c y^2.
struct BinaryForm {
    i64 a = 1;
    i64 b = 0;
    i64 c = 1;

    i64 discriminant() const { return b * b - 4 * a * c; }
    friend auto operator<=>(const BinaryForm&, const BinaryForm&) = default;
};

// reduced(X) = original(M X) with M in SL2(Z).
struct FormReduction {
    BinaryForm form;
    i64 m[2][2] = {{1, 0}, {0, 1}};
};

bool is_reduced(const BinaryForm& f);
FormReduction reduce_form(const BinaryForm& f);
// Gauss composition (Cohen, Algorithm 5.4.7), reduced result.
BinaryForm compose_forms(const BinaryForm& f, const BinaryForm& g);

// N(u a' + v (b' + omega)) / a' for the primitive part (a', b' + omega) of I.
BinaryForm form_of_ideal(const ImagQuadField& K, const IdealHNF& I);
// (A, (B - t)/2 mod A, 1)
IdealHNF ideal_of_form(const ImagQuadField& K, const BinaryForm& f);

class FormClassGroup {
public:
    i64 discriminant = 0;
    // Reduced primitive forms sorted by (a, b, c); index 0 is the principal form.
    std::vector<BinaryForm> forms;
    std::vector<std::vector<int>> table;
    std::vector<int> inverse;

    i64 class_number() const { return static_cast<i64>(forms.size()); }
    int index_of(const BinaryForm& reduced) const;
    int class_of(const ImagQuadField& K, const IdealHNF& I) const;
    int multiply(int i, int j) const { return table[i][j]; }
    int power(int i, i64 e) const;
    int order(int i) const;
};

// Builds the class group and stores h_K and rho_K in K.
FormClassGroup class_group(ImagQuadField& K);

std::optional<FieldElement> is_principal(const ImagQuadField& K, const IdealHNF& I);

// True iff h_K is not a power of 2.
bool nonabelian_certificate(const FormClassGroup& G);

// (O_K/q)^x for a prime q, cyclic of order Nq - 1, with a full log table.
class ResidueGroup {
public:
    ResidueGroup(const ImagQuadField& K, const PrimeIdeal& q);

    i64 order() const { return nq_ - 1; }
    i64 modulus_norm() const { return nq_; }
    // Residue code in [0, Nq); 0 iff e lies in q.
    i64 reduce(const FieldElement& e) const;
    i64 log(const FieldElement& e) const;
    i64 log_code(i64 code) const;
    i64 multiply_codes(i64 u, i64 v) const;
    FieldElement generator() const { return lift(gen_); }
    FieldElement lift(i64 code) const;

private:
    i64 t_, n_, p_, nq_, root_;
    int f_;
    i64 gen_ = 1;
    std::vector<std::int32_t> log_;
};

// e^{2 pi i k / n}, normalized with 0 <= k < n and gcd(k, n) = 1 (identity is (0, 1)).
struct RootOfUnity {
    i64 k = 0;
    i64 n = 1;

    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

RootOfUnity make_root(i64 k, i64 n);
RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);
RootOfUnity conj(const RootOfUnity& a);
// Conjugate roots map to bitwise conjugate complex numbers.
std::complex<double> to_complex(const RootOfUnity& r);

// Ray class group H_q(K) for a prime q, or the class group for the modulus O_K.
// Since K has no real places the narrow and ordinary ray class groups agree.
class RayClassGroup {
public:
    const std::optional<PrimeIdeal>& modulus() const { return modulus_; }
    i64 modulus_norm() const { return modulus_ ? modulus_->norm() : 1; }
    // Nontrivial invariants n_1 | n_2 | ... of the Smith normal form.
    const std::vector<i64>& invariants() const { return invariants_; }
    i64 order() const;
    i64 class_number() const { return classes_->class_number(); }
    i64 unit_image_order() const { return unit_image_order_; }
    // Class-group generator primes used by the presentation.
    const std::vector<PrimeIdeal>& generators() const { return gens_; }

    // Discrete log of an ideal coprime to the modulus; throws otherwise.
    std::vector<i64> log(const IdealHNF& I) const;
    // Image of the ideal-class part alone: the element (class exponents, 0).
    // Defined for every ideal; characters trivial on the kernel of H_q -> Cl_K
    // evaluate through it to the inducing class-group character.
    std::vector<i64> log_class_part(const IdealHNF& I) const;
    // Image of a generator of (O_K/q)^x: generates the kernel of H_q -> Cl_K.
    std::vector<i64> kernel_generator() const;

    std::vector<i64> add(const std::vector<i64>& u, const std::vector<i64>& v) const;
    std::vector<i64> scale(const std::vector<i64>& u, i64 k) const;
    bool is_identity(const std::vector<i64>& u) const;
    i64 index(const std::vector<i64>& u) const;
    std::vector<i64> element(i64 index) const;

    friend RayClassGroup build_ray_class_group(const ImagQuadField&, const FormClassGroup&,
                                               const std::optional<PrimeIdeal>&, bool);

private:
    struct Pair {
        int cls;
        i64 ell;
    };
    Pair pair_of(const IdealHNF& J) const;
    Pair pair_multiply(const Pair& x, const Pair& y) const;
    std::vector<i64> reduce_vector(const std::vector<i64>& v) const;

    ImagQuadField field_;
    std::shared_ptr<const FormClassGroup> classes_;
    std::optional<PrimeIdeal> modulus_;
    std::shared_ptr<const ResidueGroup> residue_;
    std::vector<PrimeIdeal> gens_;
    std::vector<i64> gen_orders_;
    std::vector<std::vector<i64>> class_exponents_;
    std::vector<IdealHNF> reps_;
    std::vector<IdealHNF> rep_conj_;
    std::vector<i64> rep_norm_log_;
    std::vector<i64> class_ell_;
    mutable std::map<std::pair<int, int>, i64> cocycle_;
    // Columns of the Smith transform with nontrivial invariants.
    std::vector<std::vector<i64>> transform_;
    std::vector<i64> invariants_;
    i64 unit_image_order_ = 1;
};

RayClassGroup ray_class_group(const ImagQuadField& K, const FormClassGroup& G);
// Uses the cyclic shortcut (O_K/q)^x / image(mu_K) when h_K = 1.
RayClassGroup ray_class_group(const ImagQuadField& K, const FormClassGroup& G, const PrimeIdeal& q);
RayClassGroup ray_class_group_generic(const ImagQuadField& K, const FormClassGroup& G, const PrimeIdeal& q);

class RayClassCharacter {
public:
    RayClassCharacter(std::vector<i64> exponents, std::vector<i64> invariants, bool primitive);

    RootOfUnity operator()(const std::vector<i64>& element) const;
    RayClassCharacter conjugate() const;
    bool is_principal() const;
    // Conductor equals the modulus. For a prime modulus, false means the
    // character is induced from the class group.
    bool primitive() const { return primitive_; }
    const std::vector<i64>& exponents() const { return exponents_; }
    bool is_real() const;

private:
    std::vector<i64> exponents_;
    std::vector<i64> invariants_;
    i64 exponent_lcm_ = 1;
    bool primitive_ = true;
};

// All |H| characters; the first is the principal character.
std::vector<RayClassCharacter> characters(const RayClassGroup& H);

}  // namespace ekc
