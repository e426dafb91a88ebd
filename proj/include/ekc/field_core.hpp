#pragma once

#include <utility>
#include <vector>

#include "ekc/integer.hpp"

namespace ekc {

// K = Q(sqrt(d)) with d < 0 squarefree. The ring of integers is Z[omega],
// omega = (1 + sqrt(d))/2 when d = 1 mod 4 and omega = sqrt(d) otherwise.
// omega satisfies omega^2 - omega_trace*omega + omega_norm = 0.
struct ImagQuadField {
    i64 d = 0;
    i64 d_K = 0;
    i64 omega_trace = 0;
    i64 omega_norm = 0;
    int mu_count = 0;
    // Filled in by class_group().
    i64 h_K = 0;
    double rho_K = 0.0;

    bool finalized() const { return h_K > 0; }
};

// Element x + y*omega.
struct FieldElement {
    i128 x = 0;
    i128 y = 0;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

ImagQuadField make_field(i64 d);

// Residue of zeta_K at s = 1 from the class number formula.
double residue_from_class_number(const ImagQuadField& K, i64 h);

FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a);

FieldElement multiply(const ImagQuadField& K, const FieldElement& a, const FieldElement& b);
FieldElement conjugate(const ImagQuadField& K, const FieldElement& a);
i128 norm(const ImagQuadField& K, const FieldElement& e);
i128 trace(const ImagQuadField& K, const FieldElement& e);

std::vector<FieldElement> units(const ImagQuadField& K);

// Minkowski embedding: (Re sigma(e), Im sigma(e)) with sigma(omega) in the upper half plane.
std::pair<double, double> embed(const ImagQuadField& K, const FieldElement& e);

}  // namespace ekc
