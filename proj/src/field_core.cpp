#include "ekc/field_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ekc/numeric.hpp"

namespace ekc {

ImagQuadField make_field(i64 d) {
    if (d >= 0) throw std::invalid_argument("make_field: d must be negative, got " + std::to_string(d));
    if (d < -1000000000000LL) throw std::invalid_argument("make_field: |d| too large");
    if (!is_squarefree(d)) throw std::invalid_argument("make_field: d must be squarefree, got " + std::to_string(d));
    ImagQuadField K;
    K.d = d;
    if (mod_floor(d, 4) == 1) {
        K.d_K = d;
        K.omega_trace = 1;
        K.omega_norm = (1 - d) / 4;
    } else {
        K.d_K = 4 * d;
        K.omega_trace = 0;
        K.omega_norm = -d;
    }
    K.mu_count = K.d_K == -3 ? 6 : (K.d_K == -4 ? 4 : 2);
    return K;
}

double residue_from_class_number(const ImagQuadField& K, i64 h) {
    return 2.0 * kPi * static_cast<double>(h) /
           (static_cast<double>(K.mu_count) * std::sqrt(static_cast<double>(-K.d_K)));
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    return {checked_add(a.x, b.x), checked_add(a.y, b.y)};
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    return {checked_sub(a.x, b.x), checked_sub(a.y, b.y)};
}

FieldElement operator-(const FieldElement& a) { return {checked_sub(0, a.x), checked_sub(0, a.y)}; }

// (a + b w)(c + e w) = ac - n be + (ae + bc + t be) w, using w^2 = t w - n.
FieldElement multiply(const ImagQuadField& K, const FieldElement& a, const FieldElement& b) {
    i128 be = checked_mul(a.y, b.y);
    i128 x = checked_sub(checked_mul(a.x, b.x), checked_mul(K.omega_norm, be));
    i128 y = checked_add(checked_add(checked_mul(a.x, b.y), checked_mul(a.y, b.x)), checked_mul(K.omega_trace, be));
    return {x, y};
}

FieldElement conjugate(const ImagQuadField& K, const FieldElement& a) {
    return {checked_add(a.x, checked_mul(K.omega_trace, a.y)), checked_sub(0, a.y)};
}

i128 norm(const ImagQuadField& K, const FieldElement& e) {
    i128 v = checked_mul(e.x, e.x);
    v = checked_add(v, checked_mul(checked_mul(e.x, e.y), K.omega_trace));
    v = checked_add(v, checked_mul(checked_mul(e.y, e.y), K.omega_norm));
    return v;
}

i128 trace(const ImagQuadField& K, const FieldElement& e) {
    return checked_add(checked_mul(2, e.x), checked_mul(K.omega_trace, e.y));
}

std::vector<FieldElement> units(const ImagQuadField& K) {
    if (K.d_K == -4) return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    if (K.d_K == -3) {
        // omega = (1+sqrt(-3))/2 is a primitive sixth root of unity.
        std::vector<FieldElement> out;
        FieldElement u{1, 0};
        for (int k = 0; k < 6; ++k) {
            out.push_back(u);
            u = multiply(K, u, FieldElement{0, 1});
        }
        return out;
    }
    return {{1, 0}, {-1, 0}};
}

std::pair<double, double> embed(const ImagQuadField& K, const FieldElement& e) {
    double x = static_cast<double>(e.x);
    double y = static_cast<double>(e.y);
    double im_omega = std::sqrt(static_cast<double>(-K.d_K)) / 2.0;
    return {x + y * static_cast<double>(K.omega_trace) / 2.0, y * im_omega};
}

}  // namespace ekc
