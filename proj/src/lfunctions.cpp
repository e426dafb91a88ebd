#include "ekc/lfunctions.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ekc/numeric.hpp"
#include "ekc/primes.hpp"

namespace ekc {

RayClassPrimeData::RayClassPrimeData(const ImagQuadField& K, const RayClassGroup& H, const std::vector<PrimeIdeal>& primes,
                                     double bound)
    : field_(K), group_(H), bound_(bound) {
    primes_.reserve(primes.size());
    for (const auto& P : primes) {
        if (static_cast<double>(P.norm()) > bound) break;
        i64 cls = -1;
        if (!(H.modulus() && H.modulus()->ideal == P.ideal)) cls = H.index(H.log(P.ideal));
        primes_.push_back({P.norm(), std::log(static_cast<double>(P.norm())), cls});
    }
}

RayClassPrimeData::RayClassPrimeData(const ImagQuadField& K, const RayClassGroup& H, double bound)
    : RayClassPrimeData(K, H, prime_ideals_up_to(K, bound), bound) {}

namespace {

i64 power_class(const RayClassGroup& H, i64 cls, int k) {
    if (k == 1) return cls;
    return H.index(H.scale(H.element(cls), k));
}

}  // namespace

std::vector<double> RayClassPrimeData::phi_weights(double x) const {
    if (x <= 1.0) throw std::invalid_argument("phi_weights: x must exceed 1");
    if (x > bound_) throw std::invalid_argument("phi_weights: x exceeds the prime table bound");
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(group_.order()));
    for (const auto& e : primes_) {
        if (static_cast<double>(e.norm) > x) break;
        if (e.cls < 0) continue;
        double nk = static_cast<double>(e.norm);
        for (int k = 1; nk <= x; ++k, nk *= static_cast<double>(e.norm))
            acc[power_class(group_, e.cls, k)].add(e.log_norm / nk * ((x - nk) / (x - 1.0)));
    }
    std::vector<double> w(acc.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = acc[i].value();
    return w;
}

std::vector<double> RayClassPrimeData::series_weights(double s) const {
    if (s <= 1.0) throw std::invalid_argument("series_weights: s must exceed 1");
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(group_.order()));
    for (const auto& e : primes_) {
        if (e.cls < 0) continue;
        double nk = static_cast<double>(e.norm);
        for (int k = 1; nk <= bound_; ++k, nk *= static_cast<double>(e.norm))
            acc[power_class(group_, e.cls, k)].add(e.log_norm * std::exp(-s * std::log(nk)));
    }
    std::vector<double> w(acc.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = acc[i].value();
    return w;
}

std::complex<double> character_sum(const RayClassCharacter& chi, const RayClassGroup& H, const std::vector<double>& w) {
    ComplexCompensatedSum s;
    for (std::size_t c = 0; c < w.size(); ++c) {
        if (w[c] == 0.0) continue;
        s.add(to_complex(chi(H.element(static_cast<i64>(c)))) * w[c]);
    }
    return s.value();
}

std::complex<double> phi_chi(const RayClassCharacter& chi, const RayClassPrimeData& data, double x) {
    if (x <= 1.0) throw std::invalid_argument("phi_chi: x must exceed 1");
    return character_sum(chi, data.group(), data.phi_weights(x));
}

std::vector<std::complex<double>> phi_all(const std::vector<RayClassCharacter>& chars, const RayClassPrimeData& data,
                                          double x) {
    if (x <= 1.0) throw std::invalid_argument("phi_all: x must exceed 1");
    const auto w = data.phi_weights(x);
    std::vector<std::complex<double>> out;
    out.reserve(chars.size());
    for (const auto& chi : chars) out.push_back(character_sum(chi, data.group(), w));
    return out;
}

namespace {

// sum over k >= 1 with Nq^k <= limit of weight(Nq^k) chi*([q^k])
template <class Weight>
std::complex<double> modulus_power_sum(const RayClassCharacter& chi, const RayClassGroup& H, double limit, Weight weight) {
    const PrimeIdeal& q = *H.modulus();
    const auto base = H.log_class_part(q.ideal);
    const double nq = static_cast<double>(q.norm());
    ComplexCompensatedSum s;
    double nk = nq;
    for (int k = 1; nk <= limit; ++k, nk *= nq) s.add(to_complex(chi(H.scale(base, k))) * weight(nk));
    return s.value();
}

}  // namespace

std::complex<double> imprimitive_correction(const RayClassCharacter& chi, const RayClassPrimeData& data, double x) {
    if (!data.group().modulus()) throw std::invalid_argument("imprimitive_correction: modulus O_K has no correction");
    if (chi.primitive()) throw std::invalid_argument("imprimitive_correction: character is primitive");
    if (x <= 1.0) throw std::invalid_argument("imprimitive_correction: x must exceed 1");
    const double lq = std::log(static_cast<double>(data.group().modulus_norm()));
    return modulus_power_sum(chi, data.group(), x, [&](double nk) { return lq / nk * ((x - nk) / (x - 1.0)); });
}

double grh_character_budget(const ImagQuadField& K, i64 modulus_norm, double x) {
    return 2010.0 * std::log(5.0 * static_cast<double>(-K.d_K) * static_cast<double>(modulus_norm)) / std::sqrt(x);
}

LogDerivEstimate log_deriv_L1(const RayClassCharacter& chi, const RayClassPrimeData& data, double x) {
    if (chi.is_principal()) throw std::invalid_argument("log_deriv_L1: principal character");
    std::complex<double> phi = phi_chi(chi, data, x);
    if (data.group().modulus() && !chi.primitive()) phi += imprimitive_correction(chi, data, x);
    return {-phi, grh_character_budget(data.field(), data.group().modulus_norm(), x)};
}

std::complex<double> dirichlet_log_deriv_series(const RayClassCharacter& chi, const RayClassPrimeData& data, double s) {
    std::complex<double> F = character_sum(chi, data.group(), data.series_weights(s));
    if (data.group().modulus() && !chi.primitive()) {
        const double lq = std::log(static_cast<double>(data.group().modulus_norm()));
        F += modulus_power_sum(chi, data.group(), data.bound(), [&](double nk) { return lq * std::exp(-s * std::log(nk)); });
    }
    return F;
}

std::complex<double> log_deriv_L1_series(const RayClassCharacter& chi, const RayClassPrimeData& data, double delta_hi,
                                         double delta_lo) {
    if (chi.is_principal()) throw std::invalid_argument("log_deriv_L1_series: principal character");
    if (std::fabs(delta_hi - 2.0 * delta_lo) > 1e-15) throw std::invalid_argument("log_deriv_L1_series: need delta_lo = delta_hi / 2");
    const auto f_hi = dirichlet_log_deriv_series(chi, data, 1.0 + delta_hi);
    const auto f_lo = dirichlet_log_deriv_series(chi, data, 1.0 + delta_lo);
    return -(2.0 * f_lo - f_hi);
}

double phi_rational(i64 D, double x) {
    if (x <= 1.0) throw std::invalid_argument("phi_rational: x must exceed 1");
    CompensatedSum s;
    for (i64 p : primes_up_to(static_cast<i64>(std::floor(x)))) {
        const int chi = D == 1 ? 1 : kronecker(D, p);
        if (chi == 0) continue;
        const double lp = std::log(static_cast<double>(p));
        double pk = static_cast<double>(p);
        int sign = chi;
        for (; pk <= x; pk *= static_cast<double>(p), sign *= chi) s.add(sign * lp / pk * ((x - pk) / (x - 1.0)));
    }
    return s.value();
}

namespace {

double smoothed_log(double x) { return (x * std::log(x) - x + 1.0) / (x - 1.0); }

}  // namespace

double euler_gamma_from_primes(double x) { return smoothed_log(x) - phi_rational(1, x); }

GammaEstimate gamma_base(const ImagQuadField& K, double x) {
    if (x < 1e3) throw std::invalid_argument("gamma_base: x must be at least 1e3");
    GammaEstimate g;
    g.d_K = K.d_K;
    g.modulus_norm = 1;
    g.x = x;
    g.gamma = kEulerGamma - phi_rational(K.d_K, x);
    g.grh_error_budget = grh_character_budget(K, 1, x);
    return g;
}

double gamma_base_ideal_route(const ImagQuadField& K, double x) {
    if (x <= 1.0) throw std::invalid_argument("gamma_base_ideal_route: x must exceed 1");
    CompensatedSum s;
    for (const auto& P : prime_ideals_up_to(K, x)) {
        const double np = static_cast<double>(P.norm());
        const double lp = std::log(np);
        for (double nk = np; nk <= x; nk *= np) s.add(lp / nk * ((x - nk) / (x - 1.0)));
    }
    return smoothed_log(x) - s.value();
}

GammaEstimate gamma_ray_class_field(const RayClassPrimeData& data, const GammaEstimate& base, double x) {
    const RayClassGroup& H = data.group();
    if (!H.modulus()) throw std::invalid_argument("gamma_ray_class_field: modulus must be a prime ideal");
    const auto& q = *H.modulus();
    if (!is_principal(data.field(), q.ideal)) throw std::invalid_argument("gamma_ray_class_field: modulus is not principal");
    const double nq = static_cast<double>(q.norm());
    if (x < nq * nq) throw std::invalid_argument("gamma_ray_class_field: x must be at least Nq^2");
    GammaEstimate g = base;
    g.modulus_norm = q.norm();
    g.x = x;
    const auto chars = characters(H);
    const auto w = data.phi_weights(x);
    ComplexCompensatedSum total;
    CompensatedSum budget;
    budget.add(base.grh_error_budget);
    for (const auto& chi : chars) {
        if (chi.is_principal()) continue;
        std::complex<double> phi = character_sum(chi, H, w);
        if (!chi.primitive()) phi += imprimitive_correction(chi, data, x);
        total.add(-phi);
        budget.add(grh_character_budget(data.field(), q.norm(), x));
        ++g.characters;
    }
    g.gamma = base.gamma + total.value().real();
    g.imaginary_residue = std::fabs(total.value().imag());
    g.grh_error_budget = budget.value();
    return g;
}

GammaEstimate gamma_ray_class_field(const ImagQuadField& K, const FormClassGroup& G, const PrimeIdeal& q, double x) {
    const auto H = ray_class_group(K, G, q);
    const RayClassPrimeData data(K, H, x);
    return gamma_ray_class_field(data, gamma_base(K, x), x);
}

double dedekind_zeta(const ImagQuadField& K, double s) {
    if (s < 1.3) throw std::invalid_argument("dedekind_zeta: s must be at least 1.3");
    if (!K.finalized()) throw std::invalid_argument("dedekind_zeta: field has no class number yet");
    // r(n) = #{a : Na = n} = sum_{d | n} chi(d)
    const std::size_t X = std::size_t{1} << 22;
    std::vector<std::int16_t> r(X + 1, 0);
    for (std::size_t d = 1; d <= X; ++d) {
        const int c = kronecker(K.d_K, static_cast<i64>(d));
        if (c == 0) continue;
        for (std::size_t m = d; m <= X; m += d) r[m] = static_cast<std::int16_t>(r[m] + c);
    }
    CompensatedSum sum;
    i64 count = 0;
    for (std::size_t n = X; n >= 1; --n) {
        if (r[n] == 0) continue;
        sum.add(r[n] * std::exp(-s * std::log(static_cast<double>(n))));
        count += r[n];
    }
    // tail: -A(X) X^{-s} + s rho X^{1-s}/(s-1)
    const double Xd = static_cast<double>(X);
    sum.add(-static_cast<double>(count) * std::pow(Xd, -s));
    sum.add(s * K.rho_K * std::pow(Xd, 1.0 - s) / (s - 1.0));
    return sum.value();
}

double riemann_log_deriv_series(double s, double X) {
    CompensatedSum sum;
    for (i64 p : primes_up_to(static_cast<i64>(std::floor(X)))) {
        const double lp = std::log(static_cast<double>(p));
        for (double pk = static_cast<double>(p); pk <= X; pk *= static_cast<double>(p)) sum.add(lp * std::pow(pk, -s));
    }
    return sum.value();
}

}  // namespace ekc
