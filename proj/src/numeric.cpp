#include "ekc/numeric.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <stdexcept>

namespace ekc {

void CompensatedSum::add(double v) {
    double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
        comp_ += (sum_ - t) + v;
    } else {
        comp_ += (v - t) + sum_;
    }
    sum_ = t;
}

std::complex<double> digamma(std::complex<double> s) {
    if (s.real() <= 0.0 && s.imag() == 0.0 && s.real() == std::floor(s.real())) {
        throw std::domain_error("digamma: pole at non-positive integer");
    }
    std::complex<double> shift = 0.0;
    while (s.real() < 10.0) {
        shift -= 1.0 / s;
        s += 1.0;
    }
    // B_{2k} / (2k) for k = 1..7
    static const double coef[] = {1.0 / 12.0,  -1.0 / 120.0, 1.0 / 252.0,    -1.0 / 240.0,
                                  1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};
    std::complex<double> inv2 = 1.0 / (s * s);
    std::complex<double> term = inv2;
    std::complex<double> series = 0.0;
    for (double c : coef) {
        series += c * term;
        term *= inv2;
    }
    return shift + std::log(s) - 0.5 / s - series;
}

double log_integral_from_2(double x) {
    if (x < 2.0) throw std::domain_error("log_integral_from_2: x must be >= 2");
    return boost::math::expint(std::log(x)) - boost::math::expint(std::log(2.0));
}

}  // namespace ekc
