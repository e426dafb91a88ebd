#pragma once

#include <complex>

namespace ekc {

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexCompensatedSum {
public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.577215664901533;

// Riemann zeta at s = 2 and s = 3/2.
inline constexpr double kZeta2 = kPi * kPi / 6.0;
inline constexpr double kZeta3Half = 2.612375348685488;

// psi(s) = Gamma'/Gamma(s) for complex s off the poles: recurrence up to
// Re(s) >= 10 followed by the asymptotic Bernoulli series.
std::complex<double> digamma(std::complex<double> s);

// li(x) - li(2) = integral from 2 to x of dt / log t.
double log_integral_from_2(double x);

}  // namespace ekc
