// Acceptance run: one PASS/FAIL line per primary criterion. Oracles are
// computed here from first principles where the library has a shortcut.
//
// usage: ekc_acceptance <path to ekc>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <numbers>
#include <sstream>
#include <string>

#include "ekc/analytic_checks.hpp"
#include "ekc/experiments.hpp"
#include "ekc/numeric.hpp"
#include "ekc/primes.hpp"
#include "ekc/selberg_sieve.hpp"

using namespace ekc;

namespace {

const std::array<i64, 8> kMatrix{-1, -2, -3, -5, -7, -11, -15, -23};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
}

// Runs one criterion, turning an exception into a failure line.
void criterion(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        auto [pass, detail] = body();
        report(id, name, pass, detail);
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

// Reduced forms (a, b, c) with b^2 - 4ac = D < 0.
i64 class_number_by_forms(i64 D) {
    i64 h = 0;
    for (i64 a = 1; 3 * a * a <= -D; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            const i64 num = b * b - D;
            if (num % (4 * a)) continue;
            const i64 c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            ++h;
        }
    return h;
}

int units_count(i64 D) { return D == -4 ? 4 : D == -3 ? 6 : 2; }

// a lies in [1]_q iff a = (alpha) with u*alpha = 1 mod q for some unit u.
bool in_trivial_ray_class(const ImagQuadField& K, const PrimeIdeal& q, const IdealHNF& a) {
    auto alpha = is_principal(K, a);
    if (!alpha) return false;
    ResidueGroup R(K, q);
    for (const auto& u : units(K))
        if (R.reduce(multiply(K, *alpha, u)) == 1) return true;
    return false;
}

// |H| sum_{a in [1]_q} w(a) - sum_{(a,q)=1} w(a) over prime powers.
double orthogonality_rhs(const ImagQuadField& K, const PrimeIdeal& q, i64 order, double x) {
    CompensatedSum s;
    for (const auto& P : prime_ideals_up_to(K, x)) {
        if (P.ideal == q.ideal) continue;
        const double np = static_cast<double>(P.norm());
        IdealHNF Pk = P.ideal;
        for (double nk = np; nk <= x; nk *= np) {
            const double w = std::log(np) / nk * (x - nk) / (x - 1);
            if (in_trivial_ray_class(K, q, Pk)) s.add(static_cast<double>(order) * w);
            s.add(-w);
            Pk = multiply(K, Pk, P.ideal);
        }
    }
    return s.value();
}

bool is_rational_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

// p inert in K iff D is a nonsquare mod 4p (p odd: mod p; p = 2: D = 5 mod 8).
bool inert(i64 D, i64 p) {
    if (p == 2) return ((D % 8) + 8) % 8 == 5;
    const i64 r = ((D % p) + p) % p;
    if (r == 0) return false;
    for (i64 y = 1; y < p; ++y)
        if (y * y % p == r) return false;
    return true;
}

// Prime elements alpha = x + y*omega with Q/2 < N(alpha) <= Q, divided by |mu_K|.
i64 pi_star_oracle(i64 D, double Q) {
    const bool one_mod_four = ((D % 4) + 4) % 4 == 1;
    const i64 B = static_cast<i64>(2 * std::sqrt(Q)) + 3;
    i64 count = 0;
    for (i64 x = -B; x <= B; ++x)
        for (i64 y = -B; y <= B; ++y) {
            // omega = (1 + sqrt D)/2 or sqrt(D/4).
            const i64 n = one_mod_four ? x * x + x * y + y * y * (1 - D) / 4 : x * x - (D / 4) * y * y;
            if (n <= Q / 2 || n > Q) continue;
            bool prime = is_rational_prime(n);
            if (!prime) {
                const i64 p = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(n))));
                prime = p * p == n && is_rational_prime(p) && inert(D, p) && x % p == 0 && y % p == 0;
            }
            if (prime) ++count;
        }
    return count / units_count(D);
}

std::string run_capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + cmd);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    status = pclose(pipe);
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: ekc_acceptance <path to ekc>\n";
        return 2;
    }
    const std::string ekc_path = argv[1];

    criterion(1, "ideal-count accuracy", [] {
        bool ok = true;
        std::string detail;
        for (i64 d : {-1, -3, -5, -23}) {
            auto t0 = Clock::now();
            auto K = make_field(d);
            const double x = 1e6;
            const double count = static_cast<double>(enumerate_ideals(K, x).entries.size());
            const double rho = 2 * std::numbers::pi * static_cast<double>(class_number_by_forms(K.d_K)) /
                               (units_count(K.d_K) * std::sqrt(static_cast<double>(-K.d_K)));
            const double rel = std::fabs(count / x - rho) / rho;
            const double secs = seconds_since(t0);
            ok = ok && rel <= 0.01 && secs <= 30;
            detail += "d=" + std::to_string(d) + " rel=" + fmt(rel) + " t=" + fmt(secs) + "s; ";
        }
        return std::make_pair(ok, detail);
    });

    criterion(2, "orthogonality identity", [] {
        double worst = 0;
        int cases = 0;
        for (i64 d : kMatrix) {
            auto K = make_field(d);
            auto G = class_group(K);
            for (const auto& q : prime_ideals_up_to(K, 50)) {
                auto H = ray_class_group(K, G, q);
                RayClassPrimeData data(K, H, 1000);
                auto chars = characters(H);
                for (double x : {1e2, 1e3}) {
                    auto phis = phi_all(chars, data, x);
                    std::complex<double> lhs = 0;
                    for (std::size_t i = 1; i < phis.size(); ++i) lhs += phis[i];
                    const double rhs = orthogonality_rhs(K, q, H.order(), x);
                    worst = std::max({worst, std::fabs(lhs.real() - rhs), std::fabs(lhs.imag())});
                    ++cases;
                }
            }
        }
        return std::make_pair(worst <= 1e-9, std::to_string(cases) + " cases, max deviation " + fmt(worst));
    });

    criterion(3, "worked Phi value", [] {
        auto K = make_field(-1);
        auto G = class_group(K);
        auto q = factor_rational_prime(K, 3).primes.at(0);
        auto H = ray_class_group(K, G, q);
        RayClassPrimeData data(K, H, 100);
        auto chars = characters(H);
        if (chars.size() != 2) return std::make_pair(false, std::string("|H| != 2"));
        auto v = phi_chi(chars[1], data, 3.0);
        const double err = std::abs(v - std::complex<double>(-std::log(2.0) / 4, 0));
        return std::make_pair(err <= 1e-12, "Phi = " + fmt(v.real()) + " error " + fmt(err));
    });

    criterion(4, "L'/L estimator agreement", [] {
        double worst = 0;
        int count = 0;
        for (i64 d : kMatrix) {
            auto K = make_field(d);
            auto G = class_group(K);
            for (const auto& q : prime_ideals_up_to(K, 25)) {
                auto H = ray_class_group(K, G, q);
                RayClassPrimeData data(K, H, 1e6);
                for (const auto& chi : characters(H)) {
                    if (!chi.primitive()) continue;
                    auto a = log_deriv_L1(chi, data, 1e6).value;
                    auto b = log_deriv_L1_series(chi, data);
                    worst = std::max(worst, std::abs(a - b));
                    ++count;
                }
            }
        }
        return std::make_pair(count > 0 && worst <= 1e-2,
                              std::to_string(count) + " primitive characters, max difference " + fmt(worst));
    });

    criterion(5, "Euler-Mascheroni recovery", [] {
        const double g = euler_gamma_from_primes(1e6);
        const double err = std::fabs(g - 0.5772156649);
        return std::make_pair(err <= 1e-2, "gamma = " + fmt(g) + " error " + fmt(err));
    });

    criterion(6, "Chebotarev desk check", [] {
        bool ok = true;
        std::string detail;
        const double x = 1e5;
        for (auto [d, p] : {std::pair<i64, i64>{-1, 3}, {-3, 2}}) {
            auto K = make_field(d);
            auto G = class_group(K);
            auto q = factor_rational_prime(K, p).primes.at(0);
            auto H = ray_class_group(K, G, q);
            auto r = check_chebotarev(K, G, H, x);
            const double band = 50 * std::sqrt(x) * std::pow(std::log(x), 2);
            ok = ok && r.pass;
            detail += "d=" + std::to_string(d) + " Nq=" + std::to_string(q.norm()) + " lhs=" + fmt(r.lhs) +
                      " bound=" + fmt(r.bound) + " band " + (r.lhs <= band ? "inside" : "outside") + "; ";
        }
        return std::make_pair(ok, detail);
    });

    criterion(7, "psi check", [] {
        int count = 0, passed = 0;
        double worst = 0;
        for (i64 d : kMatrix) {
            auto K = make_field(d);
            for (double x : {1e3, 1e4, 1e5, 1e6}) {
                auto r = check_psi(K, x);
                ++count;
                if (r.pass) ++passed;
                worst = std::max(worst, r.lhs / r.bound);
            }
        }
        return std::make_pair(passed == count, std::to_string(passed) + "/" + std::to_string(count) +
                                                   " pass, max lhs/bound " + fmt(worst));
    });

    criterion(8, "Selberg sieve", [] {
        auto t0 = Clock::now();
        bool unit = true, dual = true, dominance = true, error = true;
        int subsets = 0;
        for (i64 d : kMatrix) {
            auto K = make_field(d);
            for (double z : {13.0, 20.0, 30.0, 50.0}) {
                auto ctx = build_context(K, {3, 0}, z);
                unit = unit && ctx.divisors[0].mask == 0 && ctx.divisors[0].lambda == 1.0 &&
                       (!ctx.exact || ctx.lambda_exact[0] == 1);
                const std::uint64_t all = std::uint64_t{1} << ctx.primes.size();
                for (std::uint64_t m = 0; m < all; ++m, ++subsets) dual = dual && dual_identity_check(ctx, m);
            }
            for (double z : {13.0, 30.0, 50.0}) {
                auto ctx = build_context(K, {3, 0}, z);
                error = error && error_term_sum(ctx) <= error_term_bound(ctx);
            }
        }
        auto K = make_field(-1);
        auto ctx = build_context(K, {3, 0}, 13);
        const i64 u = 2000;
        // Pointwise: sum over alpha of (sum_{b | alpha(t alpha + 1)} lambda_b)^2, and the direct sifted count.
        CompensatedSum quad;
        i64 sifted = 0;
        for (const auto& a : elements_up_to(K, u)) {
            auto prod = principal_ideal(K, multiply(K, a, multiply(K, ctx.t, a) + FieldElement{1, 0}));
            double s = 0;
            for (const auto& dv : ctx.divisors)
                if (divides(ctx.ideal_of(dv.mask), prod)) s += dv.lambda;
            quad.add(s * s);
            bool coprime_to_P = true;
            for (const auto& P : ctx.primes)
                if (divides(P.ideal, prod)) coprime_to_P = false;
            if (coprime_to_P) ++sifted;
        }
        const double upper = sieve_upper_bound(ctx, u);
        dominance = std::fabs(upper - quad.value()) <= 1e-6 * quad.value() && upper >= static_cast<double>(sifted) &&
                    sifted_count(ctx, u) == sifted;
        const double secs = seconds_since(t0);
        const bool ok = unit && dual && dominance && error && secs <= 60;
        std::string detail = std::string("lambda_O ") + (unit ? "ok" : "bad") + ", dual " + std::to_string(subsets) +
                             " subsets " + (dual ? "ok" : "bad") + ", quadratic form " + fmt(upper) +
                             " >= sifted " + std::to_string(sifted) + (dominance ? "" : " (bad)") + ", error term " +
                             (error ? "ok" : "bad") + ", t=" + fmt(secs) + "s";
        return std::make_pair(ok, detail);
    });

    criterion(9, "ray class group size and exact sequence", [] {
        int count = 0, passed = 0;
        for (i64 d : kMatrix) {
            auto K = make_field(d);
            auto G = class_group(K);
            const i64 h = class_number_by_forms(K.d_K);
            for (const auto& q : prime_ideals_up_to(K, 1000)) {
                auto H = ray_class_group(K, G, q);
                const i64 Nq = q.norm();
                // The image of mu_K in (O_K/q)^x: units u != 1 with u = 1 mod q are absent.
                ResidueGroup R(K, q);
                i64 image = 0;
                std::vector<i64> seen;
                for (const auto& u : units(K)) {
                    const i64 r = R.reduce(u);
                    if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r), ++image;
                }
                i64 product = 1;
                for (i64 n : H.invariants()) product *= n;
                const bool ok = product == H.order() && 12 * H.order() >= h * Nq && H.order() < h * Nq &&
                                H.order() * image == h * (Nq - 1);
                ++count;
                if (ok) ++passed;
            }
        }
        return std::make_pair(passed == count, std::to_string(passed) + "/" + std::to_string(count) + " groups");
    });

    criterion(10, "end-to-end average", [&ekc_path] {
        const std::string cmd = "\"" + ekc_path + "\" average --d=-1,-3,-7,-20 --Q=50,100 --x=1e6 2>/dev/null";
        auto t0 = Clock::now();
        int s1 = 0, s2 = 0;
        const std::string a = run_capture(cmd, s1);
        const double secs = seconds_since(t0);
        const std::string b = run_capture(cmd, s2);
        auto rows = load_csv(a);
        bool rows_ok = rows.size() > 1;
        std::map<std::pair<i64, i64>, i64> pi_star;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() != 10 || r[9] != "true" || r[7].empty() || std::stod(r[7]) > std::stod(r[8])) {
                rows_ok = false;
                continue;
            }
            pi_star[{std::stoll(r[0]), std::stoll(r[2])}] = std::stoll(r[3]);
        }
        bool pi_ok = true;
        for (i64 D : {-4, -3, -7, -20})
            for (i64 Q : {50, 100}) {
                auto it = pi_star.find({D, Q});
                if (it == pi_star.end() || it->second != pi_star_oracle(D, static_cast<double>(Q))) pi_ok = false;
            }
        const bool ok = s1 == 0 && s2 == 0 && a == b && rows_ok && pi_ok && secs <= 600;
        std::string detail = std::to_string(rows.size() ? rows.size() - 1 : 0) + " rows, lhs<=rhs " +
                             (rows_ok ? "ok" : "bad") + ", pi* " + (pi_ok ? "matches" : "mismatch") + ", rerun " +
                             (a == b ? "byte-identical" : "differs") + ", t=" + fmt(secs) + "s";
        return std::make_pair(ok, detail);
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
