#include "ekc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ekc/primes.hpp"
#include "ekc/selberg_sieve.hpp"

namespace ekc {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string cell_text(const json& c) {
    if (c.is_null()) return "";
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    if (c.is_number_float()) return fmt12(c.get<double>());
    std::string s = c.is_string() ? c.get<std::string>() : c.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

json json_cell(const json& c) {
    if (c.is_number_float()) {
        double v = c.get<double>();
        if (!std::isfinite(v)) return nullptr;
        return std::stod(fmt12(v));
    }
    return c;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Runs f(i) for i in [0, n) on up to `threads` workers; results land by index.
template <class F>
void parallel_for(std::size_t n, int threads, F f) {
    std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

const std::vector<std::string> kReportHeader = {"check", "inputs", "lhs", "bound", "pass",
                                                "empirical_ratio", "grh_conditional", "hypothesis_unmet", "note"};

void add_report(Table& t, const CheckReport& r) {
    t.rows.push_back({r.name, r.inputs, num(r.lhs), num(r.bound), r.pass, num(r.empirical_ratio), r.grh_conditional,
                      r.hypothesis_unmet, r.note});
    if (!r.pass && !r.hypothesis_unmet) t.all_pass = false;
}

}  // namespace

i64 normalize_d(i64 input) {
    if (input >= 0) throw std::invalid_argument("d must be negative: " + std::to_string(input));
    if (is_squarefree(-input)) return input;
    if (input % 4 == 0) {
        i64 m = input / 4;
        i64 r = static_cast<i64>(mod_floor(m, 4));
        if (is_squarefree(-m) && (r == 2 || r == 3)) return m;
    }
    throw std::invalid_argument("not a squarefree d or fundamental discriminant: " + std::to_string(input));
}

std::vector<i64> parse_d_list(const std::string& s) {
    std::vector<i64> out;
    for (const auto& tok : split(s, ',')) {
        std::size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad d value: " + tok);
        out.push_back(normalize_d(v));
    }
    if (out.empty()) throw std::invalid_argument("empty d list");
    return out;
}

std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument("bad number: " + tok);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw std::invalid_argument("format must be csv or json");
}

FieldElement parse_element(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.empty() || parts.size() > 2) throw std::invalid_argument("element must be 'a' or 'a,b': " + s);
    FieldElement e;
    e.x = std::stoll(parts[0]);
    if (parts.size() == 2) e.y = std::stoll(parts[1]);
    return e;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key = key.substr(2);
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

double truncation_point(const ExperimentConfig& cfg, double Q) {
    if (cfg.x) return *cfg.x;
    return std::min(Q * Q * Q * Q, 1e7);
}

void validate_average(const ExperimentConfig& cfg) {
    if (cfg.d_values.empty()) throw std::invalid_argument("average: no d values");
    if (cfg.Q_grid.empty()) throw std::invalid_argument("average: no Q values");
    for (double Q : cfg.Q_grid) {
        if (Q < 8) throw std::invalid_argument("average: Q must be >= 8");
        if (Q > 1e3) throw std::invalid_argument("average: Q must be <= 1e3");
        double x = truncation_point(cfg, Q);
        if (x < Q * Q) throw std::invalid_argument("average: x must be >= Q^2");
        if (x > 1e7) throw std::invalid_argument("average: x must be <= 1e7");
    }
    if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += "\n";
    }
    return out;
}

std::string to_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = json_cell(row[i]);
        rows.push_back(obj);
    }
    if (rows.size() == 1) return rows[0].dump(2) + "\n";
    json doc = json::object();
    doc["grh_conditional"] = t.grh_conditional;
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

std::string render(const Table& t, OutputFormat f) { return f == OutputFormat::csv ? to_csv(t) : to_json(t); }

std::vector<std::vector<std::string>> load_csv(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(cell);
            cell.clear();
        } else if (c == '\n') {
            row.push_back(cell);
            cell.clear();
            out.push_back(row);
            row.clear();
        } else {
            cell += c;
        }
    }
    if (!cell.empty() || !row.empty()) {
        row.push_back(cell);
        out.push_back(row);
    }
    return out;
}

std::vector<PrimeIdeal> principal_primes_in_window(const ImagQuadField& K, double Q) {
    std::vector<PrimeIdeal> out;
    for (const auto& P : prime_ideals_up_to(K, Q))
        if (2.0 * static_cast<double>(P.norm()) > Q && is_principal(K, P.ideal)) out.push_back(P);
    return out;
}

double average_bound_term(i64 h, double Q) {
    double hd = static_cast<double>(h);
    return (6000 * hd * hd + 1e17 * hd + 11) * std::log(Q);
}

Table run_average(const ExperimentConfig& cfg) {
    validate_average(cfg);
    Table t;
    t.header = {"d_K", "h_K", "Q", "pi_star", "Nq", "gamma_est", "budget", "lhs", "rhs", "pass"};
    t.grh_conditional = true;

    std::vector<ImagQuadField> fields;
    for (i64 d : cfg.d_values) fields.push_back(make_field(d));
    std::sort(fields.begin(), fields.end(), [](const auto& a, const auto& b) { return a.d_K < b.d_K; });
    fields.erase(std::unique(fields.begin(), fields.end(), [](const auto& a, const auto& b) { return a.d_K == b.d_K; }),
                 fields.end());
    std::vector<double> Qs = cfg.Q_grid;
    std::sort(Qs.begin(), Qs.end());
    Qs.erase(std::unique(Qs.begin(), Qs.end()), Qs.end());

    for (auto& K : fields) {
        const FormClassGroup G = class_group(K);
        std::map<double, std::pair<GammaEstimate, std::vector<PrimeIdeal>>> by_x;
        for (double Q : Qs) {
            const double x = truncation_point(cfg, Q);
            auto it = by_x.find(x);
            if (it == by_x.end()) it = by_x.emplace(x, std::make_pair(gamma_base(K, x), prime_ideals_up_to(K, x))).first;
            const auto& [base, primes] = it->second;
            const double rhs = std::fabs(base.gamma) + average_bound_term(K.h_K, Q);
            const auto qs = principal_primes_in_window(K, Q);
            if (qs.empty()) {
                t.rows.push_back({K.d_K, K.h_K, Q, 0, nullptr, nullptr, nullptr, nullptr, rhs, "flagged"});
                t.all_pass = false;
                continue;
            }
            std::vector<GammaEstimate> est(qs.size());
            parallel_for(qs.size(), cfg.threads, [&](std::size_t i) {
                const auto H = ray_class_group(K, G, qs[i]);
                const RayClassPrimeData data(K, H, primes, x);
                est[i] = gamma_ray_class_field(data, base, x);
            });
            double sum = 0;
            for (const auto& e : est) sum += std::fabs(e.gamma);
            const double lhs = sum / static_cast<double>(qs.size());
            const bool pass = lhs < rhs;
            if (!pass) t.all_pass = false;
            for (std::size_t i = 0; i < qs.size(); ++i)
                t.rows.push_back({K.d_K, K.h_K, Q, static_cast<i64>(qs.size()), qs[i].norm(), est[i].gamma,
                                  est[i].grh_error_budget, lhs, rhs, pass});
        }
    }
    return t;
}

Table run_verify(const ExperimentConfig& cfg) {
    const double x = cfg.x.value_or(1e5);
    if (x < 100 || x > 1e7) throw std::invalid_argument("verify: x must lie in [100, 1e7]");
    std::vector<double> Qs = cfg.Q_grid.empty() ? std::vector<double>{100, 1000} : cfg.Q_grid;
    for (double Q : Qs)
        if (Q < 8 || Q > 1e7) throw std::invalid_argument("verify: Q must lie in [8, 1e7]");
    const double small_x = std::min(x, 1e5);

    Table t;
    t.header = kReportHeader;
    t.grh_conditional = true;
    for (double sigma : {1.5, 2.0, 3.0}) add_report(t, check_halllem(sigma));
    for (std::complex<double> s : {std::complex<double>(0.75, 0), {1, 1}, {2, 10}, {5, 100}})
        add_report(t, check_ahnlem(s));
    for (int a = 0; a <= 2; ++a)
        for (std::complex<double> s : {std::complex<double>(1.5, 0), {2, 10}, {3, 100}})
            add_report(t, check_regamma({2, a}, s));

    for (i64 d : cfg.d_values) {
        auto K = make_field(d);
        const FormClassGroup G = class_group(K);
        add_report(t, check_residue_bounds(K));
        add_report(t, check_ideal_count(K, x));
        add_report(t, check_psi(K, x));
        add_report(t, check_mertens(K, x));
        add_report(t, check_principal_prime_count(K, G, x));
        const auto table = arith_table(K, small_x);
        add_report(t, check_lem10(K, table, small_x));
        add_report(t, check_lem11(K, table, small_x));
        add_report(t, check_lem12(K, table, small_x));
        for (double Q : Qs) {
            add_report(t, check_qsum(K, Q));
            add_report(t, check_comparison(K, Q));
        }
        const auto primes = prime_ideals_up_to(K, x);
        bool lattice_done = false;
        for (const auto& q : prime_ideals_up_to(K, 25)) {
            const auto H = ray_class_group(K, G, q);
            add_report(t, check_size(H));
            add_report(t, check_disc(K, H));
            add_report(t, check_chebotarev(K, G, H, x));
            const RayClassPrimeData data(K, H, primes, x);
            add_report(t, check_psi_additivity(data, x));
            for (i64 c = 0; c < H.order(); ++c) add_report(t, check_ray_count(K, H, c, small_x));
            for (const auto& chi : characters(H)) add_report(t, check_lprime(chi, data, 2.0));
            if (!lattice_done) {
                for (const auto& a : prime_ideals_up_to(K, 25)) {
                    if (a.p == q.p) continue;
                    double tt = std::sqrt(small_x);
                    auto L = check_lattice_count(K, G, a.ideal, q.ideal, {1, 0}, tt);
                    CheckReport r = make_report(
                        "lattice_count",
                        "d_K=" + std::to_string(K.d_K) + " Na=" + std::to_string(a.norm()) +
                            " Nq=" + std::to_string(q.norm()) + " t=" + fmt12(tt),
                        std::fabs(static_cast<double>(L.exact) - L.main_term), L.bound);
                    r.empirical_ratio = r.lhs / std::sqrt(L.t2 / static_cast<double>(a.norm() * q.norm()));
                    r.note = "exact=" + std::to_string(L.exact) + " main=" + fmt12(L.main_term);
                    add_report(t, r);
                    lattice_done = true;
                    break;
                }
            }
        }
    }
    return t;
}

Table run_sieve_demo(const ImagQuadField& K0, const FieldElement& t, double z, i64 u) {
    ImagQuadField K = K0;
    if (!K.finalized()) class_group(K);
    const auto ctx = build_context(K, t, z);
    Table tab;
    tab.header = kReportHeader;
    const std::string in = "d_K=" + std::to_string(K.d_K) + " t=" + std::to_string(static_cast<long long>(t.x)) + "," +
                           std::to_string(static_cast<long long>(t.y)) + " z=" + fmt12(z) + " u=" + std::to_string(u);

    add_report(tab, make_report("lambda_unit", in, std::fabs(ctx.divisors[0].lambda - 1.0), 0.0));

    std::vector<std::uint64_t> masks;
    if (ctx.primes.size() <= 16) {
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << ctx.primes.size()); ++a) masks.push_back(a);
    } else {
        for (const auto& d : ctx.divisors) masks.push_back(d.mask);
    }
    double failures = 0;
    for (auto a : masks)
        if (!dual_identity_check(ctx, a)) ++failures;
    auto dual = make_report("dual_identity", in, failures, 0.0);
    dual.note = std::string(ctx.exact ? "exact" : "double") + " divisors_checked=" + std::to_string(masks.size());
    add_report(tab, dual);

    const double upper = sieve_upper_bound(ctx, u);
    const double sifted = static_cast<double>(sifted_count(ctx, u));
    auto dom = make_report("sieve_dominance", in, sifted, upper);
    dom.empirical_ratio = sifted > 0 ? upper / sifted : 0.0;
    dom.note = "lhs is the sifted count; bound is the quadratic form";
    add_report(tab, dom);

    if (u <= 1000000) {
        const double pairs = static_cast<double>(direct_pair_count(K, t, u));
        auto pr = make_report("pair_dominance", in, pairs - 4.0 * K.mu_count * z, upper);
        pr.note = "pairs=" + fmt12(pairs);
        add_report(tab, pr);
    }

    const double err = error_term_sum(ctx);
    auto et = make_report("error_term", in, err, error_term_bound(ctx));
    et.empirical_ratio = err / z;
    add_report(tab, et);
    return tab;
}

Table run_gamma(const ImagQuadField& K0, i64 q_norm, double x) {
    ImagQuadField K = K0;
    const FormClassGroup G = class_group(K);
    if (x < 1e3 || x > 1e7) throw std::invalid_argument("gamma: x must lie in [1e3, 1e7]");
    Table t;
    t.header = {"d_K", "Nq", "gamma_est", "budget"};
    t.grh_conditional = true;
    if (q_norm == 1) {
        auto g = gamma_base(K, x);
        t.rows.push_back({K.d_K, 1, g.gamma, g.grh_error_budget});
        return t;
    }
    if (q_norm < 2) throw std::invalid_argument("gamma: q-norm must be 1 or a prime ideal norm");
    std::optional<PrimeIdeal> chosen;
    bool any = false;
    const auto fac = factorize(q_norm);
    if (fac.size() == 1 && fac[0].second <= 2) {
        for (const auto& P : factor_rational_prime(K, fac[0].first).primes) {
            if (P.norm() != q_norm) continue;
            any = true;
            if (!chosen && is_principal(K, P.ideal)) chosen = P;
        }
    }
    if (!any) throw std::invalid_argument("gamma: no prime ideal of norm " + std::to_string(q_norm));
    if (!chosen) throw std::invalid_argument("gamma: no principal prime ideal of norm " + std::to_string(q_norm));
    auto g = gamma_ray_class_field(K, G, *chosen, x);
    t.rows.push_back({K.d_K, q_norm, g.gamma, g.grh_error_budget});
    return t;
}

Table run_field_info(const ExperimentConfig& cfg) {
    const double x = cfg.x.value_or(1e6);
    if (x < 1e3 || x > 1e7) throw std::invalid_argument("field-info: x must lie in [1e3, 1e7]");
    Table t;
    t.header = {"d", "d_K", "h_K", "rho_K", "mu_count", "forms", "gamma_K", "budget"};
    t.grh_conditional = true;
    for (i64 d : cfg.d_values) {
        auto K = make_field(d);
        const FormClassGroup G = class_group(K);
        std::string forms;
        for (const auto& f : G.forms) {
            if (!forms.empty()) forms += ";";
            forms += "(" + to_string(f.a) + " " + to_string(f.b) + " " + to_string(f.c) + ")";
        }
        auto g = gamma_base(K, x);
        t.rows.push_back({K.d, K.d_K, K.h_K, K.rho_K, K.mu_count, forms, g.gamma, g.grh_error_budget});
    }
    return t;
}

Table run_ideals(const ImagQuadField& K0, double x) {
    ImagQuadField K = K0;
    const FormClassGroup G = class_group(K);
    Table t;
    t.header = {"a", "b", "c", "norm", "class"};
    for (const auto& e : enumerate_ideals(K, x).entries)
        t.rows.push_back({e.ideal.a, e.ideal.b, e.ideal.c, e.ideal.norm(), G.class_of(K, e.ideal)});
    return t;
}

Table run_ray_class(const ImagQuadField& K0, i64 q_norm) {
    ImagQuadField K = K0;
    const FormClassGroup G = class_group(K);
    Table t;
    t.header = {"d_K",          "Nq", "q_a", "q_b", "q_c", "h_K", "order", "invariants", "unit_image_order",
                "primitive_characters", "size_pass"};
    for (const auto& P : prime_ideals_up_to(K, static_cast<double>(q_norm))) {
        if (P.norm() != q_norm) continue;
        const auto H = ray_class_group(K, G, P);
        std::string inv;
        for (i64 n : H.invariants()) inv += (inv.empty() ? "" : "x") + std::to_string(n);
        if (inv.empty()) inv = "1";
        i64 prim = 0;
        for (const auto& chi : characters(H))
            if (chi.primitive()) ++prim;
        bool size_ok = check_size(H).pass;
        if (!size_ok) t.all_pass = false;
        t.rows.push_back({K.d_K, P.norm(), P.ideal.a, P.ideal.b, P.ideal.c, K.h_K, H.order(), inv,
                          H.unit_image_order(), prim, size_ok});
    }
    if (t.rows.empty()) throw std::invalid_argument("ray-class: no prime ideal of norm " + std::to_string(q_norm));
    return t;
}

}  // namespace ekc
