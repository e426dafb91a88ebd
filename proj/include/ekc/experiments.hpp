#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ekc/analytic_checks.hpp"

namespace ekc {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    std::vector<i64> d_values;
    std::vector<double> Q_grid;
    std::optional<double> x;
    int threads = 1;
    std::string out;
    OutputFormat format = OutputFormat::csv;
    i64 q_norm = 0;
    double z = 13.0;
    std::string t = "3";
};

// Accepts a squarefree d < 0 or a fundamental discriminant (-20 -> -5).
i64 normalize_d(i64 input);
std::vector<i64> parse_d_list(const std::string& s);
std::vector<double> parse_number_list(const std::string& s);
OutputFormat parse_format(const std::string& s);
// "a" or "a,b" for a + b*omega.
FieldElement parse_element(const std::string& s);

// key=value lines; '#' starts a comment. Keys match the long flag names.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// User x if given, else min(Q^4, 1e7).
double truncation_point(const ExperimentConfig& cfg, double Q);
// Q >= 8, Q <= 1e3, Q^2 <= x <= 1e7.
void validate_average(const ExperimentConfig& cfg);

// Rows of typed cells. Numbers print with 12 significant digits in CSV.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<nlohmann::json>> rows;
    bool all_pass = true;
    bool grh_conditional = false;
};

std::string to_csv(const Table& t);
// A single-row table becomes one object; otherwise {"grh_conditional": ..., "rows": [...]}.
std::string to_json(const Table& t);
std::string render(const Table& t, OutputFormat f);
// Parses to_csv output back into string cells.
std::vector<std::vector<std::string>> load_csv(const std::string& text);

// Principal primes q with Q/2 < Nq <= Q, sorted by (norm, HNF).
std::vector<PrimeIdeal> principal_primes_in_window(const ImagQuadField& K, double Q);

Table run_average(const ExperimentConfig& cfg);
Table run_verify(const ExperimentConfig& cfg);
Table run_sieve_demo(const ImagQuadField& K, const FieldElement& t, double z, i64 u);
Table run_gamma(const ImagQuadField& K, i64 q_norm, double x);
Table run_field_info(const ExperimentConfig& cfg);
Table run_ideals(const ImagQuadField& K, double x);
Table run_ray_class(const ImagQuadField& K, i64 q_norm);

// Theorem bound (6000 h^2 + 1e17 h + 11) log Q.
double average_bound_term(i64 h, double Q);

}  // namespace ekc
