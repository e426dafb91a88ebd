// ekc: command-line driver for the Euler-Kronecker constant experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include <CLI11.hpp>

#include "ekc/experiments.hpp"

using namespace ekc;

namespace {

struct RawOptions {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void add(CLI::App& app, const std::string& name, const std::string& help) {
        options[name] = app.add_option("--" + name, values[name], help);
    }
    bool given(const std::string& name) const { return options.at(name)->count() > 0; }
    const std::string& get(const std::string& name) const { return values.at(name); }
    bool has(const std::string& name) const { return !values.at(name).empty(); }
};

void merge_config(RawOptions& raw, const std::string& path) {
    for (const auto& [key, value] : read_config_file(path)) {
        if (!raw.options.count(key)) throw std::invalid_argument("unknown config key: " + key);
        if (!raw.given(key)) raw.values[key] = value;
    }
}

ExperimentConfig build_config(const RawOptions& raw, const std::string& default_d, const std::string& default_Q) {
    ExperimentConfig cfg;
    cfg.d_values = parse_d_list(raw.has("d") ? raw.get("d") : default_d);
    if (raw.has("Q") || !default_Q.empty()) cfg.Q_grid = parse_number_list(raw.has("Q") ? raw.get("Q") : default_Q);
    if (raw.has("x")) cfg.x = parse_number_list(raw.get("x")).at(0);
    if (raw.has("threads")) cfg.threads = std::stoi(raw.get("threads"));
    if (raw.has("out")) cfg.out = raw.get("out");
    if (raw.has("format")) cfg.format = parse_format(raw.get("format"));
    if (raw.has("q-norm")) cfg.q_norm = std::stoll(raw.get("q-norm"));
    if (raw.has("z")) cfg.z = parse_number_list(raw.get("z")).at(0);
    if (raw.has("t")) cfg.t = raw.get("t");
    return cfg;
}

void emit(const Table& t, const ExperimentConfig& cfg) {
    std::string text = render(t, cfg.format);
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + cfg.out);
        f << text;
    }
    if (t.grh_conditional && cfg.format == OutputFormat::csv) std::cerr << "# grh_conditional=true\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Euler-Kronecker constants of ray class fields of imaginary quadratic fields"};
    app.require_subcommand(1);
    RawOptions raw;
    raw.add(app, "d", "comma-separated squarefree d < 0 or fundamental discriminants");
    raw.add(app, "q-norm", "norm of the prime modulus q");
    raw.add(app, "Q", "comma-separated Q grid");
    raw.add(app, "x", "truncation point (average: defaults to min(Q^4, 1e7))");
    raw.add(app, "z", "sieve level");
    raw.add(app, "t", "sieve shift a or a,b for a + b*omega");
    raw.add(app, "threads", "worker threads");
    raw.add(app, "out", "output file (default stdout)");
    raw.add(app, "format", "csv or json");
    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file; flags take precedence");

    auto* field_info = app.add_subcommand("field-info", "class number, residue and gamma_K of each field");
    auto* ideals = app.add_subcommand("ideals", "list ideals of norm <= x");
    auto* ray_class = app.add_subcommand("ray-class", "ray class groups modulo primes of norm q-norm");
    auto* gamma = app.add_subcommand("gamma", "estimate gamma of the ray class field K(q)");
    auto* average = app.add_subcommand("average", "average of |gamma_K(q)| over principal primes q");
    auto* verify = app.add_subcommand("verify", "run the analytic check suite");
    auto* sieve = app.add_subcommand("sieve-demo", "Selberg sieve weights, dominance and error term");
    for (auto* sub : {field_info, ideals, ray_class, gamma, average, verify, sieve}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!config_path.empty()) merge_config(raw, config_path);
        Table t;
        ExperimentConfig cfg;
        if (*field_info) {
            cfg = build_config(raw, "-1", "");
            t = run_field_info(cfg);
        } else if (*ideals) {
            cfg = build_config(raw, "-1", "");
            double x = cfg.x.value_or(100);
            if (x < 1 || x > 1e7) throw std::invalid_argument("ideals: x must lie in [1, 1e7]");
            t = run_ideals(make_field(cfg.d_values.at(0)), x);
        } else if (*ray_class) {
            cfg = build_config(raw, "-1", "");
            if (cfg.q_norm < 2) throw std::invalid_argument("ray-class: --q-norm is required");
            t = run_ray_class(make_field(cfg.d_values.at(0)), cfg.q_norm);
        } else if (*gamma) {
            cfg = build_config(raw, "-1", "");
            if (cfg.q_norm < 1) throw std::invalid_argument("gamma: --q-norm is required");
            t = run_gamma(make_field(cfg.d_values.at(0)), cfg.q_norm, cfg.x.value_or(1e6));
        } else if (*average) {
            cfg = build_config(raw, "-1,-3,-7,-20", "50,100");
            t = run_average(cfg);
        } else if (*verify) {
            cfg = build_config(raw, "-1,-3", "");
            t = run_verify(cfg);
        } else if (*sieve) {
            cfg = build_config(raw, "-1", "");
            double u = cfg.x.value_or(std::max(2000.0, cfg.z * cfg.z));
            t = run_sieve_demo(make_field(cfg.d_values.at(0)), parse_element(cfg.t), cfg.z, static_cast<i64>(u));
        }
        emit(t, cfg);
        return t.all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "ekc: " << e.what() << "\n";
        return 2;
    }
}
