#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "ekc/experiments.hpp"

using namespace ekc;

TEST_CASE("normalize_d accepts squarefree d and fundamental discriminants") {
    CHECK(normalize_d(-1) == -1);
    CHECK(normalize_d(-3) == -3);
    CHECK(normalize_d(-4) == -1);
    CHECK(normalize_d(-8) == -2);
    CHECK(normalize_d(-20) == -5);
    CHECK(normalize_d(-23) == -23);
    CHECK_THROWS_AS(normalize_d(-12), std::invalid_argument);
    CHECK_THROWS_AS(normalize_d(-9), std::invalid_argument);
    CHECK_THROWS_AS(normalize_d(0), std::invalid_argument);
    CHECK_THROWS_AS(normalize_d(5), std::invalid_argument);
    CHECK(parse_d_list("-1,-3,-7,-20") == std::vector<i64>{-1, -3, -7, -5});
    CHECK_THROWS(parse_d_list("-1,x"));
}

TEST_CASE("number lists, formats and elements") {
    CHECK(parse_number_list("50,100,1e6") == std::vector<double>{50, 100, 1e6});
    CHECK_THROWS(parse_number_list(""));
    CHECK_THROWS(parse_number_list("1e6x"));
    CHECK(parse_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
    CHECK(parse_element("3") == FieldElement{3, 0});
    CHECK(parse_element("1,1") == FieldElement{1, 1});
    CHECK_THROWS(parse_element("1,2,3"));
}

TEST_CASE("config file parsing") {
    const char* path = "ekc_test_config.cfg";
    {
        std::ofstream f(path);
        f << "# experiment\nd = -1,-3\n--Q=50\n\nx=1e6  # trailing comment\n";
    }
    auto kv = read_config_file(path);
    REQUIRE(kv.size() == 3);
    CHECK(kv[0] == std::make_pair(std::string("d"), std::string("-1,-3")));
    CHECK(kv[1] == std::make_pair(std::string("Q"), std::string("50")));
    CHECK(kv[2] == std::make_pair(std::string("x"), std::string("1e6")));
    {
        std::ofstream f(path);
        f << "novalue\n";
    }
    CHECK_THROWS_AS(read_config_file(path), std::invalid_argument);
    std::remove(path);
    CHECK_THROWS_AS(read_config_file("does/not/exist.cfg"), std::invalid_argument);
}

TEST_CASE("truncation rule and validation") {
    ExperimentConfig cfg;
    cfg.d_values = {-1};
    cfg.Q_grid = {10};
    CHECK(truncation_point(cfg, 10) == 1e4);
    CHECK(truncation_point(cfg, 100) == 1e7);
    cfg.x = 5e5;
    CHECK(truncation_point(cfg, 10) == 5e5);
    validate_average(cfg);
    cfg.Q_grid = {7};
    CHECK_THROWS_AS(validate_average(cfg), std::invalid_argument);
    cfg.Q_grid = {2000};
    CHECK_THROWS_AS(validate_average(cfg), std::invalid_argument);
    cfg.Q_grid = {100};
    cfg.x = 9999;
    CHECK_THROWS_AS(validate_average(cfg), std::invalid_argument);
    cfg.x = 2e7;
    CHECK_THROWS_AS(validate_average(cfg), std::invalid_argument);
}

TEST_CASE("CSV and JSON emission") {
    Table t;
    t.header = {"a", "b", "c", "d"};
    t.rows.push_back({1, 0.1234567890123456, "x,y", true});
    t.rows.push_back({-2, nullptr, "plain", false});
    std::string csv = to_csv(t);
    CHECK(csv == "a,b,c,d\n1,0.123456789012,\"x,y\",true\n-2,,plain,false\n");
    auto back = load_csv(csv);
    REQUIRE(back.size() == 3);
    CHECK(back[1] == std::vector<std::string>{"1", "0.123456789012", "x,y", "true"});
    CHECK(back[2] == std::vector<std::string>{"-2", "", "plain", "false"});
    CHECK(to_csv(t) == csv);

    auto doc = nlohmann::json::parse(to_json(t));
    CHECK(doc["rows"].size() == 2);
    CHECK(doc["rows"][0]["b"].get<double>() == 0.123456789012);
    t.rows.pop_back();
    auto single = nlohmann::json::parse(to_json(t));
    CHECK(single.is_object());
    CHECK(single.size() == 4);
}

TEST_CASE("principal primes in the window") {
    auto K = make_field(-1);
    auto q10 = principal_primes_in_window(K, 10);
    REQUIRE(q10.size() == 1);
    CHECK(q10[0].norm() == 9);
    auto q6 = principal_primes_in_window(K, 6);
    REQUIRE(q6.size() == 2);
    CHECK(q6[0].norm() == 5);
    CHECK(q6[1].norm() == 5);
    // Q(sqrt(-23)) has no prime of norm in (4, 8].
    CHECK(principal_primes_in_window(make_field(-23), 8).empty());
}

TEST_CASE("average for Q(i), Q = 10 is the single estimate at q = (3)") {
    ExperimentConfig cfg;
    cfg.d_values = {-1};
    cfg.Q_grid = {10};
    auto t = run_average(cfg);
    CHECK(t.header == std::vector<std::string>{"d_K", "h_K", "Q", "pi_star", "Nq", "gamma_est", "budget", "lhs", "rhs",
                                               "pass"});
    REQUIRE(t.rows.size() == 1);
    const auto& row = t.rows[0];
    CHECK(row[3].get<i64>() == 1);
    CHECK(row[4].get<i64>() == 9);
    auto g = run_gamma(make_field(-1), 9, 1e4);
    CHECK(row[5].get<double>() == g.rows[0][2].get<double>());
    CHECK(row[7].get<double>() == std::fabs(row[5].get<double>()));
    auto K = make_field(-1);
    class_group(K);
    CHECK(row[8].get<double>() == doctest::Approx(std::fabs(gamma_base(K, 1e4).gamma) + average_bound_term(1, 10)));
    CHECK(row[9].get<bool>());
    CHECK(t.all_pass);
}

TEST_CASE("Q(i), Q = 6: trivial ray class groups give gamma_K") {
    auto K = make_field(-1);
    auto G = class_group(K);
    auto base = gamma_base(K, 1e4);
    double sum = 0;
    auto qs = principal_primes_in_window(K, 6);
    for (const auto& q : qs) {
        auto H = ray_class_group(K, G, q);
        CHECK(H.order() == 1);
        auto g = gamma_ray_class_field(K, G, q, 1e4);
        CHECK(g.gamma == base.gamma);
        sum += std::fabs(g.gamma);
    }
    CHECK(sum / static_cast<double>(qs.size()) == std::fabs(base.gamma));
}

TEST_CASE("empty window gives a flagged row") {
    ExperimentConfig cfg;
    cfg.d_values = {-23};
    cfg.Q_grid = {8};
    cfg.x = 1e3;
    auto t = run_average(cfg);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][3].get<i64>() == 0);
    CHECK(t.rows[0][7].is_null());
    CHECK(t.rows[0][9] == "flagged");
    CHECK(!t.all_pass);
}

TEST_CASE("average output is deterministic and independent of the thread count") {
    ExperimentConfig cfg;
    cfg.d_values = {-3, -1, -5};
    cfg.Q_grid = {30, 20};
    cfg.x = 2e4;
    std::string a = to_csv(run_average(cfg));
    cfg.threads = 3;
    std::string b = to_csv(run_average(cfg));
    CHECK(a == b);
    auto rows = load_csv(a);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        auto key = [](const std::vector<std::string>& r) {
            return std::make_tuple(std::stoll(r[0]), std::stod(r[2]), r[4].empty() ? 0LL : std::stoll(r[4]));
        };
        CHECK(key(rows[i - 1]) <= key(rows[i]));
    }
}

TEST_CASE("gamma subcommand schema and errors") {
    auto t = run_gamma(make_field(-1), 9, 1e5);
    auto obj = nlohmann::json::parse(to_json(t));
    CHECK(obj.size() == 4);
    for (const char* k : {"d_K", "Nq", "gamma_est", "budget"}) CHECK(obj.contains(k));
    CHECK(obj["d_K"] == -4);
    CHECK(obj["Nq"] == 9);
    CHECK(run_gamma(make_field(-1), 1, 1e5).rows[0][1] == 1);
    CHECK_THROWS_AS(run_gamma(make_field(-1), 7, 1e5), std::invalid_argument);
    CHECK_THROWS_AS(run_gamma(make_field(-1), 15, 1e5), std::invalid_argument);
    // Norm-3 primes of Q(sqrt(-23)) are not principal.
    CHECK_THROWS_AS(run_gamma(make_field(-23), 3, 1e5), std::invalid_argument);
}

TEST_CASE("verify and sieve demo pass on small inputs") {
    ExperimentConfig cfg;
    cfg.d_values = {-1, -23};
    cfg.x = 1e4;
    auto v = run_verify(cfg);
    CHECK(v.all_pass);
    CHECK(v.grh_conditional);
    bool saw_comparison = false;
    for (const auto& row : v.rows) {
        if (row[0] == "comparison") {
            saw_comparison = true;
            CHECK(row[7].get<bool>());
        } else {
            CHECK(row[4].get<bool>());
        }
    }
    CHECK(saw_comparison);
    auto s = run_sieve_demo(make_field(-1), {3, 0}, 13, 2000);
    CHECK(s.all_pass);
    CHECK(s.rows.size() == 5);
}

TEST_CASE("ideals and ray-class tables") {
    auto t = run_ideals(make_field(-5), 4);
    REQUIRE(t.rows.size() == 5);
    CHECK(t.rows[1][3] == 2);
    auto r = run_ray_class(make_field(-1), 9);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0][6] == 2);
    CHECK(r.rows[0][10].get<bool>());
    CHECK_THROWS_AS(run_ray_class(make_field(-1), 7), std::invalid_argument);
}
