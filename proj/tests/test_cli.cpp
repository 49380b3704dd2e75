#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mlp/cli.hpp"
#include "mlp/generators.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mlp;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "mlp_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_tmp(const std::string& name, const std::string& text) {
    auto p = fs::temp_directory_path() / ("mlp_cli_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST_CASE("solve") {
    auto fa = write_tmp("fixa.json", instance_to_json(fixture_a()));
    auto fb = write_tmp("fixb.json", instance_to_json(fixture_b()));

    auto r = cli({"solve", "--alg", "kmlp-comb", "--input", fa});
    REQUIRE(r.code == exit_ok);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["routes"] == nlohmann::json::parse(R"([["r","a","b"]])"));
    CHECK(j["total_latency"] == 4);
    CHECK(j["per_node_latency"]["b"] == 3);

    auto bad = cli({"solve", "--alg", "kmlp-lp", "--input", fb});
    CHECK(bad.code == exit_solver);
    CHECK(bad.err.find("single-depot algorithm on multi-depot instance") != std::string::npos);

    auto s1 = cli({"solve", "--alg", "multidepot", "--input", fb, "--seed", "7"});
    auto s2 = cli({"solve", "--alg", "multidepot", "--input", fb, "--seed", "7"});
    CHECK(s1.code == exit_ok);
    CHECK(s1.out == s2.out);
    CHECK(nlohmann::json::parse(s1.out)["seed"] == 7);

    CHECK(cli({"solve", "--alg", "nope", "--input", fa}).code == exit_usage);
    CHECK(cli({"solve", "--alg", "kmlp-lp", "--input", "/nonexistent.json"}).code == exit_usage);
    CHECK(cli({"solve", "--alg", "multidepot", "--input", fb, "--growth", "3"}).code == exit_usage);
}

TEST_CASE("oracle") {
    auto fa = write_tmp("fixa.json", instance_to_json(fixture_a()));
    auto opt = cli({"oracle", "--what", "opt", "--input", fa});
    REQUIRE(opt.code == exit_ok);
    CHECK(nlohmann::json::parse(opt.out)["value"] == 4);
    auto b = nlohmann::json::parse(cli({"oracle", "--what", "bnslb", "--input", fa}).out);
    CHECK(b["value"] == 4);
    CHECK(b["table"] == nlohmann::json::parse("[0,1,3]"));

    std::vector<std::string> nodes{"r"};
    std::vector<std::vector<Cost>> c(13, std::vector<Cost>(13, 2));
    for (int i = 0; i < 13; ++i) {
        c[i][i] = 0;
        if (i) nodes.push_back("v" + std::to_string(i));
    }
    for (int i = 1; i < 13; ++i) c[0][i] = c[i][0] = 1;
    auto big = write_tmp("big.json", instance_to_json(make_instance(nodes, {0}, c)));
    auto g = cli({"oracle", "--what", "opt", "--input", big});
    CHECK(g.code == exit_guard);
    CHECK(g.err.find("guard") != std::string::npos);
}

TEST_CASE("verify") {
    auto fa = write_tmp("fixa.json", instance_to_json(fixture_a()));
    auto sol = write_tmp("sol.json", cli({"solve", "--alg", "kmlp-comb", "--input", fa}).out);
    auto v = cli({"verify", "--input", fa, "--solution", sol, "--against", "bnslb"});
    CHECK(v.code == exit_ok);
    CHECK(nlohmann::json::parse(v.out)["pass"] == true);

    auto lp = write_tmp("sol_lp.json", cli({"solve", "--alg", "kmlp-lp", "--input", fa}).out);
    CHECK(cli({"verify", "--input", fa, "--solution", lp, "--against", "lp3"}).code == exit_ok);

    auto missing = write_tmp("missing.json", R"({"algorithm":"kmlp-comb","routes":[["r","a"]]})");
    auto m = cli({"verify", "--input", fa, "--solution", missing});
    CHECK(m.code == exit_violation);
    CHECK(m.out.find("uncovered node") != std::string::npos);

    auto worse = write_tmp("worse.json", R"({"algorithm":"bnslb-construct","routes":[["r","b","a"]]})");
    auto w = cli({"verify", "--input", fa, "--solution", worse, "--against", "opt"});
    CHECK(w.code == exit_ok);  // 3 + 5 = 8 <= mu* * 4

    auto wrong = write_tmp("wrong.json", R"({"algorithm":"x","routes":[["r"],["r"]]})");
    CHECK(cli({"verify", "--input", fa, "--solution", wrong}).code == exit_usage);
}

TEST_CASE("bench") {
    auto empty = cli({"bench", "--n", "5", "--k", "1", "--trials", "0", "--seed", "1"});
    CHECK(empty.code == exit_ok);
    CHECK(nlohmann::json::parse(empty.out)["rows"].empty());

    auto r = cli({"bench", "--n", "5", "--k", "1", "--trials", "6", "--seed", "2"});
    REQUIRE(r.code == exit_ok);
    auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == 6);
    for (const auto& row : j["rows"]) {
        const auto& b = row["bounds"];
        CHECK(b["lp3"].get<double>() <= b["lp1"].get<double>() + 1e-9);
        CHECK(b["lp1"].get<double>() <= b["lp2"].get<double>() + 1e-9);
        for (const auto& [alg, res] : row["results"].items()) {
            if (!res.contains("ratio")) continue;
            double den = b[res["denominator"].get<std::string>()].get<double>();
            CHECK(res["ratio"].get<double>() == doctest::Approx(res["cost"].get<double>() / den));
            CHECK(res["ratio"].get<double>() <= res["guarantee"].get<double>());
        }
    }
    auto again = cli({"bench", "--n", "5", "--k", "1", "--trials", "6", "--seed", "2"});
    CHECK(again.out == r.out);

    auto text = cli({"bench", "--n", "4", "--k", "2", "--trials", "2", "--seed", "3", "--multi-depot", "--format", "text"});
    CHECK(text.code == exit_ok);
    CHECK(text.out.find("multidepot") != std::string::npos);
    CHECK(cli({"bench", "--n", "0", "--k", "1", "--trials", "1", "--seed", "1"}).code == exit_usage);
    CHECK(cli({"bench", "--n", "4", "--k", "1", "--trials", "1", "--seed", "1", "--algs", "bogus"}).code == exit_usage);
}
