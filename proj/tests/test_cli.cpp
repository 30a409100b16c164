#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "subdiff/runner.hpp"

using namespace subdiff;

TEST_CASE("key-value config: sections, comments, lists") {
    const auto kv = KeyValueConfig::parse(
        "# comment\n"
        "[kernel]\n"
        "family = fractional_exp\n"
        "alpha = 0.4   # trailing comment\n"
        "gamma=2.5\n"
        "[params]\n"
        "mu = 0.5, 1, 4\n"
        "[grid]\n"
        "N = 500\n");
    std::vector<std::string> problems;
    const auto cfg = RunConfig::from(kv, problems);
    CHECK(problems.empty());
    CHECK(cfg.family == "fractional_exp");
    CHECK(cfg.alpha == 0.4);
    CHECK(cfg.gamma == 2.5);
    CHECK(cfg.N == 500);
    REQUIRE(cfg.mu.size() == 3);
    CHECK(cfg.mu[1] == 1.0);
    CHECK(cfg.validate().empty());
}

TEST_CASE("sum terms parse as delta:alpha pairs") {
    const auto kv = KeyValueConfig::parse(
        "[kernel]\nfamily = sum_fractional\nterms = 2:0.25, 0.5:0.65\n");
    std::vector<std::string> problems;
    const auto cfg = RunConfig::from(kv, problems);
    CHECK(problems.empty());
    REQUIRE(cfg.terms.size() == 2);
    CHECK(cfg.terms[0].delta == 2.0);
    CHECK(cfg.terms[1].alpha == 0.65);
    CHECK_NOTHROW(cfg.make_pair());
}

TEST_CASE("validation lists every violated field") {
    const auto kv = KeyValueConfig::parse(
        "[kernel]\nfamily = nosuch\nalpha = 1.5\n[params]\nmu =\n");
    std::vector<std::string> problems;
    const auto cfg = RunConfig::from(kv, problems);
    auto bad = cfg.validate();
    for (const auto& p : problems) bad.push_back(p);
    bool family_named = false, alpha_named = false, mu_named = false;
    for (const auto& msg : bad) {
        family_named = family_named || msg.find("kernel.family") != std::string::npos;
        alpha_named = alpha_named || msg.find("kernel.alpha") != std::string::npos;
        mu_named = mu_named || msg.find("params.mu") != std::string::npos;
    }
    CHECK(family_named);
    CHECK(alpha_named);
    CHECK(mu_named);
}

TEST_CASE("environment overrides win over file values") {
    setenv("SUBDIFF_GRID_N", "123", 1);
    auto kv = KeyValueConfig::parse("[grid]\nN = 500\n");
    kv.apply_env();
    unsetenv("SUBDIFF_GRID_N");
    std::vector<std::string> problems;
    const auto cfg = RunConfig::from(kv, problems);
    CHECK(cfg.N == 123);
}

TEST_CASE("csv writer uses full-precision scientific entries") {
    CsvWriter csv({"t", "v"});
    csv.row({1.0 / 3.0, 2.0});
    const auto text = csv.to_string();
    CHECK(text.find("3.3333333333333331e-01") != std::string::npos);
    CHECK(text.find("t,v") == 0);
    const auto dat = csv.to_dat();
    CHECK(dat.find("# t v") == 0);
}

TEST_CASE("task pool returns results in task order") {
    std::vector<std::function<TaskOutput()>> tasks;
    for (int i = 0; i < 7; ++i)
        tasks.push_back([i] {
            TaskOutput o;
            o.manifest.push_back({{"index", i}});
            return o;
        });
    const auto results = run_tasks(std::move(tasks), 3);
    for (int i = 0; i < 7; ++i) CHECK(results[i].manifest[0]["index"] == i);
}

TEST_CASE("relax artifacts are deterministic for a fixed config") {
    RunConfig cfg;
    cfg.N = 200;
    cfg.T = 10.0;
    cfg.mu = {1.0};
    const auto a = run_relax(cfg);
    const auto b = run_relax(cfg);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        CHECK(a.files[i].first == b.files[i].first);
        CHECK(a.files[i].second == b.files[i].second);
    }
    CHECK(a.n_fail == 0);
    CHECK(a.n_pass >= 1);
}

TEST_CASE("execute writes csv, dat and manifest and returns exit 0 on pass") {
    const auto dir = std::filesystem::temp_directory_path() / "subdiff_test_ml";
    std::filesystem::remove_all(dir);
    RunConfig cfg;
    const auto summary = execute("ml", cfg, dir, true);
    CHECK(summary.exit_code == 0);
    CHECK(summary.n_fail == 0);
    CHECK(std::filesystem::exists(dir / "ml_table.csv"));
    CHECK(std::filesystem::exists(dir / "ml_table.dat"));
    CHECK(std::filesystem::exists(dir / "manifest.jsonl"));
    // manifest lines are valid json with verdicts
    std::ifstream in(dir / "manifest.jsonl");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        ++lines;
        if (lines > 1) CHECK(j.contains("verdict"));
    }
    CHECK(lines >= 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("worker pool size does not change the artifacts") {
    RunConfig cfg;
    cfg.alphas = {0.5};
    cfg.gamma_ode = {1.0, 2.0};
    cfg.jobs = 1;
    const auto a = run_ode(cfg);
    cfg.jobs = 3;
    const auto b = run_ode(cfg);
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        CHECK(a.files[i].first == b.files[i].first);
        CHECK(a.files[i].second == b.files[i].second);
    }
}

TEST_CASE("unknown subcommand is rejected") {
    RunConfig cfg;
    CHECK_THROWS_AS(dispatch("nope", cfg), std::invalid_argument);
}
