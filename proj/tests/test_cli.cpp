#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli_harness.hpp"

using namespace cli_harness;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kExampleRun =
    "simulate --family e3 --m 1.75 --eps 0.01 --c1 -1.75 --c2 -2 --q 0.65 --h 0.01 --steps 500 "
    "--mode literal";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

}  // namespace

TEST_CASE("simulate from the origin emits a constant-zero CSV") {
    const auto dir = fresh_dir("zero");
    const Result r = run_cli("simulate --x0 0,0,0 --c1 -1 --c2 -1 --q 0.5 --h 0.1 --steps 10", dir);
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "j,t,x1,x2,x3");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        CHECK(lines[i].substr(lines[i].size() - 6) == ",0,0,0");
    }
}

TEST_CASE("pinned decay run matches the golden CSV and reruns from its manifest") {
    const auto dir = fresh_dir("golden");
    const Result r = run_cli(kExampleRun + " --out traj.csv", dir);
    REQUIRE(r.code == 0);

    const std::string produced = read_file(dir / "traj.csv");
    const std::string golden = read_file(std::filesystem::path(GOLDEN_DIR) / "decay_run_q065.csv");
    REQUIRE_FALSE(golden.empty());
    CHECK(produced == golden);
    CHECK(count_lines(produced) == 502);

    REQUIRE(std::filesystem::exists(dir / "traj.csv.manifest.json"));
    const nlohmann::json man = nlohmann::json::parse(read_file(dir / "traj.csv.manifest.json"));
    CHECK(man.at("command") == "simulate");
    CHECK(man.at("params").at("q") == "0.65000000000000002");
    CHECK(man.at("outputs")[0] == "traj.csv");

    // Wipe the data file; the manifest alone must reproduce it byte for byte.
    std::filesystem::remove(dir / "traj.csv");
    const Result rerun = run_cli("--from-manifest traj.csv.manifest.json", dir);
    REQUIRE(rerun.code == 0);
    CHECK(read_file(dir / "traj.csv") == golden);
}

TEST_CASE("same command twice produces byte-identical files") {
    const auto dir = fresh_dir("deterministic");
    REQUIRE(run_cli(kExampleRun + " --out a.csv", dir).code == 0);
    REQUIRE(run_cli(kExampleRun + " --out b.csv", dir).code == 0);
    const std::string a = read_file(dir / "a.csv");
    CHECK_FALSE(a.empty());
    CHECK(a == read_file(dir / "b.csv"));
}

TEST_CASE("usage errors exit with code 2") {
    const auto dir = fresh_dir("usage");
    CHECK(run_cli("", dir).code == 2);
    CHECK(run_cli("simulate --x0 0,0,0 --q 0.5 --bogus 1", dir).code == 2);
    CHECK(run_cli("simulate --x0 0,0,0", dir).code == 2);              // missing --q
    CHECK(run_cli("simulate --q 0.5", dir).code == 2);                 // no initial state
    CHECK(run_cli("simulate --q 1.5 --x0 0,0,0", dir).code == 2);      // order out of range
    CHECK(run_cli("simulate --q 0.5 --family e9 --m 1", dir).code == 2);
    CHECK(run_cli("simulate --q 0.5 --x0 0,0,0 --family e1 --m 1", dir).code == 2);
    CHECK(run_cli("simulate --q 0.5 --x0 0,0,0 --mode anchored", dir).code == 2);
    CHECK(run_cli("simulate --q 0.5 --x0 0,0 --h 0.1", dir).code == 2);
    CHECK(run_cli("stability --family e1 --m 1 --c1 -1 --c2 -1", dir).code == 2);  // missing --q
    CHECK(run_cli("existence --x0 0,0,0 --delta 0", dir).code == 2);
    CHECK(run_cli("gamma -1", dir).code == 2);
    CHECK(run_cli("sweep --family e0 --c1 -1 --c2 -1 --q 0.5 --m-min 0 --m-max 1", dir).code == 2);
}

TEST_CASE("help exits cleanly") {
    const auto dir = fresh_dir("help");
    CHECK(run_cli("--help", dir).code == 0);
    CHECK(run_cli("simulate --help", dir).code == 0);
    const Result version = run_cli("--version", dir);
    CHECK(version.code == 0);
    CHECK_THAT(version.out, ContainsSubstring("0.1.0"));
}

TEST_CASE("divergent run exits 3 and keeps the partial trajectory") {
    const auto dir = fresh_dir("diverge");
    const Result r =
        run_cli("simulate --x0 5,5,5 --c1 5 --c2 5 --q 1 --h 0.5 --steps 100 --out div.csv", dir);
    CHECK(r.code == 3);
    CHECK_THAT(r.err, ContainsSubstring("diverged"));
    REQUIRE(std::filesystem::exists(dir / "div.csv"));
    const std::size_t lines = count_lines(read_file(dir / "div.csv"));
    CHECK(lines >= 2);
    CHECK(lines < 102);
    CHECK(std::filesystem::exists(dir / "div.csv.manifest.json"));
}

TEST_CASE("stability report JSON has the contract keys and verdicts") {
    const auto dir = fresh_dir("stability");
    const Result r = run_cli(
        "stability --family e3 --m 1.75 --c1 -1.75 --c2 -2 --q 0.65 --format json", dir);
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    for (const char* key : {"equilibrium", "residual", "eigenvalues_closed_form",
                            "eigenvalues_cubic", "margins", "verdict", "stability_interval_m"}) {
        CHECK(j.contains(key));
    }
    CHECK(j.at("verdict") == "asymptotically_stable");
    CHECK_THAT(j.at("stability_interval_m").at("hi").get<double>(), WithinAbs(1.8708, 1e-3));
    CHECK_THAT(j.at("residual_literal").get<double>(), WithinAbs(3.5, 1e-12));

    const Result zero =
        run_cli("stability --family e1 --m 0 --c1 0 --c2 0 --q 0.5 --format json", dir);
    REQUIRE(zero.code == 0);
    CHECK(nlohmann::json::parse(zero.out).at("verdict") == "not_asymptotically_stable");

    const Result text = run_cli("stability --family e3 --m 1.75 --c1 -1.75 --c2 -2 --q 0.65", dir);
    REQUIRE(text.code == 0);
    CHECK_THAT(text.out, ContainsSubstring("asymptotically_stable"));
}

TEST_CASE("reference table matches the golden rendering") {
    const auto dir = fresh_dir("table");
    const Result r = run_cli("table --out table.txt", dir);
    REQUIRE(r.code == 0);
    const std::string golden = read_file(std::filesystem::path(GOLDEN_DIR) / "reference_table.txt");
    REQUIRE_FALSE(golden.empty());
    CHECK(read_file(dir / "table.txt") == golden);

    const Result json_run = run_cli("table --format json", dir);
    REQUIRE(json_run.code == 0);
    const nlohmann::json rows = nlohmann::json::parse(json_run.out);
    REQUIRE(rows.size() == 4);
    const char* expected[4] = {"stable", "stable", "unstable", "stable"};
    for (int i = 0; i < 4; ++i) {
        CHECK(rows[i].at("verdict") == expected[i]);
        CHECK(rows[i].at("verdict") == rows[i].at("published_verdict"));
    }
}

TEST_CASE("gamma probe prints the function value") {
    const auto dir = fresh_dir("gamma");
    const Result r = run_cli("gamma 1.65", dir);
    REQUIRE(r.code == 0);
    CHECK_THAT(std::strtod(r.out.c_str(), nullptr), WithinAbs(0.90011681631723150185, 1e-12));
}

TEST_CASE("sweep localizes the stability boundary") {
    const auto dir = fresh_dir("sweep");
    const Result r = run_cli(
        "sweep --family e2 --c1 -7.2 --c2 -0.2 --q 0.5 --m-min 0 --m-max 2 --count 201", dir);
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] == "m,lambda1,lambda2,lambda3,verdict");

    double transition_m = -1.0;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        const bool a = lines[i].find("asymptotically_stable") != std::string::npos &&
                       lines[i].find("not_") == std::string::npos;
        const bool b = lines[i + 1].find("asymptotically_stable") != std::string::npos &&
                       lines[i + 1].find("not_") == std::string::npos;
        if (a != b) {
            transition_m = std::strtod(lines[i].c_str(), nullptr);
        }
    }
    CHECK(transition_m >= 1.19 - 1e-12);
    CHECK(transition_m <= 1.21 + 1e-12);
}

TEST_CASE("config file mirrors flags and flags win") {
    const auto dir = fresh_dir("config");
    write_file(dir / "run.cfg",
               "q=0.65\nc1=-1.75\nc2=-2\nfamily=e3\nm=1.75\neps=0.01\nh=0.01\nsteps=500\n"
               "mode=literal\n");
    const Result from_cfg = run_cli("simulate --config run.cfg --out cfg.csv", dir);
    REQUIRE(from_cfg.code == 0);
    const Result from_flags = run_cli(kExampleRun + " --out flags.csv", dir);
    REQUIRE(from_flags.code == 0);
    CHECK(read_file(dir / "cfg.csv") == read_file(dir / "flags.csv"));

    const Result overridden = run_cli("simulate --config run.cfg --steps 3", dir);
    REQUIRE(overridden.code == 0);
    CHECK(count_lines(overridden.out) == 5);  // header + 4 samples
}

TEST_CASE("per-component perturbation overrides the scalar one") {
    const auto dir = fresh_dir("epsc");
    const Result r = run_cli(
        "simulate --family e1 --m 2 --eps 0.5 --eps-components 0.1,0,0 --q 1 --h 0.1 --steps 1",
        dir);
    REQUIRE(r.code == 0);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(lines.size() >= 2);
    const std::string& first = lines[1];
    // Fields: j,t,x1,x2,x3 for the initial sample.
    double x1 = 0.0, x2 = -1.0, x3 = -1.0;
    REQUIRE(std::sscanf(first.c_str(), "%*d,%*f,%lf,%lf,%lf", &x1, &x2, &x3) == 3);
    CHECK_THAT(x1, WithinAbs(2.1, 1e-15));
    CHECK(x2 == 0.0);
    CHECK(x3 == 0.0);
}

TEST_CASE("simulate emits JSON when asked") {
    const auto dir = fresh_dir("simjson");
    const Result r =
        run_cli("simulate --x0 0.1,0.2,0.3 --q 0.65 --h 0.1 --steps 5 --format json", dir);
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("samples").size() == 6);
    CHECK(j.at("q") == 0.65);
}

TEST_CASE("svg output goes to its own file and is listed in the manifest") {
    const auto dir = fresh_dir("svg");
    const Result r = run_cli(
        "simulate --family e3 --m 1.75 --eps 0.01 --c1 -1.75 --c2 -2 --q 0.65 --h 0.01 "
        "--steps 50 --mode literal --out t.csv --svg t.svg",
        dir);
    REQUIRE(r.code == 0);
    const std::string svg = read_file(dir / "t.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    const nlohmann::json man = nlohmann::json::parse(read_file(dir / "t.csv.manifest.json"));
    REQUIRE(man.at("outputs").size() == 2);
    CHECK(man.at("outputs")[1] == "t.svg");
}

TEST_CASE("existence report prints the bound") {
    const auto dir = fresh_dir("exist");
    const Result r = run_cli("existence --x0 0,0,0 --delta 1 --format json", dir);
    REQUIRE(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK_THAT(j.at("lipschitz_bound").get<double>(), WithinAbs(4.4142135623730950488, 1e-12));

    const Result text = run_cli("existence --x0 1,0,0 --delta 0.5", dir);
    REQUIRE(text.code == 0);
    CHECK_THAT(text.out, ContainsSubstring("5.4142135623730"));
}
