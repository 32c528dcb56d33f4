// End-to-end checks of the command-line binary: spawns the real executable
// (path injected at compile time) and inspects bytes and exit codes.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using json = nlohmann::json;

namespace {

const char* kFig = "(1,0);(0,1);(-1,0);(1,-1);(-1,-1);(-2,-1)";

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(QWALK_CLI_PATH) + " " + args;
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

TEST_CASE("analyze reports the pinned model constants as JSON") {
  const RunResult r = run("analyze --steps " + q(kFig) + " --format json 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["alpha"].get<double>() == doctest::Approx(1.2647584795).epsilon(1e-8));
  CHECK(j["beta"].get<double>() == doctest::Approx(1.6372458840).epsilon(1e-8));
  CHECK(j["rho_inv"].get<double>() == doctest::Approx(5.3299150393).epsilon(1e-8));
  CHECK(j["theta_star"].get<double>() == doctest::Approx(0.4446042).epsilon(1e-6));
  CHECK(j["m"].get<double>() == doctest::Approx(0.476417441).epsilon(1e-7));
  CHECK(j["slope_kind"] == "irrational");
  CHECK(j["p"].is_null());
  CHECK(j["q"].is_null());
  CHECK(j["r_variant_A"].get<double>() == doctest::Approx(2.858721).epsilon(1e-5));
  CHECK(j["r_variant_B"].get<double>() == doctest::Approx(3.164523).epsilon(1e-5));
  CHECK(j["classification"]["reluctant"] == true);
  CHECK(j["classification"]["singular"] == false);
  CHECK(j["classification"]["drift"][0] == -2);
  CHECK(j["predicted_trial_exponent"].get<double>() == doctest::Approx(1.35872).epsilon(1e-4));
}

TEST_CASE("analyze handles rational and singular models") {
  const RunResult r =
      run("analyze --steps \"(1,1);(-1,0);(0,-1);(-1,-1)\" --format json 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["slope_kind"] == "rational");
  CHECK(j["p"] == 1);
  CHECK(j["q"] == 1);

  const RunResult s = run("analyze --steps \"(0,1);(1,1)\" --format json 2>/dev/null");
  REQUIRE(s.exit_code == 0);
  const json js = json::parse(s.out);
  CHECK(js["alpha"].is_null());
  CHECK(js["rho_inv"].is_null());
  CHECK(js["slope_kind"] == "boundary");
  CHECK(js["classification"]["singular"] == true);
}

TEST_CASE("count emits the documented file format") {
  const RunResult r = run("count --steps " + q(kFig) + " -n 10 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == std::string("# qwalk-counts v1 steps=") + kFig + " endpoint=any");
  std::vector<long> vals;
  while (std::getline(in, line)) vals.push_back(std::stol(line));
  CHECK(vals == std::vector<long>{1, 2, 6, 21, 79, 314, 1292, 5477, 23748, 104787, 469488});
}

TEST_CASE("count honors the endpoint constraint") {
  const RunResult r =
      run("count --steps \"(1,0);(0,1);(-1,0);(0,-1)\" -n 2 --endpoint origin 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("endpoint=origin") != std::string::npos);
  CHECK(r.out.substr(r.out.find('\n') + 1) == "1\n0\n2\n");
}

TEST_CASE("sampling is byte-reproducible, also across batch widths and auto") {
  const std::string base = "sample --steps " + q(kFig) + " -n 40 -k 5 --seed 7 ";
  const RunResult a = run(base + "--method rejection 2>/dev/null");
  const RunResult b = run(base + "--method rejection 2>/dev/null");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const RunResult c = run(base + "--method rejection --parallel 3 2>/dev/null");
  CHECK(a.out == c.out);

  const RunResult rec = run(base + "--method recursive 2>/dev/null");
  const RunResult aut = run(base + "--method auto 2>/dev/null");
  REQUIRE(rec.exit_code == 0);
  CHECK(rec.out == aut.out);  // auto selects recursive at this size
  CHECK(rec.out != a.out);    // different method, different (valid) walks
}

TEST_CASE("sample JSON carries walks, positions and trial stats") {
  const RunResult r = run("sample --steps " + q(kFig) +
                          " -n 12 -k 2 --seed 3 --method rejection --format json 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["method"] == "rejection");
  CHECK(j["slope"]["p"] == 1);
  CHECK(j["slope"]["q"] == 2);
  CHECK(j["trial_stats"]["trials"].get<long long>() >= 2);
  CHECK(j["trial_stats"].contains("predicted_trial_exponent"));
  CHECK_FALSE(j["trial_stats"].contains("elapsed_seconds"));  // timing is opt-in
  REQUIRE(j["walks"].size() == 2);
  for (const auto& w : j["walks"]) {
    CHECK(w["steps"].size() == 12);
    REQUIRE(w["positions"].size() == 13);
    CHECK(w["positions"][0][0] == 0);
    CHECK(w["positions"][0][1] == 0);
    for (const auto& p : w["positions"]) {
      CHECK(p[0].get<long long>() >= 0);
      CHECK(p[1].get<long long>() >= 0);
    }
  }
}

TEST_CASE("sampled text walks respect the endpoint flag") {
  const RunResult r = run("sample --steps " + q(kFig) +
                          " -n 12 -k 4 --seed 9 --endpoint origin --method rejection 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    long long x = 0, y = 0;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto comma = item.find(',');
      x += std::stoll(item.substr(0, comma));
      y += std::stoll(item.substr(comma + 1));
    }
    CHECK(x == 0);
    CHECK(y == 0);
  }
  CHECK(lines == 4);
}

TEST_CASE("grammar subcommand prints rules and validates") {
  const RunResult r = run("grammar --steps " + q(kFig) + " --slope-override 1/2 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("P -> D Paux") != std::string::npos);
  CHECK(r.out.find("validation: ok") != std::string::npos);
  const RunResult j = run("grammar --steps " + q(kFig) +
                          " --slope-override 1/2 --format json 2>/dev/null");
  REQUIRE(j.exit_code == 0);
  const json g = json::parse(j.out);
  CHECK(g["slope"]["p"] == 1);
  CHECK(g["a_bar"] == 2);
  CHECK(g["b_bar"] == 4);
  CHECK(g["terminals"].size() == 6);
  CHECK(g["rules"].size() == 9);
  CHECK(g["validation_issues"].empty());
}

TEST_CASE("render draws the documented polyline") {
  const std::string walk_file = "/tmp/qwalk_test_walk.txt";
  {
    std::ofstream f(walk_file);
    f << "1,0;0,1\n";
  }
  const RunResult r = run("render --input " + walk_file + " 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("<?xml", 0) == 0);
  CHECK(r.out.find("<svg xmlns") != std::string::npos);
  CHECK(r.out.find("points=\"0,0 1,0 1,1\"") != std::string::npos);
  CHECK(r.out.find("viewBox=") != std::string::npos);

  {
    std::ofstream f(walk_file);
    f << "\n";
  }
  const RunResult empty = run("render --input " + walk_file + " 2>/dev/null");
  REQUIRE(empty.exit_code == 0);
  CHECK(empty.out.find("<polyline") == std::string::npos);  // axes only
  CHECK(empty.out.find("<line") != std::string::npos);

  {
    std::ofstream f(walk_file);
    f << "1,0;garbage\n";
  }
  CHECK(run("render --input " + walk_file + " 2>/dev/null").exit_code == 2);
}

TEST_CASE("sample --format svg renders the first walk") {
  const RunResult r = run("sample --steps " + q(kFig) +
                          " -n 15 --seed 2 --format svg 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("<?xml", 0) == 0);
  CHECK(r.out.find("<polyline") != std::string::npos);
  CHECK(r.out.find("stroke-width") != std::string::npos);
}

TEST_CASE("output file flag") {
  const std::string out_file = "/tmp/qwalk_test_out.txt";
  std::remove(out_file.c_str());
  const RunResult r = run("count --steps \"(1,0);(-1,0)\" -n 4 -o " + out_file + " 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream f(out_file);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("1\n1\n2\n3\n6\n") != std::string::npos);
}

TEST_CASE("cache file is created, reused, and validated") {
  const std::string cache = "/tmp/qwalk_test_cache.tbl";
  std::remove(cache.c_str());
  const std::string base = "sample --steps " + q(kFig) +
                           " -n 30 --seed 11 --method recursive --cache " + cache;
  const RunResult a = run(base + " 2>/dev/null");
  REQUIRE(a.exit_code == 0);
  std::ifstream probe(cache);
  CHECK(probe.good());
  const RunResult b = run(base + " 2>/dev/null");
  CHECK(a.out == b.out);
  // Same cache file, different step set: refused.
  const RunResult c = run("sample --steps \"(1,0);(-1,0)\" -n 30 --seed 11"
                          " --method recursive --cache " + cache + " 2>/dev/null");
  CHECK(c.exit_code == 2);
}

TEST_CASE("exit codes follow the contract") {
  CHECK(run("count --steps \"bogus\" -n 3 2>/dev/null").exit_code == 2);
  CHECK(run("count -n 3 2>/dev/null").exit_code == 2);               // missing --steps
  CHECK(run("sample --steps \"(1,0);(-1,0)\" 2>/dev/null").exit_code == 2);  // missing -n
  CHECK(run("frobnicate 2>/dev/null").exit_code == 2);               // unknown command
  CHECK(run("sample --steps " + q(kFig) + " -n 5 --delta-policy fixed:oops 2>/dev/null")
            .exit_code == 2);
  CHECK(run("sample --steps " + q(kFig) + " -n 5 --slope-override 1:2 2>/dev/null")
            .exit_code == 2);
  CHECK(run("--help >/dev/null 2>&1").exit_code == 0);
  // Trivial model: no walk of length 3 exists.
  CHECK(run("sample --steps \"(-1,0);(0,-1)\" -n 3 --method rejection 2>/dev/null")
            .exit_code == 2);
  // Resource exits: an explicit recursive request beyond the budget, and an
  // exhausted trial cap.
  CHECK(run("sample --steps " + q(kFig) +
            " -n 300 --method recursive --mem-budget 10000 2>/dev/null")
            .exit_code == 3);
  CHECK(run("sample --steps " + q(kFig) +
            " -n 25 --endpoint origin --trial-cap 1 --seed 0 2>/dev/null")
            .exit_code == 3);
}

TEST_CASE("auto method falls back to rejection when the budget is tight") {
  const RunResult r = run("sample --steps " + q(kFig) +
                          " -n 60 --seed 4 --method auto --mem-budget 100000 2>/dev/null");
  REQUIRE(r.exit_code == 0);
  const RunResult rej = run("sample --steps " + q(kFig) +
                            " -n 60 --seed 4 --method rejection 2>/dev/null");
  CHECK(r.out == rej.out);
}

TEST_CASE("self-test gates") {
  CHECK(run("selftest >/dev/null 2>&1").exit_code == 0);
  CHECK(run("selftest --inject grammar-drop >/dev/null 2>&1").exit_code == 1);
  CHECK(run("selftest --inject grammar-weight >/dev/null 2>&1").exit_code == 1);
}
