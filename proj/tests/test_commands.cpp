#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "ecogame/commands.hpp"
#include "ecogame/config.hpp"
#include "ecogame/report.hpp"

using namespace ecogame;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("ecogame_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("number formatting keeps 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("simulate writes csv and json") {
  TempDir dir;
  std::ostringstream log;
  Scenario sc = hawk_dove_scenario();

  SUBCASE("low opinion start settles on the balance mix") {
    const int code = run_simulate(
        sc, {dir / "t.csv", dir / "t.json", dir / "t.svg"}, log);
    REQUIRE(code == kExitOk);
    const auto lines = read_lines(dir / "t.csv");
    REQUIRE(lines.size() > 2);
    CHECK(lines.front() == kTrajectoryCsvHeader);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      CHECK(split(lines[i]).size() == 9);
    }
    const auto last = split(lines.back());
    CHECK(std::abs(std::stod(last[1]) - 0.33) <= 0.01);

    const nlohmann::json j = read_json(dir / "t.json");
    for (const char* key : {"terminal", "converged", "t_converged",
                            "nearest_fixed_point", "residual"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["converged"] == true);
    CHECK(j["nearest_fixed_point"]["within_label_radius"] == true);
    CHECK(j["terminal"]["x"].get<double>() == std::stod(last[1]));

    std::ifstream svg(dir / "t.svg");
    std::string text((std::istreambuf_iterator<char>(svg)), {});
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("width=\"800\"") != std::string::npos);
  }

  SUBCASE("prisoner's dilemma replenishes the environment") {
    REQUIRE(run_simulate(prisoners_dilemma_scenario(), {dir / "pd.csv"},
                         log) == kExitOk);
    const auto last = split(read_lines(dir / "pd.csv").back());
    CHECK(std::abs(std::stod(last[2]) - 1.0) <= 0.01);
  }

  SUBCASE("a corner start produces constant rows") {
    // Nonnegative payoffs leave every corner stationary.
    sc = prisoners_dilemma_scenario();
    sc.initial = {1, 0, 1};
    sc.settings.t_max = 2.0;
    sc.settings.hold_time = 10.0;
    REQUIRE(run_simulate(sc, {dir / "c.csv"}, log) == kExitOk);
    const auto lines = read_lines(dir / "c.csv");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cells = split(lines[i]);
      CHECK(cells[1] == "1");
      CHECK(cells[2] == "0");
      CHECK(cells[3] == "1");
    }
  }

  SUBCASE("a failed run keeps the partial trajectory") {
    sc.settings.dt = 3.0;
    sc.settings.t_max = 300.0;
    const int code = run_simulate(sc, {dir / "f.csv", dir / "f.json"}, log);
    CHECK(code == kExitSimulation);
    const auto lines = read_lines(dir / "f.csv");
    REQUIRE(lines.size() >= 3);
    CHECK(lines.front() == kTrajectoryCsvHeader);
    CHECK(lines.back().rfind("# truncated", 0) == 0);
    CHECK(read_json(dir / "f.json").contains("error"));
    CHECK(log.str().find("reduce dt") != std::string::npos);
  }

  SUBCASE("an unwritable destination is an error") {
    const int code =
        run_simulate(sc, {dir / "missing" / "sub" / "t.csv"}, log);
    CHECK(code != kExitOk);
  }
}

TEST_CASE("sweep output") {
  TempDir dir;
  std::ostringstream log;

  SUBCASE("single cell grid") {
    Scenario sc = hawk_dove_scenario();
    REQUIRE(run_sweep(sc, Axis::kY0, parse_grid("0.7:1:1"), {dir / "s.csv"},
                      log) == kExitOk);
    const auto lines = read_lines(dir / "s.csv");
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "y0,x,n,y,label,converged,status");
    CHECK(lines[1].rfind("0.69999999999999996,", 0) == 0);
  }

  SUBCASE("prisoner's dilemma sweep matches direct simulation") {
    const Scenario sc = prisoners_dilemma_scenario();
    REQUIRE(run_sweep(sc, Axis::kY0, parse_grid("0:1:11"),
                      {dir / "pd.csv", dir / "pd.json"}, log, 2) == kExitOk);
    const nlohmann::json j = read_json(dir / "pd.json");
    REQUIRE(j["cells"].size() == 11);
    for (const int k : {0, 4, 10}) {
      const Trajectory direct =
          simulate(with_initial(sc, Axis::kY0, k / 10.0));
      const auto& cell = j["cells"][k];
      CHECK(cell["terminal"]["x"].get<double>() == direct.terminal.x);
      CHECK(cell["terminal"]["n"].get<double>() == direct.terminal.n);
      CHECK(cell["terminal"]["y"].get<double>() == direct.terminal.y);
      CHECK(cell["converged"].get<bool>() == direct.converged);
    }
    CHECK(read_lines(dir / "pd.csv").size() == 12);
  }

  SUBCASE("hawk-dove sweep bisects its single switch") {
    const Scenario sc = hawk_dove_scenario();
    REQUIRE(run_sweep(sc, Axis::kY0, parse_grid("0:1:11"),
                      {dir / "hd.csv", dir / "hd.json"}, log) == kExitOk);
    const nlohmann::json j = read_json(dir / "hd.json");
    CHECK(j["label_switches"] == 1);
    REQUIRE(j["boundary"].is_number());
    const double lo = j["boundary_bracket"][0];
    const double hi = j["boundary_bracket"][1];
    CHECK(hi - lo < 1e-4);
  }
}

TEST_CASE("fixed-points command writes an array of records") {
  TempDir dir;
  std::ostringstream log;
  ModelParams zero_trust = hawk_dove_scenario().model;
  zero_trust.trust = {};
  Scenario sc = hawk_dove_scenario();
  sc.model = zero_trust;
  REQUIRE(run_fixed_points(sc, dir / "fp.json", log) == kExitOk);
  const nlohmann::json j = read_json(dir / "fp.json");
  REQUIRE(j.is_array());
  CHECK(j.size() == find_fixed_points(zero_trust).size());
  for (const auto& rec : j) {
    CHECK(rec.contains("x"));
    CHECK(rec.contains("residual"));
    CHECK(rec.contains("kind"));
    CHECK(rec["residual"].get<double>() < kFixedPointResidual);
  }
}

TEST_CASE("preset command reproduces the shipped file") {
  TempDir dir;
  std::ostringstream log;
  REQUIRE(run_preset("prisoners-dilemma", dir / "pd.cfg", log) == kExitOk);
  CHECK(load_config(dir / "pd.cfg") == prisoners_dilemma_scenario());
  CHECK_THROWS(run_preset("chicken", dir / "x.cfg", log));
}

TEST_CASE("grid specs") {
  const GridSpec g = parse_grid("0:1:21");
  CHECK(g.count == 21);
  const auto v = g.values();
  REQUIRE(v.size() == 21);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 1.0);
  CHECK(v[10] == doctest::Approx(0.5));
  CHECK(parse_grid("0.2:0.4:1").values() == std::vector<double>{0.2});

  CHECK_THROWS(parse_grid("0:1"));
  CHECK_THROWS(parse_grid("0:1:2:3"));
  CHECK_THROWS(parse_grid("1:0:5"));
  CHECK_THROWS(parse_grid("0:1.5:5"));
  CHECK_THROWS(parse_grid("0:1:0"));
  CHECK_THROWS(parse_grid("0:1:2.5"));
  CHECK_THROWS(parse_grid("a:1:3"));
}
