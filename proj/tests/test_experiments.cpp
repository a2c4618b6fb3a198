#include <doctest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jmgt/experiments.hpp"

using namespace jmgt;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("jmgt_lab_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int lab(const std::string& args) {
  const std::string cmd = std::string(JMGT_LAB_EXE) + " " + args + " --quiet > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_text(double amplitude, double k, const std::string& extra = "") {
  std::ostringstream s;
  s << "[model]\nc2 = 1\ndelta = 0.1\ntau = 0.05\nk = " << k << "\n"
    << "[signal]\namplitude = " << amplitude << "\nomega = 4\npower = 5\ndecay = 1\n"
    << "[discretization]\ndt = 0.01\nT = 1\nn_modes = 8\n"
    << extra;
  return s.str();
}

ExperimentConfig parse(const std::string& text) { return parse_config_text(text); }

}  // namespace

TEST_CASE("csv formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CsvTable t;
  t.header = {"a", "b"};
  t.add_row(std::vector<double>{1.0 / 3.0, -2.0});
  CHECK(t.to_string() == "a,b\n0.33333333333333331,-2\n");
}

TEST_CASE("solve-linear with zero data writes a zero trajectory") {
  TempDir dir("zero");
  spit(dir.path / "c.ini", config_text(0.0, 0.0));
  REQUIRE(lab("solve-linear --config " + (dir.path / "c.ini").string() + " --out " + (dir.path / "out").string()) == 0);
  std::istringstream csv(slurp(dir.path / "out" / "trajectory.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("t,xi_0,", 0) == 0);
  int rows = 0;
  while (std::getline(csv, line)) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    while (std::getline(cells, cell, ',')) CHECK(cell == "0");
    ++rows;
  }
  CHECK(rows == 101);
  CHECK(fs::exists(dir.path / "out" / "energy.csv"));
  CHECK(slurp(dir.path / "out" / "report.csv").find("status,ok") != std::string::npos);
}

TEST_CASE("oversized data exits with a solver failure and reports the violation") {
  TempDir dir("guard");
  spit(dir.path / "c.ini", config_text(40.0, 1.0));
  CHECK(lab("solve-jmgt --config " + (dir.path / "c.ini").string() + " --out " + (dir.path / "out").string()) == 2);
  const std::string report = slurp(dir.path / "out" / "report.csv");
  CHECK(report.find("status,failed") != std::string::npos);
  CHECK(report.find("violation_time,") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "out" / "trajectory.csv"));
}

TEST_CASE("configuration errors exit with status 1") {
  TempDir dir("bad");
  spit(dir.path / "c.ini", config_text(0.1, 1.0, "[experiment]\nvariant = sideways\n"));
  CHECK(lab("solve-jmgt --config " + (dir.path / "c.ini").string() + " --out " + (dir.path / "out").string()) == 1);
  CHECK(lab("solve-jmgt --config " + (dir.path / "missing.ini").string()) == 1);
  CHECK(lab("no-such-subcommand --config x") == 1);
}

TEST_CASE("mms subcommand reports second-order convergence") {
  TempDir dir("mms");
  spit(dir.path / "c.ini", config_text(0.0, 0.0));
  REQUIRE(lab("mms --config " + (dir.path / "c.ini").string() + " --out " + (dir.path / "out").string()) == 0);
  std::istringstream csv(slurp(dir.path / "out" / "report.csv"));
  std::string line, last;
  std::getline(csv, line);
  CHECK(line == "solver,dt,error,observed_order");
  int rows = 0;
  while (std::getline(csv, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 6);
  const double order = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);
}

TEST_CASE("reruns are byte-identical") {
  TempDir dir("determinism");
  spit(dir.path / "c.ini", config_text(0.1, 1.0, "[experiment]\nbc = mixed\n"));
  const std::string cfg = " --config " + (dir.path / "c.ini").string();
  REQUIRE(lab("solve-jmgt" + cfg + " --out " + (dir.path / "a").string()) == 0);
  REQUIRE(lab("solve-jmgt" + cfg + " --out " + (dir.path / "b").string()) == 0);
  for (const char* name : {"trajectory.csv", "energy.csv", "report.csv"}) {
    const std::string a = slurp(dir.path / "a" / name);
    CHECK(!a.empty());
    CHECK(a == slurp(dir.path / "b" / name));
    CHECK(a.find('\r') == std::string::npos);
  }
}

TEST_CASE("limit study with zero data has zero errors") {
  auto cfg = parse(config_text(0.0, 1.0, "[experiment]\ntau_sweep = 1e-1, 1e-2\n"));
  const auto result = limit_study(cfg);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    CHECK(row.e_t == 0.0);
    CHECK(row.e_energy == 0.0);
  }
  CHECK(result.members.size() == 2);
}

TEST_CASE("limit study errors shrink with tau, serial and parallel agree") {
  auto cfg = parse(config_text(0.05, 1.0, "[experiment]\ntau_sweep = 1e-1, 1e-2, 1e-3\n"));
  const auto parallel = limit_study(cfg);
  cfg.parallel = false;
  const auto serial = limit_study(cfg);
  REQUIRE(parallel.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parallel.rows[i].tau == cfg.tau_sweep[i]);
    CHECK(parallel.rows[i].e_t == serial.rows[i].e_t);
    CHECK(parallel.rows[i].margin > 0.5);
    if (i > 0) CHECK(parallel.rows[i].e_t < parallel.rows[i - 1].e_t);
  }
  CHECK_THROWS_AS(limit_study(parse(config_text(0.05, 1.0))), ConfigError);
}

TEST_CASE("energy audit sweep") {
  auto cfg = parse(config_text(0.1, 0.0, "[experiment]\ntau_sweep = 1e-1, 1e-2, 1e-3\n"));
  const auto rows = energy_audit_sweep(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows.front().ratio_relative == 1.0);
  for (const auto& row : rows) {
    CHECK(row.energy_total > 0.0);
    CHECK(row.ratio_relative <= 2.0);
  }
  CHECK_FALSE(rows.back().dependent.tau_robust);
}
