#include "doctest.h"

#include "cli_app.hpp"
#include "cdeg/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cdeg;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("cdeg_cli_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "cdeg");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("list names the bundled scenarios") {
  const Result r = invoke({"list"});
  CHECK(r.code == 0);
  for (const char* name : {"linear_sink_2d", "saddle_2d", "orthant_logistic"}) {
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("verify writes a passing report") {
  TempDir dir("verify");
  const Result r = invoke({"--scenario", "linear_sink_2d", "--command", "verify", "--out", dir.path.string()});
  CHECK(r.code == cli::kPass);
  CHECK(fs::exists(dir.path / "report.json"));
  CHECK(fs::exists(dir.path / "report.csv"));
  CHECK(fs::exists(dir.path / "scenario.json"));
  const json report = json::parse(slurp(dir.path / "report.json"));
  CHECK(report["pass"] == true);
}

TEST_CASE("input errors exit with code 2") {
  TempDir dir("errors");
  write(dir.path / "bad.json", "{\n  \"name\": \"x\",\n  \"operator\": [1, 2,\n}\n");
  Result r = invoke({"--scenario", (dir.path / "bad.json").string(), "--out", dir.path.string()});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("bad.json:4:") != std::string::npos);

  json doc = bundled_scenario("linear_sink_2d");
  doc["sweeps"]["bogus"] = 1;
  write(dir.path / "unknown.json", doc.dump());
  r = invoke({"--scenario", (dir.path / "unknown.json").string(), "--out", dir.path.string()});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("/sweeps") != std::string::npos);
  CHECK(r.err.find("bogus") != std::string::npos);

  r = invoke({"--scenario", "no_such_scenario", "--out", dir.path.string()});
  CHECK(r.code == cli::kInputError);
  r = invoke({"--scenario", "linear_sink_2d", "--command", "dance", "--out", dir.path.string()});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("inconclusive degree exits with code 3 and a partial certificate") {
  TempDir dir("adv");
  const Result r = invoke({"--scenario", "adversarial_drift_1d", "--command", "degree", "--out", dir.path.string()});
  CHECK(r.code == cli::kInconclusive);
  REQUIRE(fs::exists(dir.path / "certificate.json"));
  const json cert = json::parse(slurp(dir.path / "certificate.json"));
  CHECK(cert["stability"].size() == 3);
}

TEST_CASE("canonicalization is idempotent on every bundled scenario") {
  for (const auto& name : bundled_scenario_names()) {
    CAPTURE(name);
    const json once = canonicalize(bundled_scenario(name));
    CHECK(canonicalize(once) == once);
    CHECK(canonicalize(json::parse(once.dump())) == once);
  }
}

TEST_CASE("outputs are byte-identical for a fixed seed") {
  TempDir a("det_a"), b("det_b");
  for (const auto* d : {&a, &b}) {
    const Result r = invoke({"--scenario", "interval_sink_1d", "--seed", "5", "--out", d->path.string()});
    CHECK(r.code == cli::kPass);
  }
  CHECK(slurp(a.path / "report.csv") == slurp(b.path / "report.csv"));
  CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));
  CHECK(json::parse(slurp(a.path / "scenario.json"))["seeds"][0] == 5);
}

TEST_CASE("overrides reach the scenario") {
  TempDir dir("set");
  Result r = invoke({"--scenario", "linear_sink_2d", "--set", "sweeps.t=[0.2,0.1,0.05]", "--set", "name=renamed", "--out",
                     dir.path.string()});
  CHECK(r.code == cli::kPass);
  const json canon = json::parse(slurp(dir.path / "scenario.json"));
  CHECK(canon["sweeps"]["t"].size() == 3);
  CHECK(canon["name"] == "renamed");

  // an operator with growth constant 2 violates the harness precondition
  r = invoke({"--scenario", "linear_sink_2d", "--set", "operator.growth.M=2", "--out", dir.path.string()});
  CHECK(r.code == cli::kInputError);
}

TEST_CASE("simulate, funnel and scan commands") {
  TempDir dir("cmds");
  CHECK(invoke({"--scenario", "orthant_logistic", "--command", "simulate", "--out", dir.path.string()}).code == 0);
  const std::string traj = slurp(dir.path / "trajectory.csv");
  CHECK(traj.rfind("t,", 0) == 0);
  CHECK(invoke({"--scenario", "interval_sink_1d", "--command", "funnel", "--out", dir.path.string()}).code == 0);
  CHECK(slurp(dir.path / "funnel.csv").rfind("strategy,t,u_1", 0) == 0);
  CHECK(invoke({"--scenario", "linear_sink_2d", "--command", "scan", "--out", dir.path.string()}).code == 0);
  CHECK(fs::exists(dir.path / "exclusion.json"));
  CHECK(slurp(dir.path / "exclusion.csv").rfind("t,floor,z", 0) == 0);
}
