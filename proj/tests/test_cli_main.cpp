// Exercises the built command-line binary end to end: exit codes, output
// files, and rerun stability of the summaries.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const fs::path kTmp = OMPLI_TEST_TMPDIR;

int run_tool(const std::string& args) {
  const std::string cmd = std::string(OMPLI_TOOL_PATH) + " " + args +
                          " > " + (kTmp / "stdout.txt").string() + " 2> " +
                          (kTmp / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load_without_timing(const fs::path& p) {
  Json j = Json::parse(slurp(p));
  j.erase("timing");
  return j;
}

struct TmpDirs {
  TmpDirs() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
};
const TmpDirs kSetup{};

}  // namespace

TEST_CASE("run: Monte Carlo summary, reruns byte-stable modulo timing") {
  const std::string common =
      "run --case 1 --trials 2 --rollouts 10 --seed 3 --out ";
  REQUIRE(run_tool(common + (kTmp / "a").string()) == 0);
  REQUIRE(run_tool(common + (kTmp / "b").string()) == 0);

  const Json a = load_without_timing(kTmp / "a" / "summary.json");
  const Json b = load_without_timing(kTmp / "b" / "summary.json");
  CHECK(a.dump() == b.dump());
  CHECK(a["results"].contains("rate_percent"));
  CHECK(a["results"]["trials"] == 2);
  // The summary embeds the fully resolved configuration.
  CHECK(a["config"]["mppi"]["rollouts"] == 10);
  CHECK(a["config"]["seed"] == 3);
}

TEST_CASE("run --trace: identical episodes produce identical trace bytes") {
  const std::string cmd = "run --case 1 --rollouts 10 --seed 5 --trace ";
  REQUIRE(run_tool(cmd + (kTmp / "t1.csv").string() + " --out " +
                   (kTmp / "t1").string()) == 0);
  REQUIRE(run_tool(cmd + (kTmp / "t2.csv").string() + " --out " +
                   (kTmp / "t2").string()) == 0);
  const std::string t1 = slurp(kTmp / "t1.csv");
  const std::string t2 = slurp(kTmp / "t2.csv");
  CHECK(!t1.empty());
  CHECK(t1 == t2);
  CHECK(t1.rfind("t,x,y,theta,v,omega,v_des,omega_des,step_cost", 0) == 0);
}

TEST_CASE("run: malformed config file fails with a field diagnostic") {
  const fs::path bad = kTmp / "bad.json";
  std::ofstream(bad) << R"({"dynamics": {"dt": -1}})";
  CHECK(run_tool("run --config " + bad.string()) != 0);
  CHECK(slurp(kTmp / "stderr.txt").find("dynamics.dt") != std::string::npos);

  CHECK(run_tool("run --case 1 --config " + bad.string()) != 0);
  CHECK(run_tool("run --case 9") != 0);
}

TEST_CASE("table: one row per sweep cell") {
  REQUIRE(run_tool("table --case 2 --horizon 2,4 --rollouts 5,10 --trials 1 "
                   "--seed 1 --out " +
                   (kTmp / "tab").string()) == 0);
  const Json t = Json::parse(slurp(kTmp / "tab" / "table.json"));
  REQUIRE(t["rows"].size() == 4);
  CHECK(t["rows"][0]["horizon_s"] == 2.0);
  CHECK(t["rows"][0]["rollouts"] == 5);
  CHECK(t["rows"][3]["horizon_s"] == 4.0);
  CHECK(t["rows"][3]["rollouts"] == 10);

  CHECK(run_tool("table --case 2 --rollouts 5 --trials 1") != 0);  // no horizons
}

TEST_CASE("explore: per-rate areas, invalid rate rejected") {
  REQUIRE(run_tool("explore --rate 25,50 --rollouts 100 --seed 2 --out " +
                   (kTmp / "exp").string()) == 0);
  const Json e = Json::parse(slurp(kTmp / "exp" / "explore.json"));
  REQUIRE(e["areas_cm2"].size() == 2);
  CHECK(double(e["areas_cm2"][0]) > double(e["areas_cm2"][1]));

  CHECK(run_tool("explore --rate 0 --rollouts 10") != 0);
  CHECK(run_tool("explore --rollouts 10") != 0);  // empty rate list
}
