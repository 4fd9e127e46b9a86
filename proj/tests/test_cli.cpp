#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path log = fs::temp_directory_path() / ("bandcov_cli_" + std::to_string(counter++) + ".log");
  std::string cmd = std::string(BANDCOV_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  int raw = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  fs::remove(log);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli: moments table") {
  RunResult r = run_cli("moments --lmax 3 --gamma 0.5 --exact");
  CHECK(r.code == 0);
  CHECK(r.out.find("19/4") != std::string::npos);  // third moment at gamma = 1/2
  CHECK(r.out.find("1;6;3") != std::string::npos);

  // same table addressed through the doubled ratio
  RunResult ry = run_cli("moments --lmax 3 --y 1 --exact");
  CHECK(ry.code == 0);
  CHECK(ry.out.find("19/4") != std::string::npos);

  // decimal ratios with leading zeros must not be read as octal
  RunResult rq = run_cli("moments --lmax 2 --gamma 0.25 --exact");
  CHECK(rq.code == 0);
  CHECK(rq.out.find("3/2") != std::string::npos);
  RunResult r8 = run_cli("moments --lmax 2 --gamma 0.08 --exact");
  CHECK(r8.code == 0);
  CHECK(r8.out.find("29/25") != std::string::npos);  // 1 + 2*(2/25)

  CHECK(run_cli("moments --lmax 3").code == 2);                    // no ratio given
  CHECK(run_cli("moments --lmax 3 --gamma 0.1 --y 0.2").code == 2);  // both given
  CHECK(run_cli("moments --gamma 0.1").code == 2);                 // lmax missing
}

TEST_CASE("cli: trees") {
  RunResult r = run_cli("trees --l 3 --json");
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    REQUIRE(j.contains("child_counts"));
    REQUIRE(j.contains("r"));
    REQUIRE(j.contains("profile"));
    int edges = 0;
    for (int c : j["child_counts"]) edges += c;
    CHECK(edges == 3);
    ++count;
  }
  CHECK(count == 5);

  CHECK(run_cli("trees --l 0").code == 2);
  CHECK(run_cli("trees --l 15").code == 2);  // above the enumeration cap
}

TEST_CASE("cli: verify fast suite") {
  RunResult r = run_cli("verify");
  CHECK(r.code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
  CHECK(r.out.find("[PASS]") != std::string::npos);
}

TEST_CASE("cli: simulate writes deterministic files") {
  fs::path dir = fs::temp_directory_path() / "bandcov_sim_test";
  fs::remove_all(dir);
  std::string args = "simulate --p 40 --n 30 --d 4 --reps 2 --seed 7 --eig --lmax 4 --bins 8 --out " +
                     dir.string();
  RunResult r1 = run_cli(args);
  CHECK(r1.code == 0);
  CHECK(fs::exists(dir / "ensemble.csv"));
  CHECK(fs::exists(dir / "ensemble.json"));
  CHECK(fs::exists(dir / "histogram.csv"));
  CHECK(fs::exists(dir / "histogram.json"));

  std::string csv1 = slurp(dir / "ensemble.csv");
  std::string json1 = slurp(dir / "ensemble.json");
  std::string hist1 = slurp(dir / "histogram.csv");
  CHECK(csv1.find("# invocation: ") != std::string::npos);
  CHECK(csv1.find("replicate,m1,m2,m3,m4") != std::string::npos);

  RunResult r2 = run_cli(args);  // identical command: byte-identical outputs
  CHECK(r2.code == 0);
  CHECK(slurp(dir / "ensemble.csv") == csv1);
  CHECK(slurp(dir / "ensemble.json") == json1);
  CHECK(slurp(dir / "histogram.csv") == hist1);

  nlohmann::json j = nlohmann::json::parse(json1);
  CHECK(j["config"]["p"] == 40);
  CHECK(j["samples"].size() == 2);

  fs::remove_all(dir);
}

TEST_CASE("cli: simulate budget exit code") {
  fs::path dir = fs::temp_directory_path() / "bandcov_sim_budget";
  RunResult r = run_cli("simulate --p 99999 --n 99999 --d 999 --reps 99 --out " + dir.string());
  CHECK(r.code == 3);
  fs::remove_all(dir);
}

TEST_CASE("cli: version and usage") {
  CHECK(run_cli("--version").code == 0);
  CHECK(run_cli("").code == 2);           // missing subcommand
  CHECK(run_cli("nonsense").code == 2);   // unknown subcommand
}
