#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "json.hpp"
#include "pmorph/sphere.hpp"

// Drives the real binary end to end through the shell: exit codes, artifacts,
// reproducibility, and the braid toolbox.

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_root() {
  fs::path p = fs::temp_directory_path() / "pmorph_cli_tests";
  fs::create_directories(p);
  return p;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult invoke(const std::string& args, const std::string& env_prefix = "") {
  fs::path out_file = scratch_root() / "stdout.txt";
  fs::path err_file = scratch_root() / "stderr.txt";
  std::string cmd = env_prefix + std::string(PARAMORPH_BIN) + " " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

nlohmann::json report_of(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "report.json"));
}

}  // namespace

TEST_CASE("run writes a passing report with reproducible artifacts") {
  fs::path dir = fresh_dir("p2");
  std::string args = "run --experiment p2 --flow eggbeater --qm cross-linking --n 4 "
                     "--k 1..3 --samples 60 --seed 2026 --out " + dir.string();

  RunResult first = invoke(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.find("P2: PASS") != std::string::npos);

  nlohmann::json rep = report_of(dir);
  CHECK(rep["property"] == "P2");
  CHECK(rep["pass"] == true);
  CHECK(rep["seed"] == 2026);
  CHECK(rep["config"]["qm_manifest"]["name"] == "cross-linking");
  std::string hash = rep["config_hash"];
  CHECK(hash.size() == 16);
  CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(rep["meta"].contains("timestamp"));

  std::string csv = slurp(dir / "points.csv");
  CHECK(csv.rfind("experiment,k_or_index,value,stderr,samples,seed\n", 0) == 0);
  CHECK(csv.find("\nP2-phi-power,1,") != std::string::npos);
  CHECK(csv.find("\nP2-phi-power,3,") != std::string::npos);

  // Same configuration again: identical bytes once the isolated meta block
  // (which carries the timestamp) is removed.
  RunResult second = invoke(args);
  REQUIRE(second.exit_code == 0);
  nlohmann::json rerun = report_of(dir);
  nlohmann::json lhs = rep, rhs = rerun;
  lhs.erase("meta");
  rhs.erase("meta");
  CHECK(lhs.dump() == rhs.dump());
  CHECK(csv == slurp(dir / "points.csv"));
}

TEST_CASE("length run reports the closed-form rotation length") {
  fs::path dir = fresh_dir("len");
  RunResult r = invoke("run --experiment length --flow rotation --angle 1.0 --out " +
                       dir.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("Length: PASS") != std::string::npos);
  double len = report_of(dir)["constants"]["length"];
  CHECK(len == doctest::Approx(pmorph::kPi * pmorph::kPi).epsilon(1e-3));
}

TEST_CASE("invalid configurations exit with code 2") {
  fs::path dir = fresh_dir("bad");
  CHECK(invoke("run --experiment p2 --n 3 --out " + dir.string()).exit_code == 2);
  CHECK(invoke("run --experiment no-such-suite --out " + dir.string()).exit_code == 2);
  CHECK(invoke("run --experiment length --flow warp --out " + dir.string()).exit_code == 2);
  CHECK(invoke("run --experiment p2 --k 5..2 --out " + dir.string()).exit_code == 2);
  CHECK(invoke("braid invariants 'q7 s1'").exit_code == 2);
  CHECK(invoke("run").exit_code == 2);  // no experiment given

  fs::path cfg = dir / "no_version.cfg";
  std::ofstream(cfg) << "experiment = length\nflow = identity\n";
  CHECK(invoke("run --config " + cfg.string() + " --out " + dir.string()).exit_code == 2);

  fs::path unknown = dir / "unknown_key.cfg";
  std::ofstream(unknown) << "schema_version = 1\nexperiment = length\nwrench = 9\n";
  CHECK(invoke("run --config " + unknown.string() + " --out " + dir.string()).exit_code == 2);
}

TEST_CASE("config files fill in values and explicit flags override them") {
  fs::path dir = fresh_dir("cfg");
  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "schema_version = 1\n"
                        "# half-turn rotation measured by default\n"
                        "experiment = length\n"
                        "flow = rotation\n"
                        "angle = 0.5\n";

  RunResult from_file = invoke("run --config " + cfg.string() + " --out " + dir.string());
  REQUIRE(from_file.exit_code == 0);
  double half = report_of(dir)["constants"]["length"];
  CHECK(half == doctest::Approx(0.5 * pmorph::kPi * pmorph::kPi).epsilon(1e-3));

  RunResult overridden =
      invoke("run --config " + cfg.string() + " --angle 1.0 --out " + dir.string());
  REQUIRE(overridden.exit_code == 0);
  nlohmann::json rep = report_of(dir);
  CHECK(rep["config"]["angle"] == 1.0);
  double full = rep["constants"]["length"];
  CHECK(full == doctest::Approx(pmorph::kPi * pmorph::kPi).epsilon(1e-3));
}

TEST_CASE("environment seed fills the default and explicit seeds win") {
  fs::path dir = fresh_dir("seed");
  RunResult env_run =
      invoke("run --experiment ishida --out " + dir.string(), "PARAMORPHISM_SEED=123 ");
  REQUIRE(env_run.exit_code == 0);
  CHECK(report_of(dir)["seed"] == 123);

  RunResult flag_run =
      invoke("run --experiment ishida --seed 7 --out " + dir.string(), "PARAMORPHISM_SEED=123 ");
  REQUIRE(flag_run.exit_code == 0);
  CHECK(report_of(dir)["seed"] == 7);

  RunResult junk =
      invoke("run --experiment ishida --out " + dir.string(), "PARAMORPHISM_SEED=banana ");
  CHECK(junk.exit_code == 2);
}

TEST_CASE("braid toolbox matches hand-checked invariants") {
  RunResult hopf = invoke("braid invariants 's1 s1'");
  REQUIRE(hopf.exit_code == 0);
  CHECK(hopf.out.find("exponent_sum: 2") != std::string::npos);
  CHECK(hopf.out.find("lk[0,1] = 1\n") != std::string::npos);
  CHECK(hopf.out.find("pure: yes") != std::string::npos);

  RunResult trefoil = invoke("braid invariants 's1 s1 s1'");
  REQUIRE(trefoil.exit_code == 0);
  CHECK(trefoil.out.find("signature: -2") != std::string::npos);
  CHECK(trefoil.out.find("pure: no") != std::string::npos);

  RunResult cancel = invoke("braid compose 's1' 's1^-1'");
  REQUIRE(cancel.exit_code == 0);
  CHECK(cancel.out == "\n");  // empty word

  RunResult chain = invoke("braid compose 's1' 's2' --strands 3");
  REQUIRE(chain.exit_code == 0);
  CHECK(chain.out == "s1 s2\n");
}

TEST_CASE("braid extract emits a word for a sampled configuration") {
  RunResult text = invoke("braid extract --flow eggbeater --n 4 --seed 5");
  REQUIRE(text.exit_code == 0);
  CHECK(!text.out.empty());

  RunResult as_json = invoke("braid extract --flow eggbeater --n 4 --seed 5 --json");
  REQUIRE(as_json.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(as_json.out);
  CHECK(j["strands"] == 4);
  CHECK(j["stratum"] == 2);
  CHECK(j["seed"] == 5);
}

TEST_CASE("numerical failures embed the error in the report and exit 3") {
  fs::path dir = fresh_dir("blowup");
  RunResult r = invoke("run --experiment nondeg --flow random-fourier --amplitude 1e150 "
                       "--samples 10 --seed 3 --out " + dir.string());
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("NonDeg: FAIL") != std::string::npos);
  nlohmann::json rep = report_of(dir);
  CHECK(rep["pass"] == false);
  std::string embedded = rep["meta"]["error"];
  CHECK(!embedded.empty());
}
