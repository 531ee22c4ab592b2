// Experiment runner and braid utility front end.
//
// Subcommands:
//   run    executes one property suite and writes report.json + points.csv;
//          exit 0 iff the property passed, 2 on invalid configuration or
//          parse errors, 3 on numerical failure (error embedded in report).
//   braid  extract / compose / invariants on serialized braid words.
//
// Configuration can come from flags or from a flat key = value file with an
// explicit schema_version; flags override file keys. PARAMORPHISM_SEED
// overrides the built-in default seed when no explicit seed is given.

#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pmorph/experiments.hpp"

namespace pm = pmorph;

namespace {

// ----- shared argument bag -----

struct RunArgs {
  std::string experiment;
  std::string flow = "eggbeater";
  std::string qm = "cross-linking";
  int n = 4;
  int samples = 300;
  std::string k = "1..5";
  std::uint64_t seed = 2026;
  int workers = 1;
  std::string out = ".";
  std::string config_path;

  // flow parameters
  double angle = pm::kPi;
  double width = 0.1;
  int degree = 3;
  double amplitude = 1.0;
  std::uint64_t flow_seed = 1;
  double scale = 1.0;
  int power = 1;

  // suite extras
  double expected = -1.0;
  int draws = 100000;
};

struct BraidArgs {
  std::vector<std::string> words;
  int strands = 0;
  bool json = false;
  int n = 4;
  int stratum = -1;
  std::uint64_t seed = 2026;
  std::string flow = "eggbeater";
  double angle = pm::kPi;
  double width = 0.1;
  int degree = 3;
  double amplitude = 1.0;
  std::uint64_t flow_seed = 1;
  double scale = 1.0;
  int power = 1;
};

std::string report_label(const std::string& experiment) {
  static const std::map<std::string, std::string> labels = {
      {"p1", "P1"},         {"p2", "P2"},     {"p3", "P3"},
      {"p4", "P4"},         {"frag", "Frag"}, {"nondeg", "NonDeg"},
      {"split", "Split"},   {"weights", "Weights"}, {"length", "Length"},
      {"d1", "D1"},         {"ishida", "Ishida"}};
  auto it = labels.find(experiment);
  if (it == labels.end()) {
    std::string known;
    for (const auto& [key, value] : labels) {
      (void)value;
      known += known.empty() ? key : ", " + key;
    }
    throw pm::ConfigInvalidError("run: unknown experiment '" + experiment +
                                 "'; available: " + known);
  }
  return it->second;
}

// ----- config file -----

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Flat `key = value` lines, '#' comments, mandatory schema_version = 1.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pm::ConfigInvalidError("config: cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw pm::ConfigInvalidError("config: line " + std::to_string(lineno) +
                                   " is not 'key = value'");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw pm::ConfigInvalidError("config: empty key or value at line " +
                                   std::to_string(lineno));
    }
    if (!kv.emplace(key, value).second) {
      throw pm::ConfigInvalidError("config: duplicate key '" + key + "'");
    }
  }
  auto sv = kv.find("schema_version");
  if (sv == kv.end()) throw pm::ConfigInvalidError("config: missing schema_version");
  if (sv->second != "1") {
    throw pm::ConfigInvalidError("config: unsupported schema_version '" + sv->second + "'");
  }
  kv.erase(sv);
  return kv;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != value.size()) {
    throw pm::ConfigInvalidError("config: key '" + key + "' expects an integer, got '" +
                                 value + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used != value.size()) {
    throw pm::ConfigInvalidError("config: key '" + key + "' expects a number, got '" + value +
                                 "'");
  }
  return v;
}

std::uint64_t parse_seed_text(const std::string& origin, const std::string& value) {
  if (value.empty() || !std::isdigit(static_cast<unsigned char>(value[0]))) {
    throw pm::ConfigInvalidError(origin + ": seed must be a nonnegative integer, got '" +
                                 value + "'");
  }
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') {
    throw pm::ConfigInvalidError(origin + ": seed must be a nonnegative integer, got '" +
                                 value + "'");
  }
  return v;
}

// Applies file keys that the command line left untouched.
void apply_config_file(RunArgs& a, const CLI::App& cmd) {
  std::map<std::string, std::string> kv = read_config_file(a.config_path);
  auto untouched = [&](const char* flag) { return cmd.get_option(flag)->count() == 0; };
  auto take = [&](const char* key, const char* flag, auto&& apply) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    if (untouched(flag)) apply(it->second);
    kv.erase(it);
  };

  take("experiment", "--experiment", [&](const std::string& v) { a.experiment = v; });
  take("flow", "--flow", [&](const std::string& v) { a.flow = v; });
  take("qm", "--qm", [&](const std::string& v) { a.qm = v; });
  take("n", "--n", [&](const std::string& v) { a.n = static_cast<int>(parse_int("n", v)); });
  take("samples", "--samples",
       [&](const std::string& v) { a.samples = static_cast<int>(parse_int("samples", v)); });
  take("k", "--k", [&](const std::string& v) { a.k = v; });
  take("seed", "--seed", [&](const std::string& v) { a.seed = parse_seed_text("config", v); });
  take("workers", "--workers",
       [&](const std::string& v) { a.workers = static_cast<int>(parse_int("workers", v)); });
  take("out", "--out", [&](const std::string& v) { a.out = v; });
  take("angle", "--angle", [&](const std::string& v) { a.angle = parse_real("angle", v); });
  take("width", "--width", [&](const std::string& v) { a.width = parse_real("width", v); });
  take("degree", "--degree",
       [&](const std::string& v) { a.degree = static_cast<int>(parse_int("degree", v)); });
  take("amplitude", "--amplitude",
       [&](const std::string& v) { a.amplitude = parse_real("amplitude", v); });
  take("flow_seed", "--flow-seed",
       [&](const std::string& v) { a.flow_seed = parse_seed_text("config", v); });
  take("scale", "--scale", [&](const std::string& v) { a.scale = parse_real("scale", v); });
  take("power", "--power",
       [&](const std::string& v) { a.power = static_cast<int>(parse_int("power", v)); });
  take("expected", "--expected",
       [&](const std::string& v) { a.expected = parse_real("expected", v); });
  take("draws", "--draws",
       [&](const std::string& v) { a.draws = static_cast<int>(parse_int("draws", v)); });

  if (!kv.empty()) {
    throw pm::ConfigInvalidError("config: unknown key '" + kv.begin()->first + "'");
  }
}

// ----- pieces shared by run and braid extract -----

std::pair<int, int> parse_k_range(const std::string& text) {
  std::string t = trim(text);
  std::size_t dots = t.find("..");
  int lo = 0, hi = 0;
  if (dots == std::string::npos) {
    lo = hi = static_cast<int>(parse_int("k", t));
  } else {
    lo = static_cast<int>(parse_int("k", trim(t.substr(0, dots))));
    hi = static_cast<int>(parse_int("k", trim(t.substr(dots + 2))));
  }
  if (lo < 1 || hi < lo) {
    throw pm::ConfigInvalidError("k: range must satisfy 1 <= lo <= hi, got '" + text + "'");
  }
  return {lo, hi};
}

template <typename Args>
pm::Isotopy build_flow(const Args& a) {
  pm::FlowParams p;
  p.name = a.flow;
  p.angle = a.angle;
  p.delta = a.width;
  p.degree = a.degree;
  p.amplitude = a.amplitude;
  p.seed = a.flow_seed;
  p.scale = a.scale;
  pm::Isotopy f = pm::named_flow(p);
  if (a.power < 1) throw pm::ConfigInvalidError("power: must be >= 1");
  return a.power == 1 ? f : pm::iterate(f, a.power);
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm parts{};
  gmtime_r(&now, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

void write_artifacts(const pm::PropertyReport& rep, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);
  {
    std::ofstream json_out(dir / "report.json");
    if (!json_out) throw pm::ConfigInvalidError("out: cannot write to '" + out_dir + "'");
    json_out << rep.to_json().dump(2) << "\n";
  }
  {
    std::ofstream csv_out(dir / "points.csv");
    if (!csv_out) throw pm::ConfigInvalidError("out: cannot write to '" + out_dir + "'");
    csv_out << rep.to_csv();
  }
}

void print_summary(const pm::PropertyReport& rep) {
  std::printf("%s: %s", rep.property.c_str(), rep.pass ? "PASS" : "FAIL");
  for (const auto& [key, value] : rep.constants) std::printf(" %s=%.6g", key.c_str(), value);
  if (rep.meta.contains("error")) {
    std::printf(" error=%s", rep.meta["error"].get<std::string>().c_str());
  }
  std::printf("\n");
  std::fflush(stdout);
}

// ----- run -----

int run_command(RunArgs& a, const CLI::App& cmd) {
  if (!a.config_path.empty()) apply_config_file(a, cmd);
  if (a.experiment.empty()) {
    throw pm::ConfigInvalidError("run: --experiment is required (flag or config file)");
  }
  std::string label = report_label(a.experiment);

  if (cmd.get_option("--seed")->count() == 0) {
    bool file_seed = false;
    if (!a.config_path.empty()) {
      std::map<std::string, std::string> kv = read_config_file(a.config_path);
      file_seed = kv.count("seed") > 0;
    }
    if (!file_seed) {
      if (const char* env = std::getenv("PARAMORPHISM_SEED")) {
        a.seed = parse_seed_text("PARAMORPHISM_SEED", env);
      }
    }
  }

  const bool uses_estimator = label == "P1" || label == "P2" || label == "P3" ||
                              label == "P4" || label == "NonDeg" || label == "Split" ||
                              label == "D1";
  if ((uses_estimator || label == "Weights") && a.n <= 3) {
    throw pm::ConfigInvalidError("run: n must exceed 3");
  }

  // The resolved configuration, defaults included; workers and out are
  // excluded from the hash so throughput knobs never change report identity.
  nlohmann::json cfg = {{"schema_version", 1},
                        {"experiment", a.experiment},
                        {"flow", a.flow},
                        {"qm", a.qm},
                        {"n", a.n},
                        {"samples", a.samples},
                        {"k", a.k},
                        {"seed", a.seed},
                        {"workers", a.workers},
                        {"out", a.out},
                        {"angle", a.angle},
                        {"width", a.width},
                        {"degree", a.degree},
                        {"amplitude", a.amplitude},
                        {"flow_seed", a.flow_seed},
                        {"scale", a.scale},
                        {"power", a.power},
                        {"expected", a.expected},
                        {"draws", a.draws}};

  pm::EstimatorOptions opt;
  opt.workers = a.workers;

  pm::PropertyReport rep;
  try {
    if (uses_estimator || label == "P3") {
      pm::Quasimorphism qm = pm::qm_from_name(a.qm, a.n);
      cfg["qm_manifest"] = pm::qm_manifest(qm);
      if (label == "P1") {
        std::vector<std::pair<pm::Isotopy, pm::Isotopy>> pairs;
        pm::Isotopy f = build_flow(a);
        for (int i = 0; i < 12; ++i) {
          pairs.emplace_back(f, pm::rotation({0, 0, 1}, 0.05 * std::pow(100.0, i / 11.0)));
        }
        rep = pm::property1_scan(pairs, qm, a.n, a.samples, a.seed, opt);
      } else if (label == "P2") {
        auto [lo, hi] = parse_k_range(a.k);
        std::vector<int> ks;
        for (int k = lo; k <= hi; ++k) ks.push_back(k);
        rep = pm::phi_bar_estimate(build_flow(a), qm, a.n, ks, a.samples, a.seed, opt);
      } else if (label == "P3") {
        rep = pm::property3_check(pm::default_equator_family(), qm, a.n, a.samples, a.seed, opt);
      } else if (label == "P4") {
        rep = pm::property4_scan(pm::default_p4_flows(), qm, a.n, a.samples, a.seed, opt);
      } else if (label == "NonDeg") {
        rep = pm::nondegeneracy_check(build_flow(a), qm, a.n, a.samples, a.seed, opt);
      } else if (label == "Split") {
        pm::Isotopy north = pm::cap_twist(pm::unit(0, 0, 1), 0.3, 1.1, a.angle);
        pm::Isotopy south = pm::cap_twist(pm::unit(0, 0, -1), 0.3, 1.1, -0.5 * a.angle);
        rep = pm::split_cancellation_check(north, south, qm, a.n, a.samples, a.seed, opt);
      } else {  // D1
        auto [lo, hi] = parse_k_range(a.k);
        (void)lo;
        rep = pm::d1_lower_bound_report(build_flow(a), qm, a.n, hi, a.samples, a.seed, opt);
      }
    } else if (label == "Frag") {
      rep = pm::collar_scaling_report(a.angle);
    } else if (label == "Weights") {
      rep = pm::stratum_weight_check(a.n, a.draws, a.seed);
    } else if (label == "Length") {
      rep = pm::length_report(build_flow(a), a.expected);
    } else {  // Ishida
      rep = pm::ishida_report(a.seed);
    }
  } catch (const pm::ConfigInvalidError&) {
    throw;
  } catch (const pm::ParseError&) {
    throw;
  } catch (const pm::Error& e) {
    // Numerical failure: embed the module error in the report and exit 3.
    rep = pm::PropertyReport{};
    rep.property = label;
    rep.seed = a.seed;
    rep.pass = false;
    rep.config = cfg;
    rep.meta["error"] = e.what();
    rep.meta["timestamp"] = utc_timestamp();
    write_artifacts(rep, a.out);
    print_summary(rep);
    return 3;
  }

  rep.config = cfg;
  rep.meta["timestamp"] = utc_timestamp();
  write_artifacts(rep, a.out);
  print_summary(rep);
  return rep.pass ? 0 : 1;
}

// ----- braid tools -----

int braid_extract(const BraidArgs& a) {
  if (a.n < 2) throw pm::ConfigInvalidError("extract: need n >= 2 strands");
  int stratum = a.stratum < 0 ? a.n / 2 : a.stratum;
  if (stratum < 0 || stratum > a.n) {
    throw pm::ConfigInvalidError("extract: stratum must lie in [0, n]");
  }
  pm::Isotopy f = build_flow(a);
  pm::Rng rng = pm::Rng(a.seed).substream(0x657874ull);  // "ext"
  pm::Configuration x = pm::sample_stratified_configuration(rng, a.n, stratum);
  pm::Configuration base = pm::base_configuration(a.n, stratum);
  pm::ExtractedBraid got = pm::extract_braid_robust(f, x, base, rng);
  if (a.json) {
    nlohmann::json j = pm::to_json(got.word);
    j["stratum"] = stratum;
    j["seed"] = a.seed;
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("%s\n", pm::to_text(got.word).c_str());
  }
  return 0;
}

int braid_compose(const BraidArgs& a) {
  pm::BraidWord first = pm::parse_word(a.words[0], a.strands);
  pm::BraidWord second = pm::parse_word(a.words[1], a.strands);
  if (first.strands != second.strands) {
    int strands = std::max(first.strands, second.strands);
    first = pm::parse_word(a.words[0], strands);
    second = pm::parse_word(a.words[1], strands);
  }
  // Written order: the first word's letters happen first.
  pm::BraidWord out = pm::free_reduce(pm::braid_compose(second, first));
  if (a.json) {
    std::printf("%s\n", pm::to_json(out).dump(2).c_str());
  } else {
    std::printf("%s\n", pm::to_text(out).c_str());
  }
  return 0;
}

int braid_invariants(const BraidArgs& a) {
  pm::BraidWord w = pm::parse_word(a.words[0], a.strands);
  std::vector<int> perm = pm::permutation(w);
  double sig = pm::signature_qm().evaluate(w);

  if (a.json) {
    nlohmann::json lk = nlohmann::json::object();
    for (int i = 0; i < w.strands; ++i) {
      for (int j = i + 1; j < w.strands; ++j) {
        lk[std::to_string(i) + "-" + std::to_string(j)] = pm::linking_number(w, i, j);
      }
    }
    nlohmann::json out = {{"word", pm::to_text(w)},     {"strands", w.strands},
                          {"permutation", perm},        {"pure", pm::is_pure(w)},
                          {"exponent_sum", pm::exponent_sum(w)}, {"linking", lk},
                          {"signature", sig}};
    std::printf("%s\n", out.dump(2).c_str());
    return 0;
  }

  std::printf("word: %s\n", pm::to_text(w).c_str());
  std::printf("strands: %d\n", w.strands);
  std::printf("permutation:");
  for (int p : perm) std::printf(" %d", p);
  std::printf("\n");
  std::printf("pure: %s\n", pm::is_pure(w) ? "yes" : "no");
  std::printf("exponent_sum: %d\n", pm::exponent_sum(w));
  for (int i = 0; i < w.strands; ++i) {
    for (int j = i + 1; j < w.strands; ++j) {
      std::printf("lk[%d,%d] = %g\n", i, j, pm::linking_number(w, i, j));
    }
  }
  std::printf("signature: %g\n", sig);
  return 0;
}

template <typename Args>
void add_flow_flags(CLI::App* cmd, Args& a) {
  cmd->add_option("--flow", a.flow,
                  "flow preset: eggbeater, rotation, collar, random-fourier, identity")
      ->capture_default_str();
  cmd->add_option("--angle", a.angle, "rotation/collar/twist angle")->capture_default_str();
  cmd->add_option("--width", a.width, "collar half-width")->capture_default_str();
  cmd->add_option("--degree", a.degree, "random-fourier band limit")->capture_default_str();
  cmd->add_option("--amplitude", a.amplitude, "random-fourier amplitude")->capture_default_str();
  cmd->add_option("--flow-seed", a.flow_seed, "random-fourier coefficient seed")
      ->capture_default_str();
  cmd->add_option("--scale", a.scale, "eggbeater scale")->capture_default_str();
  cmd->add_option("--power", a.power, "apply the k-th iterate of the preset")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paramorphism experiment runner and braid toolbox"};
  app.require_subcommand(1);

  RunArgs run_args;
  BraidArgs braid_args;

  CLI::App* run = app.add_subcommand("run", "run one property suite, write report + points");
  run->add_option("--experiment", run_args.experiment,
                  "p1, p2, p3, p4, frag, nondeg, split, weights, length, d1, ishida");
  run->add_option("--qm", run_args.qm, "quasimorphism plug-in name")->capture_default_str();
  run->add_option("--n", run_args.n, "number of strands (must exceed 3)")->capture_default_str();
  run->add_option("--samples", run_args.samples, "Monte Carlo samples per stratum")
      ->capture_default_str();
  run->add_option("--k", run_args.k, "iterate range, e.g. 1..20")->capture_default_str();
  run->add_option("--seed", run_args.seed, "master seed (PARAMORPHISM_SEED overrides default)");
  run->add_option("--workers", run_args.workers, "worker threads (results never depend on it)")
      ->capture_default_str();
  run->add_option("--out", run_args.out, "output directory for report.json and points.csv")
      ->capture_default_str();
  run->add_option("--config", run_args.config_path,
                  "flat key = value config file; flags override file keys");
  run->add_option("--expected", run_args.expected, "expected length for --experiment length")
      ->capture_default_str();
  run->add_option("--draws", run_args.draws, "configuration draws for --experiment weights")
      ->capture_default_str();
  add_flow_flags(run, run_args);

  CLI::App* braid = app.add_subcommand("braid", "braid word utilities");
  braid->require_subcommand(1);

  CLI::App* extract = braid->add_subcommand("extract", "extract the braid of a sampled loop");
  extract->add_option("--n", braid_args.n, "number of strands")->capture_default_str();
  extract->add_option("--stratum", braid_args.stratum, "upper-hemisphere count (default n/2)");
  extract->add_option("--seed", braid_args.seed, "sampling seed")->capture_default_str();
  extract->add_flag("--json", braid_args.json, "emit JSON instead of text");
  add_flow_flags(extract, braid_args);

  CLI::App* compose = braid->add_subcommand("compose", "concatenate and freely reduce two words");
  compose->add_option("words", braid_args.words, "two braid words, e.g. \"s1 s2^-1\"")
      ->expected(2);
  compose->add_option("--strands", braid_args.strands, "strand count (0: infer)")
      ->capture_default_str();
  compose->add_flag("--json", braid_args.json, "emit JSON instead of text");

  CLI::App* invariants = braid->add_subcommand("invariants", "invariant table of one word");
  invariants->add_option("word", braid_args.words, "braid word, e.g. \"s1 s1 s1\"")->expected(1);
  invariants->add_option("--strands", braid_args.strands, "strand count (0: infer)")
      ->capture_default_str();
  invariants->add_flag("--json", braid_args.json, "emit JSON instead of text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return run_command(run_args, *run);
    if (extract->parsed()) return braid_extract(braid_args);
    if (compose->parsed()) return braid_compose(braid_args);
    return braid_invariants(braid_args);
  } catch (const pm::ConfigInvalidError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const pm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
