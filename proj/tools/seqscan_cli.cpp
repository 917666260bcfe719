// seqscan: command-line front end for the sequential scan detectors.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "seqscan/config.hpp"
#include "seqscan/errors.hpp"
#include "seqscan/ingest.hpp"
#include "seqscan/maxobs.hpp"
#include "seqscan/montecarlo.hpp"
#include "seqscan/oc_eval.hpp"
#include "seqscan/plans.hpp"
#include "seqscan/triple.hpp"
#include "seqscan/trwa.hpp"
#include "seqscan/tuner.hpp"

namespace {

using namespace seqscan;
using nlohmann::json;

// Exit codes, one per error kind.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kInvalidConfig = 3,
  kInfeasibleTuning = 4,
  kNoCrossing = 5,
  kInvalidPlan = 6,
  kHorizonExceeded = 7,
  kIo = 8,
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

int exit_code_for(const std::string& kind) {
  if (kind == "invalid_config") return kInvalidConfig;
  if (kind == "infeasible_tuning") return kInfeasibleTuning;
  if (kind == "no_crossing") return kNoCrossing;
  if (kind == "invalid_plan") return kInvalidPlan;
  if (kind == "horizon_exceeded") return kHorizonExceeded;
  if (kind == "io_error") return kIo;
  return kInternal;
}

int report_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
  return code;
}

// Output goes to a file when a path is given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw IoError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void set_precision(std::ostream& os) { os << std::setprecision(12); }

// Config-file location plus per-key overrides shared by the detector commands.
struct ConfigOptions {
  std::string path;
  std::vector<std::string> assignments;  // section.key=value
  std::optional<double> p0, p1, alpha, beta, a, b, zeta;
  std::optional<int> kmax;
  std::string detector;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", path, "INI config file (default: $SEQSCAN_CONFIG)");
    cmd->add_option("--set", assignments, "Override a config value, section.key=value")->take_all();
    cmd->add_option("--p0", p0, "spec.p0");
    cmd->add_option("--p1", p1, "spec.p1");
    cmd->add_option("--alpha", alpha, "spec.alpha");
    cmd->add_option("--beta", beta, "spec.beta");
    cmd->add_option("--a", a, "params.a");
    cmd->add_option("--b", b, "params.b");
    cmd->add_option("--zeta", zeta, "params.zeta");
    cmd->add_option("--kmax", kmax, "tune.kmax");
  }

  ConfigValues load() const {
    std::string file = path;
    if (file.empty()) file = default_config_path().value_or("");
    ConfigValues values;
    if (!file.empty()) values = ConfigValues::load(file);
    for (const std::string& kv : assignments) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects section.key=value, got '" + kv + "'");
      values.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    auto put = [&](const char* key, const auto& v) {
      if (!v) return;
      std::ostringstream os;
      os << std::setprecision(17) << *v;
      values.set(key, os.str());
    };
    put("spec.p0", p0);
    put("spec.p1", p1);
    put("spec.alpha", alpha);
    put("spec.beta", beta);
    put("params.a", a);
    put("params.b", b);
    put("params.zeta", zeta);
    put("tune.kmax", kmax);
    if (!detector.empty()) values.set("detector.kind", detector);
    return values;
  }

  DetectorConfig resolve() const { return resolve_config(load()); }
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--pgrid expects lo:hi:step, got '" + text + "'");
    }
  }
  if (parts.size() != 3) throw ConfigError("--pgrid expects lo:hi:step, got '" + text + "'");
  std::vector<double> grid;
  try {
    grid = make_grid(parts[0], parts[1], parts[2]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--pgrid: ") + e.what());
  }
  for (double p : grid) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("--pgrid points must lie in (0, 1)");
  }
  return grid;
}

// ---- tune ----------------------------------------------------------------

struct TuneArgs {
  double p0 = 0, p1 = 0, alpha = 0, beta = 0;
  int kmax = 20;
  std::string out;
};

int run_tune(const TuneArgs& args) {
  const TestSpec spec = [&] {
    try {
      return TestSpec(args.p0, args.p1, args.alpha, args.beta);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  if (args.kmax < 1) throw ConfigError("--kmax must be a positive integer");
  const auto [params, diag] = minimax_tune(spec, args.kmax);
  const MaxObsResult bound = solve_max_obs(spec, params);
  const DesignRisks risks = risks_at_design_points(spec, params);

  std::ostream& os = std::cout;
  os << std::setprecision(17) << "[params]\n"
     << "a = " << params.a() << '\n'
     << "b = " << params.b() << '\n'
     << "zeta = " << params.zeta() << '\n'
     << "; n_max = " << bound.n_max << '\n'
     << "; risk_p0 = " << risks.reject_h0_at_p0 << '\n'
     << "; risk_p1 = " << risks.reject_h1_at_p1 << '\n'
     << "; Q = " << diag.Q << '\n'
     << "; R = " << diag.R << '\n';
  set_precision(os);
  if (args.out.empty()) {
    os << '\n';
    diag.write_trace_csv(os);
  } else {
    Output out(args.out);
    set_precision(out.stream());
    diag.write_trace_csv(out.stream());
  }
  return kOk;
}

// ---- maxobs --------------------------------------------------------------

struct MaxObsArgs {
  double p0 = 0, p1 = 0, zeta = 1, a = 0, b = 0;
};

int run_maxobs(const MaxObsArgs& args) {
  std::optional<TestSpec> spec;
  std::optional<TunedParams> params;
  try {
    // The bound depends on p0 and p1 only; the risk targets are placeholders.
    spec.emplace(args.p0, args.p1, 0.5, 0.5);
    params.emplace(args.a, args.b, args.zeta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const MaxObsResult r = solve_max_obs(*spec, *params);
  std::cout << std::setprecision(12) << "z_star = " << r.z_star << '\n'
            << "m_star = " << r.m_star << '\n'
            << "n_max = " << r.n_max << '\n';
  return kOk;
}

// ---- evaluate ------------------------------------------------------------

struct EvalArgs {
  ConfigOptions config;
  std::string pgrid = "0.01:0.99:0.01";
  std::string out;
};

int run_evaluate(const EvalArgs& args) {
  const DetectorConfig cfg = args.config.resolve();
  const std::vector<double> grid = parse_grid(args.pgrid);
  const BuiltDetector det = build_detector(cfg);

  Output out(args.out);
  std::ostream& os = out.stream();
  set_precision(os);

  if (cfg.kind == DetectorKind::triple) {
    const auto curve = triple_risk_curve(det.plan, *cfg.triple, grid);
    os << "p,accept_scanner,accept_marginal,accept_benign,asn,residual,risk,indifference\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const OcReport r = evaluate(det.plan, grid[i]);
      os << r.p << ',' << r.accept_prob(Decision::scanner) << ',' << r.accept_prob(Decision::marginal) << ','
         << r.accept_prob(Decision::benign) << ',' << r.asn << ',' << r.residual_mass << ',' << curve[i].risk << ','
         << (curve[i].indifference ? 1 : 0) << '\n';
    }
    return kOk;
  }

  const TestSpec& spec = *cfg.spec;
  const auto risks = risk_curve(det.plan, spec, grid);
  std::optional<StoppingPlan> reference;
  if (cfg.kind == DetectorKind::new_test) {
    reference = trwa_plan(spec, cfg.trwa ? *cfg.trwa : TrwaParams::from_spec(spec), cfg.trwa_horizon,
                          cfg.trwa_mass_cutoff);
  }
  os << "p,accept_scanner,accept_benign,asn,residual,risk,indifference";
  if (reference) os << ",asn_trwa,asn_ratio";
  os << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const OcReport r = evaluate(det.plan, grid[i]);
    os << r.p << ',' << r.accept_prob(Decision::scanner) << ',' << r.accept_prob(Decision::benign) << ',' << r.asn
       << ',' << r.residual_mass << ',' << risks[i].risk << ',' << (risks[i].unspecified ? 1 : 0);
    if (reference) {
      const double ref_asn = evaluate(*reference, grid[i]).asn;
      os << ',' << ref_asn << ',' << r.asn / ref_asn;
    }
    os << '\n';
  }
  return kOk;
}

// ---- boundaries ----------------------------------------------------------

struct BoundaryArgs {
  ConfigOptions config;
  std::string out;
  int nmax = 0;
};

// Per-row thresholds read off a binary plan's labels.
void write_plan_boundaries(std::ostream& os, const StoppingPlan& plan, int rows) {
  os << "n,s_scanner,s_benign\n";
  for (int n = 1; n <= rows; ++n) {
    std::optional<int> hi_scanner, lo_benign;
    for (int s = 0; s <= n; ++s) {
      const Decision d = plan.label(n, s);
      if (d == Decision::scanner) hi_scanner = s;
      if (d == Decision::benign && !lo_benign) lo_benign = s;
    }
    os << n << ',';
    if (hi_scanner) os << *hi_scanner;
    os << ',';
    if (lo_benign) os << *lo_benign;
    os << '\n';
  }
}

int run_boundaries(const BoundaryArgs& args) {
  const DetectorConfig cfg = args.config.resolve();
  if (args.nmax < 0) throw ConfigError("--nmax must be positive");
  const BuiltDetector det = build_detector(cfg);
  Output out(args.out);
  std::ostream& os = out.stream();

  switch (cfg.kind) {
    case DetectorKind::new_test: {
      const int rows = args.nmax > 0 ? args.nmax : det.plan.horizon();
      build_boundary_table(*cfg.spec, *det.tuned, rows).write_csv(os);
      break;
    }
    case DetectorKind::triple: {
      const int rows = args.nmax > 0 ? std::min(args.nmax, det.plan.horizon()) : det.plan.horizon();
      write_region_csv(os, det.plan.with_horizon(rows));
      break;
    }
    case DetectorKind::trwa:
      if (args.nmax == 0) throw ConfigError("trwa boundaries need --nmax (the walk has no natural bound)");
      write_plan_boundaries(os, det.plan, std::min(args.nmax, det.plan.horizon()));
      break;
  }
  return kOk;
}

// ---- simulate ------------------------------------------------------------

struct SimArgs {
  ConfigOptions config;
  double p = 0;
  long runs = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

int run_simulate(const SimArgs& args) {
  const DetectorConfig cfg = args.config.resolve();
  if (!(args.p > 0.0 && args.p < 1.0)) throw ConfigError("--p must lie in (0, 1)");
  if (args.runs < 1) throw ConfigError("--runs must be positive");
  const BuiltDetector det = build_detector(cfg);
  std::cout << simulate(det.plan, args.p, args.runs, args.seed, std::max(1u, args.threads)).to_json() << '\n';
  return kOk;
}

// ---- detect --------------------------------------------------------------

struct DetectArgs {
  ConfigOptions config;
  std::string input;
  std::string out;
  std::string snapshot;
};

int run_detect_cmd(const DetectArgs& args) {
  const DetectorConfig cfg = args.config.resolve();
  SessionStore store(build_detector(cfg).plan);

  if (!args.snapshot.empty() && std::filesystem::exists(args.snapshot)) {
    std::ifstream snap(args.snapshot);
    if (!snap) throw IoError("cannot read snapshot '" + args.snapshot + "'");
    std::stringstream buf;
    buf << snap.rdbuf();
    store.restore_json(buf.str());
  }

  std::ifstream file;
  if (!args.input.empty() && args.input != "-") {
    file.open(args.input);
    if (!file) throw IoError("cannot open input '" + args.input + "'");
  }
  std::istream& in = file.is_open() ? static_cast<std::istream&>(file) : std::cin;

  Output out(args.out);
  run_detect(in, out.stream(), std::cerr, store);
  out.stream().flush();

  if (!args.snapshot.empty()) {
    std::ofstream snap(args.snapshot);
    if (!snap) throw IoError("cannot write snapshot '" + args.snapshot + "'");
    snap << store.snapshot_json() << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential detection of scanning sources"};
  app.require_subcommand(1);

  TuneArgs tune;
  auto* tune_cmd = app.add_subcommand("tune", "Tune (a, b, zeta) for a risk specification");
  tune_cmd->add_option("--p0", tune.p0, "Scanner success rate bound")->required();
  tune_cmd->add_option("--p1", tune.p1, "Benign success rate bound")->required();
  tune_cmd->add_option("--alpha", tune.alpha, "Max Pr{benign | p0}")->required();
  tune_cmd->add_option("--beta", tune.beta, "Max Pr{scanner | p1}")->required();
  tune_cmd->add_option("--kmax", tune.kmax, "Minimax iterations")->capture_default_str();
  tune_cmd->add_option("--out", tune.out, "Write the iteration trace CSV here");

  MaxObsArgs maxobs;
  auto* maxobs_cmd = app.add_subcommand("maxobs", "Hard bound on the number of observations");
  maxobs_cmd->add_option("--p0", maxobs.p0)->required();
  maxobs_cmd->add_option("--p1", maxobs.p1)->required();
  maxobs_cmd->add_option("--zeta", maxobs.zeta)->capture_default_str();
  maxobs_cmd->add_option("--a", maxobs.a)->required();
  maxobs_cmd->add_option("--b", maxobs.b)->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Exact OC, ASN and risk over a p grid");
  eval.config.attach(eval_cmd);
  eval_cmd->add_option("--detector", eval.config.detector, "new | trwa | triple");
  eval_cmd->add_option("--pgrid", eval.pgrid, "lo:hi:step")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "CSV output (default stdout)");

  BoundaryArgs bounds;
  auto* bounds_cmd = app.add_subcommand("boundaries", "Export the decision boundaries");
  bounds.config.attach(bounds_cmd);
  bounds_cmd->add_option("--detector", bounds.config.detector, "new | trwa | triple");
  bounds_cmd->add_option("--out", bounds.out, "CSV output (default stdout)");
  bounds_cmd->add_option("--nmax", bounds.nmax, "Rows to export (required for trwa)");

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo run of a detector");
  sim.config.attach(sim_cmd);
  sim_cmd->add_option("--detector", sim.config.detector, "new | trwa | triple");
  sim_cmd->add_option("--p", sim.p, "Success rate")->required();
  sim_cmd->add_option("--runs", sim.runs)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--threads", sim.threads)->capture_default_str();

  DetectArgs detect;
  auto* detect_cmd = app.add_subcommand("detect", "Classify sources in a JSONL event stream");
  detect.config.attach(detect_cmd);
  detect_cmd->add_option("--detector", detect.config.detector, "new | trwa | triple");
  detect_cmd->add_option("--input", detect.input, "JSONL events (default stdin)");
  detect_cmd->add_option("--out", detect.out, "JSONL decisions (default stdout)");
  detect_cmd->add_option("--snapshot", detect.snapshot, "Session snapshot to resume from and save to");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kUsage);
  }

  try {
    if (*tune_cmd) return run_tune(tune);
    if (*maxobs_cmd) return run_maxobs(maxobs);
    if (*eval_cmd) return run_evaluate(eval);
    if (*bounds_cmd) return run_boundaries(bounds);
    if (*sim_cmd) return run_simulate(sim);
    if (*detect_cmd) return run_detect_cmd(detect);
  } catch (const Error& e) {
    return report_error(e.kind(), e.what(), exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kInternal);
  }
  return kInternal;
}
