#include "seqscan/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "seqscan/errors.hpp"
#include "seqscan/plans.hpp"
#include "seqscan/tuner.hpp"

namespace seqscan {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "detector.kind",
      "spec.p0", "spec.p1", "spec.alpha", "spec.beta",
      "params.a", "params.b", "params.zeta",
      "tune.kmax",
      "trwa.k0", "trwa.k1", "trwa.horizon", "trwa.mass_cutoff",
      "triple.p0", "triple.p1", "triple.p0_lo", "triple.p0_hi", "triple.p1_lo", "triple.p1_hi",
      "triple.delta0", "triple.delta1", "triple.delta2",
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const ConfigValues& v) : v_(v) {}

  bool has(const std::string& key) const { return v_.has(key); }

  double number(const std::string& key) const {
    const std::string& text = raw(key);
    try {
      std::size_t used = 0;
      const double x = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return x;
    } catch (const std::exception&) {
      throw ConfigError("'" + key + "' is not a number: '" + text + "'");
    }
  }

  int integer(const std::string& key) const {
    const double x = number(key);
    if (x != static_cast<double>(static_cast<long>(x)) || x < 1 || x > 2e9) {
      throw ConfigError("'" + key + "' must be a positive integer");
    }
    return static_cast<int>(x);
  }

  const std::string& raw(const std::string& key) const {
    const auto it = v_.values().find(key);
    if (it == v_.values().end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

 private:
  const ConfigValues& v_;
};

// Wraps domain-type constructor failures as config errors.
template <class F>
auto build(const std::string& section, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("[" + section + "] " + e.what());
  }
}

}  // namespace

ConfigValues ConfigValues::parse(std::istream& is) {
  // The ini reader only knows whole-line comments; drop trailing ones.
  std::stringstream cleaned;
  std::string line;
  while (std::getline(is, line)) {
    for (std::size_t i = 1; i < line.size(); ++i) {
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    cleaned << line << '\n';
  }
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ConfigValues out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside a [section]");
    for (const auto& [key, value] : body) out.set(section + "." + key, value.data());
  }
  return out;
}

ConfigValues ConfigValues::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse(is);
}

std::optional<DetectorKind> parse_detector_kind(const std::string& text) {
  if (text == "new") return DetectorKind::new_test;
  if (text == "trwa") return DetectorKind::trwa;
  if (text == "triple") return DetectorKind::triple;
  return std::nullopt;
}

std::optional<std::string> default_config_path() {
  if (const char* env = std::getenv("SEQSCAN_CONFIG"); env != nullptr && *env != '\0') return std::string(env);
  return std::nullopt;
}

DetectorConfig resolve_config(const ConfigValues& values) {
  for (const auto& [key, value] : values.values()) {
    if (known_keys().count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
  }
  const Reader r(values);
  DetectorConfig cfg;
  if (r.has("detector.kind")) {
    const auto kind = parse_detector_kind(r.raw("detector.kind"));
    if (!kind) throw ConfigError("'detector.kind' must be new, trwa or triple");
    cfg.kind = *kind;
  }
  if (r.has("tune.kmax")) cfg.k_max = r.integer("tune.kmax");
  if (r.has("trwa.horizon")) cfg.trwa_horizon = r.integer("trwa.horizon");
  if (r.has("trwa.mass_cutoff")) {
    cfg.trwa_mass_cutoff = r.number("trwa.mass_cutoff");
    if (!(cfg.trwa_mass_cutoff >= 0.0 && cfg.trwa_mass_cutoff < 1.0)) {
      throw ConfigError("'trwa.mass_cutoff' must lie in [0, 1)");
    }
  }

  const bool any_spec = r.has("spec.p0") || r.has("spec.p1") || r.has("spec.alpha") || r.has("spec.beta");
  if (any_spec || cfg.kind != DetectorKind::triple) {
    cfg.spec = build("spec", [&] {
      return TestSpec(r.number("spec.p0"), r.number("spec.p1"), r.number("spec.alpha"), r.number("spec.beta"));
    });
  }
  const bool any_params = r.has("params.a") || r.has("params.b") || r.has("params.zeta");
  if (any_params) {
    cfg.params = build("params", [&] {
      const double zeta = r.has("params.zeta") ? r.number("params.zeta") : 1.0;
      return TunedParams(r.number("params.a"), r.number("params.b"), zeta);
    });
  }
  if (r.has("trwa.k0") || r.has("trwa.k1")) {
    cfg.trwa = build("trwa", [&] { return TrwaParams(r.number("trwa.k0"), r.number("trwa.k1")); });
  }
  if (cfg.kind == DetectorKind::triple) {
    TripleSpec t{};
    t.p0 = r.number("triple.p0");
    t.p1 = r.number("triple.p1");
    t.p0_lo = r.number("triple.p0_lo");
    t.p0_hi = r.number("triple.p0_hi");
    t.p1_lo = r.number("triple.p1_lo");
    t.p1_hi = r.number("triple.p1_hi");
    t.delta0 = r.number("triple.delta0");
    t.delta1 = r.number("triple.delta1");
    t.delta2 = r.number("triple.delta2");
    build("triple", [&] {
      t.validate();
      return 0;
    });
    cfg.triple = t;
  }
  return cfg;
}

BuiltDetector build_detector(const DetectorConfig& config) {
  switch (config.kind) {
    case DetectorKind::new_test: {
      const TunedParams params =
          config.params ? *config.params : minimax_tune(*config.spec, config.k_max).first;
      return {new_test_plan(*config.spec, params), params, std::nullopt};
    }
    case DetectorKind::trwa: {
      const TrwaParams params = config.trwa ? *config.trwa : TrwaParams::from_spec(*config.spec);
      return {trwa_plan(*config.spec, params, config.trwa_horizon, config.trwa_mass_cutoff), std::nullopt,
              std::nullopt};
    }
    case DetectorKind::triple: {
      TripleOptions options;
      options.k_max = config.k_max;
      TriplePlan tp = build_triple_plan(*config.triple, options);
      StoppingPlan plan = tp.plan;
      return {std::move(plan), std::nullopt, std::move(tp)};
    }
  }
  throw ConfigError("unknown detector kind");
}

}  // namespace seqscan
