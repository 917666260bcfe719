#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "seqscan/stats_core.hpp"
#include "seqscan/stopping_plan.hpp"
#include "seqscan/triple.hpp"
#include "seqscan/trwa.hpp"

namespace seqscan {

// Raw `section.key -> value` pairs from a line-oriented config file:
//
//   [detector]
//   kind = new          ; new | trwa | triple
//   [spec]
//   p0 = 0.1
//   ...
//
// Command-line flags are applied on top with `set`.
class ConfigValues {
 public:
  static ConfigValues parse(std::istream& is);
  static ConfigValues load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

enum class DetectorKind { new_test, trwa, triple };

struct DetectorConfig {
  DetectorKind kind = DetectorKind::new_test;
  std::optional<TestSpec> spec;
  std::optional<TunedParams> params;  // tuned from spec when absent
  std::optional<TrwaParams> trwa;     // k0 = alpha, k1 = 1/beta when absent
  std::optional<TripleSpec> triple;
  int k_max = 20;
  int trwa_horizon = kTrwaDefaultHorizon;
  double trwa_mass_cutoff = kTrwaDefaultMassCutoff;
};

// Validates keys and values. Throws ConfigError naming the offending key.
DetectorConfig resolve_config(const ConfigValues& values);

std::optional<DetectorKind> parse_detector_kind(const std::string& text);

// Default config path from the SEQSCAN_CONFIG environment variable.
std::optional<std::string> default_config_path();

struct BuiltDetector {
  StoppingPlan plan;
  std::optional<TunedParams> tuned;        // new test: parameters actually used
  std::optional<TriplePlan> triple_plan;
};

// Builds the stopping plan, tuning parameters where the config omits them.
BuiltDetector build_detector(const DetectorConfig& config);

}  // namespace seqscan
