#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "seqscan/decision.hpp"
#include "seqscan/stopping_plan.hpp"

namespace seqscan {

// One connection attempt by remote source `src` to local destination `dst`,
// already classified by the producer.
struct ConnectionEvent {
  std::int64_t timestamp = 0;  // epoch milliseconds
  std::string src;
  std::string dst;
  bool success = false;
};

// Parses one JSON object with keys timestamp (or ts), src, dst, outcome.
// Unknown keys are ignored. Throws MalformedEvent.
ConnectionEvent parse_event(std::string_view line);

struct DecisionRecord {
  std::string src;
  Decision decision = Decision::undecided;
  int n = 0;
  int s = 0;
  std::int64_t timestamp = 0;

  // {"src":...,"decision":...,"n":...,"s":...,"ts":...}
  std::string to_json() const;
};

struct SourceSession {
  std::unordered_set<std::string> seen_destinations;
  int n = 0;
  int s = 0;
  Decision decision = Decision::undecided;
  bool decision_emitted = false;
  std::int64_t last_timestamp = 0;
};

struct IngestCounters {
  long events = 0;
  long duplicates = 0;       // repeat (src, dst) pairs
  long after_decision = 0;   // first contacts of already-decided sources
  long malformed = 0;
  long decisions = 0;
};

// Per-source detectors driven by a shared stopping plan. Only the first
// attempt from a source to each distinct destination is an observation.
class SessionStore {
 public:
  explicit SessionStore(StoppingPlan plan);

  std::optional<DecisionRecord> ingest(const ConnectionEvent& event);
  void note_malformed() { ++counters_.malformed; }

  // One `undecided` record per source without a decision, ordered by src.
  std::vector<DecisionRecord> undecided_summary() const;

  const SourceSession* find(const std::string& src) const;
  const IngestCounters& counters() const { return counters_; }
  std::size_t size() const { return sessions_.size(); }
  const StoppingPlan& plan() const { return plan_; }

  std::string snapshot_json() const;
  // Throws ConfigError if the snapshot was taken under a different plan.
  void restore_json(std::string_view json);

 private:
  StoppingPlan plan_;
  std::map<std::string, SourceSession, std::less<>> sessions_;
  IngestCounters counters_;
};

// Streams JSONL events from `in`, writing decision records to `out` as they
// occur and one error record per malformed line to `err`. Ends with the
// undecided summary.
void run_detect(std::istream& in, std::ostream& out, std::ostream& err, SessionStore& store);

}  // namespace seqscan
