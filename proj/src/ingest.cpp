#include "seqscan/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "seqscan/errors.hpp"

namespace seqscan {

using nlohmann::json;

ConnectionEvent parse_event(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw MalformedEvent(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw MalformedEvent("event is not a JSON object");

  ConnectionEvent ev;
  const auto ts = j.contains("timestamp") ? j.find("timestamp") : j.find("ts");
  if (ts == j.end() || !ts->is_number_integer()) throw MalformedEvent("missing integer 'timestamp'");
  ev.timestamp = ts->get<std::int64_t>();

  for (const char* key : {"src", "dst"}) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
      throw MalformedEvent(std::string("missing non-empty string '") + key + "'");
    }
  }
  ev.src = j["src"].get<std::string>();
  ev.dst = j["dst"].get<std::string>();

  const auto out = j.find("outcome");
  if (out == j.end()) throw MalformedEvent("missing 'outcome'");
  if (out->is_boolean()) {
    ev.success = out->get<bool>();
  } else if (out->is_number_integer() && (out->get<std::int64_t>() == 0 || out->get<std::int64_t>() == 1)) {
    ev.success = out->get<std::int64_t>() == 1;
  } else {
    throw MalformedEvent("'outcome' must be 0 or 1");
  }
  return ev;
}

std::string DecisionRecord::to_json() const {
  nlohmann::ordered_json j;
  j["src"] = src;
  j["decision"] = std::string(seqscan::to_string(decision));
  j["n"] = n;
  j["s"] = s;
  j["ts"] = timestamp;
  return j.dump();
}

SessionStore::SessionStore(StoppingPlan plan) : plan_(std::move(plan)) {}

std::optional<DecisionRecord> SessionStore::ingest(const ConnectionEvent& event) {
  ++counters_.events;
  SourceSession& session = sessions_[event.src];
  if (session.seen_destinations.count(event.dst) != 0) {
    ++counters_.duplicates;
    return std::nullopt;
  }
  if (session.decision != Decision::undecided) {
    ++counters_.after_decision;
    return std::nullopt;
  }
  session.seen_destinations.insert(event.dst);
  session.n += 1;
  session.s += event.success ? 1 : 0;
  session.last_timestamp = event.timestamp;
  if (session.n <= plan_.horizon()) session.decision = plan_.label(session.n, session.s);
  if (session.decision == Decision::undecided) return std::nullopt;

  session.decision_emitted = true;
  ++counters_.decisions;
  return DecisionRecord{event.src, session.decision, session.n, session.s, event.timestamp};
}

std::vector<DecisionRecord> SessionStore::undecided_summary() const {
  std::vector<DecisionRecord> out;
  for (const auto& [src, session] : sessions_) {
    if (session.decision == Decision::undecided) {
      out.push_back({src, Decision::undecided, session.n, session.s, session.last_timestamp});
    }
  }
  return out;
}

const SourceSession* SessionStore::find(const std::string& src) const {
  const auto it = sessions_.find(src);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::string SessionStore::snapshot_json() const {
  json j;
  j["plan"] = plan_.name();
  j["horizon"] = plan_.horizon();
  j["counters"] = {{"events", counters_.events},
                   {"duplicates", counters_.duplicates},
                   {"after_decision", counters_.after_decision},
                   {"malformed", counters_.malformed},
                   {"decisions", counters_.decisions}};
  json sessions = json::object();
  for (const auto& [src, s] : sessions_) {
    std::vector<std::string> seen(s.seen_destinations.begin(), s.seen_destinations.end());
    std::sort(seen.begin(), seen.end());
    sessions[src] = {{"seen", seen},
                     {"n", s.n},
                     {"s", s.s},
                     {"decision", std::string(to_string(s.decision))},
                     {"emitted", s.decision_emitted},
                     {"ts", s.last_timestamp}};
  }
  j["sessions"] = std::move(sessions);
  return j.dump();
}

void SessionStore::restore_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    if (j.at("plan").get<std::string>() != plan_.name() || j.at("horizon").get<int>() != plan_.horizon()) {
      throw ConfigError("snapshot was taken under a different detector plan");
    }
    const json& c = j.at("counters");
    IngestCounters counters;
    counters.events = c.at("events").get<long>();
    counters.duplicates = c.at("duplicates").get<long>();
    counters.after_decision = c.at("after_decision").get<long>();
    counters.malformed = c.at("malformed").get<long>();
    counters.decisions = c.at("decisions").get<long>();
    std::map<std::string, SourceSession, std::less<>> sessions;
    for (const auto& [src, v] : j.at("sessions").items()) {
      SourceSession s;
      for (const auto& d : v.at("seen")) s.seen_destinations.insert(d.get<std::string>());
      s.n = v.at("n").get<int>();
      s.s = v.at("s").get<int>();
      const auto decision = parse_decision(v.at("decision").get<std::string>());
      if (!decision) throw ConfigError("snapshot has unknown decision for source " + src);
      s.decision = *decision;
      s.decision_emitted = v.at("emitted").get<bool>();
      s.last_timestamp = v.at("ts").get<std::int64_t>();
      sessions.emplace(src, std::move(s));
    }
    sessions_ = std::move(sessions);
    counters_ = counters;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("unreadable snapshot: ") + e.what());
  }
}

void run_detect(std::istream& in, std::ostream& out, std::ostream& err, SessionStore& store) {
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ConnectionEvent event;
    try {
      event = parse_event(line);
    } catch (const MalformedEvent& e) {
      store.note_malformed();
      err << json{{"error", e.kind()}, {"line", line_no}, {"message", e.what()}}.dump() << '\n';
      continue;
    }
    if (auto record = store.ingest(event)) out << record->to_json() << '\n';
  }
  for (const DecisionRecord& r : store.undecided_summary()) out << r.to_json() << '\n';
}

}  // namespace seqscan
