#include "seqscan/decision.hpp"

namespace seqscan {

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::undecided: return "undecided";
    case Decision::scanner: return "scanner";
    case Decision::marginal: return "marginal";
    case Decision::benign: return "benign";
  }
  return "undecided";
}

std::optional<Decision> parse_decision(std::string_view text) {
  for (auto d : {Decision::undecided, Decision::scanner, Decision::marginal, Decision::benign}) {
    if (to_string(d) == text) return d;
  }
  return std::nullopt;
}

}  // namespace seqscan
