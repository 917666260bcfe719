#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace seqscan {

// Outcome labels shared by every detector. `undecided` doubles as the
// "continue" label of a stopping plan cell.
enum class Decision : std::uint8_t {
  undecided = 0,
  scanner = 1,   // accept H0 (p <= p0)
  marginal = 2,  // triple test only, p0 < p < p1
  benign = 3,    // accept the upper hypothesis
};

inline constexpr std::size_t kDecisionCount = 4;

std::string_view to_string(Decision d);
std::optional<Decision> parse_decision(std::string_view text);

inline constexpr std::size_t index(Decision d) { return static_cast<std::size_t>(d); }

}  // namespace seqscan
