#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace recode {

// Declaration order is significant: it is the tie-breaking order for
// classifier rankings.
enum class BugType {
  FunctionalDefect,
  Crash,
  LayoutProblem,
  DisplayProblem,
  NetworkError,
  NullScreen,
  PerformanceProblem,
  ErrorPrompt,
  GarbledError,
  TransitionProblem,
};

inline constexpr std::size_t kBugTypeCount = 10;

inline constexpr std::array<BugType, kBugTypeCount> kAllBugTypes = {
    BugType::FunctionalDefect, BugType::Crash,          BugType::LayoutProblem,
    BugType::DisplayProblem,   BugType::NetworkError,   BugType::NullScreen,
    BugType::PerformanceProblem, BugType::ErrorPrompt,  BugType::GarbledError,
    BugType::TransitionProblem,
};

constexpr std::size_t index_of(BugType t) { return static_cast<std::size_t>(t); }

/// Stable kebab-case name, e.g. "functional-defect".
std::string_view to_string(BugType t);

std::optional<BugType> parse_bug_type(std::string_view name);

/// Bug types scored by the feature-matching strategy rather than a
/// type-specific visual signature.
constexpr bool uses_general_strategy(BugType t) {
  return t == BugType::FunctionalDefect || t == BugType::LayoutProblem ||
         t == BugType::DisplayProblem || t == BugType::TransitionProblem;
}

}  // namespace recode
