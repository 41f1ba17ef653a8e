#include "recode/bug_type.hpp"

#include "recode/error.hpp"

namespace recode {

namespace {
constexpr std::array<std::string_view, kBugTypeCount> kNames = {
    "functional-defect", "crash",         "layout-problem",       "display-problem",
    "network-error",     "null-screen",   "performance-problem",  "error-prompt",
    "garbled-error",     "transition-problem",
};
}  // namespace

std::string_view to_string(BugType t) { return kNames[index_of(t)]; }

std::optional<BugType> parse_bug_type(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kAllBugTypes[i];
  }
  return std::nullopt;
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MalformedImage: return "MalformedImage";
    case ErrorCode::MalformedAnnotation: return "MalformedAnnotation";
    case ErrorCode::EmptyDescription: return "EmptyDescription";
    case ErrorCode::RootNotFound: return "RootNotFound";
    case ErrorCode::MissingCategory: return "MissingCategory";
    case ErrorCode::EmptyCategory: return "EmptyCategory";
    case ErrorCode::DuplicateTerm: return "DuplicateTerm";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::InvalidLexicon: return "InvalidLexicon";
    case ErrorCode::NoReplaceableKeyword: return "NoReplaceableKeyword";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DegenerateCorpus: return "DegenerateCorpus";
    case ErrorCode::PluginUnavailable: return "PluginUnavailable";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DegenerateBox: return "DegenerateBox";
    case ErrorCode::OcrFailure: return "OcrFailure";
    case ErrorCode::MissingScore: return "MissingScore";
    case ErrorCode::UnlabeledReport: return "UnlabeledReport";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace recode
