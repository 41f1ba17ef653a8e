#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recode {

enum class ErrorCode {
  MissingFile,
  MalformedImage,
  MalformedAnnotation,
  EmptyDescription,
  RootNotFound,
  MissingCategory,
  EmptyCategory,
  DuplicateTerm,
  UnknownCategory,
  InvalidLexicon,
  NoReplaceableKeyword,
  EmptyCorpus,
  DegenerateCorpus,
  PluginUnavailable,
  EmptySet,
  DegenerateBox,
  OcrFailure,
  MissingScore,
  UnlabeledReport,
  IoFailure,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception; callers that
// need to branch on the cause inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace recode
