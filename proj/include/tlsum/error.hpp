#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tlsum {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidDate,
  kInvalidTimeline,
  kNoValidNodes,
  kUnreadable,
  kMalformedRecord,
  kEmptyArticlePool,
  kUndecomposedNode,
  kBackendUnavailable,
  kUnparseableResponse,
  kEmptyMatrix,
  kTooLarge,
  kEmptyEdgeSet,
  kBudgetTooSmall,
  kModelError,
  kMissingReference,
  kPadFailure,
  kInsufficientGroups,
  kEmptyInput,
  kConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal findings attached to results: skipped lines, fallbacks, clamps.
struct Diagnostic {
  std::string code;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline void add_diagnostic(Diagnostics* sink, std::string code, std::string message) {
  if (sink != nullptr) sink->push_back({std::move(code), std::move(message)});
}

}  // namespace tlsum
