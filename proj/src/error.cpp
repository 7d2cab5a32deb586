#include "tlsum/error.hpp"

namespace tlsum {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidDate: return "InvalidDate";
    case ErrorCode::kInvalidTimeline: return "InvalidTimeline";
    case ErrorCode::kNoValidNodes: return "NoValidNodes";
    case ErrorCode::kUnreadable: return "Unreadable";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kEmptyArticlePool: return "EmptyArticlePool";
    case ErrorCode::kUndecomposedNode: return "UndecomposedNode";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kUnparseableResponse: return "UnparseableResponse";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptyEdgeSet: return "EmptyEdgeSet";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kModelError: return "ModelError";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kPadFailure: return "PadFailure";
    case ErrorCode::kInsufficientGroups: return "InsufficientGroups";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace tlsum
