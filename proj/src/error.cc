#include "dgx/error.h"

namespace dgx {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kOutOfRange: return "out_of_range";
    case ErrorCode::kDuplicateEdge: return "duplicate_edge";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kNotSymmetric: return "not_symmetric";
    case ErrorCode::kNotConverged: return "not_converged";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kMissingArtifact: return "missing_artifact";
    case ErrorCode::kHashMismatch: return "hash_mismatch";
    case ErrorCode::kChecksumMismatch: return "checksum_mismatch";
    case ErrorCode::kCountMismatch: return "count_mismatch";
    case ErrorCode::kTooLarge: return "too_large";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kValidationGate: return "validation_gate";
  }
  return "unknown";
}

}  // namespace dgx
