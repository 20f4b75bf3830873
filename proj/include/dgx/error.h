#ifndef DGX_ERROR_H_
#define DGX_ERROR_H_

#include <stdexcept>
#include <string>

namespace dgx {

// Error categories surfaced through the C API as status codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kOutOfRange,
  kDuplicateEdge,
  kShapeMismatch,
  kNotSymmetric,
  kNotConverged,
  kNonFinite,
  kMissingArtifact,
  kHashMismatch,
  kChecksumMismatch,
  kCountMismatch,
  kTooLarge,
  kParse,
  kIo,
  kValidationGate,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws Error(code, message) when `condition` is false.
inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace dgx

#endif  // DGX_ERROR_H_
