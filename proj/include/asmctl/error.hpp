#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asmctl {

enum class ErrorCode {
  kInvalidInput,
  kInvalidGeometry,
  kValidation,
  kNotFound,
  kConflict,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace asmctl
