#pragma once

#include <stdexcept>
#include <string>

namespace potato {

enum class ErrorCode {
  kEmptyInterior,
  kUnbounded,
  kDegenerateVertex,
  kNotPlanar,
  kNonIndependentRemoval,
  kInfeasible,
  kOutOfRange,
  kNotQualified,
  kInvalidPieceCount,
  kVerificationFailed,
  kEmptyInner,
  kMalformedInput,
};

const char* to_string(ErrorCode code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace potato
