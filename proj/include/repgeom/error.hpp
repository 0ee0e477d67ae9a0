#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace repgeom {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  IncomparablePoints,
  DegenerateGeodesic,
  AntipodalPoints,
  TangentBaseMismatch,
  InvalidTangent,
  DegenerateAngle,
  ZeroAfterCentering,
  RankDeficientWhitening,
  ShapeMismatch,
  ZeroNormShape,
  SingularSylvester,
  NotPositiveDefinite,
  IllConditioned,
  TooFewRows,
  MetricMismatch,
  InvalidDistanceMatrix,
  UnsupportedDtype,
  ShapeError,
  ParseError,
  ManifestError,
  IoError,
  OutputLocked,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace repgeom
