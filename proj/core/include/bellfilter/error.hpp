#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bellfilter {

enum class ErrorCode {
  NotHermitian,
  TraceNotOne,
  NotPositive,
  OutOfRange,
  BadWindow,
  VanishingNorm,
  DegenerateCorrelation,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

// Numerical failures are distinguished from validation failures so that
// front ends can map them to different exit codes.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bellfilter
