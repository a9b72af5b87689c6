#include "bellfilter/error.hpp"

namespace bellfilter {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::VanishingNorm: return "VanishingNorm";
    case ErrorCode::DegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  return code == ErrorCode::VanishingNorm ||
         code == ErrorCode::DegenerateCorrelation;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

}  // namespace bellfilter
