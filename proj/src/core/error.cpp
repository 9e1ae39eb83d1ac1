#include "tubenet/error.hpp"

namespace tubenet {

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Singular: return "singular system";
    case ErrorCode::NotConverged: return "not converged";
    case ErrorCode::Geometry: return "geometry error";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown error";
}

}  // namespace tubenet
