#include "sphereprobe/error.hpp"

namespace sphereprobe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MismatchedSurface: return "MismatchedSurface";
    case ErrorCode::Parity: return "PARITY";
    case ErrorCode::TriangleInequality: return "TRIANGLE_INEQ";
    case ErrorCode::Disconnected: return "DISCONNECTED";
    case ErrorCode::Peripheral: return "PERIPHERAL";
    case ErrorCode::Empty: return "EMPTY";
    case ErrorCode::NotPants: return "NotPants";
    case ErrorCode::Precondition: return "PreconditionViolated";
    case ErrorCode::NotFoundUnderCap: return "NotFoundUnderCap";
    case ErrorCode::ResourceCap: return "ResourceCap";
    case ErrorCode::WindowExhausted: return "WindowExhausted";
    case ErrorCode::AuditFailure: return "AuditFailure";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sphereprobe
