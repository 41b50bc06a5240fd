#pragma once

#include <stdexcept>
#include <string>

namespace nibbled {

// Every failure the library can raise, shared across modules so the CLI can
// map them onto exit codes uniformly.
enum class ErrorCode {
  MonotonicityViolation,
  EndpointMismatch,
  CompatibilityViolation,
  FocusSingularity,
  CornerHit,
  GeometryFailure,
  DomainViolation,
  NonConvergence,
  DegenerateCaustic,
  ConsistencyFailure,
  ProfileViolation,
  SideLengthMismatch,
  TypeMismatch,
  RelationNotSymmetric,
  OutsideComponent,
  QuadratureFailure,
  UnglSide,
  InconsistentAngle,
  EulerMismatch,
  CornerCrossing,
  HitSingularity,
  CornerAmbiguity,
  NotGlobalTransversal,
  SeparatrixHitsCorner,
  OutOfDomain,
  UsageError,
};

// Domain errors mean the input asked for something impossible (exit 1 from the
// CLI); internal errors mean a cross-check tripped and indicate a bug (exit 2).
enum class ErrorKind { Domain, Internal };

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        kind_(kind) {}

  ErrorCode code() const { return code_; }
  ErrorKind kind() const { return kind_; }

 private:
  ErrorCode code_;
  ErrorKind kind_;
};

[[noreturn]] inline void fail_domain(ErrorCode code, const std::string& message) {
  throw Error(code, ErrorKind::Domain, message);
}

[[noreturn]] inline void fail_internal(ErrorCode code, const std::string& message) {
  throw Error(code, ErrorKind::Internal, message);
}

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorCode::FocusSingularity: return "FocusSingularity";
    case ErrorCode::CornerHit: return "CornerHit";
    case ErrorCode::GeometryFailure: return "GeometryFailure";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateCaustic: return "DegenerateCaustic";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorCode::ProfileViolation: return "ProfileViolation";
    case ErrorCode::SideLengthMismatch: return "SideLengthMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::RelationNotSymmetric: return "RelationNotSymmetric";
    case ErrorCode::OutsideComponent: return "OutsideComponent";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::UnglSide: return "UnglSide";
    case ErrorCode::InconsistentAngle: return "InconsistentAngle";
    case ErrorCode::EulerMismatch: return "EulerMismatch";
    case ErrorCode::CornerCrossing: return "CornerCrossing";
    case ErrorCode::HitSingularity: return "HitSingularity";
    case ErrorCode::CornerAmbiguity: return "CornerAmbiguity";
    case ErrorCode::NotGlobalTransversal: return "NotGlobalTransversal";
    case ErrorCode::SeparatrixHitsCorner: return "SeparatrixHitsCorner";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "UnknownError";
}

}  // namespace nibbled
