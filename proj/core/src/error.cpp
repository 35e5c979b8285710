#include "semiflat/error.hpp"

namespace semiflat {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularPair: return "SingularPair";
    case ErrorCode::BadNilpotent: return "BadNilpotent";
    case ErrorCode::RealityViolation: return "RealityViolation";
    case ErrorCode::MissingDerivatives: return "MissingDerivatives";
    case ErrorCode::DegenerateAnsatz: return "DegenerateAnsatz";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SingularU: return "SingularU";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Blowup: return "Blowup";
    case ErrorCode::ForbiddenRegion: return "ForbiddenRegion";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::NEqualsThree: return "NEqualsThree";
    case ErrorCode::SingularApproach: return "SingularApproach";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NonpositiveH: return "NonpositiveH";
    case ErrorCode::SingularFrame: return "SingularFrame";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::VanishingSupport: return "VanishingSupport";
    case ErrorCode::NonInvertibleGradient: return "NonInvertibleGradient";
    case ErrorCode::VanishingW: return "VanishingW";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace semiflat
