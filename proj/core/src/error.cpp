#include "thermoform/error.hpp"

namespace thermoform {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::DeadSymbol: return "DeadSymbol";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::Inadmissible: return "Inadmissible";
    case ErrorCode::BadSlope: return "BadSlope";
    case ErrorCode::OscViolation: return "OscViolation";
    case ErrorCode::ImageEscape: return "ImageEscape";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::NonNegativeWeight: return "NonNegativeWeight";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::OnOrLeftOfCriticalLine: return "OnOrLeftOfCriticalLine";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::BadPotential: return "BadPotential";
    case ErrorCode::BadQuery: return "BadQuery";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace thermoform
