#include "ssflow/errors.hpp"

namespace ssflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutsideTube: return "OutsideTube";
    case ErrorCode::NotOnManifold: return "NotOnManifold";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::MissingInitialSlice: return "MissingInitialSlice";
    case ErrorCode::RegionOutsideGrid: return "RegionOutsideGrid";
    case ErrorCode::SourceUnbounded: return "SourceUnbounded";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::ScheduleTooCoarse: return "ScheduleTooCoarse";
    case ErrorCode::DegenerateFit: return "DegenerateFit";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ssflow
