#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssflow {

enum class ErrorCode {
  OutsideTube,
  NotOnManifold,
  GridTooSmall,
  OutOfDomain,
  EmptyRegion,
  MissingInitialSlice,
  RegionOutsideGrid,
  SourceUnbounded,
  BlowUp,
  NoBracket,
  ScheduleTooCoarse,
  DegenerateFit,
  ConfigError,
  SchemaMismatch,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported with one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace ssflow
