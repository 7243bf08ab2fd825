#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgraph {

enum class ErrorCode {
  UnknownConcept,
  NonExpandingConcept,
  DanglingReference,
  ArityMismatch,
  InvalidCount,
  WrongKind,
  NonPositive,
  InvalidDescription,
  ReconstructionMismatch,
  UnknownToken,
  UnknownEpisode,
  MalformedTemplate,
  MalformedTerm,
  InvalidConfig,
  VersionMismatch,
  CorruptFile,
  IoFailure,
  UnresolvedReference,
  TooLarge,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported as an Error carrying a
// stable code; callers that care about the category switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cgraph
