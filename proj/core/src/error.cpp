#include "cgraph/error.hpp"

namespace cgraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownConcept: return "UnknownConcept";
    case ErrorCode::NonExpandingConcept: return "NonExpandingConcept";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::InvalidDescription: return "InvalidDescription";
    case ErrorCode::ReconstructionMismatch: return "ReconstructionMismatch";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::UnknownEpisode: return "UnknownEpisode";
    case ErrorCode::MalformedTemplate: return "MalformedTemplate";
    case ErrorCode::MalformedTerm: return "MalformedTerm";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

}  // namespace cgraph
