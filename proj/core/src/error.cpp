#include "sevstack/error.hpp"

namespace sevstack {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::schema: return "E_SCHEMA";
    case ErrorCode::label: return "E_LABEL";
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::lexicon: return "E_LEXICON";
    case ErrorCode::format: return "E_FORMAT";
    case ErrorCode::fit: return "E_FIT";
    case ErrorCode::join: return "E_JOIN";
    case ErrorCode::split: return "E_SPLIT";
    case ErrorCode::fold: return "E_FOLD";
    case ErrorCode::contract: return "E_CONTRACT";
    case ErrorCode::divergence: return "E_DIVERGENCE";
    case ErrorCode::validation: return "E_VALIDATION";
    case ErrorCode::io: return "E_IO";
    case ErrorCode::missing_artifact: return "E_MISSING_ARTIFACT";
  }
  return "E_UNKNOWN";
}

}  // namespace sevstack
