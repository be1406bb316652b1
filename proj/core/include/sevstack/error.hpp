#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sevstack {

/// Failure categories. The CLI prints `code_name()` as the machine-parsable
/// prefix of its single error line.
enum class ErrorCode {
  schema,      // missing column / malformed header
  label,       // label string not in the scheme
  parse,       // malformed delimited row or JSON line
  lexicon,     // bad lexicon line
  format,      // bad embedding table or feature file
  fit,         // empty vocabulary and similar
  join,        // id present on one side only
  split,       // stratified split precondition
  fold,        // class smaller than K
  contract,    // caller broke a precondition
  divergence,  // non-finite loss during training
  validation,  // bad configuration
  io,          // file could not be opened or written
  missing_artifact,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sevstack
