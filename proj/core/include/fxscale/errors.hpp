#pragma once

#include <stdexcept>
#include <string>

namespace fxscale {

// Stable failure categories. The CLI maps them onto distinct exit codes,
// so the mapping below is part of the tool's interface.
enum class ErrorCode {
  Parse,                 // malformed line / reject budget exceeded
  Ordering,              // out-of-order timestamp under Strict
  EmptyStream,           // no parseable events
  EmptySelection,        // pair filter matches nothing
  Geometry,              // window/dt arithmetic does not divide
  Coverage,              // requested window outside stream span
  LagDomain,             // |tau| out of range for the series length
  Domain,                // other precondition violation
  Degenerate,            // all matrix entries undefined / zero spread
  InsufficientData,      // fewer than 2 usable fit points
  BootstrapDegeneracy,   // too many failed bootstrap replicates
  Spec,                  // invalid generator specification
  Io,                    // file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Exit-code contract: 2 usage (handled by the CLI parser), 3 parse/data,
  // 4 geometry/domain, 5 degeneracy, 6 I/O.
  int exit_code() const noexcept {
    switch (code_) {
      case ErrorCode::Parse:
      case ErrorCode::Ordering:
      case ErrorCode::EmptyStream:
        return 3;
      case ErrorCode::EmptySelection:
      case ErrorCode::Geometry:
      case ErrorCode::Coverage:
      case ErrorCode::LagDomain:
      case ErrorCode::Domain:
      case ErrorCode::Spec:
        return 4;
      case ErrorCode::Degenerate:
      case ErrorCode::InsufficientData:
      case ErrorCode::BootstrapDegeneracy:
        return 5;
      case ErrorCode::Io:
        return 6;
    }
    return 1;
  }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace fxscale
