#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bautin {

enum class ErrorKind {
  InvalidArgument,
  NoEquilibrium,
  DegenerateSystem,
  ContourThroughRoot,
  NonSemisimple,
  Resonance,
  NonFinite,
  TrackingLost,
  NoSignChange,
  TransversalityFailure,
  Config,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries the module and operation that
// produced it so the CLI can emit a structured report.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation,
        const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
};

}  // namespace bautin
