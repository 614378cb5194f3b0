#include "bautin/model.hpp"

#include <cmath>
#include <string>

#include "bautin/error.hpp"

namespace bautin {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::NoEquilibrium: return "no_equilibrium";
    case ErrorKind::DegenerateSystem: return "degenerate_system";
    case ErrorKind::ContourThroughRoot: return "contour_through_root";
    case ErrorKind::NonSemisimple: return "non_semisimple";
    case ErrorKind::Resonance: return "resonance";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::TrackingLost: return "tracking_lost";
    case ErrorKind::NoSignChange: return "no_sign_change";
    case ErrorKind::TransversalityFailure: return "transversality_failure";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, std::string operation,
             const std::string& message)
    : std::runtime_error(message),
      kind_(kind),
      module_(std::move(module)),
      operation_(std::move(operation)) {}

void ModelParams::validate(const char* operation) const {
  if (!(a > 0.0) || !(d > 0.0) || !(l > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::InvalidArgument, "spectral", operation,
                "model parameters a, d, l must be positive and k finite");
  }
  if (!(k < a)) {
    throw Error(ErrorKind::NoEquilibrium, "spectral", operation,
                "k >= a: no positive equilibrium");
  }
}

}  // namespace bautin
