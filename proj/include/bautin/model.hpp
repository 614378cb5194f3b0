#pragma once

#include <complex>

#include <Eigen/Dense>

namespace bautin {

using cplx = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = 3.14159265358979323846;

/// Segel-Jackson constants. The spatial domain is [0, l*pi] with zero-flux
/// boundaries; the delay is carried separately because it is a bifurcation
/// parameter.
struct ModelParams {
  double a = 5.0;  ///< predation coefficient
  double d = 1.0;  ///< prey diffusion rate
  double k = 0.0;  ///< prey self-reproduction coefficient
  double l = 1.0;  ///< domain scale

  /// Throws Error{InvalidArgument} for non-positive a, d, l and
  /// Error{NoEquilibrium} when k >= a.
  void validate(const char* operation = "validate") const;

  /// Both coordinates of the positive equilibrium coincide: 1/(a-k).
  double equilibrium() const { return 1.0 / (a - k); }

  ModelParams with_k(double new_k) const {
    ModelParams p = *this;
    p.k = new_k;
    return p;
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

}  // namespace bautin
