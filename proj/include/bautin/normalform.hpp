#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "bautin/exppoly.hpp"
#include "bautin/model.hpp"
#include "bautin/spectral.hpp"

namespace bautin {

/// Linear part of the system after the time rescaling t -> t / tau and the
/// shift to the positive equilibrium.
struct Linearization {
  ModelParams params;
  Mat2 B1 = Mat2::Zero();  ///< undelayed Jacobian
  Mat2 B2 = Mat2::Zero();  ///< delayed Jacobian
  Mat2 D = Mat2::Identity();
  double ustar = 0, vstar = 0;
  double tau_star = 0, omega_star = 0;
  int n0 = 0;

  double omega0() const { return omega_star * tau_star; }
  /// tau (B1 - n^2/l^2 D)
  Mat2 undelayed(int n) const;
  /// Integral of d eta_n(theta) exp(lambda theta) over [-1, 0].
  Mat2c measure_action(int n, cplx lambda) const;
  /// lambda I - measure_action(n, lambda)
  Mat2c char_matrix(int n, cplx lambda) const;
  /// Generator rule at theta = 0 applied to phi: measure integral of phi.
  Vec2c boundary_action(int n, const ExpPoly& phi) const;
};

Linearization build_linearization(const ModelParams& params, const HopfPoint& hp);

/// q(theta) = (1, q1) e^{i w0 theta}, q*(s) = M (q2, 1) e^{i w0 s}.
struct EigenData {
  cplx q1, q2, M;

  Vec2c q0() const { return Vec2c(1.0, q1); }
  /// conj(q*(0)) as a column; the projection row used for every g_ij.
  Vec2c qstar_bar0() const { return std::conj(M) * Vec2c(std::conj(q2), 1.0); }
  ExpPoly q_of_theta() const;
};

/// Throws NonSemisimple when the normalization denominator is below 1e-10.
EigenData eigen_data(const Linearization& lin);

/// Closed forms of q1, q2 and conj(M) written out symbolically.
struct EigenClosedForm {
  cplx q1, q2, Mbar;
};
EigenClosedForm eigen_closed_form(const Linearization& lin);

/// Bilinear pairing (psi, phi)_c for conj(psi(s)) = psi_bar0 exp(psi_freq i w0 s).
cplx bilinear(const Linearization& lin, const Vec2c& psi_bar0, int psi_freq,
              const ExpPoly& phi);
cplx pair_qstar(const Linearization& lin, const EigenData& eig, const ExpPoly& phi);
cplx pair_qstar_conj(const Linearization& lin, const EigenData& eig, const ExpPoly& phi);

/// Second derivatives of the restricted nonlinearity at theta = 0, without the
/// spatial factor b_{n0}^2.
struct QuadDerivs {
  Vec2c Fzz, Fzzbar, Fzbzb;
};
QuadDerivs quad_derivs(const Linearization& lin, const EigenData& eig);

/// Solves char_matrix(n, m i w0) T = rhs. Throws Resonance when the matrix is
/// singular to 1e-10.
Vec2c solve_T(const Linearization& lin, int m, const Vec2c& rhs, int n);

struct GTable {
  cplx g20, g11, g02, g30, g21, g12, g03, g40, g31, g22, g13, g04, g32;

  static const std::array<std::pair<int, int>, 13>& labels();
  cplx& at(int i, int j);
  cplx at(int i, int j) const;
  bool all_finite() const;
};

/// Coefficients of W_ij per spatial mode.
struct WFunction {
  int i = 0, j = 0;
  std::map<int, ExpPoly> modes;

  Vec2c eval(int n, double theta, double omega0) const;
};

using Label = std::pair<int, int>;

struct ReduceOptions {
  /// Reject points whose characteristic residual at i w0 exceeds 1e-9. Off-curve
  /// evaluations used for finite differences disable it.
  bool require_critical = true;
};

struct CenterData {
  Linearization lin;
  EigenData eig;
  QuadDerivs quad;
  GTable g;
  std::map<Label, WFunction> W;
  /// Second-order and higher coefficients of tau * F on the manifold, per mode.
  std::map<Label, std::map<int, Vec2c>> F;
  /// Largest bordering multiplier in the resonant solves (should be ~0).
  double solvability_residual = 0;
};

/// Projection integral of b_m b_p b_n over [0, l pi] in closed form.
double triple_projection(int m, int p, int n, double l);

CenterData reduce(const ModelParams& params, const HopfPoint& hp,
                  const ReduceOptions& options = {});

/// Verification of a reduction against the displayed W equations.
struct ResidualReport {
  double junction = 0;       ///< max theta = 0 residual over all W_ij and modes
  double interior = 0;       ///< max interior ODE residual at sampled theta
  double w_symmetry = 0;     ///< W02/W12/W03 vs conj of W20/W21/W30
  double w11_real = 0;       ///< imaginary part of W11 at sampled theta
  double g02_conj = 0;       ///< |g02 - conj g20|
  double norm_q = 0;         ///< |(q*, q) - 1|
  double norm_qbar = 0;      ///< |(q*, conj q)|
  double quad_match = 0;     ///< order-2 F vs the displayed quadratic derivatives
  double w_in_q = 0;         ///< |(q*, W_ij)| and |(conj q*, W_ij)| at mode n0
  double g12_vs_conj_g21 = 0;  ///< reported only
  double eigen_action = 0;   ///< |A q - i w0 q| at theta = 0
};

ResidualReport check_residuals(const CenterData& cd, unsigned seed = 12345);

}  // namespace bautin
