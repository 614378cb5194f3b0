#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bautin/model.hpp"
#include "bautin/normalform.hpp"
#include "bautin/spectral.hpp"

namespace bautin {

struct LyapunovCoeffs {
  double l1 = 0;
  double l2 = 0;
};

/// First and second Lyapunov coefficients of the reduced equation with
/// linear frequency omega_tau = omega* tau*.
LyapunovCoeffs lyapunov_coeffs(const GTable& g, double omega_tau);

struct LyapunovPair {
  double nu = 0;
  double l1 = 0;
  double l2 = 0;
  double k = 0;
  double tau = 0;
  double omega = 0;  ///< tracked frequency used for the reduction
};

/// Root lambda = alpha + i omega of mode hp_ref.n followed from i omega(hp_ref)
/// at (ref.k, hp_ref.tau) to (k, tau) by Newton continuation.
cplx track_root(const ModelParams& ref, const HopfPoint& hp_ref, double k, double tau);

/// alpha / omega of the tracked root.
double nu_of(const ModelParams& ref, const HopfPoint& hp_ref, double k, double tau);

/// nu, l1 and l2 at (k, tau). Off the Hopf curve the reduction runs at the
/// tracked frequency with the critical-point check disabled.
LyapunovPair lyapunov_at(const ModelParams& ref, const HopfPoint& hp_ref, double k,
                         double tau);

/// l1 on the Hopf curve: first Hopf delay at k, then the reduction there.
LyapunovPair lyapunov_on_curve(const ModelParams& base, double k);

enum class DiagramCase { L2Negative, L2Positive };
std::string to_string(DiagramCase c);
DiagramCase diagram_case_from_string(const std::string& s);

struct BautinResult {
  ModelParams params;  ///< k set to k_star
  HopfPoint hopf;
  double k_star = 0, tau_star = 0, omega_star = 0;
  double l1_at = 0, l2_at = 0;
  /// Jacobian of (nu, l1) with respect to (k, tau), row-major.
  double nu_k = 0, nu_tau = 0, l1_k = 0, l1_tau = 0;
  double transversality_det = 0;
  double transversality_det_half_step = 0;
  DiagramCase diagram_case = DiagramCase::L2Positive;
  /// l1 at the bracket ends: the criticality on each side of k_star.
  double l1_lo = 0, l1_hi = 0;
  int iterations = 0;

  friend bool operator==(const BautinResult&, const BautinResult&) = default;
};

struct BautinOptions {
  double l1_tol = 1e-6;
  double fd_step = 1e-4;
  int max_iter = 200;
};

BautinResult find_bautin(const ModelParams& base, double k_lo, double k_hi,
                         const BautinOptions& options = {});

/// Central-difference Jacobian of (nu, l1) at the Bautin point with step h.
void transversality(const ModelParams& ref, const HopfPoint& hp, double h, double jac[4]);

struct DiagramWindow {
  double k_lo = 0, k_hi = 0;
  double tau_lo = 0, tau_hi = 0;
  /// Points with |nu| or |l1| above this are labelled "outside".
  double trust = 1.0;
};

struct DiagramPoint {
  double k = 0, tau = 0, nu = 0, l1 = 0, l2 = 0;
  std::string region;
};

struct Diagram {
  DiagramWindow window;
  int grid = 0;
  std::vector<DiagramPoint> points;                    ///< row-major, k fastest
  std::vector<std::pair<double, double>> hopf_curve;   ///< (k, tau)
  std::vector<std::pair<double, double>> fold_curve;   ///< (k, tau)
};

/// Number of positive roots s of nu + l1 s + l2 s^2 mapped to I, II, III.
std::string region_label(double nu, double l1, double l2);

Diagram local_diagram(const BautinResult& br, const DiagramWindow& window, int grid);

}  // namespace bautin
