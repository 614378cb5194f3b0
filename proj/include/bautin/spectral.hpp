#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bautin/model.hpp"

namespace bautin {

enum class Branch { Plus, Minus };

std::string_view to_string(Branch b);
Branch branch_from_string(std::string_view s);

/// Coefficients of the mode-n characteristic function
///   Delta_n(lambda; tau) = lambda^2 + A lambda + B lambda e^{-lambda tau} + C + D e^{-lambda tau}
/// together with the quartic lambda = i omega reduces to:
///   (omega^2)^2 + M1 omega^2 + M2 = 0.
struct CharCoeffs {
  int n = 0;
  double A = 0, B = 0, C = 0, D = 0;
  double M1 = 0, M2 = 0;
};

CharCoeffs char_coeffs(const ModelParams& params, int n);

cplx characteristic(const CharCoeffs& cc, cplx lambda, double tau);
cplx characteristic_dlambda(const CharCoeffs& cc, cplx lambda, double tau);
cplx characteristic_dtau(const CharCoeffs& cc, cplx lambda, double tau);

struct OmegaCandidate {
  double omega = 0;
  Branch branch = Branch::Plus;
  /// M1^2 - 4 M2 == 0: the two branches coincide (possible Hopf-Hopf point).
  bool double_root = false;
};

std::vector<OmegaCandidate> omega_candidates(const CharCoeffs& cc);

/// cos(omega tau), sin(omega tau) from the real/imaginary split of
/// Delta_n(i omega) = 0.
struct CosSin {
  double c = 0;
  double s = 0;
};

CosSin solve_cos_sin(const CharCoeffs& cc, double omega);

struct HopfPoint {
  int n = 0;
  double omega = 0;  ///< original time scale
  double tau = 0;
  Branch branch = Branch::Plus;
  int j = 0;

  friend bool operator==(const HopfPoint&, const HopfPoint&) = default;
};

/// Delays tau_{n,j}, j = 0..j_max, at which +-i omega are characteristic roots.
/// (omega, tau_0) is Newton-polished on Delta_n before the 2 pi j / omega shifts
/// are applied.
std::vector<HopfPoint> hopf_delays(const CharCoeffs& cc, double omega,
                                   Branch branch, int j_max);

/// Smallest n such that M1 > 0 and M2 > 0, both strictly increasing, for every
/// mode from n on. Found from a root bound on M1, M2 as polynomials in n^2/l^2,
/// so no mode beyond it has imaginary-axis roots.
int mode_cutoff(const ModelParams& params);

/// Minimum positive Hopf delay over modes 0..mode_cutoff and both branches.
/// Ties within 1e-9 go to the smaller mode, then to the + branch.
std::optional<HopfPoint> first_hopf(const ModelParams& params);

/// Number of zeros of Delta_n inside the rectangle [re_lo, re_hi] x [-im_half, im_half],
/// by the argument principle. Throws ContourThroughRoot when |Delta_n| < 1e-12
/// on the boundary.
int count_roots_in_rectangle(const CharCoeffs& cc, double tau, double re_lo,
                             double re_hi, double im_half);

/// Damped Newton on Delta_n from a seed. Returns nullopt on failure.
std::optional<cplx> polish_root(const CharCoeffs& cc, double tau, cplx seed,
                                double tol = 1e-12, int max_iter = 50);

struct CriticalPair {
  int n = 0;
  double omega = 0;
};

struct RootVerdict {
  bool all_stable = true;
  int n = -1;             ///< mode of the offending root
  cplx root{0.0, 0.0};    ///< offending root (NaN if counted but not located)
  int excluded = 0;       ///< critical roots removed from the count
};

/// Verifies every characteristic root of modes 0..n_max other than the
/// designated critical pair has Re lambda < -1e-6.
RootVerdict rightmost_root_check(const ModelParams& params, double tau,
                                 int n_max,
                                 std::optional<CriticalPair> exclude = {});

struct CurveSample {
  double k = 0;
  std::optional<HopfPoint> point;  ///< empty when no mode crosses the axis
};

/// First Hopf delay as a function of k on an even grid of k_steps samples.
std::vector<CurveSample> hopf_curve(const ModelParams& base, double k_lo,
                                    double k_hi, int k_steps);

}  // namespace bautin
