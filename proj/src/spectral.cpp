#include "bautin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bautin/error.hpp"
#include "bautin/parallel.hpp"

namespace bautin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kStableMargin = 1e-6;  // delta: Re lambda >= -delta counts as unstable

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
  throw Error(kind, "spectral", op, msg);
}

// Principal branch rule for omega*tau in [0, 2 pi).
double angle_from_cos_sin(const CosSin& cs) {
  const double c = std::clamp(cs.c, -1.0, 1.0);
  const double s = std::clamp(cs.s, -1.0, 1.0);
  if (s >= 0.0) return std::acos(c);
  if (c >= 0.0) return std::asin(s) + kTwoPi;
  return -std::asin(s) + std::numbers::pi;
}

// Newton on Delta_n(i omega; tau) = 0 in the two real unknowns (omega, tau).
void polish_hopf(const CharCoeffs& cc, double& omega, double& tau) {
  for (int it = 0; it < 50; ++it) {
    const cplx lam(0.0, omega);
    const cplx f = characteristic(cc, lam, tau);
    if (std::abs(f) < 1e-15) break;
    const cplx f_omega = cplx(0.0, 1.0) * characteristic_dlambda(cc, lam, tau);
    const cplx f_tau = characteristic_dtau(cc, lam, tau);
    Mat2 J;
    J << f_omega.real(), f_tau.real(), f_omega.imag(), f_tau.imag();
    const Eigen::Vector2d rhs(-f.real(), -f.imag());
    const Eigen::Vector2d step = J.fullPivLu().solve(rhs);
    if (!step.allFinite()) break;
    omega += step(0);
    tau += step(1);
    if (std::abs(step(0)) + std::abs(step(1)) < 1e-12 * (1.0 + std::abs(tau))) break;
  }
}

}  // namespace

std::string_view to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

Branch branch_from_string(std::string_view s) {
  if (s == "+" || s == "plus") return Branch::Plus;
  if (s == "-" || s == "minus") return Branch::Minus;
  throw Error(ErrorKind::InvalidArgument, "spectral", "branch_from_string",
              "unknown branch tag");
}

CharCoeffs char_coeffs(const ModelParams& params, int n) {
  params.validate("char_coeffs");
  if (n < 0) fail(ErrorKind::InvalidArgument, "char_coeffs", "negative mode index");
  const double a = params.a, d = params.d, k = params.k;
  const double nn = static_cast<double>(n) * n / (params.l * params.l);
  CharCoeffs cc;
  cc.n = n;
  cc.A = (k - 2.0) / (k - a) + (d + 1.0) * nn;
  cc.B = 1.0 / (k - a);
  cc.C = (k / (a - k) - d * nn) * (2.0 / (k - a) - nn);
  cc.D = (k + a) / ((a - k) * (a - k)) - d * nn / (a - k);
  cc.M1 = -2.0 * cc.C + cc.A * cc.A - cc.B * cc.B;
  cc.M2 = cc.C * cc.C - cc.D * cc.D;
  return cc;
}

cplx characteristic(const CharCoeffs& cc, cplx lambda, double tau) {
  const cplx e = std::exp(-lambda * tau);
  return lambda * lambda + cc.A * lambda + cc.B * lambda * e + cc.C + cc.D * e;
}

cplx characteristic_dlambda(const CharCoeffs& cc, cplx lambda, double tau) {
  const cplx e = std::exp(-lambda * tau);
  return 2.0 * lambda + cc.A + cc.B * e - tau * (cc.B * lambda + cc.D) * e;
}

cplx characteristic_dtau(const CharCoeffs& cc, cplx lambda, double tau) {
  const cplx e = std::exp(-lambda * tau);
  return -lambda * (cc.B * lambda + cc.D) * e;
}

std::vector<OmegaCandidate> omega_candidates(const CharCoeffs& cc) {
  std::vector<OmegaCandidate> out;
  const double disc = cc.M1 * cc.M1 - 4.0 * cc.M2;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  const bool twin = disc == 0.0;
  auto push = [&](double w2, Branch b) {
    if (w2 > 0.0) out.push_back({std::sqrt(w2), b, twin});
  };
  if (cc.M2 < 0.0) {
    push((-cc.M1 + sq) / 2.0, Branch::Plus);
  } else if (cc.M1 < 0.0 && cc.M2 > 0.0) {
    push((-cc.M1 + sq) / 2.0, Branch::Plus);
    push((-cc.M1 - sq) / 2.0, Branch::Minus);
  }
  return out;
}

CosSin solve_cos_sin(const CharCoeffs& cc, double omega) {
  // D c + B w s = w^2 - C ;  B w c - D s = -A w
  const double det = -(cc.D * cc.D + cc.B * cc.B * omega * omega);
  if (std::abs(det) == 0.0) {
    fail(ErrorKind::DegenerateSystem, "hopf_delays", "D^2 + B^2 omega^2 = 0");
  }
  const double r1 = omega * omega - cc.C;
  const double r2 = -cc.A * omega;
  return {(r1 * -cc.D - cc.B * omega * r2) / det,
          (cc.D * r2 - cc.B * omega * r1) / det};
}

std::vector<HopfPoint> hopf_delays(const CharCoeffs& cc, double omega,
                                   Branch branch, int j_max) {
  if (!(omega > 0.0)) fail(ErrorKind::InvalidArgument, "hopf_delays", "omega must be positive");
  if (j_max < 0) fail(ErrorKind::InvalidArgument, "hopf_delays", "negative j_max");
  const CosSin cs = solve_cos_sin(cc, omega);
  double w = omega;
  double tau0 = angle_from_cos_sin(cs) / omega;
  if (tau0 > 0.0) polish_hopf(cc, w, tau0);
  std::vector<HopfPoint> out;
  out.reserve(static_cast<std::size_t>(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) {
    out.push_back({cc.n, w, tau0 + kTwoPi * j / w, branch, j});
  }
  return out;
}

namespace {

// 1 + max |c_i / c_deg|: every real root of the polynomial lies below it.
double cauchy_bound(const std::vector<double>& c) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i] / c.back()));
  return 1.0 + m;
}

}  // namespace

int mode_cutoff(const ModelParams& params) {
  params.validate("mode_cutoff");
  // M1 and M2 as polynomials in s = n^2 / l^2 with positive leading terms.
  const double a = params.a, d = params.d, k = params.k;
  const double A0 = (k - 2.0) / (k - a), A1 = d + 1.0, B = 1.0 / (k - a);
  const double al = k / (a - k), be = 2.0 / (k - a);
  const double C0 = al * be, C1 = -(al + d * be), C2 = d;
  const double D0 = (k + a) / ((a - k) * (a - k)), D1 = -d / (a - k);
  const std::vector<double> m1{-2.0 * C0 + A0 * A0 - B * B, -2.0 * C1 + 2.0 * A0 * A1,
                               -2.0 * C2 + A1 * A1};
  const std::vector<double> m2{C0 * C0 - D0 * D0, 2.0 * C0 * C1 - 2.0 * D0 * D1,
                               C1 * C1 + 2.0 * C0 * C2 - D1 * D1, 2.0 * C1 * C2, C2 * C2};
  // Beyond the bound both polynomials and, by Gauss-Lucas, their derivatives
  // are positive, so every higher mode is root-free.
  const double s_safe = std::max(cauchy_bound(m1), cauchy_bound(m2));
  const double n_safe = std::ceil(params.l * std::sqrt(s_safe));
  if (!(n_safe < 1e6)) fail(ErrorKind::NonFinite, "mode_cutoff", "mode bound out of range");
  int n = static_cast<int>(n_safe);
  CharCoeffs next = char_coeffs(params, n);
  while (n > 0) {
    const CharCoeffs prev = char_coeffs(params, n - 1);
    if (!(prev.M1 > 0.0 && prev.M2 > 0.0 && prev.M1 < next.M1 && prev.M2 < next.M2)) break;
    next = prev;
    --n;
  }
  return n;
}

std::optional<HopfPoint> first_hopf(const ModelParams& params) {
  const int n_max = mode_cutoff(params);
  std::optional<HopfPoint> best;
  for (int n = 0; n <= n_max; ++n) {
    const CharCoeffs cc = char_coeffs(params, n);
    for (const auto& cand : omega_candidates(cc)) {
      HopfPoint hp;
      try {
        hp = hopf_delays(cc, cand.omega, cand.branch, 0).front();
      } catch (const Error&) {
        continue;
      }
      if (!(hp.tau > 1e-12)) continue;
      if (!best) {
        best = hp;
        continue;
      }
      const double dt = hp.tau - best->tau;
      if (dt < -1e-9) {
        best = hp;
      } else if (std::abs(dt) <= 1e-9) {
        if (hp.n < best->n || (hp.n == best->n && hp.branch == Branch::Plus &&
                               best->branch == Branch::Minus)) {
          best = hp;
        }
      }
    }
  }
  return best;
}

int count_roots_in_rectangle(const CharCoeffs& cc, double tau, double re_lo,
                             double re_hi, double im_half) {
  const cplx corners[4] = {{re_lo, -im_half}, {re_hi, -im_half},
                           {re_hi, im_half}, {re_lo, im_half}};
  auto winding = [&](int per_edge, double& max_step) {
    double total = 0.0;
    max_step = 0.0;
    for (int e = 0; e < 4; ++e) {
      const cplx z0 = corners[e];
      const cplx z1 = corners[(e + 1) % 4];
      cplx prev = characteristic(cc, z0, tau);
      for (int i = 1; i <= per_edge; ++i) {
        const cplx z = z0 + (z1 - z0) * (static_cast<double>(i) / per_edge);
        const cplx f = characteristic(cc, z, tau);
        if (std::abs(f) < 1e-12) {
          fail(ErrorKind::ContourThroughRoot, "rightmost_root_check",
               "characteristic function vanishes on the contour");
        }
        const double step = std::arg(f / prev);
        max_step = std::max(max_step, std::abs(step));
        total += step;
        prev = f;
      }
    }
    return total / (2.0 * std::numbers::pi);
  };
  int per_edge = 256;
  double max_step = 0.0;
  double w = winding(per_edge, max_step);
  while (per_edge < (1 << 18)) {
    per_edge *= 2;
    double next_max = 0.0;
    const double next = winding(per_edge, next_max);
    const bool stable = std::abs(next - w) < 0.25 && next_max < std::numbers::pi / 4;
    w = next;
    max_step = next_max;
    if (stable) break;
  }
  return static_cast<int>(std::lround(w));
}

std::optional<cplx> polish_root(const CharCoeffs& cc, double tau, cplx seed,
                                double tol, int max_iter) {
  cplx z = seed;
  cplx f = characteristic(cc, z, tau);
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(f) < tol) return z;
    const cplx df = characteristic_dlambda(cc, z, tau);
    if (std::abs(df) == 0.0) return std::nullopt;
    const cplx step = f / df;
    double damping = 1.0;
    cplx trial = z - step;
    cplx ft = characteristic(cc, trial, tau);
    while (std::abs(ft) > std::abs(f) && damping > 1e-4) {
      damping *= 0.5;
      trial = z - damping * step;
      ft = characteristic(cc, trial, tau);
    }
    z = trial;
    f = ft;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
  }
  if (std::abs(f) < std::max(tol, 1e-10)) return z;
  return std::nullopt;
}

RootVerdict rightmost_root_check(const ModelParams& params, double tau,
                                 int n_max, std::optional<CriticalPair> exclude) {
  if (!(tau >= 0.0)) fail(ErrorKind::InvalidArgument, "rightmost_root_check", "tau must be >= 0");
  RootVerdict verdict;
  for (int n = 0; n <= n_max; ++n) {
    const CharCoeffs cc = char_coeffs(params, n);
    // For Re lambda >= -delta every root satisfies |lambda| <= R, so the
    // rectangle below cannot miss one.
    const double e = std::exp(kStableMargin * tau);
    const double p = std::abs(cc.A) + std::abs(cc.B) * e;
    const double q = std::abs(cc.C) + std::abs(cc.D) * e;
    const double bound = 0.5 * (p + std::sqrt(p * p + 4.0 * q)) + 1.0;
    double omega_scale = 1.0;
    for (const auto& cand : omega_candidates(cc)) omega_scale = std::max(omega_scale, cand.omega);
    const double im_half = std::max(4.0 * omega_scale, bound);
    const double re_hi = std::max(10.0, bound);

    int count = 0;
    double shift = 0.0;
    for (int attempt = 0;; ++attempt) {
      try {
        count = count_roots_in_rectangle(cc, tau, -kStableMargin + shift, re_hi,
                                         im_half + shift);
        break;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::ContourThroughRoot || attempt >= 4) throw;
        shift += 1e-7;
      }
    }
    int excluded = 0;
    if (exclude && exclude->n == n) {
      for (double sign : {1.0, -1.0}) {
        const auto r = polish_root(cc, tau, cplx(0.0, sign * exclude->omega));
        if (r && std::abs(*r - cplx(0.0, sign * exclude->omega)) < 1e-8) ++excluded;
      }
    }
    verdict.excluded += excluded;
    if (count - excluded <= 0) continue;

    verdict.all_stable = false;
    verdict.n = n;
    verdict.root = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
    double best_re = -std::numeric_limits<double>::infinity();
    for (int ir = 0; ir <= 8; ++ir) {
      for (int ii = -16; ii <= 16; ++ii) {
        const cplx seed(-kStableMargin + (re_hi + kStableMargin) * ir / 8.0,
                        im_half * ii / 16.0);
        const auto r = polish_root(cc, tau, seed);
        if (!r || r->real() < -kStableMargin) continue;
        if (exclude && exclude->n == n &&
            std::abs(std::abs(r->imag()) - exclude->omega) < 1e-8 &&
            std::abs(r->real()) < 1e-8) {
          continue;
        }
        if (r->real() > best_re) {
          best_re = r->real();
          verdict.root = *r;
        }
      }
    }
    return verdict;
  }
  return verdict;
}

std::vector<CurveSample> hopf_curve(const ModelParams& base, double k_lo,
                                    double k_hi, int k_steps) {
  if (!(k_lo < k_hi) || k_steps < 2) {
    fail(ErrorKind::InvalidArgument, "hopf_curve", "empty k range or fewer than 2 steps");
  }
  if (!(k_hi < base.a)) {
    fail(ErrorKind::NoEquilibrium, "hopf_curve", "k range must lie below a");
  }
  std::vector<CurveSample> out(static_cast<std::size_t>(k_steps));
  parallel_for(out.size(), [&](std::size_t i) {
    const double k = k_lo + (k_hi - k_lo) * static_cast<double>(i) / (k_steps - 1);
    out[i].k = k;
    out[i].point = first_hopf(base.with_k(k));
  });
  return out;
}

}  // namespace bautin
