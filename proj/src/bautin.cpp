#include "bautin/bautin.hpp"

#include <cmath>
#include <exception>
#include <functional>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_roots.h>
#include <spdlog/spdlog.h>

#include "bautin/error.hpp"
#include "bautin/parallel.hpp"

namespace bautin {

namespace {

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
  throw Error(kind, "bautin", op, msg);
}

// GSL calls back through C frames, so exceptions are parked here and rethrown
// once the solver returns.
struct Callback {
  std::function<double(double)> f;
  std::exception_ptr error;
};

double trampoline(double x, void* raw) {
  auto* cb = static_cast<Callback*>(raw);
  if (cb->error) return std::nan("");
  try {
    return cb->f(x);
  } catch (...) {
    cb->error = std::current_exception();
    return std::nan("");
  }
}

struct BrentOutcome {
  double root = 0;
  int iterations = 0;
};

// Brent on [lo, hi]; stops once |f| < f_tol or the bracket is below x_tol.
BrentOutcome brent(std::function<double(double)> f, double lo, double hi, double f_tol,
                   double x_tol, int max_iter) {
  gsl_set_error_handler_off();
  Callback cb{std::move(f), nullptr};
  gsl_function fn{&trampoline, &cb};
  gsl_root_fsolver* s = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
  const int init = gsl_root_fsolver_set(s, &fn, lo, hi);
  BrentOutcome out;
  if (init != GSL_SUCCESS) {
    gsl_root_fsolver_free(s);
    if (cb.error) std::rethrow_exception(cb.error);
    fail(ErrorKind::NoSignChange, "brent", "bracket does not straddle a root");
  }
  for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
    const int status = gsl_root_fsolver_iterate(s);
    if (cb.error) break;
    if (status != GSL_SUCCESS) break;
    out.root = gsl_root_fsolver_root(s);
    const double a = gsl_root_fsolver_x_lower(s), b = gsl_root_fsolver_x_upper(s);
    if (std::abs(cb.f(out.root)) < f_tol || gsl_root_test_interval(a, b, x_tol, 0.0) == GSL_SUCCESS) {
      break;
    }
  }
  gsl_root_fsolver_free(s);
  if (cb.error) std::rethrow_exception(cb.error);
  return out;
}

}  // namespace

std::string to_string(DiagramCase c) {
  return c == DiagramCase::L2Positive ? "L2Positive" : "L2Negative";
}

DiagramCase diagram_case_from_string(const std::string& s) {
  if (s == "L2Positive") return DiagramCase::L2Positive;
  if (s == "L2Negative") return DiagramCase::L2Negative;
  throw Error(ErrorKind::InvalidArgument, "bautin", "diagram_case_from_string", "unknown case");
}

cplx track_root(const ModelParams& ref, const HopfPoint& hp_ref, double k, double tau) {
  if (!(tau > 0.0)) fail(ErrorKind::InvalidArgument, "nu_of", "tau must be positive");
  const double dk = k - ref.k, dt = tau - hp_ref.tau;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dk), std::abs(dt)) / 0.01)));
  cplx lam(0.0, hp_ref.omega);
  for (int s = 1; s <= steps; ++s) {
    const double frac = static_cast<double>(s) / steps;
    const CharCoeffs cc = char_coeffs(ref.with_k(ref.k + frac * dk), hp_ref.n);
    const double t = hp_ref.tau + frac * dt;
    const cplx start = lam;
    for (int it = 0; it < 50; ++it) {
      const cplx f = characteristic(cc, lam, t);
      const cplx step = f / characteristic_dlambda(cc, lam, t);
      lam -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(lam))) break;
    }
    if (!std::isfinite(lam.real()) || !std::isfinite(lam.imag()) ||
        std::abs(lam - start) > 0.5 * hp_ref.omega) {
      fail(ErrorKind::TrackingLost, "nu_of", "Newton left the basin of the tracked root");
    }
    if (s == steps && std::abs(characteristic(cc, lam, t)) >= 1e-11) {
      fail(ErrorKind::TrackingLost, "nu_of", "tracked root residual above 1e-11");
    }
  }
  return lam;
}

double nu_of(const ModelParams& ref, const HopfPoint& hp_ref, double k, double tau) {
  const cplx lam = track_root(ref, hp_ref, k, tau);
  return lam.real() / lam.imag();
}

LyapunovPair lyapunov_at(const ModelParams& ref, const HopfPoint& hp_ref, double k, double tau) {
  const cplx lam = track_root(ref, hp_ref, k, tau);
  HopfPoint hp = hp_ref;
  hp.omega = lam.imag();
  hp.tau = tau;
  const CenterData cd = reduce(ref.with_k(k), hp, ReduceOptions{false});
  const LyapunovCoeffs lc = lyapunov_coeffs(cd.g, hp.omega * tau);
  return {lam.real() / lam.imag(), lc.l1, lc.l2, k, tau, hp.omega};
}

LyapunovPair lyapunov_on_curve(const ModelParams& base, double k) {
  const ModelParams p = base.with_k(k);
  const auto hp = first_hopf(p);
  if (!hp) fail(ErrorKind::NoSignChange, "lyapunov_on_curve", "no Hopf delay at this k");
  const CenterData cd = reduce(p, *hp);
  const LyapunovCoeffs lc = lyapunov_coeffs(cd.g, hp->omega * hp->tau);
  return {0.0, lc.l1, lc.l2, k, hp->tau, hp->omega};
}

void transversality(const ModelParams& ref, const HopfPoint& hp, double h, double jac[4]) {
  auto eval = [&](double dk, double dt) { return lyapunov_at(ref, hp, ref.k + dk, hp.tau + dt); };
  const LyapunovPair kp = eval(h, 0), km = eval(-h, 0), tp = eval(0, h), tm = eval(0, -h);
  jac[0] = (kp.nu - km.nu) / (2 * h);
  jac[1] = (tp.nu - tm.nu) / (2 * h);
  jac[2] = (kp.l1 - km.l1) / (2 * h);
  jac[3] = (tp.l1 - tm.l1) / (2 * h);
}

BautinResult find_bautin(const ModelParams& base, double k_lo, double k_hi,
                         const BautinOptions& options) {
  base.validate("find_bautin");
  if (!(k_lo < k_hi) || !(k_hi < base.a)) {
    fail(ErrorKind::InvalidArgument, "find_bautin", "bracket must satisfy k_lo < k_hi < a");
  }
  BautinResult r;
  r.l1_lo = lyapunov_on_curve(base, k_lo).l1;
  r.l1_hi = lyapunov_on_curve(base, k_hi).l1;
  spdlog::debug("find_bautin: l1({}) = {}, l1({}) = {}", k_lo, r.l1_lo, k_hi, r.l1_hi);
  if (!(r.l1_lo * r.l1_hi < 0.0)) {
    fail(ErrorKind::NoSignChange, "find_bautin", "l1 does not change sign over the bracket");
  }
  const BrentOutcome bo =
      brent([&](double k) { return lyapunov_on_curve(base, k).l1; }, k_lo, k_hi,
            options.l1_tol * 1e-3, 1e-13, options.max_iter);
  r.iterations = bo.iterations;
  r.k_star = bo.root;
  r.params = base.with_k(r.k_star);
  const auto hp = first_hopf(r.params);
  if (!hp) fail(ErrorKind::NoSignChange, "find_bautin", "Hopf curve lost at the root");
  r.hopf = *hp;
  r.tau_star = hp->tau;
  r.omega_star = hp->omega;
  const CenterData cd = reduce(r.params, *hp);
  const LyapunovCoeffs lc = lyapunov_coeffs(cd.g, hp->omega * hp->tau);
  r.l1_at = lc.l1;
  r.l2_at = lc.l2;
  if (std::abs(r.l1_at) >= options.l1_tol) {
    fail(ErrorKind::NoSignChange, "find_bautin", "Brent iteration did not reach |l1| < tol");
  }
  double jac[4];
  transversality(r.params, *hp, options.fd_step, jac);
  r.nu_k = jac[0];
  r.nu_tau = jac[1];
  r.l1_k = jac[2];
  r.l1_tau = jac[3];
  r.transversality_det = jac[0] * jac[3] - jac[1] * jac[2];
  double half[4];
  transversality(r.params, *hp, options.fd_step / 2, half);
  r.transversality_det_half_step = half[0] * half[3] - half[1] * half[2];
  r.diagram_case = r.l2_at > 0 ? DiagramCase::L2Positive : DiagramCase::L2Negative;
  spdlog::info("bautin point k*={} tau*={} omega*={} l2={} det={}", r.k_star, r.tau_star,
               r.omega_star, r.l2_at, r.transversality_det);
  if (std::abs(r.transversality_det) <= 1e-3) {
    fail(ErrorKind::TransversalityFailure, "find_bautin", "transversality determinant below 1e-3");
  }
  return r;
}

std::string region_label(double nu, double l1, double l2) {
  // positive roots s of l2 s^2 + l1 s + nu
  int count = 0;
  if (l2 == 0.0) {
    if (l1 != 0.0 && -nu / l1 > 0.0) count = 1;
  } else {
    const double disc = l1 * l1 - 4.0 * l2 * nu;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (l1 + std::copysign(sq, l1));
      const double roots[2] = {q / l2, q != 0.0 ? nu / q : -l1 / l2};
      for (double s : roots) {
        if (s > 0.0) ++count;
      }
      if (disc == 0.0 && count == 2) count = 1;
    }
  }
  static const char* kNames[] = {"I", "II", "III"};
  return kNames[count];
}

Diagram local_diagram(const BautinResult& br, const DiagramWindow& window, int grid) {
  if (grid < 2) fail(ErrorKind::InvalidArgument, "local_diagram", "grid must be at least 2");
  if (!(window.k_lo < window.k_hi) || !(window.tau_lo < window.tau_hi) ||
      !(window.tau_lo > 0.0)) {
    fail(ErrorKind::InvalidArgument, "local_diagram", "empty or non-positive window");
  }
  if (br.k_star < window.k_lo || br.k_star > window.k_hi || br.tau_star < window.tau_lo ||
      br.tau_star > window.tau_hi) {
    fail(ErrorKind::InvalidArgument, "local_diagram", "window must contain the Bautin point");
  }
  Diagram dg;
  dg.window = window;
  dg.grid = grid;
  auto k_at = [&](int i) { return window.k_lo + (window.k_hi - window.k_lo) * i / (grid - 1); };
  auto t_at = [&](int j) { return window.tau_lo + (window.tau_hi - window.tau_lo) * j / (grid - 1); };

  dg.points.resize(static_cast<std::size_t>(grid) * grid);
  parallel_for(dg.points.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx % grid), j = static_cast<int>(idx / grid);
    DiagramPoint p;
    p.k = k_at(i);
    p.tau = t_at(j);
    try {
      const LyapunovPair lp = lyapunov_at(br.params, br.hopf, p.k, p.tau);
      p.nu = lp.nu;
      p.l1 = lp.l1;
      p.l2 = lp.l2;
      if (std::abs(p.nu) > window.trust || std::abs(p.l1) > window.trust) {
        p.region = "outside";
      } else {
        p.region = region_label(p.nu, p.l1, p.l2);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TrackingLost) throw;
      p.nu = p.l1 = p.l2 = std::nan("");
      p.region = "outside";
    }
    dg.points[idx] = p;
  });

  std::vector<std::optional<std::pair<double, double>>> hopf(grid), fold(grid);
  parallel_for(static_cast<std::size_t>(grid), [&](std::size_t i) {
    const double k = k_at(static_cast<int>(i));
    const auto hp = first_hopf(br.params.with_k(k));
    if (hp && hp->tau >= window.tau_lo && hp->tau <= window.tau_hi) hopf[i] = {{k, hp->tau}};

    // fold of cycles: nu = l1^2 / (4 l2) where l1 l2 < 0
    auto h = [&](double tau) {
      const LyapunovPair lp = lyapunov_at(br.params, br.hopf, k, tau);
      return 4.0 * lp.l2 * lp.nu - lp.l1 * lp.l1;
    };
    const int scan = 24;
    double prev_t = window.tau_lo, prev_h = std::nan("");
    for (int s = 0; s <= scan; ++s) {
      const double t = window.tau_lo + (window.tau_hi - window.tau_lo) * s / scan;
      double hv;
      try {
        hv = h(t);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::TrackingLost) throw;
        prev_h = std::nan("");
        continue;
      }
      if (std::isfinite(prev_h) && prev_h * hv <= 0.0) {
        const double root = brent(h, prev_t, t, 1e-14, 1e-12, 100).root;
        const LyapunovPair lp = lyapunov_at(br.params, br.hopf, k, root);
        if (lp.l1 * lp.l2 < 0.0) {
          fold[i] = {{k, root}};
          break;
        }
      }
      prev_t = t;
      prev_h = hv;
    }
  });
  for (const auto& p : hopf) {
    if (p) dg.hopf_curve.push_back(*p);
  }
  for (const auto& p : fold) {
    if (p) dg.fold_curve.push_back(*p);
  }
  return dg;
}

}  // namespace bautin
