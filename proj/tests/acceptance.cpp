// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bautin/bautin.hpp"
#include "bautin/normalform.hpp"
#include "bautin/rdsim.hpp"
#include "bautin/spectral.hpp"

using namespace bautin;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParams base_params(double k = 0.0) {
  ModelParams p;
  p.a = 5;
  p.d = 1;
  p.l = 1;
  p.k = k;
  return p;
}

// Shared across criteria; criterion 1 computes and times it.
BautinResult g_bautin;
bool g_have_bautin = false;

Verdict criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  g_bautin = find_bautin(base_params(), 0.1, 0.8);
  g_have_bautin = true;
  double s = seconds_since(t0);
  const auto& b = g_bautin;
  bool ok = std::abs(b.k_star - 0.3075) <= 0.002 && std::abs(b.tau_star - 0.6543) <= 0.002 &&
            std::abs(b.omega_star - 0.4233) <= 0.001 && s < 60.0;
  return {ok, fmt("k*=%.7f tau*=%.7f omega*=%.7f (targets 0.3075+-0.002, 0.6543+-0.002, "
                  "0.4233+-0.001) runtime %.3fs (< 60s)",
                  b.k_star, b.tau_star, b.omega_star, s)};
}

Verdict criterion2() {
  double l2 = g_bautin.l2_at;
  bool ok = std::abs(l2 - 0.0376) <= 0.002 && l2 > 0.0;
  return {ok, fmt("l2(k*,tau*)=%.6f (target 0.0376+-0.002, > 0)", l2)};
}

Verdict criterion3() {
  const auto& b = g_bautin;
  double det = b.transversality_det, half = b.transversality_det_half_step;
  double rel = std::abs(half - det) / std::abs(det);
  bool ok = std::abs(det - (-0.8374)) <= 0.05 && rel <= 0.01;
  return {ok, fmt("det=%.6f (target -0.8374+-0.05) half-step det=%.6f rel change %.2e (<= 1%%) "
                  "J=[[%.4f, %.4f], [%.4f, %.4f]]",
                  det, half, rel, b.nu_k, b.nu_tau, b.l1_k, b.l1_tau)};
}

Verdict criterion4() {
  const int n = 71;
  std::vector<double> k(n), l1(n);
  for (int i = 0; i < n; ++i) {
    k[i] = 0.1 + 0.7 * i / (n - 1);
    l1[i] = lyapunov_on_curve(base_params(), k[i]).l1;
  }
  int changes = 0;
  double lo = 0, hi = 0;
  for (int i = 1; i < n; ++i) {
    if ((l1[i - 1] < 0) != (l1[i] < 0)) {
      ++changes;
      lo = k[i - 1];
      hi = k[i];
    }
  }
  const double l1_star = lyapunov_on_curve(base_params(), g_bautin.k_star).l1;
  bool bracketed = changes == 1 && lo <= g_bautin.k_star && g_bautin.k_star <= hi;
  bool ok = bracketed && std::abs(l1_star) <= 1e-6;
  std::string side = l1[0] < 0 ? "supercritical (l1<0) for k<k*, subcritical (l1>0) for k>k*"
                                : "subcritical (l1>0) for k<k*, supercritical (l1<0) for k>k*";
  return {ok, fmt("%d sign change(s) on %d samples, bracket [%.4f, %.4f] holds k*=%.7f, "
                  "|l1(k*)|=%.2e (<= 1e-6); l1(0.1)=%.5f l1(0.8)=%.5f; finding: %s",
                  changes, n, lo, hi, g_bautin.k_star, std::abs(l1_star), l1[0], l1[n - 1],
                  side.c_str())};
}

Verdict criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  long points = 0;
  // Every Hopf point the spectral module emits on the regression curve and
  // the full delay sequences of each mode at the Bautin parameters.
  auto curve = hopf_curve(base_params(), 0.1, 0.8, 71);
  for (const auto& s : curve) {
    if (!s.point) continue;
    auto cc = char_coeffs(base_params(s.k), s.point->n);
    worst = std::max(worst, std::abs(characteristic(cc, cplx(0, s.point->omega), s.point->tau)));
    ++points;
  }
  const ModelParams pb = g_bautin.params;
  const int nmax = mode_cutoff(pb);
  for (int n = 0; n <= nmax; ++n) {
    auto cc = char_coeffs(pb, n);
    for (const auto& oc : omega_candidates(cc)) {
      for (const auto& hp : hopf_delays(cc, oc.omega, oc.branch, 5)) {
        worst = std::max(worst, std::abs(characteristic(cc, cplx(0, hp.omega), hp.tau)));
        ++points;
      }
    }
  }
  auto v = rightmost_root_check(pb, g_bautin.tau_star, nmax,
                                CriticalPair{g_bautin.hopf.n, g_bautin.omega_star});
  double s = seconds_since(t0);
  bool ok = worst < 1e-10 && v.all_stable && s < 10.0;
  return {ok, fmt("max residual %.2e over %ld Hopf points (< 1e-10); rightmost check at "
                  "(k*,tau*) %s with %d critical roots excluded, modes 0..%d; runtime %.2fs (< 10s)",
                  worst, points, v.all_stable ? "AllStable" : "Unstable", v.excluded, nmax, s)};
}

Verdict criterion6() {
  auto cd = reduce(g_bautin.params, g_bautin.hopf);
  auto r = check_residuals(cd);
  bool g_ok = r.g02_conj <= 1e-9;
  bool w_ok = r.w_symmetry <= 1e-9;
  bool res_ok = r.junction <= 1e-9 && r.interior <= 1e-9;
  bool n_ok = r.norm_q <= 1e-12 && r.norm_qbar <= 1e-12;
  bool ok = g_ok && w_ok && res_ok && n_ok;
  return {ok, fmt("|g02-conj g20|=%.3e [%s]; W02/W12/W03 symmetry %.2e [%s]; junction %.2e "
                  "interior %.2e [%s]; |(q*,q)-1|=%.2e |(q*,conj q)|=%.2e [%s] "
                  "(limits 1e-9, 1e-9, 1e-9, 1e-12)",
                  r.g02_conj, g_ok ? "ok" : "fail", r.w_symmetry, w_ok ? "ok" : "fail",
                  r.junction, r.interior, res_ok ? "ok" : "fail", r.norm_q, r.norm_qbar,
                  n_ok ? "ok" : "fail")};
}

SimConfig figure_config(double u_base, double v_base) {
  SimConfig c;
  c.params = base_params(0.1);
  c.tau = 1.05;
  c.nx = 128;
  c.m = 400;
  c.t_end = 1000;
  c.ic = {u_base, -0.16, v_base, -0.16, 1};
  return c;
}

SimOutcome g_fig6;

Verdict criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  g_fig6 = simulate(figure_config(0.3, 0.5));
  double s6 = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  auto fig7 = simulate(figure_config(10.3, 10.5));
  double s7 = seconds_since(t0);
  bool ok = g_fig6.kind == SimKind::Periodic && fig7.kind == SimKind::Diverged && s6 < 120 && s7 < 120;
  return {ok, fmt("small profile: %s (amplitude %.6f, period %.6f, %.1fs); large profile: %s "
                  "(t_blowup %.2f, %.1fs); kernels %s",
                  to_string(g_fig6.kind).c_str(), g_fig6.amplitude, g_fig6.period, s6,
                  to_string(fig7.kind).c_str(), fig7.t_blowup, s7, g_fig6.kernels.c_str())};
}

Verdict criterion8() {
  // Supercritical side from criterion 4: l1 < 0 at k = 0.1.
  const ModelParams p = base_params(0.1);
  const auto hp = *first_hopf(p);
  const double l1 = lyapunov_on_curve(base_params(), 0.1).l1;
  const double e = p.equilibrium();
  // u(0, t) - u* = 2 Re(z) b0 on the critical mode 0, b0 = 1/sqrt(l pi).
  const double b0 = 1.0 / std::sqrt(p.l * kPi);
  const double delta = 0.01;
  double amp[2], pred[2];
  std::string kinds;
  for (int i = 0; i < 2; ++i) {
    SimConfig c;
    c.params = p;
    c.tau = hp.tau + (i + 1) * delta;
    c.nx = 64;
    c.m = 200;
    c.t_end = i == 0 ? 8000 : 6000;
    c.ic = {e + 0.05, 0.0, e + 0.05, 0.0, 0};
    auto o = simulate(c);
    amp[i] = o.kind == SimKind::Periodic ? o.amplitude : std::nan("");
    kinds += to_string(o.kind) + (i == 0 ? "/" : "");
    const double nu = nu_of(p, hp, p.k, c.tau);
    pred[i] = 2.0 * b0 * std::sqrt(-nu / l1);
  }
  const double ratio = amp[1] / amp[0];
  const bool scale_ok = std::abs(ratio / std::sqrt(2.0) - 1.0) <= 0.2;
  const double err0 = std::abs(amp[0] / pred[0] - 1.0), err1 = std::abs(amp[1] / pred[1] - 1.0);
  const bool abs_ok = err0 <= 0.25 && err1 <= 0.25;

  // Subcritical side: k = 0.8, just inside the stable region.
  const ModelParams q = base_params(0.8);
  const auto hq = *first_hopf(q);
  const double eq = q.equilibrium();
  SimConfig c;
  c.params = q;
  c.tau = hq.tau - 0.02;
  c.nx = 64;
  c.m = 200;
  c.t_end = 4000;
  c.ic = {eq + 1e-4, 0.0, eq + 1e-4, 0.0, 0};
  auto near = simulate(c);
  c.t_end = 2000;
  c.ic = {eq + 1.0, 0.0, eq + 1.0, 0.0, 0};
  auto far = simulate(c);
  const double l1q = lyapunov_on_curve(base_params(), 0.8).l1;
  const double unstable_cycle = 2.0 * b0 * std::sqrt(-nu_of(q, hq, q.k, c.tau) / l1q);
  const bool escaped = far.kind == SimKind::Diverged ||
                       (far.kind == SimKind::Periodic && far.amplitude > unstable_cycle);
  const bool bistable = near.kind == SimKind::Equilibrium && escaped;

  bool ok = scale_ok && abs_ok && bistable;
  return {ok, fmt("supercritical k=0.1 tau*=%.6f: %s amplitudes %.5f, %.5f at +%.2f, +%.2f, "
                  "ratio %.4f (sqrt2 +-20%%), predicted %.5f, %.5f (rel err %.3f, %.3f, <= 0.25); "
                  "subcritical k=0.8 tau=tau*-0.02=%.6f: perturbation 1e-4 -> %s, "
                  "perturbation 1 -> %s (unstable cycle ~%.3f)",
                  hp.tau, kinds.c_str(), amp[0], amp[1], delta, 2 * delta, ratio, pred[0],
                  pred[1], err0, err1, c.tau, to_string(near.kind).c_str(),
                  to_string(far.kind).c_str(), unstable_cycle)};
}

Verdict criterion9() {
  auto fine_x = figure_config(0.3, 0.5);
  fine_x.nx = 256;
  auto fine_t = figure_config(0.3, 0.5);
  fine_t.m = 800;
  auto ox = simulate(fine_x);
  auto ot = simulate(fine_t);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  bool kinds = g_fig6.kind == SimKind::Periodic && ox.kind == SimKind::Periodic &&
               ot.kind == SimKind::Periodic;
  double px = rel(ox.period, g_fig6.period), ax = rel(ox.amplitude, g_fig6.amplitude);
  double pt = rel(ot.period, g_fig6.period), at = rel(ot.amplitude, g_fig6.amplitude);
  bool ok = kinds && px < 0.005 && ax < 0.005 && pt < 0.005 && at < 0.005;
  return {ok, fmt("nx 128->256: period %.3e amplitude %.3e; m 400->800: period %.3e amplitude "
                  "%.3e (relative changes, each < 5e-3)",
                  px, ax, pt, at)};
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    if (i >= 1 && i <= 5 && !g_have_bautin) {
      v = {false, "skipped: Bautin point unavailable"};
    } else {
      try {
        v = criteria[i]();
      } catch (const std::exception& e) {
        v = {false, std::string("error: ") + e.what()};
      }
    }
    failed += !v.pass;
    std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
