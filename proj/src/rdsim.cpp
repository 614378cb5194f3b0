#include "bautin/rdsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

#include "bautin/error.hpp"
#include "bautin/mol_kernels.hpp"
#include "bautin/parallel.hpp"

namespace bautin {

namespace {

constexpr double kBlowup = 1e6;
constexpr double kTransient = 0.6;

[[noreturn]] void fail(ErrorKind kind, const char* op, const std::string& msg) {
  throw Error(kind, "rdsim", op, msg);
}

void validate(const SimConfig& cfg) {
  cfg.params.validate("simulate");
  if (!(cfg.tau > 0.0)) fail(ErrorKind::InvalidArgument, "simulate", "tau must be positive");
  if (cfg.nx < 64) fail(ErrorKind::InvalidArgument, "simulate", "nx must be at least 64");
  if (cfg.m < 200) fail(ErrorKind::InvalidArgument, "simulate", "m must be at least 200");
  if (!(cfg.t_end > 0.0)) fail(ErrorKind::InvalidArgument, "simulate", "t_end must be positive");
  if (!(cfg.eq_tol > 0.0)) fail(ErrorKind::InvalidArgument, "simulate", "eq_tol must be positive");
  if (cfg.ic.mode < 0) fail(ErrorKind::InvalidArgument, "simulate", "negative profile mode");
}

struct Extremum {
  double t, value;
};

// Three-point extremum refined by the vertex of the interpolating parabola.
Extremum refine(const std::vector<double>& t, const std::vector<double>& y, std::size_t i) {
  const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
  const double curv = y0 - 2.0 * y1 + y2;
  if (curv == 0.0) return {t[i], y1};
  const double off = 0.5 * (y0 - y2) / curv;
  const double h = t[i + 1] - t[i];
  return {t[i] + off * h, y1 - 0.25 * (y0 - y2) * off};
}

}  // namespace

std::string to_string(SimKind k) {
  switch (k) {
    case SimKind::Equilibrium: return "Equilibrium";
    case SimKind::Periodic: return "Periodic";
    case SimKind::Diverged: return "Diverged";
    case SimKind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

SimKind sim_kind_from_string(const std::string& s) {
  for (SimKind k : {SimKind::Equilibrium, SimKind::Periodic, SimKind::Diverged, SimKind::Undetermined}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "rdsim", "sim_kind_from_string", "unknown outcome kind");
}

int substeps_for(const SimConfig& cfg) {
  const double dx = cfg.params.l * kPi / (cfg.nx - 1);
  const double limit = 0.2 * dx * dx / std::max(cfg.params.d, 1.0);
  const double frame = cfg.tau / cfg.m;
  return std::max(1, static_cast<int>(std::ceil(frame / limit)));
}

SimOutcome classify(const std::vector<double>& t, const std::vector<double>& y, double eq_tol,
                    double final_distance) {
  SimOutcome out;
  out.final_distance = final_distance;
  std::vector<Extremum> peaks, troughs;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) peaks.push_back(refine(t, y, i));
    if (y[i] < y[i - 1] && y[i] <= y[i + 1]) troughs.push_back(refine(t, y, i));
  }
  std::size_t tr = 0;
  for (const auto& p : peaks) {
    while (tr < troughs.size() && troughs[tr].t <= p.t) ++tr;
    if (tr == troughs.size()) break;
    out.peaks.push_back({p.t, p.value, 0.5 * (p.value - troughs[tr].value)});
  }

  if (final_distance < eq_tol) {
    out.kind = SimKind::Equilibrium;
    return out;
  }
  const std::size_t window = 8;
  if (out.peaks.size() >= window) {
    const auto first = out.peaks.end() - window;
    double lo = first->amplitude, hi = first->amplitude, sum = 0.0;
    for (auto it = first; it != out.peaks.end(); ++it) {
      lo = std::min(lo, it->amplitude);
      hi = std::max(hi, it->amplitude);
      sum += it->amplitude;
    }
    const double mean = sum / window;
    if (lo > 0.0 && hi <= 1.01 * lo && mean > 10.0 * eq_tol) {
      out.kind = SimKind::Periodic;
      out.amplitude = mean;
      out.period = ((out.peaks.end() - 1)->t - first->t) / (window - 1);
      return out;
    }
  }
  out.kind = SimKind::Undetermined;
  return out;
}

SimOutcome simulate(const SimConfig& cfg, Trajectory* trajectory) {
  validate(cfg);
  const int nx = cfg.nx, m = cfg.m;
  const ModelParams& mp = cfg.params;
  const double dx = mp.l * kPi / (nx - 1);
  const double frame = cfg.tau / m;
  const int sub = substeps_for(cfg);
  const double h = frame / sub;
  const long frames = static_cast<long>(std::ceil(cfg.t_end / frame));
  const double estar = mp.equilibrium();
  const kernels::KernelSet& ks = kernels::active_kernels();

  std::vector<double> u(nx), v(nx);
  for (int i = 0; i < nx; ++i) {
    const double c = std::cos(cfg.ic.mode * (i * dx) / mp.l);
    u[i] = cfg.ic.u_base + cfg.ic.u_amp * c;
    v[i] = cfg.ic.v_base + cfg.ic.v_amp * c;
  }
  // ring of m + 1 frames; slot of frame f is f mod (m + 1), history constant
  std::vector<double> ring_u(static_cast<std::size_t>(m + 1) * nx), ring_v(ring_u.size());
  for (int s = 0; s <= m; ++s) {
    std::copy(u.begin(), u.end(), ring_u.begin() + static_cast<long>(s) * nx);
    std::copy(v.begin(), v.end(), ring_v.begin() + static_cast<long>(s) * nx);
  }
  auto slot = [m](long f) { return static_cast<long>(((f % (m + 1)) + (m + 1)) % (m + 1)); };

  std::vector<double> k1u(nx), k2u(nx), k3u(nx), k4u(nx), k1v(nx), k2v(nx), k3v(nx), k4v(nx);
  std::vector<double> su(nx), sv(nx);
  kernels::RhsArgs args{};
  args.d = mp.d;
  args.k = mp.k;
  args.a = mp.a;
  args.inv_dx2 = 1.0 / (dx * dx);
  args.nx = nx;

  const long transient_frame = static_cast<long>(kTransient * frames);
  std::vector<double> trace_t, trace_u;
  trace_t.reserve(static_cast<std::size_t>(frames - transient_frame + 1));
  trace_u.reserve(trace_t.capacity());

  long stride = 1;
  if (trajectory != nullptr && cfg.max_trajectory_rows > 0) {
    const long max_frames = std::max(1L, cfg.max_trajectory_rows / nx);
    stride = std::max(1L, (frames + 1 + max_frames - 1) / max_frames);
    trajectory->nx = nx;
    trajectory->dx = dx;
    trajectory->t.clear();
    trajectory->u.clear();
    trajectory->v.clear();
  }
  auto record = [&](long f) {
    if (trajectory == nullptr || cfg.max_trajectory_rows <= 0 || f % stride != 0) return;
    if (static_cast<long>(trajectory->t.size() + 1) * nx > cfg.max_trajectory_rows) return;
    trajectory->t.push_back(f * frame);
    trajectory->u.insert(trajectory->u.end(), u.begin(), u.end());
    trajectory->v.insert(trajectory->v.end(), v.begin(), v.end());
  };
  record(0);

  SimOutcome out;
  out.substeps = sub;
  out.kernels = std::string(ks.name);
  auto variation = [&]() {
    const auto [ulo, uhi] = std::minmax_element(u.begin(), u.end());
    const auto [vlo, vhi] = std::minmax_element(v.begin(), v.end());
    return std::max(*uhi - *ulo, *vhi - *vlo);
  };

  for (long f = 0; f < frames; ++f) {
    const double* d0u = &ring_u[slot(f - m) * nx];
    const double* d0v = &ring_v[slot(f - m) * nx];
    const double* d1u = &ring_u[slot(f - m + 1) * nx];
    const double* d1v = &ring_v[slot(f - m + 1) * nx];
    args.ud0 = d0u;
    args.vd0 = d0v;
    args.ud1 = d1u;
    args.vd1 = d1v;
    for (int j = 0; j < sub; ++j) {
      const double w0 = static_cast<double>(j) / sub;
      const double wm = (j + 0.5) / sub;
      const double w1 = static_cast<double>(j + 1) / sub;

      args.u = u.data(); args.v = v.data(); args.w = w0;
      args.du = k1u.data(); args.dv = k1v.data();
      ks.rhs(args);
      ks.axpy(su.data(), u.data(), 0.5 * h, k1u.data(), nx);
      ks.axpy(sv.data(), v.data(), 0.5 * h, k1v.data(), nx);

      args.u = su.data(); args.v = sv.data(); args.w = wm;
      args.du = k2u.data(); args.dv = k2v.data();
      ks.rhs(args);
      ks.axpy(su.data(), u.data(), 0.5 * h, k2u.data(), nx);
      ks.axpy(sv.data(), v.data(), 0.5 * h, k2v.data(), nx);

      args.du = k3u.data(); args.dv = k3v.data();
      ks.rhs(args);
      ks.axpy(su.data(), u.data(), h, k3u.data(), nx);
      ks.axpy(sv.data(), v.data(), h, k3v.data(), nx);

      args.w = w1;
      args.du = k4u.data(); args.dv = k4v.data();
      ks.rhs(args);
      ks.combine(u.data(), h / 6.0, k1u.data(), k2u.data(), k3u.data(), k4u.data(), nx);
      ks.combine(v.data(), h / 6.0, k1v.data(), k2v.data(), k3v.data(), k4v.data(), nx);
    }
    const long next = f + 1;
    const double t = next * frame;
    // the slot of frame f - m is no longer needed once frame f + 1 exists
    std::copy(u.begin(), u.end(), ring_u.begin() + slot(next) * nx);
    std::copy(v.begin(), v.end(), ring_v.begin() + slot(next) * nx);

    double sup = 0.0;
    bool finite = true;
    for (int i = 0; i < nx; ++i) {
      if (!std::isfinite(u[i]) || !std::isfinite(v[i])) finite = false;
      sup = std::max({sup, std::abs(u[i]), std::abs(v[i])});
    }
    if (!finite || sup > kBlowup) {
      out.kind = SimKind::Diverged;
      out.t_blowup = t;
      out.final_distance = finite ? sup : std::numeric_limits<double>::infinity();
      spdlog::debug("simulate: diverged at t = {}", t);
      return out;
    }
    out.spatial_variation = std::max(out.spatial_variation, variation());
    record(next);
    if (next >= transient_frame) {
      trace_t.push_back(t);
      trace_u.push_back(u[0]);
    }
  }

  double dist = 0.0;
  for (int i = 0; i < nx; ++i) dist = std::max({dist, std::abs(u[i] - estar), std::abs(v[i] - estar)});
  SimOutcome cls = classify(trace_t, trace_u, cfg.eq_tol, dist);
  cls.spatial_variation = out.spatial_variation;
  cls.substeps = sub;
  cls.kernels = out.kernels;
  cls.boundary_jump = std::max({std::abs(u[1] - u[0]), std::abs(u[nx - 1] - u[nx - 2]),
                                std::abs(v[1] - v[0]), std::abs(v[nx - 1] - v[nx - 2])});
  spdlog::debug("simulate: {} amplitude {} period {}", to_string(cls.kind), cls.amplitude, cls.period);
  return cls;
}

std::vector<std::pair<double, SimOutcome>> amplitude_scan(const SimConfig& base,
                                                          std::vector<double> tau_values) {
  std::sort(tau_values.begin(), tau_values.end());
  std::vector<std::pair<double, SimOutcome>> out(tau_values.size());
  parallel_for(tau_values.size(), [&](std::size_t i) {
    SimConfig cfg = base;
    cfg.tau = tau_values[i];
    out[i] = {tau_values[i], simulate(cfg)};
  });
  return out;
}

}  // namespace bautin
