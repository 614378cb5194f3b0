#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bautin/model.hpp"

namespace bautin {

/// History constant in time on [-tau, 0]:
///   u0(x) = u_base + u_amp cos(mode x / l),  v0(x) = v_base + v_amp cos(mode x / l).
struct InitialProfile {
  double u_base = 0, u_amp = 0;
  double v_base = 0, v_amp = 0;
  int mode = 1;

  friend bool operator==(const InitialProfile&, const InitialProfile&) = default;
};

struct SimConfig {
  ModelParams params;
  double tau = 1.0;
  int nx = 128;           ///< grid points on [0, l pi], >= 64
  int m = 400;            ///< history frames per delay, >= 200; frame spacing tau / m
  double t_end = 400.0;
  InitialProfile ic;
  double eq_tol = 1e-6;   ///< sup-norm distance to E* counted as equilibrium
  /// Trajectory frames kept for export; 0 disables recording.
  long max_trajectory_rows = 0;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Integrator substeps per history frame so that the step obeys
/// dt <= 0.2 dx^2 / max(d, 1).
int substeps_for(const SimConfig& cfg);

enum class SimKind { Equilibrium, Periodic, Diverged, Undetermined };
std::string to_string(SimKind k);
SimKind sim_kind_from_string(const std::string& s);

struct Peak {
  double t = 0;
  double value = 0;
  double amplitude = 0;  ///< half the drop to the following trough

  friend bool operator==(const Peak&, const Peak&) = default;
};

struct SimOutcome {
  SimKind kind = SimKind::Undetermined;
  double amplitude = 0;
  double period = 0;
  double t_blowup = 0;
  double final_distance = 0;    ///< sup over x of |(u, v) - E*| at the last frame
  double spatial_variation = 0; ///< max over frames of max_x - min_x
  double boundary_jump = 0;     ///< |u(x1) - u(x0)| and the mirror at the far end, last frame
  int substeps = 0;
  std::string kernels;
  std::vector<Peak> peaks;      ///< peaks of u(0, t) after the transient

  friend bool operator==(const SimOutcome&, const SimOutcome&) = default;
};

struct Trajectory {
  int nx = 0;
  double dx = 0;
  std::vector<double> t;
  std::vector<double> u;  ///< frames x nx
  std::vector<double> v;
};

/// Classical RK4 method of lines with linearly interpolated delayed values.
SimOutcome simulate(const SimConfig& cfg, Trajectory* trajectory = nullptr);

/// Outcome classification from a u(0, t) trace sampled after the transient.
SimOutcome classify(const std::vector<double>& t, const std::vector<double>& u0, double eq_tol,
                    double final_distance);

std::vector<std::pair<double, SimOutcome>> amplitude_scan(const SimConfig& base,
                                                          std::vector<double> tau_values);

}  // namespace bautin
