#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bautin/bautin.hpp"
#include "bautin/normalform.hpp"
#include "bautin/rdsim.hpp"
#include "bautin/spectral.hpp"

namespace bautin {

using json = nlohmann::json;

// JSON forms of the exported types. Every from_json rejects unknown keys.
void to_json(json& j, const ModelParams& p);
void from_json(const json& j, ModelParams& p);
void to_json(json& j, const HopfPoint& hp);
void from_json(const json& j, HopfPoint& hp);
void to_json(json& j, const GTable& g);
void from_json(const json& j, GTable& g);
void to_json(json& j, const LyapunovPair& lp);
void from_json(const json& j, LyapunovPair& lp);
void to_json(json& j, const BautinResult& r);
void from_json(const json& j, BautinResult& r);
void to_json(json& j, const InitialProfile& ic);
void from_json(const json& j, InitialProfile& ic);
void to_json(json& j, const SimConfig& c);
void from_json(const json& j, SimConfig& c);
void to_json(json& j, const Peak& p);
void from_json(const json& j, Peak& p);
void to_json(json& j, const SimOutcome& o);
void from_json(const json& j, SimOutcome& o);
void to_json(json& j, const Diagram& d);

/// Throws Error{Config} naming the first key of j not in allowed.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const char* where);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Fixed-width significant-digit formatting used by the CSV exports.
std::string format_sig(double x, int digits);

std::string hopf_curve_csv(const std::vector<CurveSample>& curve);
std::string hopf_gaps_csv(const std::vector<CurveSample>& curve);
std::string diagram_csv(const Diagram& d);
std::string trajectory_csv(const Trajectory& tr);

/// Command blocks of a run configuration.
struct HopfBlock {
  double k_lo = 0, k_hi = 0;
  int k_steps = 0;
};
struct LyapunovPoint {
  double k = 0;
  std::optional<double> tau;  ///< absent: on the Hopf curve
};
struct BracketBlock {
  double k_lo = 0.1, k_hi = 0.8;
};
struct DiagramBlock {
  BracketBlock bracket;
  DiagramWindow window;
  int grid = 21;
};
struct OutputBlock {
  std::string dir = "out";
  bool trajectory = true;
};

struct RunConfig {
  ModelParams model;
  std::optional<HopfBlock> hopf;
  std::vector<LyapunovPoint> lyapunov;
  std::optional<BracketBlock> bautin;
  std::optional<DiagramBlock> diagram;
  std::optional<SimConfig> simulate;
  OutputBlock output;
};

/// Parses and validates a configuration; throws Error{Config}.
RunConfig parse_run_config(const std::string& text);

}  // namespace bautin
