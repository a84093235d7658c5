#pragma once

// Experiment runner behind the command-line front end. Every command takes a
// validated ExperimentConfig, evaluates all (order, mesh) points, and writes
// rows in a fixed order so identical configs give byte-identical output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "encl/enclosure.hpp"

namespace encl::harness {

enum class ModelKind { Dirac1D, Maxwell2D, External };

const char* to_string(ModelKind kind);

struct ExperimentConfig {
  ModelKind model = ModelKind::Dirac1D;
  std::string forms_path;  // External only
  std::vector<int> orders{1};
  std::vector<int> meshes{10};  // elements per side
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::vector<Window> windows{{0.5, 2.5}};
  std::vector<double> shifts;  // equiv; empty means five points spread over each window
  Index j_max = 3;
  double tol = kDefaultTol;
  std::optional<double> fp_tol;
  double flag_tol = 0.05;
  std::string out;
  std::string summary;
  std::string mesh_out;
  bool pretty = false;
  int threads = 0;  // 0: hardware concurrency
};

/// "dirac1d", "maxwell2d", anything else is a path to a .forms file.
void set_model(ExperimentConfig& cfg, const std::string& selector);

/// Pairs consecutive values into windows; throws ConfigError on odd counts.
std::vector<Window> windows_from_values(const std::vector<double>& values);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// One assembled trial space.
struct ModelInstance {
  int order = 0;
  int mesh = 0;
  double h = 0.0;
  TrialForms forms;
  bool has_oracle = false;
};

ModelInstance build_model(const ExperimentConfig& cfg, int order, int mesh);

/// Distance from x to the exact spectrum and the nearest exact eigenvalue,
/// for the built-in models.
struct Nearest {
  double value = 0.0;
  double distance = 0.0;
};
Nearest nearest_exact(ModelKind kind, double x);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points_used = 0;
};

/// Least squares of log(width) against log(h) over widths > 1e-12. Throws
/// InsufficientPoints with fewer than three usable points.
SlopeFit fit_slope(const std::vector<double>& h, const std::vector<double>& width);

/// Display form of an enclosure: shared leading digits, then the remaining
/// upper digits as a superscript and lower digits as a subscript, e.g.
/// 1.0000^{13}_{87}. Digits are rounded outward.
std::string compact_notation(double lower, double upper);

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

std::string flags_to_string(std::uint32_t flags);

// Each command writes its table to `table`, its summary (if any) to
// `summary`, optional human-readable text to `pretty`, and returns the exit code.
int cmd_bounds(const ExperimentConfig& cfg, std::ostream& table, std::ostream* pretty = nullptr);
int cmd_converge(const ExperimentConfig& cfg, std::ostream& table, std::ostream& summary);
int cmd_pollute(const ExperimentConfig& cfg, std::ostream& table, std::ostream* pretty = nullptr);
int cmd_equiv(const ExperimentConfig& cfg, std::ostream& table, std::ostream& summary);
int cmd_export_forms(const ExperimentConfig& cfg, std::ostream& forms, std::ostream* mesh = nullptr);

}  // namespace encl::harness
