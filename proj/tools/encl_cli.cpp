// Command-line front end: encl <bounds|converge|pollute|equiv|export-forms> [options]

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "encl/errors.hpp"
#include "encl/harness.hpp"

namespace {

using encl::harness::ExperimentConfig;

struct Raw {
  std::string model = "dirac1d";
  std::vector<int> orders{1};
  std::vector<int> meshes{10};
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> window{0.5, 2.5};
  std::vector<double> shifts;
  long jmax = 3;
  double tol = encl::kDefaultTol;
  double fp_tol = 0.0;
  double flag_tol = 0.05;
  std::string out, summary, mesh_out;
  bool pretty = false;
  int threads = 0;
};

ExperimentConfig to_config(const Raw& raw) {
  ExperimentConfig cfg;
  encl::harness::set_model(cfg, raw.model);
  cfg.orders = raw.orders;
  cfg.meshes = raw.meshes;
  cfg.jitter = raw.jitter;
  cfg.seed = raw.seed;
  cfg.windows = encl::harness::windows_from_values(raw.window);
  cfg.shifts = raw.shifts;
  cfg.j_max = raw.jmax;
  cfg.tol = raw.tol;
  if (raw.fp_tol != 0.0) cfg.fp_tol = raw.fp_tol;
  cfg.flag_tol = raw.flag_tol;
  cfg.out = raw.out;
  cfg.summary = raw.summary;
  cfg.mesh_out = raw.mesh_out;
  cfg.pretty = raw.pretty;
  cfg.threads = raw.threads;
  encl::harness::validate(cfg);
  return cfg;
}

// Opens `path` for writing, or falls back to stdout when it is empty.
std::ostream& open_or_stdout(const std::string& path, std::unique_ptr<std::ofstream>& holder,
                             const char* field) {
  if (path.empty()) return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw encl::ConfigError(field, "cannot open " + path + " for writing");
  return *holder;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified eigenvalue enclosures for self-adjoint block operators"};
  app.set_config("--config", "", "Experiment file (key = value lines); flags given on the command line win");
  app.require_subcommand(1);

  Raw raw;
  app.add_option("--model", raw.model, "dirac1d, maxwell2d, or a path to a .forms file")->capture_default_str();
  app.add_option("--order", raw.orders, "Element orders, comma separated")->delimiter(',')->capture_default_str();
  app.add_option("--mesh", raw.meshes, "Elements per side, comma separated")->delimiter(',')->capture_default_str();
  app.add_option("--jitter", raw.jitter, "Relative displacement of interior mesh vertices")->capture_default_str();
  app.add_option("--seed", raw.seed, "Seed for the mesh jitter")->capture_default_str();
  app.add_option("--window", raw.window, "Window a,b (repeat for more windows)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--shifts", raw.shifts, "Shifts for equiv, comma separated")->delimiter(',');
  app.add_option("--jmax", raw.jmax, "Largest index per window or side")->capture_default_str();
  app.add_option("--tol", raw.tol, "Relative tolerance for kernels and pivots")->capture_default_str();
  app.add_option("--fp-tol", raw.fp_tol, "Bisection width for equiv (default 1e-12 * Ritz spread)");
  app.add_option("--flag-tol", raw.flag_tol, "Distance above which pollute flags a value")->capture_default_str();
  app.add_option("--out", raw.out, "Table or .forms output file (default stdout)");
  app.add_option("--summary", raw.summary, "JSON summary file for converge and equiv (default stdout)");
  app.add_option("--mesh-out", raw.mesh_out, "Mesh file written by export-forms");
  app.add_flag("--pretty", raw.pretty, "Print enclosures in compact notation to stderr");
  app.add_option("--threads", raw.threads, "Worker threads (0: all cores)")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Enclosure table for each window");
  auto* converge = app.add_subcommand("converge", "Enclosure widths under mesh refinement with slope fit");
  auto* pollute = app.add_subcommand("pollute", "Galerkin values next to certified enclosures");
  auto* equiv = app.add_subcommand("equiv", "Compare fixed-point shifts with pencil midpoints");
  auto* export_forms = app.add_subcommand("export-forms", "Write the assembled forms as a .forms file");
  for (auto* sub : {bounds, converge, pollute, equiv, export_forms}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const ExperimentConfig cfg = to_config(raw);
    std::unique_ptr<std::ofstream> out_file, summary_file, mesh_file;
    std::ostream& out = open_or_stdout(cfg.out, out_file, "out");
    std::ostream* pretty = cfg.pretty ? &std::cerr : nullptr;
    if (*bounds) return encl::harness::cmd_bounds(cfg, out, pretty);
    if (*pollute) return encl::harness::cmd_pollute(cfg, out, pretty);
    if (*converge || *equiv) {
      std::ostream& summary = open_or_stdout(cfg.summary, summary_file, "summary");
      return *converge ? encl::harness::cmd_converge(cfg, out, summary)
                       : encl::harness::cmd_equiv(cfg, out, summary);
    }
    std::ostream* mesh = nullptr;
    if (!cfg.mesh_out.empty()) mesh = &open_or_stdout(cfg.mesh_out, mesh_file, "mesh-out");
    return encl::harness::cmd_export_forms(cfg, out, mesh);
  } catch (const encl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const encl::FormatError& e) {
    std::cerr << "forms file error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
