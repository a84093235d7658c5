#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "encl/errors.hpp"
#include "encl/harness.hpp"
#include "json.hpp"

using namespace encl;
using namespace encl::harness;

namespace {

using Table = std::vector<std::vector<std::string>>;

Table parse_csv(const std::string& text) {
  Table rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const Table& t, const std::string& name) {
  for (std::size_t k = 0; k < t.at(0).size(); ++k)
    if (t[0][k] == name) return k;
  FAIL("missing column " << name);
  return 0;
}

ExperimentConfig dirac(std::vector<int> orders, std::vector<int> meshes, Window w) {
  ExperimentConfig c;
  c.model = ModelKind::Dirac1D;
  c.orders = std::move(orders);
  c.meshes = std::move(meshes);
  c.windows = {w};
  return c;
}

ExperimentConfig worked() {
  ExperimentConfig c;
  set_model(c, ENCL_TEST_DATA "/worked.forms");
  c.windows = {{0.5, 3.0}};
  return c;
}

std::string field_of(const ExperimentConfig& c) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("config validation names the field") {
  ExperimentConfig c;
  CHECK(field_of(c).empty());
  c.windows = {{2.0, 1.0}};
  CHECK(field_of(c) == "window");
  c = ExperimentConfig{};
  c.orders = {4};
  CHECK(field_of(c) == "order");
  c = ExperimentConfig{};
  c.meshes = {1};
  CHECK(field_of(c) == "mesh");
  c = ExperimentConfig{};
  c.j_max = 0;
  CHECK(field_of(c) == "jmax");
  c = ExperimentConfig{};
  c.model = ModelKind::Maxwell2D;
  c.windows = {{0.0, 1.0}};
  CHECK(field_of(c) == "window");
  c.windows = {{-1.0, -0.5}};
  CHECK(field_of(c).empty());
  c.orders = {3};
  CHECK(field_of(c) == "order");
  c = ExperimentConfig{};
  c.model = ModelKind::Maxwell2D;
  c.jitter = 0.5;
  CHECK(field_of(c) == "jitter");
  CHECK_THROWS_AS(windows_from_values({0.5, 1.0, 2.0}), ConfigError);
  CHECK(windows_from_values({0.5, 1.0, 2.0, 3.0}).size() == 2);
  ExperimentConfig e;
  set_model(e, "maxwell2d");
  CHECK(e.model == ModelKind::Maxwell2D);
  set_model(e, "some/file.forms");
  CHECK(e.model == ModelKind::External);
  CHECK(e.forms_path == "some/file.forms");
}

TEST_CASE("fit_slope") {
  SUBCASE("exact power law") {
    const SlopeFit f = fit_slope({0.4, 0.2, 0.1, 0.05}, {0.16, 0.04, 0.01, 0.0025});
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.points_used == 4);
  }
  SUBCASE("constant widths give slope zero") {
    const SlopeFit f = fit_slope({0.4, 0.2, 0.1}, {1e-3, 1e-3, 1e-3});
    CHECK(std::abs(f.slope) < 1e-12);
  }
  SUBCASE("widths at or below 1e-12 are dropped") {
    const SlopeFit f = fit_slope({0.4, 0.2, 0.1, 0.05, 0.025}, {1e-3, 1e-4, 1e-5, 1e-12, -1e-11});
    CHECK(f.points_used == 3);
    CHECK(f.slope == doctest::Approx(std::log(10.0) / std::log(2.0)).epsilon(1e-12));
  }
  SUBCASE("too few points") { CHECK_THROWS_AS(fit_slope({0.4, 0.2, 0.1}, {1e-3, 1e-13, 1e-14}), InsufficientPoints); }
}

TEST_CASE("compact_notation") {
  CHECK(compact_notation(2.0, 2.0) == "2.000000000000000");
  CHECK(compact_notation(1.99997, 2.00003) == "[1.99997, 2.00003]");
  CHECK(compact_notation(1.41421, 1.41436) == "1.414^{36}_{21}");
  CHECK(compact_notation(0.97721076, 1.0436157) == "[0.97721076, 1.0436157]");
  CHECK(compact_notation(3.0, 2.0) == "[3, 2]");
  CHECK(format_double(0.1) == "0.1");
  CHECK(flags_to_string(kInconsistent | kCountMismatch) == "inconsistent|count_mismatch");
  CHECK(flags_to_string(kNone) == "none");
}

TEST_CASE("nearest_exact") {
  CHECK(nearest_exact(ModelKind::Dirac1D, 1.9).value == 2.0);
  CHECK(nearest_exact(ModelKind::Maxwell2D, 1.3).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(nearest_exact(ModelKind::Maxwell2D, -0.9).value == -1.0);
  CHECK(nearest_exact(ModelKind::Maxwell2D, 0.2).value == 0.0);
}

TEST_CASE("cmd_bounds") {
  SUBCASE("dirac1d r = 2, mesh 20") {
    std::ostringstream os;
    CHECK(cmd_bounds(dirac({2}, {20}, {0.5, 2.5}), os) == 0);
    const Table t = parse_csv(os.str());
    REQUIRE(t.size() == 3);
    const auto lo = column(t, "lower"), up = column(t, "upper");
    CHECK(std::stod(t[1][lo]) <= 1.0);
    CHECK(std::stod(t[1][up]) >= 1.0);
    CHECK(std::stod(t[2][lo]) <= 2.0);
    CHECK(std::stod(t[2][up]) >= 2.0);
    for (const char* c : {"j", "lower", "upper", "width", "t_lower_from", "t_upper_from", "flags"}) column(t, c);
  }
  SUBCASE("external worked model") {
    std::ostringstream os, pretty;
    CHECK(cmd_bounds(worked(), os, &pretty) == 0);
    const Table t = parse_csv(os.str());
    REQUIRE(t.size() == 3);
    const auto lo = column(t, "lower"), up = column(t, "upper");
    CHECK(std::abs(std::stod(t[1][lo]) - 1.0) <= 1e-12);
    CHECK(std::abs(std::stod(t[1][up]) - 1.0) <= 1e-12);
    CHECK(std::abs(std::stod(t[2][lo]) - 2.0) <= 1e-12);
    CHECK(std::abs(std::stod(t[2][up]) - 2.0) <= 1e-12);
    CHECK(pretty.str().find("uppers=2") != std::string::npos);
  }
  SUBCASE("maxwell2d window containing zero is refused") {
    ExperimentConfig c;
    c.model = ModelKind::Maxwell2D;
    c.windows = {{0.0, 1.0}};
    std::ostringstream os;
    CHECK_THROWS_AS(cmd_bounds(c, os), ConfigError);
  }
  SUBCASE("identical configs give identical bytes") {
    ExperimentConfig c = dirac({1, 2}, {10, 20}, {0.5, 2.5});
    c.jitter = 0.3;
    c.seed = 9;
    std::ostringstream a, b;
    cmd_bounds(c, a);
    c.threads = 2;
    cmd_bounds(c, b);
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("cmd_converge") {
  SUBCASE("optimal rates for r = 1, 2") {
    ExperimentConfig c = dirac({1, 2}, {10, 20, 40, 80}, {0.5, 1.5});
    c.j_max = 1;
    std::ostringstream table, summary;
    CHECK(cmd_converge(c, table, summary) == 0);
    const auto doc = nlohmann::json::parse(summary.str());
    REQUIRE(doc["fits"].size() == 2);
    for (const auto& f : doc["fits"]) {
      const int r = f["r"];
      CHECK(f["points_used"] == 4);
      CHECK(f["slope"].get<double>() >= (r == 1 ? 1.7 : 3.7));
    }
    const Table t = parse_csv(table.str());
    CHECK(t.size() == 9);
    CHECK(t[0] == std::vector<std::string>{"h", "r", "j", "lower", "upper", "width", "true_value", "error_upper"});
  }
  SUBCASE("needs three mesh sizes") {
    std::ostringstream table, summary;
    CHECK_THROWS_AS(cmd_converge(dirac({1}, {10, 20}, {0.5, 1.5}), table, summary), ConfigError);
  }
}

TEST_CASE("cmd_pollute") {
  ExperimentConfig c;
  c.model = ModelKind::Maxwell2D;
  c.meshes = {8};
  c.jitter = 0.25;
  c.seed = 7;
  c.windows = {{0.1, 1.6}};
  c.j_max = 6;
  auto count_flags = [](const std::string& text, const std::string& kind) {
    const Table t = parse_csv(text);
    const auto f = column(t, "spurious_flag");
    int n = 0;
    for (std::size_t k = 1; k < t.size(); ++k)
      if (t[k][0] == kind && t[k][f] == "1") ++n;
    return n;
  };
  SUBCASE("jittered mesh") {
    std::ostringstream os;
    CHECK(cmd_pollute(c, os) == 0);
    CHECK(count_flags(os.str(), "galerkin") >= 1);
    CHECK(count_flags(os.str(), "enclosure") == 0);
  }
  SUBCASE("symmetric mesh still renders") {
    c.jitter = 0.0;
    std::ostringstream os;
    CHECK(cmd_pollute(c, os) == 0);
    CHECK(parse_csv(os.str()).size() > 1);
  }
  SUBCASE("raising flag_tol never adds flags") {
    int prev = 1 << 30;
    for (double tol : {0.0, 1e-3, 0.05, 0.2, 1.0}) {
      c.flag_tol = tol;
      std::ostringstream os;
      cmd_pollute(c, os);
      const int n = count_flags(os.str(), "galerkin");
      CHECK(n <= prev);
      prev = n;
    }
  }
  SUBCASE("requires the cavity model") {
    std::ostringstream os;
    CHECK_THROWS_AS(cmd_pollute(ExperimentConfig{}, os), ConfigError);
  }
}

TEST_CASE("cmd_equiv") {
  SUBCASE("dirac1d, five shifts, j <= 3") {
    ExperimentConfig c = dirac({1, 2}, {10, 20}, {0.5, 2.5});
    c.j_max = 3;
    std::ostringstream table, summary;
    CHECK(cmd_equiv(c, table, summary) == 0);
    const auto doc = nlohmann::json::parse(summary.str());
    CHECK(doc["pass"] == true);
    CHECK(doc["max_gap"].get<double>() <= 1e-10);
    CHECK(doc["rows"] == 2 * 2 * 5 * 3 * 2);
  }
  SUBCASE("worked model") {
    ExperimentConfig c = worked();
    c.shifts = {1.5, 3.0};
    c.j_max = 2;
    std::ostringstream table, summary;
    CHECK(cmd_equiv(c, table, summary) == 0);
    const auto doc = nlohmann::json::parse(summary.str());
    CHECK(doc["max_gap"].get<double>() <= 1e-12);
    CHECK(doc["skipped"].get<int>() > 0);  // nothing right of 3, one eigenvalue per side at 1.5
    const Table t = parse_csv(table.str());
    const auto st = column(t, "status");
    int skipped = 0;
    for (std::size_t k = 1; k < t.size(); ++k) skipped += t[k][st] == "skipped";
    CHECK(skipped == doc["skipped"].get<int>());
  }
}

TEST_CASE("cmd_export_forms round trip") {
  ExperimentConfig c = dirac({2}, {6}, {0.5, 2.5});
  std::stringstream forms;
  std::ostringstream mesh;
  CHECK(cmd_export_forms(c, forms, &mesh) == 0);
  const TrialForms f = read_forms(forms);
  CHECK(f.dim() == 2 * 6 * 2);
  CHECK(mesh.str().rfind("nodes 7", 0) == 0);
}
