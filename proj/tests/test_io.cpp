#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "common.hpp"
#include "telegraphnet/io.hpp"
#include "telegraphnet/svg.hpp"

using namespace tgn;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("network JSON round-trips losslessly") {
  const NetworkTopology ref = testing::reference_tree();
  const json doc = io::network_to_json(ref);
  const NetworkTopology back = io::network_from_json(doc);
  CHECK(back.coordinates == ref.coordinates);
  CHECK(back.starting_edges == ref.starting_edges);
  CHECK(back.ending_edges == ref.ending_edges);
  CHECK(back.boundary_vertices == ref.boundary_vertices);
  CHECK(io::network_to_json(back) == doc);
}

TEST_CASE("profile parsing") {
  CHECK(io::profile_from_json(json(2.5))(7.0) == 2.5);
  const Profile poly = io::profile_from_json(json{{"type", "polynomial"}, {"coeffs", {1.0, 2.0, 3.0}}});
  CHECK(poly(2.0) == doctest::Approx(1.0 + 4.0 + 12.0));
  CHECK(poly.df(2.0) == doctest::Approx(2.0 + 12.0));
  const Profile sine =
      io::profile_from_json(json{{"type", "sine"}, {"amplitude", 2.0}, {"omega", 3.0}});
  CHECK(sine(0.5) == doctest::Approx(2.0 * std::sin(1.5)));
  const Profile gauss = io::profile_from_json(
      json{{"type", "gaussian"}, {"center", 1.0}, {"width", 0.5}});
  CHECK(gauss(1.0) == doctest::Approx(1.0));
  const Profile lin = io::profile_from_json(
      json{{"type", "linear"}, {"x0", 0.0}, {"v0", 1.0}, {"x1", 2.0}, {"v1", 3.0}});
  CHECK(lin(1.0) == doctest::Approx(2.0));
  const Profile samples = io::profile_from_json(
      json{{"type", "samples"}, {"x", {0.0, 1.0, 2.0}}, {"values", {0.0, 1.0, 0.0}}});
  CHECK(samples(0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(io::profile_from_json(json{{"type", "nope"}}), ConfigError);
  CHECK_THROWS_AS(io::profile_from_json(json("oops")), ConfigError);
}

TEST_CASE("coefficient parsing") {
  const NetworkTopology topo = testing::reference_tree();
  const CoefficientProfiles c =
      io::coefficients_from_json(topo, json{{"constant", {1.0, 2.0, 0.5, 0.1}}});
  CHECK(c.eval(3, 1, 2.5) == 2.0);

  json per;
  for (int id = 1; id <= 5; ++id) {
    per["per_edge"][std::to_string(id)] = {1.0, 1.0, 0.1 * id, 0.0};
  }
  per["bounds"] = {{"lower_inductance", 0.5}, {"upper", {10.0, 10.0, 10.0, 10.0}}};
  const CoefficientProfiles d = io::coefficients_from_json(topo, per);
  CHECK(d.eval(4, 2, 3.0) == doctest::Approx(0.5));
  CHECK(d.bounds.lower1 == 0.5);
  CHECK(d.bounds.upper[0] == 10.0);

  CHECK_THROWS_AS(io::coefficients_from_json(topo, json{{"constant", {1.0, 2.0}}}), ConfigError);
  CHECK_THROWS_AS(io::coefficients_from_json(topo, json::object()), ConfigError);
}

TEST_CASE("grid and problem parsing") {
  const GridSpec gs = io::grid_from_json(
      json{{"cells", 80}, {"T", 1.5}, {"cfl", 0.8}, {"cells_per_edge", {{"2", 40}}}});
  CHECK(gs.cells == 80);
  CHECK(gs.T == 1.5);
  CHECK(gs.cells_for(2) == 40);
  CHECK(gs.cells_for(1) == 80);

  const NetworkTopology topo = testing::reference_tree();
  const ProblemData data = io::problem_from_json(
      topo, json{{"initial", {{"current", 0.0}, {"voltage", {{"type", "gaussian"}, {"center", 0.5}, {"width", 0.1}}}}},
                 {"boundary", {{"0", 1.0}}}});
  CHECK(data.initial_current[0](0.3) == 0.0);
  CHECK(data.boundary(0, 0.7) == 1.0);
  CHECK(data.boundary(2, 0.7) == 0.0);  // unspecified boundary defaults to zero

  CHECK_THROWS_AS(
      io::problem_from_json(topo, json{{"initial", {{"current", 0.0}, {"voltage", 0.0}}},
                                       {"boundary", {{"1", 1.0}}}}),
      ConfigError);  // vertex 1 is interior
}

TEST_CASE("CSV writers are deterministic") {
  StabilityTable table;
  table.rows = {{0.01, 1.0, 2.0, 0.5, ""}, {0.0, 0.0, 0.0, 0.0, "undefined"}};
  const std::string path = temp_path("tgn_test_stability.csv");
  io::write_stability_csv(path, table);
  const std::string first = slurp(path);
  CHECK(first.rfind("epsilon,lhs,rhs,ratio,flags\n", 0) == 0);
  CHECK(first.find("undefined") != std::string::npos);
  io::write_stability_csv(path, table);
  CHECK(slurp(path) == first);
  std::remove(path.c_str());

  CHECK(io::format_double(0.1) == io::format_double(0.1));
  CHECK(io::format_double(1.0 / 3.0).size() >= 17);
}

TEST_CASE("SVG plot writer") {
  const std::string path = temp_path("tgn_test_plot.svg");
  Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(10, 0.0, 1.0);
  Eigen::ArrayXd y = x.square();
  svg::write_plot(path, "test", {{"y = x^2", x, y}});
  const std::string body = slurp(path);
  CHECK(body.rfind("<svg", 0) == 0);
  CHECK(body.find("polyline") != std::string::npos);
  CHECK(body.find("y = x^2") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("missing file raises a config error") {
  CHECK_THROWS_AS(io::load_json_file("/nonexistent/definitely_not_here.json"), ConfigError);
}
