#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "starwave/io.hpp"
#include "starwave/validation.hpp"

using namespace starwave;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("starwave_test_" + name)).string();
}

}  // namespace

TEST_CASE("config parse") {
  const auto cfg = parse_config(Json::parse(R"({"branches":[{"c":1,"a":4},{"c":2,"a":0}],"grid":{"dx":0.1,"length":3}})"));
  CHECK(cfg.net.potential(0) == 0.0);
  CHECK(cfg.net.speed(0) == 2.0);
  CHECK(cfg.grid.size() == 2);
  CHECK(cfg.grid[0].samples() == 31);
  const auto back = parse_config(config_to_json(cfg));
  CHECK(back.grid == cfg.grid);
  CHECK(back.net.speeds() == cfg.net.speeds());
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"branches":[{"c":1,"a":0}]})")), Error);
  CHECK_THROWS_AS(parse_config(Json::parse(R"({"branches":"x"})")), Error);
  CHECK_THROWS_AS(load_config("/nonexistent/starwave.json"), ConfigError);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("network csv round trip in user order") {
  const auto net = StarNetwork::validate({{1, 4}, {2, 0}});
  const SpatialGrid grid = uniform_grid(2, 0.25, 2.0);
  const auto f = NetworkFunction::sample(grid, [&](int k, double x) {
    return Complex(net.user_label(k) + x, -x * x);
  }, 10.0);
  std::ostringstream os;
  write_network_csv(os, net, f);
  const std::string text = os.str();
  CHECK(text.rfind("branch,x,re,im\n", 0) == 0);
  CHECK(text.find("\n1,0,") != std::string::npos);
  const std::string path = temp_path("net.csv");
  write_network_csv(path, net, f);
  const auto g = read_network_csv(path, net, grid);
  for (int k = 0; k < 2; ++k) CHECK((g.values(k) - f.values(k)).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("network csv rejects off-grid abscissae") {
  const auto net = reference_network('B');
  const SpatialGrid grid = uniform_grid(2, 0.25, 1.0);
  const std::string path = temp_path("bad.csv");
  std::ofstream(path) << "branch,x,re,im\n1,0.3,1,0\n";
  CHECK_THROWS_AS(read_network_csv(path, net, grid), Error);
  std::ofstream(path) << "branch,x,re,im\n3,0.25,1,0\n";
  CHECK_THROWS_AS(read_network_csv(path, net, grid), Error);
  std::remove(path.c_str());
}

TEST_CASE("spectral csv round trip") {
  const auto net = reference_network('C');
  const auto sg = SpectralGrid::build(net, 20.0);
  SpectralFunction G(sg);
  for (int k = 0; k < 3; ++k) {
    for (Index i = 0; i < G.values(k).size(); ++i) G.values(k)(i) = Complex(k + 0.1 * i, -1.0 / (i + 1));
  }
  const std::string path = temp_path("spec.csv");
  write_spectral_csv(path, net, sg, G);
  const auto H = read_spectral_csv(path, net, sg);
  for (int k = 0; k < 3; ++k) CHECK((H.values(k) - G.values(k)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(read_spectral_csv(path, net, SpectralGrid::build(net, 30.0)), Error);
  std::remove(path.c_str());
}
