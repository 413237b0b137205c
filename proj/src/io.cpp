#include "starwave/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace starwave {

namespace {

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  return os;
}

}  // namespace

NetworkConfig parse_config(const Json& j) {
  if (!j.is_object() || !j.contains("branches") || !j.at("branches").is_array()) {
    throw ConfigError("config needs a 'branches' array");
  }
  std::vector<BranchSpec> specs;
  for (const auto& b : j.at("branches")) {
    if (!b.is_object()) throw ConfigError("branch entries must be objects");
    specs.push_back(BranchSpec{number(b, "c", 1.0), number(b, "a", 0.0)});
  }
  NetworkConfig cfg{StarNetwork::validate(specs), 0.01, 20.0, {}};
  if (j.contains("grid")) {
    cfg.dx = number(j.at("grid"), "dx", cfg.dx);
    cfg.length = number(j.at("grid"), "length", cfg.length);
  }
  if (!(cfg.dx > 0.0) || !(cfg.length > 2.0 * cfg.dx)) throw ConfigError("grid needs 0 < 2 dx < length");
  cfg.grid = uniform_grid(cfg.net.size(), cfg.dx, cfg.length);
  return cfg;
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Json config_to_json(const NetworkConfig& cfg) {
  Json branches = Json::array();
  const int n = cfg.net.size();
  for (int user = 0; user < n; ++user) {
    const int k = cfg.net.internal_index(user);
    branches.push_back({{"c", cfg.net.speed(k)}, {"a", cfg.net.potential(k)}});
  }
  return {{"branches", branches}, {"grid", {{"dx", cfg.dx}, {"length", cfg.length}}}};
}

std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_network_csv(std::ostream& os, const StarNetwork& net, const NetworkFunction& f) {
  os << "branch,x,re,im\n";
  for (int user = 0; user < net.size(); ++user) {
    const int k = net.internal_index(user);
    const VectorXcd& v = f.values(k);
    for (Index i = 0; i < v.size(); ++i) {
      os << user + 1 << ',' << format_double(f.grid(k).x(i)) << ',' << format_double(v(i).real()) << ','
         << format_double(v(i).imag()) << '\n';
    }
  }
}

void write_network_csv(const std::string& path, const StarNetwork& net, const NetworkFunction& f) {
  auto os = open_out(path);
  write_network_csv(os, net, f);
}

NetworkFunction read_network_csv(const std::string& path, const StarNetwork& net, const SpatialGrid& grid) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::vector<VectorXcd> values;
  for (const auto& g : grid) values.push_back(VectorXcd::Zero(g.samples()));
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && line.rfind("branch", 0) == 0)) continue;
    std::istringstream row(line);
    std::string cell[4];
    for (auto& c : cell) {
      if (!std::getline(row, c, ',')) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 4 columns");
    }
    int user = 0;
    double x = 0.0;
    double re = 0.0;
    double im = 0.0;
    try {
      user = std::stoi(cell[0]);
      x = std::stod(cell[1]);
      re = std::stod(cell[2]);
      im = std::stod(cell[3]);
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
    if (user < 1 || user > net.size()) throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown branch");
    const int k = net.internal_index(user - 1);
    const BranchGrid& g = grid[static_cast<std::size_t>(k)];
    const double pos = x / g.dx;
    const auto i = static_cast<Index>(std::llround(pos));
    if (std::abs(pos - static_cast<double>(i)) > 1e-6 || i < 0 || i >= g.samples()) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": x is not a grid point");
    }
    values[static_cast<std::size_t>(k)](i) = Complex(re, im);
  }
  // A file may list the node on one branch only.
  Complex node = 0.0;
  for (const auto& v : values) {
    if (v(0) != Complex(0.0, 0.0)) node = v(0);
  }
  for (auto& v : values) {
    if (v(0) == Complex(0.0, 0.0)) v(0) = node;
  }
  try {
    return NetworkFunction(grid, std::move(values), 1e-9);
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_spectral_csv(std::ostream& os, const StarNetwork& net, const SpectralGrid& grid,
                        const SpectralFunction& G) {
  os << "k,lambda,re,im\n";
  for (int user = 0; user < net.size(); ++user) {
    const int k = net.internal_index(user);
    const VectorXcd& v = G.values(k);
    for (Index i = 0; i < v.size(); ++i) {
      os << user + 1 << ',' << format_double(grid.lambda(grid.first_above(k) + i)) << ','
         << format_double(v(i).real()) << ',' << format_double(v(i).imag()) << '\n';
    }
  }
}

void write_spectral_csv(const std::string& path, const StarNetwork& net, const SpectralGrid& grid,
                        const SpectralFunction& G) {
  auto os = open_out(path);
  write_spectral_csv(os, net, grid, G);
}

SpectralFunction read_spectral_csv(const std::string& path, const StarNetwork& net, const SpectralGrid& grid) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  SpectralFunction G(grid);
  std::vector<Index> filled(static_cast<std::size_t>(net.size()), 0);
  std::string line;
  long lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && line.rfind("k,", 0) == 0)) continue;
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    std::istringstream row(line);
    std::string cell[4];
    for (auto& c : cell) {
      if (!std::getline(row, c, ',')) throw ConfigError(where + "expected 4 columns");
    }
    int user = 0;
    double lambda = 0.0;
    Complex v;
    try {
      user = std::stoi(cell[0]);
      lambda = std::stod(cell[1]);
      v = Complex(std::stod(cell[2]), std::stod(cell[3]));
    } catch (const std::exception&) {
      throw ConfigError(where + "malformed number");
    }
    if (user < 1 || user > net.size()) throw ConfigError(where + "unknown branch");
    const int k = net.internal_index(user - 1);
    Index& i = filled[static_cast<std::size_t>(k)];
    if (i >= grid.count_above(k)) throw ConfigError(where + "more samples than spectral grid nodes");
    const double expected = grid.lambda(grid.first_above(k) + i);
    if (std::abs(lambda - expected) > 1e-10 * std::max(1.0, std::abs(expected))) {
      throw ConfigError(where + "lambda does not match the spectral grid (same cutoff and network?)");
    }
    G.values(k)(i++) = v;
  }
  for (int k = 0; k < net.size(); ++k) {
    if (filled[static_cast<std::size_t>(k)] != grid.count_above(k)) {
      throw ConfigError(path + ": missing spectral samples for branch " + std::to_string(net.user_label(k) + 1));
    }
  }
  return G;
}

void write_json(const std::string& path, const Json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

}  // namespace starwave
