#pragma once

// Network config files, CSV output with 1-based user branch labels, and run
// metadata.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "starwave/network.hpp"
#include "starwave/spectral_grid.hpp"
#include "starwave/spectral_transform.hpp"

namespace starwave {

using Json = nlohmann::ordered_json;

/// Raised for unreadable or malformed input files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct NetworkConfig {
  StarNetwork net;
  double dx = 0.01;
  double length = 20.0;
  SpatialGrid grid;
};

/// {"branches": [{"c": 1, "a": 0}, ...], "grid": {"dx": 0.01, "length": 20}}
NetworkConfig parse_config(const Json& j);
NetworkConfig load_config(const std::string& path);
Json config_to_json(const NetworkConfig& cfg);

/// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double v);

/// branch,x,re,im in user branch order.
void write_network_csv(std::ostream& os, const StarNetwork& net, const NetworkFunction& f);
void write_network_csv(const std::string& path, const StarNetwork& net, const NetworkFunction& f);
/// Reads branch,x,re,im rows onto `grid`; samples that are absent stay zero.
NetworkFunction read_network_csv(const std::string& path, const StarNetwork& net, const SpatialGrid& grid);

/// k,lambda,re,im with user branch labels.
void write_spectral_csv(std::ostream& os, const StarNetwork& net, const SpectralGrid& grid,
                        const SpectralFunction& G);
void write_spectral_csv(const std::string& path, const StarNetwork& net, const SpectralGrid& grid,
                        const SpectralFunction& G);

/// Reads k,lambda,re,im rows written for the same network and grid; lambda
/// values must match the grid nodes.
SpectralFunction read_spectral_csv(const std::string& path, const StarNetwork& net, const SpectralGrid& grid);

void write_json(const std::string& path, const Json& j);

}  // namespace starwave
