// starwave: command line front end.
//
// Exit codes: 0 success, 1 failed validation suite, 2 usage or input error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "starwave/eigenbasis.hpp"
#include "starwave/io.hpp"
#include "starwave/parallel.hpp"
#include "starwave/resolvent.hpp"
#include "starwave/spectral_transform.hpp"
#include "starwave/validation.hpp"

using namespace starwave;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out_dir = ".";
  std::string output;
};

struct Spectral {
  std::string cutoff = "auto";
  std::string kappa = "1/pi";
  double tolerance = 1e-4;
};

std::vector<double> parse_list(const std::string& text, std::size_t min_count, std::size_t max_count,
                               const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  if (out.size() < min_count || out.size() > max_count) {
    throw ConfigError(std::string("wrong number of values in ") + what + " '" + text + "'");
  }
  return out;
}

Complex parse_lambda(const std::string& text) {
  const auto v = parse_list(text, 1, 2, "--lambda");
  return {v[0], v.size() > 1 ? v[1] : 0.0};
}

double parse_kappa(const std::string& text) {
  if (text == "1/pi") return 1.0 / std::numbers::pi;
  const auto v = parse_list(text, 1, 1, "--kappa");
  if (!(v[0] > 0.0)) throw ConfigError("--kappa must be positive");
  return v[0];
}

std::string csv_path(const Common& c, const std::string& name) {
  if (!c.output.empty()) return c.output;
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / (name + ".csv")).string();
}

std::string meta_path(const std::string& csv) {
  fs::path p(csv);
  p.replace_extension(".meta.json");
  return p.string();
}

Json base_metadata(const std::string& command, const NetworkConfig& cfg) {
  Json j;
  j["command"] = command;
  j["version"] = STARWAVE_VERSION;
  j["network"] = config_to_json(cfg);
  return j;
}

double resolve_cutoff(const Spectral& s, const NetworkConfig& cfg, const std::vector<const NetworkFunction*>& data) {
  if (s.cutoff != "auto") return parse_list(s.cutoff, 1, 1, "--cutoff")[0];
  const QuadratureRule rule(cfg.grid);
  double cutoff = 0.0;
  for (const auto* f : data) {
    if (integrate_network(*f, *f, rule).real() == 0.0) continue;
    cutoff = std::max(cutoff, choose_cutoff(cfg.net, *f, s.tolerance, rule));
  }
  return cutoff > 0.0 ? cutoff : cfg.net.potentials().back() + 1.0;
}

Json grid_metadata(const SpectralContext& ctx, const Spectral& s, double kappa) {
  return {{"cutoff", ctx.grid.cutoff()},
          {"cutoff_request", s.cutoff},
          {"tail_tolerance", s.tolerance},
          {"kappa", kappa},
          {"nodes", ctx.grid.size()},
          {"breakpoints", ctx.grid.breakpoints()}};
}

void add_common(CLI::App* cmd, Common& c, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", c.config, "network JSON file");
  if (needs_config) opt->required();
  cmd->add_option("--out-dir", c.out_dir, "directory for outputs")->capture_default_str();
  cmd->add_option("--output", c.output, "output file (overrides --out-dir naming)");
}

void add_spectral(CLI::App* cmd, Spectral& s) {
  cmd->add_option("--cutoff", s.cutoff, "spectral cutoff or 'auto'")->capture_default_str();
  cmd->add_option("--kappa", s.kappa, "normalization: 1/pi, 1 or a number")->capture_default_str();
  cmd->add_option("--tol", s.tolerance, "relative tail tolerance for --cutoff auto")->capture_default_str();
}

NetworkFunction default_pulse(const NetworkConfig& cfg) {
  const int first = cfg.net.internal_index(0);
  return NetworkFunction::sample(cfg.grid, [first](int k, double x) {
    return Complex(k == first ? smooth_pulse(x, 3.0, 0.6) : 0.0, 0.0);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for wave equations on star-shaped networks"};
  app.require_subcommand(1);
  int thread_count = 0;
  app.add_option("--threads", thread_count, "worker threads (0 = all cores; STARWAVE_THREADS overrides)");

  Common common;
  Spectral spectral;
  std::string lambda_text;
  std::string input;
  std::string velocity;
  std::string band_text;
  std::string method = "cumulative";
  std::string sign_text = "-";
  int branch = 1;
  double t = 0.0;

  auto* eigen = app.add_subcommand("eigen", "generalized eigenfunction F^{sign,j} on the config grid");
  add_common(eigen, common);
  eigen->add_option("--lambda", lambda_text, "spectral parameter re[,im]")->required();
  eigen->add_option("--j", branch, "eigenfunction index (1-based branch label)")->required();
  eigen->add_option("--sign", sign_text, "- or +")->capture_default_str();

  auto* resolvent = app.add_subcommand("resolvent", "apply R(lambda); real lambda is the limit from below");
  add_common(resolvent, common);
  resolvent->add_option("--lambda", lambda_text, "spectral parameter re[,im]")->required();
  resolvent->add_option("--input", input, "CSV branch,x,re,im")->required();
  resolvent->add_option("--method", method, "cumulative or direct")
      ->check(CLI::IsMember({"cumulative", "direct"}))
      ->capture_default_str();

  auto* transform = app.add_subcommand("transform", "forward transform V f as spectral CSV");
  add_common(transform, common);
  add_spectral(transform, spectral);
  transform->add_option("--input", input, "CSV branch,x,re,im")->required();

  auto* inverse = app.add_subcommand("inverse", "inverse transform Z G from spectral CSV");
  add_common(inverse, common);
  add_spectral(inverse, spectral);
  inverse->add_option("--input", input, "CSV k,lambda,re,im")->required();

  auto* evolve = app.add_subcommand("evolve", "Klein-Gordon solution u(t)");
  add_common(evolve, common);
  add_spectral(evolve, spectral);
  evolve->add_option("--input", input, "u(0) as CSV (default: pulse at x=3 on branch 1)");
  evolve->add_option("--velocity", velocity, "u_t(0) as CSV (default: 0)");
  evolve->add_option("--t", t, "time")->required();

  auto* project_cmd = app.add_subcommand("project", "spectral projection E(a, b) f");
  add_common(project_cmd, common);
  add_spectral(project_cmd, spectral);
  project_cmd->add_option("--input", input, "CSV branch,x,re,im")->required();
  project_cmd->add_option("--band", band_text, "a,b")->required();

  std::string suite = "all";
  SuiteOptions suite_options;
  auto* validate = app.add_subcommand("validate", "run property and oracle suites");
  validate->add_option("--suite", suite, "suite name or 'all'")->capture_default_str();
  validate->add_option("--trials", suite_options.trials, "trial count override");
  validate->add_option("--seed", suite_options.seed, "random seed")->capture_default_str();
  validate->add_option("--output", common.output, "also write the JSON report here");

  auto* oracle = app.add_subcommand("oracle-compare", "finite-difference oracle against spectral evolution");
  add_common(oracle, common);
  oracle->add_option("--t", t, "time")->required();
  oracle->add_option("--band", band_text, "lo,hi")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  set_threads(thread_count);

  try {
    if (*validate) {
      const Json r = run_suite(suite, suite_options);
      if (!common.output.empty()) write_json(common.output, r);
      std::cout << r.dump(2) << '\n';
      return r["pass"].get<bool>() ? 0 : 1;
    }

    const NetworkConfig cfg = load_config(common.config);
    const StarNetwork& net = cfg.net;
    const QuadratureRule rule(cfg.grid);

    if (*eigen) {
      const Complex lambda = parse_lambda(lambda_text);
      if (branch < 1 || branch > net.size()) throw ConfigError("--j out of range");
      if (sign_text != "-" && sign_text != "+") throw ConfigError("--sign must be - or +");
      const Sign sign = sign_text == "+" ? Sign::plus : Sign::minus;
      const auto p = eigen_params<double>(net, lambda, sign);
      const int j = net.internal_index(branch - 1);
      const NetworkFunction F = NetworkFunction::sample(cfg.grid, [&](int k, double x) {
        return eval_F(p, j, BranchPoint{k, x});
      });
      const std::string out = csv_path(common, "eigen");
      write_network_csv(out, net, F);
      Json meta = base_metadata("eigen", cfg);
      meta["parameters"] = {{"lambda", {lambda.real(), lambda.imag()}}, {"j", branch}, {"sign", sign_text}};
      write_json(meta_path(out), meta);
      return 0;
    }

    if (*resolvent) {
      const Complex lambda = parse_lambda(lambda_text);
      const NetworkFunction f = read_network_csv(input, net, cfg.grid);
      const ResolventMethod m = method == "direct" ? ResolventMethod::direct : ResolventMethod::cumulative;
      const NetworkFunction u = apply_resolvent(net, f, lambda, rule, m);
      const std::string out = csv_path(common, "resolvent");
      write_network_csv(out, net, u);
      Json meta = base_metadata("resolvent", cfg);
      meta["parameters"] = {{"lambda", {lambda.real(), lambda.imag()}}, {"method", method}, {"input", input}};
      meta["residual"] = resolvent_residual(net, f, u, lambda, rule);
      write_json(meta_path(out), meta);
      return 0;
    }

    if (*oracle) {
      const auto band = parse_list(band_text, 2, 2, "--band");
      Json r = oracle_compare(net, cfg.dx, cfg.length, t, band[0], band[1]);
      r["network"] = config_to_json(cfg);
      if (!common.output.empty()) write_json(common.output, r);
      std::cout << r.dump(2) << '\n';
      return 0;
    }

    const double kappa = parse_kappa(spectral.kappa);

    if (*transform || *project_cmd) {
      const NetworkFunction f = read_network_csv(input, net, cfg.grid);
      const double cutoff = resolve_cutoff(spectral, cfg, {&f});
      SpectralGridOptions options;
      std::vector<double> band;
      if (*project_cmd) {
        band = parse_list(band_text, 2, 2, "--band");
        if (!(band[1] > band[0])) throw ConfigError("--band needs a < b");
        options.extra_breakpoints = band;
      }
      const auto ctx = SpectralContext::make(net, cfg.grid, cutoff, kappa, options);
      const std::string name = *transform ? "transform" : "project";
      const std::string out = csv_path(common, name);
      Json meta = base_metadata(name, cfg);
      meta["parameters"] = {{"input", input}};
      if (*transform) {
        write_spectral_csv(out, net, ctx.grid, ctx.V(f));
      } else {
        meta["parameters"]["band"] = band;
        write_network_csv(out, net, project(ctx, band[0], band[1], f));
      }
      meta["spectral_grid"] = grid_metadata(ctx, spectral, kappa);
      write_json(meta_path(out), meta);
      return 0;
    }

    if (*inverse) {
      if (spectral.cutoff == "auto") throw ConfigError("inverse needs the numeric --cutoff used by transform");
      const auto ctx = SpectralContext::make(net, cfg.grid, parse_list(spectral.cutoff, 1, 1, "--cutoff")[0], kappa);
      const SpectralFunction G = read_spectral_csv(input, net, ctx.grid);
      const std::string out = csv_path(common, "inverse");
      write_network_csv(out, net, ctx.Z(G));
      Json meta = base_metadata("inverse", cfg);
      meta["parameters"] = {{"input", input}};
      meta["spectral_grid"] = grid_metadata(ctx, spectral, kappa);
      write_json(meta_path(out), meta);
      return 0;
    }

    if (*evolve) {
      const NetworkFunction u0 = input.empty() ? default_pulse(cfg) : read_network_csv(input, net, cfg.grid);
      const NetworkFunction v0 =
          velocity.empty() ? NetworkFunction::zeros(cfg.grid) : read_network_csv(velocity, net, cfg.grid);
      const double cutoff = resolve_cutoff(spectral, cfg, {&u0, &v0});
      const auto ctx = SpectralContext::make(net, cfg.grid, cutoff, kappa);
      const std::string out = csv_path(common, "evolve");
      write_network_csv(out, net, evolve_klein_gordon(ctx, u0, v0, t));
      Json meta = base_metadata("evolve", cfg);
      meta["parameters"] = {{"t", t},
                            {"input", input.empty() ? "default: smooth_pulse(x; 3, 0.6) on branch 1" : input},
                            {"velocity", velocity.empty() ? "zero" : velocity}};
      meta["spectral_grid"] = grid_metadata(ctx, spectral, kappa);
      write_json(meta_path(out), meta);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "starwave: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
