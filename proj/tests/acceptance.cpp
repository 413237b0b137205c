// One PASS/FAIL line per acceptance criterion. Thresholds live here and are
// applied to the raw metrics reported by the validation suites.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "starwave/parallel.hpp"
#include "starwave/validation.hpp"

using namespace starwave;

namespace {

int failures = 0;

void line(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%2d] %-34s %s  %s\n", id, title, ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* name, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.4g", name, v);
  return buf;
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

double num(const Json& j, const char* key) { return j.at(key).get<double>(); }

}  // namespace

int main() {
  set_threads(1);
  const Json all = run_suite("all");
  const Json& s = all.at("suites");

  {
    const Json& m = s.at("eigen").at("metrics");
    const double ode = num(m, "ode_residual"), t0 = num(m, "t0_gap"), t1 = num(m, "t1_relative");
    line(1, "eigenfunction correctness", num(m, "trials") >= 200 && ode <= 1e-13 && t0 == 0.0 && t1 <= 1e-13,
         join({fmt("ode", ode), fmt("t0", t0), fmt("t1", t1)}));
  }
  {
    const Json& m = s.at("wronskian").at("metrics");
    const double margin = num(m, "min_margin");
    const double w2 = num(m.at("equality_case"), "w_squared"), rhs = num(m.at("equality_case"), "rhs");
    line(2, "wronskian bound", num(m, "draws_per_network") >= 1e4 && margin >= -1e-12 &&
                                   std::abs(w2 - 3.0) <= 1e-12 && std::abs(rhs - 3.0) <= 1e-12,
         join({fmt("min_margin", margin), fmt("equality_lhs", w2), fmt("equality_rhs", rhs)}));
  }
  {
    const Json& m = s.at("resolvent").at("metrics");
    const double res = num(m, "max_residual"), order = num(m, "min_order");
    line(3, "resolvent residual", m.at("cases").size() == 6 && res < 1e-3 && order >= 1.95,
         join({fmt("residual", res), fmt("min_order", order)}));
  }
  {
    const Json& m = s.at("limiting").at("metrics");
    const double ratio = num(m, "max_bound_ratio"), cauchy = num(m, "max_cauchy_gap");
    line(4, "limiting absorption", num(m, "samples_per_network") >= 1000 && ratio <= 1.0 && cauchy < 1e-10,
         join({fmt("bound_ratio", ratio), fmt("cauchy", cauchy)}));
  }
  {
    const Json& m = s.at("imkernel").at("metrics");
    const double err = num(m, "max_error");
    line(5, "im-kernel case formulas", num(m, "tuples_per_case") >= 1000 && err <= 1e-12, fmt("max_error", err));
  }
  {
    const Json& m = s.at("symmetrization").at("metrics");
    const double ls = num(m, "max_ls_gap"), direct = num(m, "max_direct_gap"), off = num(m, "max_offdiag");
    const double structural = num(m, "closed_form_structural");
    line(6, "symmetrization three-way", num(m, "trials") >= 50 && ls < 1e-8 && direct < 1e-10 && off < 1e-8 &&
                                            structural == 0.0,
         join({fmt("ls", ls), fmt("direct", direct), fmt("offdiag", off), fmt("block_zero", structural)}));
  }
  {
    const Json& m = s.at("plancherel").at("metrics");
    const double dev = num(m, "max_ratio_deviation"), pi_dev = num(m, "max_unit_kappa_deviation_from_pi");
    line(7, "plancherel and normalization", num(m, "functions_per_network") >= 20 && dev < 1e-3 && pi_dev < 1e-3,
         join({fmt("deviation", dev), fmt("unit_kappa_vs_pi", pi_dev)}));
  }
  {
    const Json& m = s.at("inversion").at("metrics");
    const double err = num(m, "max_relative_error");
    line(8, "inversion", num(m, "functions_per_network") >= 20 && err < 1e-2, fmt("max_error", err));
  }
  {
    const Json& m = s.at("diagonalization").at("metrics");
    const double err = num(m, "max_relative_error"), order = num(m, "min_order");
    line(9, "diagonalization", err < 1e-3 && order >= 1.95, join({fmt("max_error", err), fmt("min_order", order)}));
  }
  {
    const Json& m = s.at("dalembert").at("metrics");
    const double err = num(m, "max_sup_error");
    line(10, "evolution vs d'Alembert", num(m, "t") == 2.0 && err < 1e-2, fmt("sup_error", err));
  }
  {
    const Json& m = s.at("fdtd").at("metrics");
    const double gap = num(m, "relative_l2_gap"), drift = num(m, "energy_drift");
    const bool inside = m.at("inside_window").get<bool>();
    line(11, "evolution vs FDTD", gap < 5e-2 && drift < 1e-3 && inside,
         join({fmt("gap", gap), fmt("drift", drift), fmt("t", num(m, "t")), fmt("window", num(m, "causality_window"))}));
  }
  {
    const Json& m = s.at("tunnel").at("metrics");
    const double rate = num(m, "rate_relative_error");
    const double r = num(m, "reflection"), t = num(m, "transmission");
    const double re = std::abs(r + 1.0 / 3.0) / (1.0 / 3.0), te = std::abs(t - 2.0 / 3.0) / (2.0 / 3.0);
    line(12, "tunnel effect and scattering", rate < 0.05 && re < 0.01 && te < 0.01,
         join({fmt("rate_error", rate), fmt("r", r), fmt("t", t)}));
  }
  {
    const Json& m = s.at("domain").at("metrics");
    const int pairs = m.at("pairs").get<int>(), separated = m.at("separated").get<int>();
    line(13, "domain diagnostic", pairs == 10 && separated == pairs,
         std::to_string(separated) + "/" + std::to_string(pairs) + " separated");
  }
  {
    const std::string one = all.dump();
    set_threads(2);
    const std::string two = run_suite("all").dump();
    set_threads(8);
    const std::string eight = run_suite("all").dump();
    line(14, "determinism across threads", one == two && one == eight,
         std::string("1/2/8 threads ") + (one == two && one == eight ? "identical" : "differ"));
  }

  std::printf("%d of 14 criteria passed\n", 14 - failures);
  return failures == 0 ? 0 : 1;
}
