// Command-line front end: one subcommand per analysis, CSV/JSON output with a
// reproducibility header. Exit codes: 0 success, 2 usage, 3 resource,
// 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "becsim/epr_witness.hpp"
#include "becsim/errors.hpp"
#include "becsim/husimi.hpp"
#include "becsim/open_system.hpp"
#include "becsim/pure_dynamics.hpp"
#include "becsim/spin_algebra.hpp"
#include "becsim/version.hpp"

namespace {

using namespace becsim;

std::string fmt_g(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

// 12 significant digits for data values, 17 (round-trip exact) for the
// config echo.
std::string fmt12(double x) { return fmt_g(x, 12); }
std::string fmt17(double x) { return fmt_g(x, 17); }

std::string iso_timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  int threads = int(std::max(1u, std::thread::hardware_concurrency()));
  long seed = 0;
  bool override_budget = false;
};

struct OutputTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Scalar results (fit parameters, dip values); footer comments in CSV,
  // a separate object in JSON.
  std::vector<std::pair<std::string, std::string>> scalars;
};

void write_csv(std::ostream& os, const std::string& config_echo, const OutputTable& table,
               double elapsed_seconds) {
  os << "# becsim " << kVersion << "\n";
  os << "# config: " << config_echo << "\n";
  os << "# timestamp: " << iso_timestamp_utc() << "\n";
  os << "# elapsed_seconds: " << fmt_g(elapsed_seconds, 6) << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << row[i] << (i + 1 < row.size() ? "," : "");
    }
    os << "\n";
  }
  for (const auto& [key, value] : table.scalars) {
    os << "# " << key << ": " << value << "\n";
  }
}

void write_json(std::ostream& os, const std::string& config_echo, const OutputTable& table,
                double elapsed_seconds) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  // Cells hold numbers except the axis/rule/flag columns.
  auto cell = [&quote](const std::string& s) {
    if (s.empty()) return quote(s);
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    const bool numeric = end != nullptr && *end == '\0';
    return numeric ? s : quote(s);
  };
  os << "{\n";
  os << "  \"header\": {\"tool\": \"becsim\", \"version\": " << quote(kVersion)
     << ", \"config\": " << quote(config_echo) << ", \"timestamp\": "
     << quote(iso_timestamp_utc()) << ", \"elapsed_seconds\": " << fmt_g(elapsed_seconds, 6)
     << "},\n";
  os << "  \"records\": [\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    os << "    {";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      os << quote(table.columns[i]) << ": " << cell(table.rows[r][i]);
      if (i + 1 < table.columns.size()) os << ", ";
    }
    os << "}" << (r + 1 < table.rows.size() ? "," : "") << "\n";
  }
  os << "  ]";
  if (!table.scalars.empty()) {
    os << ",\n  \"results\": {";
    for (std::size_t i = 0; i < table.scalars.size(); ++i) {
      os << quote(table.scalars[i].first) << ": " << cell(table.scalars[i].second);
      if (i + 1 < table.scalars.size()) os << ", ";
    }
    os << "}";
  }
  os << "\n}\n";
}

void emit(const CommonOpts& common, const std::string& config_echo, const OutputTable& table,
          double elapsed_seconds) {
  std::ostringstream buffer;
  if (common.format == "json") {
    write_json(buffer, config_echo, table, elapsed_seconds);
  } else {
    write_csv(buffer, config_echo, table, elapsed_seconds);
  }
  if (common.out.empty()) {
    std::cout << buffer.str();
    return;
  }
  std::ofstream file(common.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::invalid_argument("cannot open output file '" + common.out + "'");
  }
  file << buffer.str();
}

std::string common_echo(const CommonOpts& c) {
  std::ostringstream os;
  os << " --format " << c.format << " --threads " << c.threads << " --seed " << c.seed;
  if (c.override_budget) os << " --override-budget";
  return os.str();
}

// ---------------------------------------------------------------------------
// Per-subcommand configuration

struct TauPoint {
  std::optional<double> tau;
  std::optional<std::string> tau_pi;  // "M/D": tau = (M/D) * pi/4

  double resolve(std::vector<std::string>& usage_issues, double fallback = 0.0) const {
    if (tau && tau_pi) {
      usage_issues.push_back("--tau and --tau-pi are mutually exclusive");
      return fallback;
    }
    if (tau_pi) {
      long long m = 0, d = 1;
      const auto slash = tau_pi->find('/');
      try {
        if (slash == std::string::npos) {
          m = std::stoll(*tau_pi);
        } else {
          m = std::stoll(tau_pi->substr(0, slash));
          d = std::stoll(tau_pi->substr(slash + 1));
        }
        return RationalGateTime(m, d).tau();
      } catch (const std::exception&) {
        usage_issues.push_back("--tau-pi expects M or M/D with integers >= 1 (tau = M/D * pi/4), got '" +
                               *tau_pi + "'");
        return fallback;
      }
    }
    if (tau) {
      if (!std::isfinite(*tau)) usage_issues.push_back("--tau must be finite");
      return *tau;
    }
    return fallback;
  }

  std::string echo(double resolved) const {
    if (tau_pi) return " --tau-pi " + *tau_pi;
    return " --tau " + fmt17(resolved);
  }
};

struct RangeOpts {
  double min = 0.0;
  double max = std::numbers::pi / 2.0;
  int steps = -1;  // not given: derive from N

  void validate(const std::string& prefix, std::vector<std::string>& issues,
                const std::string& steps_flag = "--steps") const {
    if (!std::isfinite(min) || !std::isfinite(max)) {
      issues.push_back(prefix + "-min/" + prefix + "-max must be finite");
    }
    if (min > max) issues.push_back(prefix + "-min must be <= " + prefix + "-max");
    if (steps != -1 && steps < 1) issues.push_back(steps_flag + " must be >= 1");
  }
};

int resolve_steps(const RangeOpts& r, BosonNumber n) {
  return r.steps >= 1 ? r.steps : default_scan_steps(n, r.min, r.max);
}

constexpr int kMap2dMaxN = 200;
constexpr int kMap2dMaxSteps = 500;
constexpr int kDephasingMaxNz = 40;
constexpr int kDephasingMaxNx = 16;

struct ExitCode {
  static constexpr int kOk = 0;
  static constexpr int kUsage = 2;
  static constexpr int kResource = 3;
  static constexpr int kNumerical = 4;
};

void validate_common(const CommonOpts& c, std::vector<std::string>& usage) {
  if (c.format != "csv" && c.format != "json") {
    usage.push_back("--format must be csv or json, got '" + c.format + "'");
  }
  if (c.threads < 1) usage.push_back("--threads must be >= 1");
}

int fail_usage(const std::vector<std::string>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    os << issues[i] << (i + 1 < issues.size() ? "; " : "");
  }
  std::cerr << "becsim: error: usage: " << os.str() << "\n";
  return ExitCode::kUsage;
}

int fail_resource(const std::vector<std::string>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    os << issues[i] << (i + 1 < issues.size() ? "; " : "");
  }
  std::cerr << "becsim: error: resource: " << os.str() << "\n";
  return ExitCode::kResource;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

// ---------------------------------------------------------------------------
// Subcommand runners. Each validates (collecting every violation), computes,
// and emits one table.

int run_scan(int n_bosons, const RangeOpts& range, const CommonOpts& common) {
  std::vector<std::string> usage;
  if (n_bosons < 1) usage.push_back("--n must be >= 1");
  range.validate("--tau", usage);
  validate_common(common, usage);
  if (!usage.empty()) return fail_usage(usage);

  Timer timer;
  const BosonNumber n(n_bosons);
  const int steps = resolve_steps(range, n);
  const auto grid = linspace(range.min, range.max, steps);
  const auto records = scan_entropy(n, grid, common.threads);

  std::ostringstream echo;
  echo << "scan --n " << n_bosons << " --tau-min " << fmt17(range.min) << " --tau-max "
       << fmt17(range.max) << " --steps " << steps << common_echo(common);

  OutputTable table;
  table.columns = {"tau", "entropy_bits", "entropy_max_bits", "entropy_normalized"};
  for (const auto& rec : records) {
    table.rows.push_back({fmt12(rec.tau), fmt12(rec.entropy_bits), fmt12(rec.entropy_max_bits),
                          fmt12(rec.entropy_bits / rec.entropy_max_bits)});
  }
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_map2d(int n_bosons, const RangeOpts& range, const RangeOpts& prange,
              const CommonOpts& common) {
  std::vector<std::string> usage, resource;
  if (n_bosons < 1) usage.push_back("--n must be >= 1");
  range.validate("--tau", usage);
  prange.validate("--tau-prime", usage, "--prime-steps");
  validate_common(common, usage);
  if (!usage.empty()) return fail_usage(usage);

  const BosonNumber n(n_bosons);
  const int steps = resolve_steps(range, n);
  const int psteps = resolve_steps(prange, n);
  if (!common.override_budget) {
    if (n_bosons > kMap2dMaxN) {
      resource.push_back("map2d default budget is N <= " + std::to_string(kMap2dMaxN) +
                         " (pass --override-budget to exceed)");
    }
    if (steps > kMap2dMaxSteps || psteps > kMap2dMaxSteps) {
      resource.push_back("map2d default budget is " + std::to_string(kMap2dMaxSteps) +
                         " steps per axis (pass --override-budget to exceed)");
    }
  }
  if (!resource.empty()) return fail_resource(resource);

  Timer timer;
  const auto grid = linspace(range.min, range.max, steps);
  const auto pgrid = linspace(prange.min, prange.max, psteps);
  const auto map = map2d_entropy(n, grid, pgrid, common.threads, common.override_budget);

  std::ostringstream echo;
  echo << "map2d --n " << n_bosons << " --tau-min " << fmt17(range.min) << " --tau-max "
       << fmt17(range.max) << " --steps " << steps << " --tau-prime-min " << fmt17(prange.min)
       << " --tau-prime-max " << fmt17(prange.max) << " --prime-steps " << psteps
       << common_echo(common);

  OutputTable table;
  table.columns = {"tau", "tau_prime", "entropy_bits"};
  for (const auto& rec : map.records) {
    table.rows.push_back({fmt12(rec.tau), fmt12(rec.tau_prime.value()), fmt12(rec.entropy_bits)});
  }
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_dips(long long m, long long d, const CommonOpts& common) {
  std::vector<std::string> usage;
  if (m < 1) usage.push_back("--m must be >= 1");
  if (d < 1) usage.push_back("--d must be >= 1");
  validate_common(common, usage);
  if (!usage.empty()) return fail_usage(usage);

  Timer timer;
  const RationalGateTime t(m, d);
  const double bits = rational_dip_entropy(t);

  std::ostringstream echo;
  echo << "dips --m " << m << " --d " << d << common_echo(common);

  OutputTable table;
  table.columns = {"m", "d", "tau", "dip_entropy_bits"};
  table.rows.push_back({std::to_string(t.m()), std::to_string(t.d()), fmt12(t.tau()), fmt12(bits)});
  table.scalars.emplace_back("dip_entropy_bits", fmt12(bits));

  // The headline result goes to stdout even when the table goes to a file.
  if (bits == std::floor(bits)) {
    std::printf("%.1f\n", bits);
  } else {
    std::printf("%s\n", fmt12(bits).c_str());
  }
  if (!common.out.empty()) emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_decohere(int n_bosons, const std::string& axis_str, double gamma, const TauPoint& point,
                 const RangeOpts& range, bool range_given, const CommonOpts& common) {
  std::vector<std::string> usage, resource;
  if (n_bosons < 1) usage.push_back("--n must be >= 1");
  if (gamma < 0.0) usage.push_back("--gamma must be >= 0");
  validate_common(common, usage);
  DephasingAxis axis = DephasingAxis::Z;
  try {
    axis = dephasing_axis_from_string(axis_str);
  } catch (const std::invalid_argument& e) {
    usage.push_back(e.what());
  }
  double single_tau = point.resolve(usage);
  if (range_given) {
    range.validate("--tau", usage);
    if (point.tau || point.tau_pi) {
      usage.push_back("give either a single --tau/--tau-pi or a --tau-min/--tau-max range");
    }
  } else if (!point.tau && !point.tau_pi) {
    usage.push_back("one of --tau, --tau-pi or a --tau-min/--tau-max range is required");
  }
  if (single_tau < 0.0) usage.push_back("--tau must be >= 0");
  if (!usage.empty()) return fail_usage(usage);

  const int cap = (axis == DephasingAxis::Z) ? kDephasingMaxNz : kDephasingMaxNx;
  if (!common.override_budget && n_bosons > cap) {
    resource.push_back("dephasing along " + std::string(to_string(axis)) +
                       " has a default budget of N <= " + std::to_string(cap) +
                       " (pass --override-budget to exceed)");
  }
  if (!resource.empty()) return fail_resource(resource);

  Timer timer;
  const BosonNumber n(n_bosons);
  OpenSystemBudget budget;
  budget.override_budget = common.override_budget;

  std::vector<double> grid;
  std::string echo_tau;
  if (range_given) {
    const int steps = resolve_steps(range, n);
    grid = linspace(range.min, range.max, steps);
    std::ostringstream os;
    os << " --tau-min " << fmt17(range.min) << " --tau-max " << fmt17(range.max) << " --steps "
       << steps;
    echo_tau = os.str();
  } else {
    grid = {single_tau};
    echo_tau = point.echo(single_tau);
  }
  const auto records = negativity_scan(axis, n, grid, gamma, budget, common.threads);

  std::ostringstream echo;
  echo << "decohere --n " << n_bosons << " --axis " << to_string(axis) << " --gamma "
       << fmt17(gamma) << echo_tau << common_echo(common);

  OutputTable table;
  table.columns = {"tau", "gamma", "axis", "neg_bits", "ratio"};
  for (const auto& rec : records) {
    table.rows.push_back({fmt12(rec.tau), fmt12(rec.gamma), to_string(rec.axis),
                          fmt12(rec.neg_bits), fmt12(rec.ratio)});
  }
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_robustness(const std::string& axis_str, const std::string& rule_str, double gamma,
                   std::vector<int> n_values, double const_tau, const CommonOpts& common) {
  std::vector<std::string> usage, resource;
  if (gamma < 0.0) usage.push_back("--gamma must be >= 0");
  if (n_values.empty()) usage.push_back("--n-values requires at least one N");
  for (int n : n_values) {
    if (n < 1) usage.push_back("--n-values entries must be >= 1");
  }
  validate_common(common, usage);
  DephasingAxis axis = DephasingAxis::Z;
  TauRule rule = TauRule::Constant;
  try {
    axis = dephasing_axis_from_string(axis_str);
  } catch (const std::invalid_argument& e) {
    usage.push_back(e.what());
  }
  try {
    rule = tau_rule_from_string(rule_str);
  } catch (const std::invalid_argument& e) {
    usage.push_back(e.what());
  }
  if (!std::isfinite(const_tau) || const_tau <= 0.0) {
    usage.push_back("--tau must be finite and > 0");
  }
  if (!usage.empty()) return fail_usage(usage);

  const int cap = (axis == DephasingAxis::Z) ? kDephasingMaxNz : kDephasingMaxNx;
  if (!common.override_budget) {
    for (int n : n_values) {
      if (n > cap) {
        resource.push_back("dephasing along " + std::string(to_string(axis)) +
                           " has a default budget of N <= " + std::to_string(cap) +
                           " (pass --override-budget to exceed)");
        break;
      }
    }
  }
  if (!resource.empty()) return fail_resource(resource);

  Timer timer;
  OpenSystemBudget budget;
  budget.override_budget = common.override_budget;
  const FitResult fit = robustness_scaling(axis, rule, gamma, n_values, const_tau, budget,
                                           common.threads);

  std::ostringstream nv;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    nv << n_values[i] << (i + 1 < n_values.size() ? "," : "");
  }
  std::ostringstream echo;
  echo << "robustness --axis " << to_string(axis) << " --tau-rule " << to_string(rule)
       << " --gamma " << fmt17(gamma) << " --n-values " << nv.str() << " --tau "
       << fmt17(const_tau) << common_echo(common);

  OutputTable table;
  table.columns = {"n", "tau", "ratio"};
  for (std::size_t i = 0; i < fit.n_values.size(); ++i) {
    table.rows.push_back(
        {std::to_string(fit.n_values[i]), fmt12(fit.taus[i]), fmt12(fit.ratios[i])});
  }
  table.scalars.emplace_back("exponent_gamma", fmt12(fit.exponent_gamma));
  table.scalars.emplace_back("r_squared", fmt12(fit.r_squared));
  table.scalars.emplace_back("r_squared_quadratic", fmt12(fit.r_squared_quadratic));
  table.scalars.emplace_back("super_polynomial", fit.super_polynomial ? "true" : "false");
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_witness(int n_bosons, const TauPoint& point, const RangeOpts& range, bool range_given,
                const CommonOpts& common) {
  std::vector<std::string> usage;
  if (n_bosons < 1) usage.push_back("--n must be >= 1");
  validate_common(common, usage);
  double single_tau = point.resolve(usage);
  if (range_given) {
    range.validate("--tau", usage);
    if (point.tau || point.tau_pi) {
      usage.push_back("give either a single --tau/--tau-pi or a --tau-min/--tau-max range");
    }
  } else if (!point.tau && !point.tau_pi) {
    usage.push_back("one of --tau, --tau-pi or a --tau-min/--tau-max range is required");
  }
  if (single_tau < 0.0) usage.push_back("--tau must be >= 0");
  if (!usage.empty()) return fail_usage(usage);

  Timer timer;
  const BosonNumber n(n_bosons);
  std::vector<double> grid;
  std::string echo_tau;
  if (range_given) {
    const int steps = resolve_steps(range, n);
    grid = linspace(range.min, range.max, steps);
    std::ostringstream os;
    os << " --tau-min " << fmt17(range.min) << " --tau-max " << fmt17(range.max) << " --steps "
       << steps;
    echo_tau = os.str();
  } else {
    grid = {single_tau};
    echo_tau = point.echo(single_tau);
  }
  const auto records = witness_scan(n, grid, common.threads);

  std::ostringstream echo;
  echo << "witness --n " << n_bosons << echo_tau << common_echo(common);

  OutputTable table;
  table.columns = {"tau", "lhs", "rhs", "margin", "cv_var_prediction"};
  for (const auto& rec : records) {
    table.rows.push_back({fmt12(rec.tau), fmt12(rec.witness.lhs), fmt12(rec.witness.rhs),
                          fmt12(rec.witness.margin), fmt12(rec.cv.predicted_var)});
  }
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_qfunc(int n_bosons, double tau, int n_theta, int n_phi, const CommonOpts& common) {
  std::vector<std::string> usage;
  if (n_bosons < 1) usage.push_back("--n must be >= 1");
  if (n_theta < 2) usage.push_back("--n-theta must be >= 2");
  if (n_phi < 2) usage.push_back("--n-phi must be >= 2");
  if (!std::isfinite(tau)) usage.push_back("--tau must be finite");
  validate_common(common, usage);
  if (!usage.empty()) return fail_usage(usage);

  Timer timer;
  const BosonNumber n(n_bosons);
  QFunctionGrid grid;
  if (tau == 0.0) {
    grid = qfunction_grid(coherent_to_fock(plus_x_state(), n), n, n_theta, n_phi);
  } else {
    grid = qfunction_grid(reduced_density_bec1(evolve_zz(initial_xx_state(n), tau)), n, n_theta,
                          n_phi);
  }

  std::ostringstream echo;
  echo << "qfunc --n " << n_bosons << " --tau " << fmt17(tau) << " --n-theta " << n_theta
       << " --n-phi " << n_phi << common_echo(common);

  OutputTable table;
  table.columns = {"theta", "phi", "value"};
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      table.rows.push_back({fmt12(grid.thetas[i]), fmt12(grid.phis[j]), fmt12(grid.values(i, j))});
    }
  }
  table.scalars.emplace_back("sphere_integral", fmt12(grid.sphere_integral()));
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

int run_circles(int n_bosons, const TauPoint& point, const CommonOpts& common) {
  std::vector<std::string> usage;
  if (n_bosons < 1) usage.push_back("--n must be >= 1");
  const double tau = point.resolve(usage, 0.0);
  validate_common(common, usage);
  if (!usage.empty()) return fail_usage(usage);

  Timer timer;
  const BosonNumber n(n_bosons);
  const CircleDiagram diagram = circle_diagram(n, tau);

  std::ostringstream echo;
  echo << "circles --n " << n_bosons << point.echo(tau) << common_echo(common);

  OutputTable table;
  table.columns = {"k", "angle", "radius", "opacity"};
  for (const auto& e : diagram.entries) {
    table.rows.push_back({std::to_string(e.k), fmt12(e.angle), fmt12(e.radius), fmt12(e.opacity)});
  }
  emit(common, echo.str(), table, timer.seconds());
  return ExitCode::kOk;
}

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--out", common.out, "Output file path (default: stdout)");
  cmd->add_option("--format", common.format, "Output format: csv or json")
      ->default_val("csv");
  cmd->add_option("--threads", common.threads, "Worker threads for sweeps");
  cmd->add_option("--seed", common.seed, "Seed echoed into the header (reserved for randomized runs)");
  cmd->add_flag("--override-budget", common.override_budget,
                "Acknowledge and exceed the default N/grid budgets");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement dynamics of two collective-spin condensates"};
  app.require_subcommand(1);

  // scan
  int scan_n = 0;
  RangeOpts scan_range;
  CommonOpts scan_common;
  auto* scan = app.add_subcommand("scan", "Entanglement entropy vs zz gate time");
  scan->add_option("--n", scan_n, "Bosons per condensate")->required();
  scan->add_option("--tau-min", scan_range.min, "Grid start (radians)");
  scan->add_option("--tau-max", scan_range.max, "Grid end (radians, default pi/2)");
  scan->add_option("--steps", scan_range.steps, "Grid points (default: 8N per pi/2)");
  add_common(scan, scan_common);

  // map2d
  int map_n = 0;
  RangeOpts map_range, map_prange;
  CommonOpts map_common;
  auto* map2d = app.add_subcommand("map2d", "Entropy over the (tau, tau') gate-time plane");
  map2d->add_option("--n", map_n, "Bosons per condensate")->required();
  map2d->add_option("--tau-min", map_range.min, "zz grid start");
  map2d->add_option("--tau-max", map_range.max, "zz grid end (default pi/2)");
  map2d->add_option("--steps", map_range.steps, "zz grid points");
  map2d->add_option("--tau-prime-min", map_prange.min, "xz grid start");
  map2d->add_option("--tau-prime-max", map_prange.max, "xz grid end (default pi/2)");
  map2d->add_option("--prime-steps", map_prange.steps, "xz grid points");
  add_common(map2d, map_common);

  // dips
  long long dips_m = 0, dips_d = 0;
  CommonOpts dips_common;
  auto* dips = app.add_subcommand("dips", "Large-N dip entropy at tau = m pi/(4 d)");
  dips->add_option("--m", dips_m, "Numerator m")->required();
  dips->add_option("--d", dips_d, "Denominator d")->required();
  add_common(dips, dips_common);

  // decohere
  int dec_n = 0;
  std::string dec_axis;
  double dec_gamma = -1.0;
  TauPoint dec_point;
  RangeOpts dec_range;
  CommonOpts dec_common;
  auto* decohere = app.add_subcommand("decohere", "Logarithmic negativity under dephasing");
  decohere->add_option("--n", dec_n, "Bosons per condensate")->required();
  decohere->add_option("--axis", dec_axis, "Dephasing axis: z or x")->required();
  decohere->add_option("--gamma", dec_gamma, "Dephasing rate (units of J/hbar)")->required();
  decohere->add_option("--tau", [&dec_point](const std::vector<std::string>& v) {
    dec_point.tau = std::stod(v[0]);
    return true;
  }, "Single gate time (radians)");
  decohere->add_option("--tau-pi", [&dec_point](const std::vector<std::string>& v) {
    dec_point.tau_pi = v[0];
    return true;
  }, "Single gate time as M/D, meaning tau = (M/D) pi/4");
  auto* dec_min = decohere->add_option("--tau-min", dec_range.min, "Grid start");
  auto* dec_max = decohere->add_option("--tau-max", dec_range.max, "Grid end");
  decohere->add_option("--steps", dec_range.steps, "Grid points");
  add_common(decohere, dec_common);

  // robustness
  std::string rob_axis, rob_rule;
  double rob_gamma = -1.0, rob_tau = std::numbers::pi / 4.0;
  std::vector<int> rob_n_values;
  CommonOpts rob_common;
  auto* robustness =
      app.add_subcommand("robustness", "Negativity ratio vs N and a scaling-law fit");
  robustness->add_option("--axis", rob_axis, "Dephasing axis: z or x")->required();
  robustness->add_option("--tau-rule", rob_rule, "Gate-time rule: 1/N, 1/sqrtN or const")
      ->required();
  robustness->add_option("--gamma", rob_gamma, "Dephasing rate")->required();
  robustness->add_option("--n-values", rob_n_values, "Boson numbers, e.g. --n-values 4 6 8 10")
      ->required()
      ->delimiter(',');
  robustness->add_option("--tau", rob_tau, "Gate time for the const rule (default pi/4)");
  add_common(robustness, rob_common);

  // witness
  int wit_n = 0;
  TauPoint wit_point;
  RangeOpts wit_range;
  CommonOpts wit_common;
  auto* witness = app.add_subcommand("witness", "EPR-type separability inequality");
  witness->add_option("--n", wit_n, "Bosons per condensate")->required();
  witness->add_option("--tau", [&wit_point](const std::vector<std::string>& v) {
    wit_point.tau = std::stod(v[0]);
    return true;
  }, "Single gate time (radians)");
  witness->add_option("--tau-pi", [&wit_point](const std::vector<std::string>& v) {
    wit_point.tau_pi = v[0];
    return true;
  }, "Single gate time as M/D, meaning tau = (M/D) pi/4");
  auto* wit_min = witness->add_option("--tau-min", wit_range.min, "Grid start");
  auto* wit_max = witness->add_option("--tau-max", wit_range.max, "Grid end");
  witness->add_option("--steps", wit_range.steps, "Grid points");
  add_common(witness, wit_common);

  // qfunc
  int qf_n = 0, qf_theta = 100, qf_phi = 200;
  double qf_tau = 0.0;
  CommonOpts qf_common;
  auto* qfunc = app.add_subcommand("qfunc", "Husimi Q function of condensate 1 on the sphere");
  qfunc->add_option("--n", qf_n, "Bosons per condensate")->required();
  qfunc->add_option("--tau", qf_tau, "zz gate time before reduction (0: initial coherent state)");
  qfunc->add_option("--n-theta", qf_theta, "Polar grid points");
  qfunc->add_option("--n-phi", qf_phi, "Azimuthal grid points");
  add_common(qfunc, qf_common);

  // circles
  int cir_n = 0;
  TauPoint cir_point;
  CommonOpts cir_common;
  auto* circles = app.add_subcommand("circles", "Flattened-sphere circle diagram of the fan");
  circles->add_option("--n", cir_n, "Bosons per condensate")->required();
  circles->add_option("--tau", [&cir_point](const std::vector<std::string>& v) {
    cir_point.tau = std::stod(v[0]);
    return true;
  }, "zz gate time (radians)");
  circles->add_option("--tau-pi", [&cir_point](const std::vector<std::string>& v) {
    cir_point.tau_pi = v[0];
    return true;
  }, "Gate time as M/D, meaning tau = (M/D) pi/4");
  add_common(circles, cir_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "becsim: error: usage: " << e.what() << "\n";
    return ExitCode::kUsage;
  }

  try {
    if (scan->parsed()) return run_scan(scan_n, scan_range, scan_common);
    if (map2d->parsed()) return run_map2d(map_n, map_range, map_prange, map_common);
    if (dips->parsed()) return run_dips(dips_m, dips_d, dips_common);
    if (decohere->parsed()) {
      const bool range_given = dec_min->count() > 0 || dec_max->count() > 0;
      return run_decohere(dec_n, dec_axis, dec_gamma, dec_point, dec_range, range_given,
                          dec_common);
    }
    if (robustness->parsed()) {
      return run_robustness(rob_axis, rob_rule, rob_gamma, rob_n_values, rob_tau, rob_common);
    }
    if (witness->parsed()) {
      const bool range_given = wit_min->count() > 0 || wit_max->count() > 0;
      return run_witness(wit_n, wit_point, wit_range, range_given, wit_common);
    }
    if (qfunc->parsed()) return run_qfunc(qf_n, qf_tau, qf_theta, qf_phi, qf_common);
    if (circles->parsed()) return run_circles(cir_n, cir_point, cir_common);
    std::cerr << "becsim: error: usage: no subcommand given\n";
    return ExitCode::kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "becsim: error: resource: " << e.what() << "\n";
    return ExitCode::kResource;
  } catch (const NumericalError& e) {
    std::cerr << "becsim: error: numerical: " << e.what() << "\n";
    return ExitCode::kNumerical;
  } catch (const std::bad_alloc&) {
    std::cerr << "becsim: error: resource: out of memory\n";
    return ExitCode::kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "becsim: error: usage: " << e.what() << "\n";
    return ExitCode::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "becsim: error: numerical: " << e.what() << "\n";
    return ExitCode::kNumerical;
  }
}
