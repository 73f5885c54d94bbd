#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <thread>

#include <CLI11.hpp>

#include "cli/version.hpp"
#include "cyclewalk/analysis.hpp"
#include "cyclewalk/spectral.hpp"

namespace cyclewalk::cli {

namespace {

constexpr double kTheoremThreshold = 1e-10;
constexpr double kSpectrumThreshold = 1e-9;

int require_d(const RunConfig& cfg) {
  if (!cfg.d) throw UsageError(cfg.command + " requires --d");
  if (*cfg.d < 2) throw UsageError("cycle size must be at least 2");
  return *cfg.d;
}

double single_phi(const RunConfig& cfg) {
  const double phi = cfg.phi.value_or(0.0);
  if (!std::isfinite(phi)) throw UsageError("--phi must be finite");
  return phi;
}

ResolvedState single_state(const RunConfig& cfg, std::ostream& diag) {
  if (cfg.states.size() > 1) throw UsageError(cfg.command + " takes a single --state");
  ResolvedState s = parse_state(cfg.states.empty() ? "psi_a" : cfg.states.front());
  if (s.warning) diag << "warning: " << *s.warning << '\n';
  return s;
}

std::vector<ResolvedState> state_list(const RunConfig& cfg, std::ostream& diag) {
  std::vector<std::string> names = cfg.states;
  if (names.empty() || (names.size() == 1 && names.front() == "all")) {
    names = {"psi_a", "psi_b", "psi_c", "psi_d"};
  }
  std::vector<ResolvedState> out;
  for (const auto& n : names) {
    out.push_back(parse_state(n));
    if (out.back().warning) diag << "warning: " << *out.back().warning << '\n';
  }
  return out;
}

std::vector<int> d_values(const RunConfig& cfg, const char* fallback) {
  if (cfg.d && cfg.d_range) throw UsageError("--d and --d-range are mutually exclusive");
  if (cfg.d) return {require_d(cfg)};
  return parse_d_range(cfg.d_range.value_or(fallback));
}

std::vector<double> phi_values(const RunConfig& cfg, const std::vector<double>& fallback) {
  if (cfg.phi && cfg.phi_grid) throw UsageError("--phi and --phi-grid are mutually exclusive");
  if (cfg.phi) {
    const double phi = CoinConfig(single_phi(cfg)).phi();
    return {phi};
  }
  if (cfg.phi_grid) return parse_phi_grid(*cfg.phi_grid);
  return fallback;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : ";") + p;
  return s;
}

void echo_common(Table& t, const RunConfig& cfg) {
  t.config.emplace_back("command", cfg.command);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

}  // namespace

CommandResult cmd_evolve(const RunConfig& cfg, std::ostream& diag) {
  const int d = require_d(cfg);
  const double phi = single_phi(cfg);
  const ResolvedState state = single_state(cfg, diag);
  const std::int64_t t = cfg.t.value_or(0);
  if (t < 0) throw UsageError("--t must be nonnegative");
  const Model model = parse_model(cfg.model);

  const CoinConfig coin(phi);
  const Distribution p =
      position_distribution(evolve(WalkState::localized(d, model, 0, state.coin), t, coin));

  CommandResult res;
  Table& tab = res.table;
  echo_common(tab, cfg);
  tab.config.emplace_back("model", cfg.model);
  tab.config.emplace_back("d", std::to_string(d));
  tab.config.emplace_back("phi", format_shortest(coin.phi()));
  tab.config.emplace_back("state", state.label);
  tab.config.emplace_back("t", std::to_string(t));
  tab.columns = {"n", "p"};
  for (int n = 0; n < d; ++n) tab.add_row({std::int64_t{n}, p[n]});
  return res;
}

CommandResult cmd_limiting(const RunConfig& cfg, std::ostream& diag) {
  const int d = require_d(cfg);
  const double phi = single_phi(cfg);
  const ResolvedState state = single_state(cfg, diag);
  const Model model = parse_model(cfg.model);
  if (!(cfg.epsilon > 0.0)) throw UsageError("--epsilon must be positive");

  const CoinConfig coin(phi);
  const InitialState init{0, state.coin, std::nullopt};
  const LimitingResult lr = model == Model::Recycled ? limiting_distribution(coin, d, init)
                                                     : limiting_distribution_memory(d, init);
  for (const auto& w : lr.warnings) diag << "warning: " << w.message << '\n';
  const double tv = total_variation(lr.distribution, Distribution::uniform(d));

  CommandResult res;
  Table& tab = res.table;
  echo_common(tab, cfg);
  tab.config.emplace_back("model", cfg.model);
  tab.config.emplace_back("d", std::to_string(d));
  tab.config.emplace_back("phi", format_shortest(coin.phi()));
  tab.config.emplace_back("state", state.label);
  tab.config.emplace_back("epsilon", format_shortest(cfg.epsilon));
  tab.columns = {"n", "pbar", "warning"};
  const bool warned = !lr.warnings.empty();
  for (int n = 0; n < d; ++n) tab.add_row({std::int64_t{n}, lr.distribution[n], warned});
  tab.summary.emplace_back("tv_from_uniform", tv);
  tab.summary.emplace_back("uniform", tv < cfg.epsilon);
  tab.summary.emplace_back("clusters", std::int64_t{lr.cluster_count});
  return res;
}

CommandResult cmd_sweep(const RunConfig& cfg, std::ostream& diag) {
  SweepGrid grid;
  grid.d_values = d_values(cfg, "2..50");
  grid.phis = phi_values(cfg, parse_phi_grid("0:0.1:7.9"));
  const auto states = state_list(cfg, diag);
  for (const auto& s : states) grid.states.push_back({s.label, s.coin});
  if (!(cfg.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  const int jobs = resolve_jobs(cfg.jobs);

  const auto records = sweep(grid, cfg.epsilon, jobs);

  CommandResult res;
  Table& tab = res.table;
  echo_common(tab, cfg);
  tab.config.emplace_back("d_range", std::to_string(grid.d_values.front()) + ".." +
                                         std::to_string(grid.d_values.back()));
  tab.config.emplace_back("phi_grid", cfg.phi_grid.value_or(cfg.phi ? format_shortest(grid.phis[0])
                                                                    : "0:0.1:7.9"));
  std::vector<std::string> labels;
  for (const auto& s : states) labels.push_back(s.label);
  tab.config.emplace_back("states", join(labels));
  tab.config.emplace_back("epsilon", format_shortest(cfg.epsilon));
  tab.columns = {"d", "phi", "state", "d_mod4", "divisible_by_12", "tv_from_uniform",
                 "uniform", "boundary", "warnings", "error"};
  if (cfg.distributions) tab.columns.emplace_back("distribution");

  std::int64_t failures = 0;
  std::int64_t non_uniform = 0;
  std::int64_t boundary = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++failures;
      diag << "error: cell d=" << r.d << " phi=" << format_shortest(r.phi) << " state=" << r.state
           << ": " << r.error << '\n';
    } else if (!r.classified_uniform) {
      ++non_uniform;
    }
    if (r.boundary) {
      ++boundary;
      diag << "boundary: cell d=" << r.d << " phi=" << format_shortest(r.phi)
           << " state=" << r.state << " tv=" << format_double(r.tv_from_uniform) << '\n';
    }
    std::vector<Cell> row{std::int64_t{r.d}, r.phi, r.state, std::int64_t{r.d_mod4},
                          r.divisible_by_12, r.tv_from_uniform, r.classified_uniform,
                          r.boundary, std::int64_t{r.warnings}, r.error};
    if (cfg.distributions) {
      std::string dist;
      for (double p : r.distribution) dist += (dist.empty() ? "" : " ") + format_double(p);
      row.emplace_back(std::move(dist));
    }
    tab.add_row(std::move(row));
  }
  tab.summary.emplace_back("cells", static_cast<std::int64_t>(records.size()));
  tab.summary.emplace_back("non_uniform", non_uniform);
  tab.summary.emplace_back("boundary", boundary);
  tab.summary.emplace_back("failures", failures);
  res.status = failures > 0 ? kExitFailure : kExitOk;
  return res;
}

CommandResult cmd_mixing(const RunConfig& cfg, std::ostream& diag) {
  const int d = require_d(cfg);
  const double phi = single_phi(cfg);
  const ResolvedState state = single_state(cfg, diag);
  const std::int64_t t_max = cfg.t_max.value_or(100000);
  if (t_max < 1) throw UsageError("--t-max must be at least 1");

  const MixingCurve curve = mixing_curve(d, phi, state.coin, t_max, {});

  CommandResult res;
  Table& tab = res.table;
  echo_common(tab, cfg);
  tab.config.emplace_back("d", std::to_string(d));
  tab.config.emplace_back("phi", format_shortest(CoinConfig(phi).phi()));
  tab.config.emplace_back("state", state.label);
  tab.config.emplace_back("t_max", std::to_string(t_max));
  tab.columns = {"T", "sd"};
  for (std::size_t i = 0; i < curve.horizons.size(); ++i) {
    tab.add_row({curve.horizons[i], curve.distances[i]});
  }
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg, std::ostream& diag) {
  const auto ds = d_values(cfg, "3..12");
  const auto phis = phi_values(cfg, {0.0, 0.7, 1.0, 2.0, 3.3});
  const auto states = state_list(cfg, diag);
  const std::int64_t t_max = cfg.t_max.value_or(40);
  if (t_max < 0) throw UsageError("--t-max must be nonnegative");
  const int jobs = resolve_jobs(cfg.jobs);

  struct Check {
    std::string theorem;
    int d;
    double phi;
    std::string state;
    double threshold;
    double deviation = 0.0;
  };
  std::vector<Check> checks;
  for (int d : ds) {
    for (double phi : phis) {
      for (const auto& s : states) checks.push_back({"theorem1", d, phi, s.label, kTheoremThreshold});
    }
    for (const auto& s : states) checks.push_back({"theorem2", d, 2.0, s.label, kTheoremThreshold});
    checks.push_back({"theorem2_spectrum", d, 2.0, "", kSpectrumThreshold});
  }

  auto coin_of = [&](const std::string& label) {
    for (const auto& s : states) {
      if (s.label == label) return s.coin;
    }
    return Coin4(Coin4::Zero());
  };
  parallel_for(checks.size(), jobs, [&](std::size_t i) {
    Check& c = checks[i];
    if (c.theorem == "theorem1") {
      c.deviation = verify_theorem1_upto(c.d, t_max, c.phi, coin_of(c.state));
    } else if (c.theorem == "theorem2") {
      c.deviation = verify_theorem2_upto(c.d, t_max, coin_of(c.state));
    } else {
      double worst = 0.0;
      for (int k = 0; k < c.d; ++k) {
        const auto a = eigensystem(build_nk(k, c.d).matrix).eigenvalues;
        const auto b = eigensystem(build_mk(k, c.d, CoinConfig(2.0)).matrix).eigenvalues;
        worst = std::max(worst, eigenvalue_multiset_distance(a, b));
      }
      c.deviation = worst;
    }
  });

  CommandResult res;
  Table& tab = res.table;
  echo_common(tab, cfg);
  tab.config.emplace_back("d_range", std::to_string(ds.front()) + ".." + std::to_string(ds.back()));
  std::vector<std::string> phi_labels;
  for (double p : phis) phi_labels.push_back(format_shortest(p));
  tab.config.emplace_back("phis", join(phi_labels));
  std::vector<std::string> labels;
  for (const auto& s : states) labels.push_back(s.label);
  tab.config.emplace_back("states", join(labels));
  tab.config.emplace_back("t_max", std::to_string(t_max));
  tab.columns = {"check", "d", "phi", "state", "t_max", "max_deviation", "threshold", "pass"};
  std::int64_t failed = 0;
  double worst = 0.0;
  for (const auto& c : checks) {
    const bool pass = c.deviation < c.threshold;
    if (!pass) {
      ++failed;
      diag << "fail: " << c.theorem << " d=" << c.d << " phi=" << format_shortest(c.phi)
           << " state=" << c.state << " deviation=" << format_double(c.deviation) << '\n';
    }
    worst = std::max(worst, c.deviation);
    tab.add_row({c.theorem, std::int64_t{c.d}, c.phi, c.state,
                 c.theorem == "theorem2_spectrum" ? std::int64_t{0} : t_max, c.deviation,
                 c.threshold, pass});
  }
  tab.summary.emplace_back("checks", static_cast<std::int64_t>(checks.size()));
  tab.summary.emplace_back("failed", failed);
  tab.summary.emplace_back("max_deviation", worst);
  res.status = failed > 0 ? kExitFailure : kExitOk;
  return res;
}

CommandResult cmd_residue(const RunConfig& cfg, std::ostream& diag) {
  const auto ds = d_values(cfg, "3..60");
  const ResolvedState state = single_state(cfg, diag);
  const auto rows = residue_distance_curve(ds, state.coin);

  CommandResult res;
  Table& tab = res.table;
  echo_common(tab, cfg);
  tab.config.emplace_back("d_range", std::to_string(ds.front()) + ".." + std::to_string(ds.back()));
  tab.config.emplace_back("state", state.label);
  tab.columns = {"d", "d_mod4", "tv"};
  for (const auto& r : rows) tab.add_row({std::int64_t{r.d}, std::int64_t{r.d_mod4}, r.tv});
  return res;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recycled-coin quantum walk on the d-cycle: simulation and spectral analysis",
               kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.set_config("--config", "", "TOML/INI file with option defaults; flags override it");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::function<CommandResult(const RunConfig&, std::ostream&)> action;

  enum Flag : unsigned {
    kD = 1U << 0,
    kDRange = 1U << 1,
    kPhi = 1U << 2,
    kPhiGrid = 1U << 3,
    kState = 1U << 4,
    kStates = 1U << 5,
    kT = 1U << 6,
    kTMax = 1U << 7,
    kEpsilon = 1U << 8,
    kJobs = 1U << 9,
    kModel = 1U << 10,
    kDistributions = 1U << 11,
  };

  auto add = [&](const std::string& name, const std::string& help, unsigned flags,
                 decltype(action) fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (flags & kD) sub->add_option("--d", cfg.d, "Cycle size (>= 2)");
    if (flags & kDRange) sub->add_option("--d-range", cfg.d_range, "Cycle sizes A..B (inclusive)");
    if (flags & kPhi) sub->add_option("--phi", cfg.phi, "Memory parameter (reduced mod 8)");
    if (flags & kPhiGrid) {
      sub->add_option("--phi-grid", cfg.phi_grid, "Memory parameters start:step:end (inclusive)");
    }
    if (flags & kState) {
      sub->add_option("--state", cfg.states, "psi_a|psi_b|psi_c|psi_d|custom:z0,z1,z2,z3");
    }
    if (flags & kStates) {
      sub->add_option("--state", cfg.states,
                      "Repeatable; psi_a|psi_b|psi_c|psi_d|custom:...|all (default all)");
    }
    if (flags & kT) sub->add_option("--t", cfg.t, "Number of steps");
    if (flags & kTMax) sub->add_option("--t-max", cfg.t_max, "Largest horizon");
    if (flags & kEpsilon) sub->add_option("--epsilon", cfg.epsilon, "Uniformity TV threshold");
    if (flags & kJobs) sub->add_option("--jobs", cfg.jobs, "Worker threads (default CYCLEWALK_JOBS)");
    if (flags & kModel) sub->add_option("--model", cfg.model, "recycled|memory");
    if (flags & kDistributions) {
      sub->add_flag("--distributions", cfg.distributions, "Add a column with each p-bar vector");
    }
    sub->add_option("--format", format, "csv|json");
    sub->add_option("--out", cfg.out, "Write the table to PATH instead of stdout");
    sub->callback([&, name, fn] {
      cfg.command = name;
      action = fn;
    });
  };

  add("evolve", "Position distribution after t steps of direct evolution",
      kD | kPhi | kState | kT | kModel, cmd_evolve);
  add("limiting", "Time-averaged distribution from the spectral closed form",
      kD | kPhi | kState | kEpsilon | kModel, cmd_limiting);
  add("sweep", "Uniformity classification over a (d, phi, state) grid",
      kD | kDRange | kPhi | kPhiGrid | kStates | kEpsilon | kJobs | kDistributions, cmd_sweep);
  add("mixing", "SD(T) of the running average against uniform", kD | kPhi | kState | kTMax,
      cmd_mixing);
  add("verify", "Finite-time checks of the Q and P equivalences",
      kD | kDRange | kPhi | kPhiGrid | kStates | kTMax | kJobs, cmd_verify);
  add("residue", "TV between p-bar(phi=0; psi) and p-bar(phi=2; Q psi) per cycle size",
      kD | kDRange | kState, cmd_residue);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << kToolName << ": error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const Format fmt = parse_format(format);
    CommandResult res = action(cfg, err);
    res.table.config.emplace_back("format", format);
    if (cfg.out.empty()) {
      write_table(res.table, fmt, out);
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw UsageError("cannot open output file '" + cfg.out + "'");
      write_table(res.table, fmt, file);
    }
    return res.status;
  } catch (const UsageError& e) {
    err << kToolName << ": error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << kToolName << ": error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace cyclewalk::cli
