#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "peakon/cli/config.hpp"
#include "peakon/cli/verify.hpp"
#include "peakon/csv.hpp"
#include "peakon/error.hpp"
#include "peakon/field.hpp"
#include "peakon/grid.hpp"
#include "peakon/linear_solver.hpp"
#include "peakon/multipeakon.hpp"
#include "peakon/nonlinear_solver.hpp"

namespace peakon::cli {

enum ExitCode : int { exit_ok = 0, exit_verify_failed = 1, exit_config_error = 2, exit_breakdown = 3 };

/// Files of one run under output_dir.
class OutputSink {
 public:
  explicit OutputSink(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw OutputError("cannot create output directory '" + dir + "'");
    }
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write '" + (dir_ / name).string() + "'");
    return out;
  }

  void write_json(const std::string& name, const nlohmann::json& j) const {
    auto out = open(name);
    out << j.dump(2) << '\n';
    if (!out) throw OutputError("failed writing '" + name + "'");
  }

  static std::string field_file(double t) {
    char name[64];
    std::snprintf(name, sizeof(name), "fields_t%.6f.csv", t);
    return name;
  }

 private:
  std::filesystem::path dir_;
};

namespace detail {

inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline std::vector<double> config_grid(const ScenarioConfig& c) {
  return graded_grid(c.domain_half_width, c.nodes, resolved_h_min(c));
}

inline void write_profile_csv(std::ostream& out, const Profile& p) {
  csv::write_header(out, {"position", "value", "slope_left", "slope_right"});
  for (std::size_t i = 0; i < p.size(); ++i) {
    csv::write_row(out, {p.positions[i], p.values[i], p.slope_left[i], p.slope_right[i]});
  }
}

inline std::size_t snapshot_stride(double t_end, double dt) {
  return std::max<std::size_t>(1, StepSchedule(t_end, dt).steps() / 10);
}

}  // namespace detail

inline int run_verify(const OutputSink& sink, std::ostream& log) {
  const auto checks = run_verify_suite();
  print_verify_table(log, checks);
  bool all = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    list.push_back(
        {{"name", c.name}, {"measured", c.measured}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  }
  sink.write_json("summary.json", {{"scenario", "verify"}, {"passed", all}, {"checks", list}});
  return all ? exit_ok : exit_verify_failed;
}

/// H1 growth on each half-line for v0 = x e^{-x^2} on a uniform grid: solved
/// surfaces vs the identity, at 101 equally spaced times.
inline int run_linear(const ScenarioConfig& c, const OutputSink& sink, std::ostream& log) {
  const double t_end = resolved_t_end(c);
  const auto v0 = sample([](double x) { return x * std::exp(-x * x); },
                         [](double x) { return (1.0 - 2.0 * x * x) * std::exp(-x * x); },
                         uniform_grid(c.domain_half_width, c.nodes));
  auto records = sink.open("records.csv");
  csv::write_header(records,
                    {"t", "h1_pos_measured", "h1_pos_predicted", "h1_neg_measured", "h1_neg_predicted"});
  double worst_pos = 0.0;
  double worst_neg = 0.0;
  const int samples = t_end > 0.0 ? 100 : 0;
  LinearState last;
  for (int k = 0; k <= samples; ++k) {
    const double t = samples == 0 ? 0.0 : t_end * k / samples;
    last = solve_linear(v0, t);
    const double pos_m = linear_h1_norm_sq(last, Side::positive);
    const double pos_p = h1_identity_rhs(v0, t, Side::positive);
    const double neg_m = linear_h1_norm_sq(last, Side::negative);
    const double neg_p = h1_identity_rhs(v0, t, Side::negative);
    worst_pos = std::max(worst_pos, std::abs(pos_m - pos_p) / pos_p);
    worst_neg = std::max(worst_neg, std::abs(neg_m - neg_p) / neg_p);
    csv::write_row(records, {t, pos_m, pos_p, neg_m, neg_p});
  }
  {
    auto fields = sink.open(OutputSink::field_file(t_end));
    write_csv(fields, last);
  }
  sink.write_json("summary.json", {{"scenario", "linear"},
                                   {"t_end", t_end},
                                   {"alpha", last.alpha},
                                   {"peak_slope_right", last.U_right[last.peak]},
                                   {"max_rel_error_pos", worst_pos},
                                   {"max_rel_error_neg", worst_neg},
                                   {"l1_norm_pos", l1_norm(v0, Side::positive)}});
  log << "linear: t_end " << t_end << ", max relative H1 identity error " << std::max(worst_pos, worst_neg)
      << '\n';
  return exit_ok;
}

inline nlohmann::json blowup_json(const BlowupReport& r) {
  return {{"triggered", r.triggered},
          {"mechanism", r.triggered ? nlohmann::json(to_string(r.mechanism)) : nlohmann::json(nullptr)},
          {"t_break", detail::optional_number(r.t_break)},
          {"min_slope", r.min_slope},
          {"min_jacobian", r.min_jacobian}};
}

inline void write_run_outputs(const OutputSink& sink, const IntegrationResult& run) {
  {
    auto records = sink.open("records.csv");
    write_records_csv(records, run.records);
  }
  for (const auto& s : run.snapshots) {
    auto out = sink.open(OutputSink::field_file(s.t));
    write_csv(out, s.field());
  }
}

/// Nonlinear run of the corner-exponential data; a breakdown here is unexpected.
inline int run_nonlinear(const ScenarioConfig& c, const OutputSink& sink, std::ostream& log) {
  const double t_end = resolved_t_end(c);
  const auto v0 = build_initial_data({c.epsilon, c.mu, "corner-exponential"}, detail::config_grid(c));
  IntegrateOptions opt;
  opt.epsilon = c.epsilon;
  opt.snapshot_every = detail::snapshot_stride(t_end, c.dt);
  const auto run = integrate(v0, t_end, c.dt, opt);
  write_run_outputs(sink, run);
  std::optional<double> t0;
  for (const auto& r : run.records) {
    if (r.sup_vx > 1.0) {
      t0 = r.t;
      break;
    }
  }
  auto summary = blowup_json(run.report);
  summary["scenario"] = "nonlinear";
  summary["t_end"] = t_end;
  summary["t0"] = detail::optional_number(t0);
  summary["tau"] = threshold_time(c.epsilon);
  sink.write_json("summary.json", summary);
  log << "nonlinear: reached t = " << run.final_state.t << (run.report.triggered ? " (breakdown)" : "")
      << '\n';
  return run.report.triggered ? exit_breakdown : exit_ok;
}

/// Slope-growth experiment; success means sup|v_x| > 1 was observed or the slope blew up.
inline int run_instability(const ScenarioConfig& c, const OutputSink& sink, std::ostream& log) {
  const double t_end = resolved_t_end(c);
  InstabilityOptions opt;
  opt.half_width = c.domain_half_width;
  opt.nodes = c.nodes;
  opt.h_min = resolved_h_min(c);
  opt.snapshot_every = detail::snapshot_stride(t_end, c.dt);
  const auto res = instability_experiment(c.epsilon, c.mu, t_end, c.dt, opt);
  write_run_outputs(sink, res.run);

  double max_h1 = 0.0;
  double max_drift = 0.0;
  const double e0 = res.records.front().E;
  for (const auto& r : res.records) {
    if (res.t0 && r.t > *res.t0) break;
    max_h1 = std::max(max_h1, r.h1_v);
    max_drift = std::max(max_drift, std::abs(r.E - e0) / e0);
  }
  auto summary = blowup_json(res.report);
  summary["scenario"] = "instability";
  summary["epsilon"] = c.epsilon;
  summary["mu"] = c.mu;
  summary["t0"] = detail::optional_number(res.t0);
  summary["tau"] = res.tau;
  summary["h1_v0"] = res.h1_v0;
  summary["cs_hypothesis"] = res.cs_hypothesis;
  summary["max_h1_v_to_t0"] = max_h1;
  summary["max_energy_drift_to_t0"] = max_drift;
  sink.write_json("summary.json", summary);
  log << "instability: tau " << res.tau << ", t0 " << (res.t0 ? csv::format(*res.t0) : std::string("none"))
      << (res.report.triggered ? ", breakdown at t " + csv::format(*res.report.t_break) : std::string())
      << '\n';
  const bool slope_blowup =
      res.report.triggered && res.report.mechanism == BreakdownMechanism::slope_unbounded;
  if (res.t0 || slope_blowup) return exit_ok;
  return res.report.triggered ? exit_breakdown : exit_verify_failed;
}

/// Two same-sign peakons, x = (-5, 0), m = (1, 0.5).
inline int run_multipeakon(const ScenarioConfig& c, const OutputSink& sink, std::ostream& log) {
  const double t_end = resolved_t_end(c);
  const MultipeakonState s0{{-5.0, 0.0}, {1.0, 0.5}};
  const auto traj = mp_integrate(s0, t_end, c.dt);
  {
    auto records = sink.open("records.csv");
    write_trajectory_csv(records, traj);
  }
  const auto& last = traj.states.back();
  {
    auto fields = sink.open(OutputSink::field_file(traj.t.back()));
    detail::write_profile_csv(fields, reconstruct(last, uniform_grid(c.domain_half_width, c.nodes)));
  }
  const double h0 = mp_hamiltonian(s0);
  nlohmann::json collision = nullptr;
  if (traj.collision) {
    collision = {{"t", traj.collision->t}, {"left", traj.collision->left}, {"gap", traj.collision->gap}};
  }
  sink.write_json("summary.json", {{"scenario", "multipeakon"},
                                   {"t_end", traj.t.back()},
                                   {"H0", h0},
                                   {"H_rel_drift", std::abs(mp_hamiltonian(last) - h0) / h0},
                                   {"sum_m_drift", std::abs(mp_total_momentum(last) - mp_total_momentum(s0))},
                                   {"collision", collision}});
  log << "multipeakon: t = " << traj.t.back() << (traj.collision ? " (collision)" : "") << '\n';
  return traj.collision ? exit_breakdown : exit_ok;
}

/// Runs one scenario. Configuration and output problems map to exit code 2.
inline int run(const ScenarioConfig& config, std::ostream& log, std::ostream& err) {
  try {
    validate(config);
    const OutputSink sink(config.output_dir);
    switch (config.scenario) {
      case Scenario::verify:
        return run_verify(sink, log);
      case Scenario::linear:
        return run_linear(config, sink, log);
      case Scenario::nonlinear:
        return run_nonlinear(config, sink, log);
      case Scenario::instability:
        return run_instability(config, sink, log);
      case Scenario::multipeakon:
        return run_multipeakon(config, sink, log);
    }
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const StructuralError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const InputError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << '\n';
    return exit_breakdown;
  }
  return exit_ok;
}

}  // namespace peakon::cli
