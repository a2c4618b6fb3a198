#include "jmgt/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <numbers>
#include <ostream>

namespace jmgt {

namespace fs = std::filesystem;

SourceField make_source(const ExperimentConfig& config) {
  if (config.source == SourceKind::Constant && config.source_amplitude != 0.0) {
    const double a = config.source_amplitude;
    return SourceField{[a](double, double) { return a; }, [](double, double) { return 0.0; }};
  }
  return SourceField::zero();
}

SourceField manufactured_source(const ModelParams& params, double length, bool third_order) {
  const double freq = std::numbers::pi / length;
  const double lambda = freq * freq;
  const double c2 = params.c2;
  const double tau = third_order ? params.tau : 0.0;
  const double b = third_order ? params.b() : params.delta;
  SourceField f;
  f.value = [=](double x, double t) {
    return (6.0 * tau + 6.0 * t + lambda * (c2 * t * t * t + 3.0 * b * t * t)) * std::cos(freq * x);
  };
  f.value_t = [=](double x, double t) {
    return (6.0 + lambda * (3.0 * c2 * t * t + 6.0 * b * t)) * std::cos(freq * x);
  };
  return f;
}

double manufactured_coefficient(double length, double t, int order) {
  const double scale = std::sqrt(length / 2.0);
  switch (order) {
    case 0:
      return scale * t * t * t;
    case 1:
      return scale * 3.0 * t * t;
    case 2:
      return scale * 6.0 * t;
    case 3:
      return scale * 6.0;
    default:
      return 0.0;
  }
}

double manufactured_error(const Trajectory& traj, double length) {
  double worst = 0.0;
  for (std::size_t m = 0; m < traj.steps(); ++m) {
    Vector exact = Vector::Zero(traj.modes());
    if (exact.size() > 1) exact[1] = manufactured_coefficient(length, traj.time[m], 0);
    worst = std::max(worst, (traj.xi[m] - exact).norm());
  }
  return worst;
}

std::vector<MmsRow> mms_convergence(const ModelParams& params, double length, int n_modes,
                                    double final_time, const std::vector<double>& dts,
                                    bool third_order) {
  std::vector<MmsRow> rows;
  const SourceField f = manufactured_source(params, length, third_order);
  const WindowedSignal g;
  for (double dt : dts) {
    SolverConfig config;
    config.dt = dt;
    config.final_time = final_time;
    config.n_modes = n_modes;
    const Discretization disc(length, config);
    const CoefficientField alpha = CoefficientField::constant(1.0);
    const Trajectory traj =
        third_order ? solve_smgt_linear(params, disc, alpha, f, g, config, BoundaryMode::PureNeumann)
                    : solve_westervelt_linearized(params, disc, alpha, f, g, config,
                                                  BoundaryMode::PureNeumann);
    MmsRow row;
    row.solver = third_order ? "smgt-linear" : "westervelt-linearized";
    row.dt = dt;
    row.error = manufactured_error(traj, length);
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (!rows.empty()) {
      const MmsRow& prev = rows.back();
      row.observed_order = std::log(prev.error / row.error) / std::log(prev.dt / row.dt);
    }
    rows.push_back(row);
  }
  return rows;
}

LimitStudyResult limit_study(const ExperimentConfig& config) {
  if (config.tau_sweep.empty()) throw ConfigError({"limit-study needs experiment.tau_sweep"});
  const Discretization disc(config.length, config.solver);
  const SourceField f = make_source(config);

  LimitStudyResult result;
  const NonlinearResult reference =
      solve_westervelt_nonlinear(config.model, disc, f, config.signal, config.solver, config.bc);
  result.reference = reference.trajectory;
  result.reference_iterations = reference.report.iterations;
  result.reference_margin = reference.report.degeneracy.margin;

  const NonlinearVariant variant = config.variant == NonlinearVariant::RelaxedJMGT
                                       ? NonlinearVariant::RelaxedJMGT
                                       : NonlinearVariant::FullJMGT;
  auto member = [&](double tau) {
    ModelParams p = config.model;
    p.tau = tau;
    return solve_jmgt(p, disc, f, config.signal, config.solver, config.bc, variant);
  };

  std::vector<NonlinearResult> runs;
  if (config.parallel) {
    std::vector<std::future<NonlinearResult>> pending;
    for (double tau : config.tau_sweep) pending.push_back(std::async(std::launch::async, member, tau));
    // get() in sweep order rethrows the first failing member's diagnosis.
    for (auto& p : pending) runs.push_back(p.get());
  } else {
    for (double tau : config.tau_sweep) runs.push_back(member(tau));
  }

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Trajectory& traj = runs[i].trajectory;
    LimitRow row;
    row.tau = config.tau_sweep[i];
    for (std::size_t m = 0; m < traj.steps(); ++m) {
      row.e_t = std::max(row.e_t, (traj.velocity[m] - result.reference.velocity[m]).norm());
    }
    row.e_energy = energy_norm(traj, &result.reference, disc.basis, 0.0, false);
    row.picard_iterations = runs[i].report.iterations;
    row.margin = runs[i].report.degeneracy.margin;
    result.rows.push_back(row);
    result.members.push_back(traj);
  }
  return result;
}

std::vector<TauSweepRow> energy_audit_sweep(const ExperimentConfig& config) {
  std::vector<double> taus = config.tau_sweep;
  if (taus.empty()) taus.push_back(config.model.tau);
  const Discretization disc(config.length, config.solver);
  const SourceField f = make_source(config);
  const CoefficientField alpha = CoefficientField::constant(1.0);
  const DataNorms data = data_norms(config.signal, f, disc.quad, config.solver.final_time, 3);
  const CoefficientStats stats{1.0, 1.0, 0.0};

  auto member = [&](double tau) {
    ModelParams p = config.model;
    p.tau = tau;
    const Trajectory traj = solve_smgt_linear(p, disc, alpha, f, config.signal, config.solver, config.bc);
    const EnergyRecord energy = energy_record(traj, disc.basis);
    TauSweepRow row;
    row.tau = tau;
    row.uniform = audit_estimate(energy, data, AuditMode::TauUniform, config.solver.final_time, stats);
    row.dependent = audit_estimate(energy, data, AuditMode::TauDependent, config.solver.final_time, stats);
    row.energy_total = row.uniform.lhs;
    return row;
  };

  std::vector<TauSweepRow> rows;
  if (config.parallel) {
    std::vector<std::future<TauSweepRow>> pending;
    for (double tau : taus) pending.push_back(std::async(std::launch::async, member, tau));
    for (auto& p : pending) rows.push_back(p.get());
  } else {
    for (double tau : taus) rows.push_back(member(tau));
  }
  for (auto& row : rows) {
    const double base = rows.front().uniform.ratio;
    row.ratio_relative = base > 0.0 ? row.uniform.ratio / base : 0.0;
  }
  return rows;
}

CsvTable trajectory_table(const Trajectory& traj) {
  CsvTable table;
  const int n = traj.modes();
  table.header.push_back("t");
  for (const char* prefix : {"xi_", "dxi_", "ddxi_"}) {
    for (int i = 0; i < n; ++i) table.header.push_back(prefix + std::to_string(i));
  }
  for (std::size_t m = 0; m < traj.steps(); ++m) {
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(3 * n + 1));
    row.push_back(traj.time[m]);
    for (const auto* series : {&traj.xi, &traj.velocity, &traj.acceleration}) {
      for (int i = 0; i < n; ++i) row.push_back((*series)[m][i]);
    }
    table.add_row(row);
  }
  return table;
}

CsvTable energy_table(const EnergyRecord& e) {
  CsvTable table;
  table.header = {"t", "e_low", "a_dual", "a_tt", "e_high", "a_tt_h1", "a_ttt_l2"};
  if (e.flux.present) {
    table.header.push_back("flux_dissipated");
    table.header.push_back("flux_trace_peak");
  }
  for (std::size_t m = 0; m < e.lower.time.size(); ++m) {
    std::vector<double> row = {e.lower.time[m],   e.lower.e_low[m],  e.lower.a_dual[m],
                               e.lower.a_tt[m],   e.higher.e_high[m], e.higher.a_tt_h1[m],
                               e.higher.a_ttt_l2[m]};
    if (e.flux.present) {
      row.push_back(e.flux.dissipated[m]);
      row.push_back(e.flux.trace_peak[m]);
    }
    table.add_row(row);
  }
  return table;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"solve-linear", "solve-jmgt",   "solve-relaxed",
                                                 "solve-westervelt", "limit-study", "energy-audit",
                                                 "mms"};
  return names;
}

namespace {

CsvTable summary_table() {
  CsvTable table;
  table.header = {"quantity", "value"};
  return table;
}

void add(CsvTable& table, const std::string& key, const std::string& value) {
  table.add_row(std::vector<std::string>{key, value});
}

void add(CsvTable& table, const std::string& key, double value) { add(table, key, format_real(value)); }

void add_picard(CsvTable& table, const PicardReport& report) {
  add(table, "variant", to_string(report.variant));
  add(table, "iterations", std::to_string(report.iterations));
  add(table, "converged", report.converged ? "true" : "false");
  for (std::size_t i = 0; i < report.differences.size(); ++i) {
    add(table, "difference_" + std::to_string(i), report.differences[i]);
  }
  for (std::size_t i = 0; i < report.factors.size(); ++i) {
    add(table, "factor_" + std::to_string(i + 1), report.factors[i]);
  }
  add(table, "max_factor", report.max_factor());
  add(table, "degeneracy_margin", report.degeneracy.margin);
  add(table, "degeneracy_time", report.degeneracy.time);
  add(table, "degeneracy_x", report.degeneracy.x);
  add(table, "degeneracy_warning", report.degeneracy_warning ? "true" : "false");
}

void add_audit(CsvTable& table, const AuditReport& audit) {
  const std::string prefix = std::string(to_string(audit.mode)) + "_";
  add(table, prefix + "lhs", audit.lhs);
  add(table, prefix + "rhs", audit.rhs);
  add(table, prefix + "ratio", audit.ratio);
  if (audit.mode == AuditMode::TauDependent) {
    add(table, prefix + "log_constant", audit.log_constant);
    add(table, prefix + "tau_robust", audit.tau_robust ? "true" : "false");
  }
  for (const auto& [key, value] : audit.metadata) add(table, prefix + key, value);
}

struct Outputs {
  fs::path dir;
  std::vector<fs::path> written;

  void write(const fs::path& relative, const CsvTable& table) {
    const fs::path path = dir / relative;
    fs::create_directories(path.parent_path());
    write_csv(path.string(), table);
    written.push_back(path);
  }

  void discard() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
      const fs::path parent = p.parent_path();
      if (parent != dir && fs::is_empty(parent, ec)) fs::remove(parent, ec);
    }
    written.clear();
  }
};

int run_single(const std::string& sub, const ExperimentConfig& config, Outputs& out, std::ostream& log) {
  const Discretization disc(config.length, config.solver);
  const SourceField f = make_source(config);
  const int needed = sub == "solve-westervelt" ? 2 : 3;
  if (auto v = validate_compatibility(config.signal, needed); !v.empty()) {
    throw ConfigError({"signal violates compatibility at order " + std::to_string(v.front())});
  }

  CsvTable report = summary_table();
  add(report, "subcommand", sub);
  Trajectory traj;
  if (sub == "solve-linear") {
    if (!(config.model.tau > 0.0)) throw ConfigError({"solve-linear needs model.tau > 0"});
    const CoefficientField alpha = CoefficientField::constant(1.0);
    traj = solve_smgt_linear(config.model, disc, alpha, f, config.signal, config.solver, config.bc);
    const EnergyRecord energy = energy_record(traj, disc.basis);
    const DataNorms data = data_norms(config.signal, f, disc.quad, config.solver.final_time, 3);
    add_audit(report, audit_estimate(energy, data, AuditMode::TauDependent, config.solver.final_time));
    add_audit(report, audit_estimate(energy, data, AuditMode::TauUniform, config.solver.final_time));
    add_audit(report, audit_estimate(energy, data, AuditMode::Higher, config.solver.final_time));
    add(report, "status", "ok");
    out.write("trajectory.csv", trajectory_table(traj));
    out.write("energy.csv", energy_table(energy));
    out.write("report.csv", report);
    return 0;
  }

  NonlinearVariant variant = NonlinearVariant::FullJMGT;
  if (sub == "solve-relaxed") variant = NonlinearVariant::RelaxedJMGT;
  if (sub == "solve-westervelt") variant = NonlinearVariant::Westervelt;
  if (variant != NonlinearVariant::Westervelt && !(config.model.tau > 0.0)) {
    throw ConfigError({sub + " needs model.tau > 0"});
  }
  try {
    const NonlinearResult result =
        solve_jmgt(config.model, disc, f, config.signal, config.solver, config.bc, variant);
    add_picard(report, result.report);
    add(report, "status", "ok");
    if (result.report.degeneracy_warning) log << "warning: degeneracy margin below 0.1\n";
    out.write("trajectory.csv", trajectory_table(result.trajectory));
    out.write("energy.csv", energy_table(energy_record(result.trajectory, disc.basis)));
    out.write("report.csv", report);
    return 0;
  } catch (const PicardFailure& failure) {
    out.discard();
    add_picard(report, failure.report());
    add(report, "status", "failed");
    add(report, "reason", failure.kind() == SolverFailure::Kind::NonDegeneracyViolated
                              ? "non-degeneracy-violated"
                              : "divergence");
    if (failure.kind() == SolverFailure::Kind::NonDegeneracyViolated) {
      add(report, "violation_time", failure.report().degeneracy.time);
      add(report, "violation_margin", failure.report().degeneracy.margin);
    }
    out.write("report.csv", report);
    log << "solver failure: " << failure.what() << "\n";
    return 2;
  }
}

int run_limit_study(const ExperimentConfig& config, Outputs& out, std::ostream& log) {
  const LimitStudyResult result = limit_study(config);
  CsvTable table;
  table.header = {"tau", "e_t", "e_energy", "picard_iterations", "degeneracy_margin"};
  for (const auto& row : result.rows) {
    table.add_row(std::vector<std::string>{format_real(row.tau), format_real(row.e_t),
                                           format_real(row.e_energy),
                                           std::to_string(row.picard_iterations),
                                           format_real(row.margin)});
  }
  const Discretization disc(config.length, config.solver);
  out.write("trajectory.csv", trajectory_table(result.reference));
  out.write("energy.csv", energy_table(energy_record(result.reference, disc.basis)));
  for (std::size_t i = 0; i < result.members.size(); ++i) {
    out.write(fs::path("tau_" + std::to_string(i)) / "trajectory.csv", trajectory_table(result.members[i]));
  }
  out.write("report.csv", table);
  log << "limit study: " << result.rows.size() << " members, reference took "
      << result.reference_iterations << " iterations\n";
  return 0;
}

int run_energy_audit(const ExperimentConfig& config, Outputs& out, std::ostream& log) {
  const auto rows = energy_audit_sweep(config);
  CsvTable table;
  table.header = {"tau", "energy_total", "rhs", "ratio", "ratio_relative",
                  "dependent_ratio", "log_constant", "tau_robust"};
  for (const auto& row : rows) {
    table.add_row(std::vector<std::string>{
        format_real(row.tau), format_real(row.energy_total), format_real(row.uniform.rhs),
        format_real(row.uniform.ratio), format_real(row.ratio_relative),
        format_real(row.dependent.ratio), format_real(row.dependent.log_constant),
        row.dependent.tau_robust ? "true" : "false"});
  }
  out.write("report.csv", table);

  // Artifacts of the first (largest) tau.
  ModelParams p = config.model;
  if (!config.tau_sweep.empty()) p.tau = config.tau_sweep.front();
  const Discretization disc(config.length, config.solver);
  const Trajectory traj = solve_smgt_linear(p, disc, CoefficientField::constant(1.0),
                                            make_source(config), config.signal, config.solver, config.bc);
  out.write("trajectory.csv", trajectory_table(traj));
  out.write("energy.csv", energy_table(energy_record(traj, disc.basis)));
  log << "energy audit: " << rows.size() << " tau values\n";
  return 0;
}

int run_mms(const ExperimentConfig& config, Outputs& out, std::ostream& log) {
  const double dt = config.solver.dt;
  const std::vector<double> dts = {dt, dt / 2.0, dt / 4.0};
  std::vector<MmsRow> rows;
  if (config.model.tau > 0.0) {
    rows = mms_convergence(config.model, config.length, config.solver.n_modes,
                           config.solver.final_time, dts, true);
  }
  const auto second = mms_convergence(config.model, config.length, config.solver.n_modes,
                                      config.solver.final_time, dts, false);
  rows.insert(rows.end(), second.begin(), second.end());

  CsvTable table;
  table.header = {"solver", "dt", "error", "observed_order"};
  for (const auto& row : rows) {
    table.add_row(std::vector<std::string>{row.solver, format_real(row.dt), format_real(row.error),
                                           format_real(row.observed_order)});
  }

  SolverConfig finest = config.solver;
  finest.dt = dts.back();
  const Discretization disc(config.length, finest);
  const bool third = config.model.tau > 0.0;
  const SourceField f = manufactured_source(config.model, config.length, third);
  const CoefficientField alpha = CoefficientField::constant(1.0);
  const Trajectory traj =
      third ? solve_smgt_linear(config.model, disc, alpha, f, WindowedSignal{}, finest, BoundaryMode::PureNeumann)
            : solve_westervelt_linearized(config.model, disc, alpha, f, WindowedSignal{}, finest,
                                          BoundaryMode::PureNeumann);
  out.write("trajectory.csv", trajectory_table(traj));
  out.write("energy.csv", energy_table(energy_record(traj, disc.basis)));
  out.write("report.csv", table);
  log << "mms: final observed order " << rows.back().observed_order << "\n";
  return 0;
}

}  // namespace

int run(const std::string& subcommand, const ExperimentConfig& config, const std::string& out_dir,
        std::ostream& log) {
  bool known = false;
  for (const auto& s : subcommands()) known = known || s == subcommand;
  if (!known) throw ConfigError({"unknown subcommand '" + subcommand + "'"});

  Outputs out{fs::path(out_dir), {}};
  fs::create_directories(out.dir);
  try {
    if (subcommand == "limit-study") return run_limit_study(config, out, log);
    if (subcommand == "energy-audit") return run_energy_audit(config, out, log);
    if (subcommand == "mms") return run_mms(config, out, log);
    return run_single(subcommand, config, out, log);
  } catch (const ConfigError&) {
    out.discard();
    throw;
  } catch (const SolverFailure& failure) {
    out.discard();
    CsvTable report = summary_table();
    add(report, "subcommand", subcommand);
    add(report, "status", "failed");
    add(report, "reason", failure.what());
    if (const auto* picard = dynamic_cast<const PicardFailure*>(&failure)) {
      add_picard(report, picard->report());
      if (failure.kind() == SolverFailure::Kind::NonDegeneracyViolated) {
        add(report, "violation_time", picard->report().degeneracy.time);
        add(report, "violation_margin", picard->report().degeneracy.margin);
      }
    }
    out.write("report.csv", report);
    log << "solver failure: " << failure.what() << "\n";
    return 2;
  }
}

}  // namespace jmgt
