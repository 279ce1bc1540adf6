#include "leray/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>

#include "leray/acceptance.hpp"
#include "leray/checkpoint.hpp"
#include "leray/config.hpp"
#include "leray/errors.hpp"
#include "leray/output.hpp"
#include "leray/spectral.hpp"

namespace leray {

namespace {

std::filesystem::path prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory " + cfg.output_dir + ": " + ec.message());
  return cfg.output_dir;
}

std::string checkpoint_name(std::uint64_t step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "checkpoint_%08llu.bin", static_cast<unsigned long long>(step));
  return buf;
}

void report_sweep(const SweepReport& r, const char* what, std::ostream& log) {
  log << what << ": " << r.parameters.size() << " points, fit "
      << (r.exact ? std::string("exact") : format_double(r.fitted)) << ", target "
      << format_double(r.target) << " +/- " << format_double(r.tolerance) << ", "
      << (r.pass ? "pass" : "FAIL") << "\n";
}

}  // namespace

int cmd_run(const std::string& config_path, std::ostream& log) {
  const auto cfg = load_config(config_path);
  const auto grid = cfg.make_grid();
  const auto dir = prepare_output(cfg);
  auto state = initial_state(cfg, grid);

  std::vector<EnergyRecord> records;
  std::vector<std::uint64_t> steps;
  RunHooks hooks;
  hooks.sample = [&](const SimState& s) {
    records.push_back(measure(s, cfg.model));
    steps.push_back(s.step);
  };
  hooks.checkpoint = [&](const SimState& s) {
    save_checkpoint((dir / checkpoint_name(s.step)).string(), Checkpoint::from_state(s, cfg.model));
  };
  hooks.warning = [&](const std::string& msg) { log << "warning: " << msg << "\n"; };
  hooks.checkpoint_every = cfg.checkpoint_every;

  const auto final_state = run(std::move(state), cfg.model, cfg.stepper, hooks);
  save_checkpoint((dir / "final.bin").string(), Checkpoint::from_state(final_state, cfg.model));
  write_file_atomic((dir / "energy.csv").string(), energy_csv(records));

  // Budget residual over the uniformly sampled prefix.
  std::size_t uniform = records.size();
  if (records.size() >= 2) {
    const auto stride = steps[1] - steps[0];
    for (std::size_t i = 1; i < steps.size(); ++i)
      if (steps[i] - steps[i - 1] != stride) {
        uniform = i;
        break;
      }
  }
  std::string budget = "n/a";
  if (uniform >= 3)
    budget = format_double(energy_budget_residual(std::span(records.data(), uniform), cfg.model));

  const auto& last = records.back();
  std::string summary;
  summary += "model = " + std::string(to_string(cfg.model.kind)) + "\n";
  summary += "steps = " + std::to_string(final_state.step) + "\n";
  summary += "t = " + format_double(final_state.t) + "\n";
  summary += "e_kin = " + format_double(last.e_kin) + "\n";
  summary += "e_mag = " + format_double(last.e_mag) + "\n";
  summary += "grad_u = " + format_double(last.grad_u) + "\n";
  summary += "grad_b = " + format_double(last.grad_b) + "\n";
  summary += "h_half = " + format_double(last.h_half) + "\n";
  summary += "div_residual = " + format_double(last.div_residual) + "\n";
  summary += "budget_residual = " + budget + "\n";
  write_file_atomic((dir / "summary.txt").string(), summary);
  log << summary;
  return 0;
}

int cmd_sweep_alpha(const std::string& config_path, const std::vector<double>& alphas,
                    std::ostream& log) {
  const auto cfg = load_config(config_path);
  const auto grid = cfg.make_grid();
  const auto dir = prepare_output(cfg);
  const auto u = initial_state(cfg, grid).u;
  const auto report = alpha_sweep(u, cfg.model.filter, alphas, cfg.sweep.s_norm, cfg.sweep.target,
                                  cfg.sweep.tolerance.value_or(0.1));
  write_file_atomic((dir / "sweep.csv").string(), sweep_csv(report));
  report_sweep(report, "alpha sweep", log);
  return report.pass ? 0 : kSweepFailedExit;
}

int cmd_sweep_n(const std::string& config_path, const std::vector<int>& orders, std::ostream& log) {
  const auto cfg = load_config(config_path);
  const auto grid = cfg.make_grid();
  const auto dir = prepare_output(cfg);
  const auto u = initial_state(cfg, grid).u;
  const auto report =
      n_sweep(u, cfg.model.filter, orders, cfg.sweep.s_norm, cfg.sweep.tolerance.value_or(0.02));
  write_file_atomic((dir / "sweep.csv").string(), sweep_csv(report));
  report_sweep(report, "order sweep", log);
  return report.pass ? 0 : kSweepFailedExit;
}

int cmd_multiplier_table(const std::string& config_path, std::ostream& out) {
  const auto cfg = load_config(config_path);
  out << multiplier_table_csv(*cfg.make_grid(), cfg.model.filter);
  return 0;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out) {
  AcceptanceOptions a;
  a.inject_skew_fault = opts.inject_fault;
  bool all = true;
  run_acceptance(a, [&](const CriterionResult& r) {
    out << format_row(r) << std::endl;
    all = all && r.pass;
  });
  out << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace leray
