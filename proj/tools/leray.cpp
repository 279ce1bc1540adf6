#include <malloc.h>

#include <iostream>

#include <CLI11.hpp>

#include "leray/commands.hpp"
#include "leray/errors.hpp"
#include "leray/kernels.hpp"

int main(int argc, char** argv) {
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
  leray::kernels::configure_threads_from_env();

  CLI::App app{"Pseudo-spectral Leray-alpha / deconvolution / MHD simulator"};
  app.require_subcommand(1);

  std::string config;
  std::vector<double> alphas;
  std::vector<int> orders;
  bool inject_fault = false;

  auto* run = app.add_subcommand("run", "integrate a configured run");
  run->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);

  auto* sweep_alpha = app.add_subcommand("sweep-alpha", "filter error versus alpha");
  sweep_alpha->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  sweep_alpha->add_option("--alphas", alphas, "decreasing alphas, comma separated")
      ->required()
      ->delimiter(',');

  auto* sweep_n = app.add_subcommand("sweep-n", "deconvolution error versus order");
  sweep_n->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);
  sweep_n->add_option("--orders", orders, "increasing orders, comma separated")
      ->required()
      ->delimiter(',');

  auto* table = app.add_subcommand("multiplier-table", "print |k|, G and H_N multipliers as CSV");
  table->add_option("config", config, "config file")->required()->check(CLI::ExistingFile);

  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_flag("--inject-fault", inject_fault)->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return leray::cmd_run(config, std::cerr);
    if (*sweep_alpha) return leray::cmd_sweep_alpha(config, alphas, std::cerr);
    if (*sweep_n) return leray::cmd_sweep_n(config, orders, std::cerr);
    if (*table) return leray::cmd_multiplier_table(config, std::cout);
    if (*validate) return leray::cmd_validate({inject_fault}, std::cout);
  } catch (const leray::StepError& e) {
    std::cerr << "error at t = " << e.time() << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const leray::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
