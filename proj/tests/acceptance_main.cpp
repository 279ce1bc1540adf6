#include <malloc.h>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "leray/acceptance.hpp"
#include "leray/kernels.hpp"

// Usage: acceptance [id ...] [--inject-fault]
int main(int argc, char** argv) {
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
  leray::kernels::configure_threads_from_env();
  leray::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--inject-fault") opts.inject_skew_fault = true;
    else opts.only.push_back(std::atoi(arg.c_str()));
  }
  bool all = true;
  leray::run_acceptance(opts, [&](const leray::CriterionResult& r) {
    std::cout << leray::format_row(r) << std::endl;
    std::fprintf(stderr, "    criterion %d: %.2f s (budget %.0f s)\n", r.id, r.seconds, r.budget_seconds);
    all = all && r.pass;
  });
  return all ? 0 : 1;
}
