#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "leray/dynamics.hpp"

namespace leray {

enum class Scheme { IFRK4, IFEuler };

struct StepperConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::IFRK4;
  int sample_every = 1;
  double cfl_limit = 0.5;

  void validate() const;
  /// round(t_end / dt)
  std::uint64_t total_steps() const;
};

/// Advective CFL number max|u| dt / dx of a state.
double cfl_number(const SimState& state, double dt);

/// Advances the state by dt with exact integrating factors e^{-nu |k|^2 dt}
/// (nu2 for b) and the scheme's explicit Runge-Kutta for rhs(). The new time
/// is (step + 1) * dt. Throws NonFinite when the result holds NaN or Inf.
SimState step(const SimState& state, const ModelConfig& cfg, const StepperConfig& sc);

/// Observer hooks for run(). `sample` is called at step 0, every
/// sample_every steps and at the final step (once per step at most);
/// `checkpoint` every `checkpoint_every` steps when that is positive.
struct RunHooks {
  std::function<void(const SimState&)> sample;
  std::function<void(const SimState&)> checkpoint;
  std::function<void(const std::string&)> warning;
  std::uint64_t checkpoint_every = 0;
};

/// Steps from initial.step up to total_steps(). Errors from step() are
/// rethrown as StepError carrying the failing time.
SimState run(SimState initial, const ModelConfig& cfg, const StepperConfig& sc,
             const RunHooks& hooks = {});

}  // namespace leray
