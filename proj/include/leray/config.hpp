#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "leray/dynamics.hpp"
#include "leray/timestepper.hpp"

namespace leray {

enum class InitialPreset { TaylorGreen, Random, Checkpoint };

struct InitialCondition {
  InitialPreset preset = InitialPreset::TaylorGreen;
  std::uint64_t seed = 1;
  double slope = -2.0;
  int cutoff = 4;
  double amplitude = 1.0;
  /// Magnetic field of mhd-deconv runs (random with these settings); the
  /// seed defaults to seed + 1.
  std::optional<std::uint64_t> magnetic_seed;
  double magnetic_amplitude = 1.0;
  std::string path;  // checkpoint preset
};

struct SweepSettings {
  double s_norm = 0.0;
  std::optional<double> target;
  std::optional<double> tolerance;
};

/// Validated run description.
///
/// Text format: UTF-8, one `key = value` per line under `[section]` headers,
/// `#` starts a comment. Sections and keys:
///
///   [grid]    dim, n, length (number or "2pi"), dealias (fraction, default 2/3)
///   [model]   kind (nse | leray-alpha | leray-deconv | mhd-deconv), nu, nu2,
///             alpha, theta, order, unsafe_subcritical (true | false)
///   [forcing] mode<i> = a0 a1 [a2] | re0 im0 re1 im1 [re2 im2] [| decay]
///   [stepper] dt, t_end, scheme (ifrk4 | ifeuler), sample_every, cfl_limit
///   [initial] preset (taylor-green | random | checkpoint), seed, slope, cutoff,
///             amplitude, magnetic_seed, magnetic_amplitude, path
///   [output]  directory, checkpoint_every (steps, 0 = never)
///   [sweep]   s_norm, target, tolerance
struct RunConfig {
  int dim = 3;
  int n = 32;
  double length = WaveGrid::kDefaultLength;
  double dealias = WaveGrid::kTwoThirds;
  ModelConfig model{};
  StepperConfig stepper{};
  InitialCondition initial{};
  std::string output_dir = "out";
  std::uint64_t checkpoint_every = 0;
  SweepSettings sweep{};

  GridPtr make_grid() const;
};

/// Throws SyntaxError, UnknownKey or InvariantViolation; messages carry the
/// line number and the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Builds the initial state described by cfg.initial on `grid`.
SimState initial_state(const RunConfig& cfg, const GridPtr& grid);

}  // namespace leray
