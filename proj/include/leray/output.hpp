#pragma once

#include <span>
#include <string>

#include "leray/diagnostics.hpp"

namespace leray {

/// Shortest round-trip text of v with up to 17 significant digits; locale
/// independent.
std::string format_double(double v);

/// Header `t,e_kin,e_mag,grad_u,grad_b,inject,h_half,div_residual`, one row per record.
std::string energy_csv(std::span<const EnergyRecord> records);

/// Header `parameter,error`, one row per point, then `fit,<value>` (or
/// `fit,exact`) and `pass,<0|1>`.
std::string sweep_csv(const SweepReport& report);

/// Header `k,G,H_N`: one row per distinct nonzero |k| retained on the grid,
/// ascending.
std::string multiplier_table_csv(const WaveGrid& grid, const FilterParams& p);

}  // namespace leray
