#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "leray/dynamics.hpp"

namespace leray {

/// Norms of one state. All L2 quantities are volume averages, (1/L^d) int.
struct EnergyRecord {
  double t = 0.0;
  double e_kin = 0.0;   // (1/2) ||u||^2
  double e_mag = 0.0;   // (1/2) ||b||^2
  double grad_u = 0.0;  // ||grad u||^2
  double grad_b = 0.0;  // ||grad b||^2
  double inject = 0.0;  // (f, u)
  double h_half = 0.0;  // ||u||^2_{H^{1/2}}
  double div_residual = 0.0;
};

EnergyRecord measure(const SimState& state, const ModelConfig& cfg);

/// max over interior samples of |dE/dt + dissipation - injection| / max(dissipation, eps),
/// with dE/dt by centered differences. E = e_kin (+ e_mag), dissipation =
/// nu grad_u (+ nu2 grad_b). Requires >= 3 uniformly spaced samples.
double energy_budget_residual(std::span<const EnergyRecord> samples, const ModelConfig& cfg);

/// Space-time test function phi(t, x) = w(t) * g(x): g is a periodized
/// Gaussian centred at `center`, w(t) = sin^3(pi (t - t0)/(t1 - t0)) on
/// [t0, t1] and zero outside (C^2 in time).
struct BumpTestFunction {
  std::array<double, 3> center{};
  double width = 1.0;
  double t0 = 0.0;
  double t1 = 1.0;

  double time_profile(double t) const;
  double time_derivative(double t) const;
  /// Fourier coefficients of g (mean included), truncated to the grid.
  SpectralScalarField spatial(const GridPtr& grid) const;
};

struct LocalEnergyBalance {
  double lhs = 0.0;  // 2 nu int int |grad u|^2 phi
  double rhs = 0.0;
  /// (lhs - rhs) / max(|lhs|, eps)
  double residual = 0.0;
};

/// Local energy equality of the regularized models tested against phi.
/// `checkpoints` must be uniformly spaced in time and cover [phi.t0, phi.t1]
/// with both end points among the checkpoint times; `pressures[i]` is the
/// pressure of `checkpoints[i]` (for MHDDeconv the total pressure
/// p + |b|^2/2). Time integrals use the trapezoid rule over [t0, t1], space
/// integrals grid quadrature.
///
/// For MHDDeconv the balance is
///   2 int int (nu |grad u|^2 + nu2 |grad b|^2) phi
///     = int int |u|^2 (phi_t + nu Lap phi) + |b|^2 (phi_t + nu2 Lap phi)
///       + ((|u|^2 + |b|^2) H_N u + 2 p_tot u + 2 q b) . grad phi
///       - 2 (u . b) H_N b . grad phi
/// with q = induction_potential().
LocalEnergyBalance local_energy_residual(std::span<const SimState> checkpoints,
                                         std::span<const SpectralScalarField> pressures,
                                         const BumpTestFunction& phi, const ModelConfig& cfg);
/// Same, computing the pressures with total_pressure().
LocalEnergyBalance local_energy_residual(std::span<const SimState> checkpoints,
                                         const BumpTestFunction& phi, const ModelConfig& cfg);

struct SweepReport {
  std::vector<double> parameters;
  std::vector<double> errors;
  /// Alpha sweeps: fitted log-log slope. N sweeps: fitted geometric ratio.
  double fitted = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  /// Number of points that entered the fit.
  int fit_points = 0;
  /// Every error vanished; no fit possible and none needed.
  bool exact = false;
  bool pass = false;
};

/// Errors ||u_bar_alpha - u||_{H^s} for strictly decreasing alphas (>= 3).
/// Points with alpha = 0 (error exactly 0) are excluded from the slope fit.
/// pass iff |slope - target| <= tolerance; target defaults to 2 theta.
/// Throws InvariantViolation on bad input, NonMonotone if errors increase.
SweepReport alpha_sweep(const SpectralVectorField& u_ref, const FilterParams& p,
                        std::span<const double> alphas, double s_norm,
                        std::optional<double> target = std::nullopt, double tolerance = 0.1);

/// Errors ||H_N u - u||_{H^s} for increasing N. The geometric ratio is fitted
/// on log(error) versus N over points above 1e-12 ||u||_{H^s}; target is
/// x_max/(1 + x_max) over the support of u_ref and pass iff fitted <= target
/// + tolerance.
SweepReport n_sweep(const SpectralVectorField& u_ref, const FilterParams& p,
                    std::span<const int> n_values, double s_norm, double tolerance = 0.02);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Kinetic energy (1/2) sum |u_k|^2 per integer shell j = round(|a|), for
/// j = 0 .. max shell present on the grid.
std::vector<std::pair<int, double>> shell_spectrum(const SpectralVectorField& u);

}  // namespace leray
