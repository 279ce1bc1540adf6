#pragma once

#include "leray/field.hpp"

namespace leray {

/// Fractional Helmholtz filter G = I + alpha^{2 theta} (-Delta)^theta and the
/// deconvolution order N of H_N = D_N G^{-1}.
struct FilterParams {
  double alpha = 0.0;
  double theta = 0.25;
  int n_deconv = 0;

  /// alpha >= 0, theta in [0, 1], n_deconv >= 0; throws InvariantViolation.
  void validate() const;
};

/// Smallest theta for which the regularized solvers run without the unsafe flag.
inline constexpr double kCriticalTheta = 0.25;

/// x = alpha^{2 theta} |k|^{2 theta}; 0 when alpha = 0.
double filter_strength(double k_mag, const FilterParams& p);

/// Symbol of G: 1 + alpha^{2 theta} |k|^{2 theta}.
double helmholtz_multiplier(double k_mag, const FilterParams& p);

/// Symbol of H_N: 1 - (x/(1+x))^{N+1}. For N = 0 this is bit-identical to
/// 1/helmholtz_multiplier.
double deconvolution_multiplier(double k_mag, const FilterParams& p);

/// u_bar = G^{-1} u.
SpectralVectorField filter_apply(const SpectralVectorField& u, const FilterParams& p);

/// H_N u by its closed-form symbol.
SpectralVectorField deconvolve(const SpectralVectorField& u, const FilterParams& p);

/// H_N u = sum_{n=0}^{N} (I - G^{-1})^n u_bar, evaluated term by term with
/// repeated filter applications. Reference path for deconvolve().
SpectralVectorField van_cittert_series(const SpectralVectorField& u, const FilterParams& p);

}  // namespace leray
