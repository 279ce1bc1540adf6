#include "leray/filter.hpp"

#include <cmath>

#include "leray/errors.hpp"
#include "leray/spectral.hpp"

namespace leray {

void FilterParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvariantViolation("alpha must be >= 0");
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvariantViolation("theta must lie in [0, 1]");
  if (n_deconv < 0) throw InvariantViolation("order (N) must be >= 0");
}

double filter_strength(double k_mag, const FilterParams& p) {
  if (p.alpha == 0.0 || k_mag == 0.0) return 0.0;
  return std::pow(p.alpha * k_mag, 2.0 * p.theta);
}

double helmholtz_multiplier(double k_mag, const FilterParams& p) {
  return 1.0 + filter_strength(k_mag, p);
}

double deconvolution_multiplier(double k_mag, const FilterParams& p) {
  const double g = 1.0 / helmholtz_multiplier(k_mag, p);
  if (p.n_deconv == 0) return g;
  // 1 - r^{N+1} with r = x/(1+x) = 1 - g, without cancellation for r near 1.
  return -std::expm1((p.n_deconv + 1) * std::log1p(-g));
}

SpectralVectorField filter_apply(const SpectralVectorField& u, const FilterParams& p) {
  return apply_radial_multiplier(u, [&p](double k) { return 1.0 / helmholtz_multiplier(k, p); });
}

SpectralVectorField deconvolve(const SpectralVectorField& u, const FilterParams& p) {
  return apply_radial_multiplier(u, [&p](double k) { return deconvolution_multiplier(k, p); });
}

SpectralVectorField van_cittert_series(const SpectralVectorField& u, const FilterParams& p) {
  // term_n = (I - G^{-1})^n u_bar; term_{n+1} = term_n - G^{-1} term_n.
  SpectralVectorField term = filter_apply(u, p);
  SpectralVectorField sum = term;
  for (int n = 1; n <= p.n_deconv; ++n) {
    term -= filter_apply(term, p);
    sum += term;
  }
  sum.set_solenoidal(u.solenoidal());
  return sum;
}

}  // namespace leray
