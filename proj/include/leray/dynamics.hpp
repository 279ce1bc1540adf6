#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leray/field.hpp"
#include "leray/filter.hpp"

namespace leray {

enum class ModelKind { NSE, LerayAlpha, LerayDeconv, MHDDeconv };

std::string_view to_string(ModelKind kind);
/// Accepts "nse", "leray-alpha", "leray-deconv", "mhd-deconv".
std::optional<ModelKind> parse_model_kind(std::string_view name);

/// One real Fourier forcing term amp e^{ik.x} + c.c., optionally decaying as
/// e^{-decay t}. The conjugate partner at -k is implied and must not be listed.
struct ForcingTerm {
  std::array<int, 3> wavenumber{};
  std::array<Complex, 3> amplitude{};
  double decay = 0.0;
};

struct ForcingSpec {
  std::vector<ForcingTerm> terms;

  bool is_zero() const { return terms.empty(); }
  /// Divergence-free, nonzero retained wavenumbers, no conjugate duplicates.
  void validate(const WaveGrid& grid) const;
  /// Spectral forcing field at time t.
  SpectralVectorField evaluate(const GridPtr& grid, double t) const;
};

struct ModelConfig {
  ModelKind kind = ModelKind::NSE;
  double nu = 0.01;
  double nu2 = 0.0;  // magnetic diffusivity, MHDDeconv only
  FilterParams filter{};
  ForcingSpec forcing{};
  /// Permits theta < 1/4 for the regularized models (a warning is the caller's job).
  bool unsafe_subcritical = false;

  void validate(const WaveGrid& grid) const;
};

struct SimState {
  double t = 0.0;
  std::uint64_t step = 0;
  SpectralVectorField u;
  std::optional<SpectralVectorField> b;
};

struct Tendency {
  SpectralVectorField du;
  std::optional<SpectralVectorField> db;
};

struct AdvectOptions {
  /// Truncate both inputs and the product to the 2/3-rule box. Disabling it is
  /// only useful as a negative control for the skew-symmetry identities.
  bool dealias = true;
  /// Apply the Leray projection to the result.
  bool project = true;
};

/// B(w, v) = P_sigma[(w . grad) v], evaluated pseudo-spectrally.
SpectralVectorField advect(const SpectralVectorField& w, const SpectralVectorField& v,
                           AdvectOptions opts = {});

/// The advecting field of the model: u (NSE), u_bar (LerayAlpha), H_N u
/// (LerayDeconv, MHDDeconv).
SpectralVectorField advecting_field(const SpectralVectorField& u, const ModelConfig& cfg);

/// Non-viscous tendency of the model; the viscous part is left to the stepper.
/// Throws CriticalityViolation and MissingMagneticField.
Tendency rhs(const SimState& state, const ModelConfig& cfg);

/// Pressure with zero mean, from -Delta p = div((a . grad) u) where a is the
/// advecting field. For MHDDeconv the Lorentz term -(H_N b . grad) b is
/// included and the magnetic pressure |b|^2/2 is subtracted, so the returned
/// field is the hydrodynamic pressure p of the momentum equation.
SpectralScalarField pressure_solve(const SimState& state, const ModelConfig& cfg);

/// Total pressure p + |b|^2/2 (equal to pressure_solve for non-MHD models).
SpectralScalarField total_pressure(const SimState& state, const ModelConfig& cfg);

/// MHDDeconv only: the potential q whose gradient the Leray projection
/// removes from the induction equation, -Delta q = div((H_N u . grad) b -
/// (H_N b . grad) u). It vanishes identically when H_N = I.
SpectralScalarField induction_potential(const SimState& state, const ModelConfig& cfg);

void check_criticality(const ModelConfig& cfg);

}  // namespace leray
