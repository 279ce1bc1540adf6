#pragma once

#include <cstdint>
#include <functional>

#include "leray/field.hpp"

namespace leray {

/// Leray-Helmholtz projection: u_k <- u_k - k (k.u_k)/|k|^2 for k != 0.
/// The mean and Nyquist modes are zeroed. Result is flagged solenoidal.
SpectralVectorField leray_project(const SpectralVectorField& s);

/// Multiplies each coefficient by |k|^{2 theta}; k = 0 stays 0.
SpectralVectorField fractional_laplacian(const SpectralVectorField& s, double theta);

/// Keeps modes with |k| <= m * 2pi/L, zeroes the rest. Throws
/// InvariantViolation for m < 1.
SpectralVectorField galerkin_project(const SpectralVectorField& s, int m);

/// sqrt(sum_{k != 0} |k|^{2 sexp} |u_k|^2). For sexp = 0 this is the L2 norm
/// normalized by the torus volume, (1/L^d) int |u|^2 dx.
double sobolev_norm(const SpectralVectorField& s, double sexp);

/// Real inner product sum_{k != 0} |k|^{2 sexp} Re(u_k . conj(v_k)).
double sobolev_inner(const SpectralVectorField& u, const SpectralVectorField& v,
                     double sexp = 0.0);

/// Applies a real multiplier m(|k|) to every mode; used by all diagonal
/// operators. The multiplier at k = 0 is forced to 0 (zero-mean fields).
SpectralVectorField apply_radial_multiplier(const SpectralVectorField& s,
                                            const std::function<double(double)>& m);

/// max_k |k.u_k| / ||u||_{L2}; 0 for the zero field.
double divergence_residual(const SpectralVectorField& s);

/// Zeroes every mode outside the dealias box (and the Nyquist planes).
void dealias(SpectralVectorField& s);

/// Component j of the spectral gradient: (d_j u_i)_k = i k_j u_{i,k}.
SpectralVectorField partial_derivative(const SpectralVectorField& s, int axis);

/// Deterministic random solenoidal field. The kinetic energy
/// (1/2) sum |u_k|^2 of shell j (modes with j - 1/2 <= |a| < j + 1/2) equals
/// j^{2 spectrum_slope} for 1 <= j <= cutoff_shell; all other modes are zero.
/// Throws InvariantViolation when cutoff_shell exceeds the dealias cutoff.
SpectralVectorField random_solenoidal(GridPtr grid, std::uint64_t seed, double spectrum_slope,
                                      int cutoff_shell);

/// Integer shell index round(|a|) of a storage index.
int shell_index(const WaveGrid& grid, std::size_t idx);

/// 2D Taylor-Green field (amplitude sin x cos y, -amplitude cos x sin y[, 0]);
/// requires L = 2 pi.
SpectralVectorField taylor_green(GridPtr grid, double amplitude = 1.0);

}  // namespace leray
