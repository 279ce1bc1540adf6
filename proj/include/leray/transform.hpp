#pragma once

#include <span>

#include "leray/field.hpp"
#include "leray/grid.hpp"

namespace leray {

/// FFTW-backed complex transforms of one n^d array. Plans are created once per
/// grid with FFTW_ESTIMATE, so results are deterministic for a given build.
/// Execution is re-entrant; concurrent calls on distinct buffers are safe.
class FourierTransform {
 public:
  FourierTransform(int dim, int n);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  /// out_k = (1/n^d) sum_x in(x) e^{-ik.x}
  void forward(std::span<const double> in, std::span<Complex> out) const;
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  /// out(x) = Re sum_k in_k e^{ik.x}
  void inverse(std::span<const Complex> in, std::span<double> out) const;
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  std::size_t size_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Discrete Fourier coefficients of a real field. The result is exactly
/// Hermitian. The mean and Nyquist modes
/// are kept so that inverse_transform(forward_transform(r)) == r.
SpectralVectorField forward_transform(const RealVectorField& r);

/// Pointwise evaluation of the real part of the truncated Fourier series. Throws
/// SymmetryViolation when coefficients violate Hermitian symmetry by more
/// than 1e-10 relative to the largest coefficient.
RealVectorField inverse_transform(const SpectralVectorField& s);

SpectralScalarField forward_transform(GridPtr grid, std::span<const double> r);
std::vector<double> inverse_transform(const SpectralScalarField& s);

/// max_k |c(k) - conj(c(-k))| / max_k |c(k)| over all components (0 for the
/// zero field).
double hermitian_residual(const SpectralVectorField& s);

/// Replaces every coefficient pair by its Hermitian average.
void symmetrize(SpectralVectorField& s);

}  // namespace leray
