#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "leray/grid.hpp"

namespace leray {

/// Real vector field sampled on the physical grid, `components` arrays of
/// n^d samples each (same row-major order as the spectral storage).
class RealVectorField {
 public:
  RealVectorField(GridPtr grid, int components);

  const WaveGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }
  std::span<double> component(int c) { return data_[c]; }
  std::span<const double> component(int c) const { return data_[c]; }

 private:
  GridPtr grid_;
  std::vector<std::vector<double>> data_;
};

/// Fourier coefficients of a real vector field, one complex array per
/// component over the full (Hermitian-redundant) wavevector table.
/// coeff(k) is the Fourier-series coefficient u_k in u(x) = sum_k u_k e^{ik.x}.
class SpectralVectorField {
 public:
  /// Zero field with grid.dim() components.
  explicit SpectralVectorField(GridPtr grid);
  SpectralVectorField(GridPtr grid, int components);

  const WaveGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }

  std::span<Complex> component(int c) { return data_[c]; }
  std::span<const Complex> component(int c) const { return data_[c]; }
  Complex& operator()(int c, std::size_t idx) { return data_[c][idx]; }
  const Complex& operator()(int c, std::size_t idx) const { return data_[c][idx]; }

  /// Set by leray_project and preserved by diagonal multipliers.
  bool solenoidal() const { return solenoidal_; }
  void set_solenoidal(bool s) { solenoidal_ = s; }

  void set_zero();
  SpectralVectorField& operator+=(const SpectralVectorField& other);
  SpectralVectorField& operator-=(const SpectralVectorField& other);
  SpectralVectorField& operator*=(double s);
  /// this += s * other
  void axpy(double s, const SpectralVectorField& other);

  /// Bitwise comparison of coefficients (grid and component count included).
  bool identical(const SpectralVectorField& other) const;

 private:
  GridPtr grid_;
  std::vector<std::vector<Complex>> data_;
  bool solenoidal_ = false;
};

/// Scalar spectral field. Unlike the vector fields it may carry a mean.
class SpectralScalarField {
 public:
  explicit SpectralScalarField(GridPtr grid);

  const WaveGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }
  Complex& operator[](std::size_t idx) { return data_[idx]; }
  const Complex& operator[](std::size_t idx) const { return data_[idx]; }

 private:
  GridPtr grid_;
  std::vector<Complex> data_;
};

void require_same_grid(const WaveGrid& a, const WaveGrid& b, const char* where);

}  // namespace leray
