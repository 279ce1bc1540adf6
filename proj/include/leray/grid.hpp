#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace leray {

using Complex = std::complex<double>;

class FourierTransform;

/// Periodic tensor-product grid on the torus [0, L)^d together with its
/// wavevector table.
///
/// Storage order is row-major over the FFT index (i0 slowest). Index i_j maps
/// to the integer wavenumber a_j = i_j for i_j <= n/2 and a_j = i_j - n
/// otherwise, so the Nyquist plane is a_j = n/2. The physical wavevector is
/// k_j = 2*pi*a_j / L.
class WaveGrid {
 public:
  static constexpr double kDefaultLength = 2.0 * std::numbers::pi;
  static constexpr double kTwoThirds = 2.0 / 3.0;

  /// Throws InvariantViolation for dim outside {2,3}, odd n, n < 8 or L <= 0.
  static std::shared_ptr<const WaveGrid> create(int dim, int n,
                                                double length = kDefaultLength,
                                                double dealias_fraction = kTwoThirds);

  WaveGrid(const WaveGrid&) = delete;
  WaveGrid& operator=(const WaveGrid&) = delete;
  ~WaveGrid();

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  double dealias_fraction() const { return dealias_fraction_; }
  /// Largest retained |a_j| after a nonlinear product.
  int dealias_cutoff() const { return dealias_cutoff_; }
  /// Number of stored modes (= number of physical points) n^d.
  std::size_t size() const { return size_; }
  /// Physical spacing L / n.
  double spacing() const { return length_ / n_; }
  /// 2*pi / L.
  double k_unit() const { return k_unit_; }

  /// Integer wavenumbers (a_0, a_1, a_2); a_2 = 0 in 2D.
  std::array<int, 3> wavenumber(std::size_t idx) const;
  /// Storage index for integer wavenumbers; each |a_j| <= n/2.
  std::size_t index_of(const std::array<int, 3>& a) const;
  /// Storage index of -k.
  std::size_t conjugate_index(std::size_t idx) const { return conj_[idx]; }

  double k(int axis, std::size_t idx) const { return kvec_[axis][idx]; }
  const std::vector<double>& k_axis(int axis) const { return kvec_[axis]; }
  double k2(std::size_t idx) const { return k2_[idx]; }
  const std::vector<double>& k2() const { return k2_; }
  double k_mag(std::size_t idx) const { return kmag_[idx]; }
  const std::vector<double>& k_mag() const { return kmag_; }

  /// Distinct values of k2(), ascending, and the slot of each mode in that list.
  const std::vector<double>& k2_values() const { return k2_values_; }
  std::uint32_t k2_class(std::size_t idx) const { return k2_class_[idx]; }

  /// True when any |a_j| equals n/2.
  bool is_nyquist(std::size_t idx) const { return nyquist_[idx] != 0; }
  /// True when every |a_j| <= dealias_cutoff() and the mode is not Nyquist.
  bool retained(std::size_t idx) const { return retained_[idx] != 0; }
  const std::vector<unsigned char>& retained_mask() const { return retained_; }

  /// Physical coordinate of grid point i along an axis: i * L / n.
  double coordinate(int i) const { return i * spacing(); }

  /// Grids are interchangeable when all descriptors agree.
  bool same_as(const WaveGrid& other) const;

  const FourierTransform& transform() const { return *transform_; }

 private:
  WaveGrid(int dim, int n, double length, double dealias_fraction);

  int dim_;
  int n_;
  double length_;
  double dealias_fraction_;
  int dealias_cutoff_;
  double k_unit_;
  std::size_t size_;
  std::array<std::vector<double>, 3> kvec_;
  std::vector<double> k2_;
  std::vector<double> kmag_;
  std::vector<double> k2_values_;
  std::vector<std::uint32_t> k2_class_;
  std::vector<std::size_t> conj_;
  std::vector<unsigned char> nyquist_;
  std::vector<unsigned char> retained_;
  std::unique_ptr<FourierTransform> transform_;
};

using GridPtr = std::shared_ptr<const WaveGrid>;

}  // namespace leray
