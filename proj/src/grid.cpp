#include "leray/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "leray/errors.hpp"
#include "leray/transform.hpp"

namespace leray {

namespace {

int wavenumber_of(int i, int n) { return i <= n / 2 ? i : i - n; }

int dealias_cutoff_for(int n, double fraction) {
  // Largest K strictly below fraction * n/2; for 2/3 this is the alias-free 3K < n.
  const int k = static_cast<int>(std::ceil(fraction * (n / 2) - 1e-9)) - 1;
  return std::clamp(k, 0, n / 2 - 1);
}

}  // namespace

std::shared_ptr<const WaveGrid> WaveGrid::create(int dim, int n, double length,
                                                 double dealias_fraction) {
  if (dim != 2 && dim != 3) throw InvariantViolation("grid: dim must be 2 or 3");
  if (n < 8 || n % 2 != 0) throw InvariantViolation("grid: n must be even and >= 8");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvariantViolation("grid: length must be > 0");
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
    throw InvariantViolation("grid: dealias fraction must be in (0, 1]");
  return std::shared_ptr<const WaveGrid>(new WaveGrid(dim, n, length, dealias_fraction));
}

WaveGrid::WaveGrid(int dim, int n, double length, double dealias_fraction)
    : dim_(dim),
      n_(n),
      length_(length),
      dealias_fraction_(dealias_fraction),
      dealias_cutoff_(dealias_cutoff_for(n, dealias_fraction)),
      k_unit_(2.0 * std::numbers::pi / length) {
  size_ = 1;
  for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(n_);

  for (int d = 0; d < 3; ++d) kvec_[d].assign(d < dim_ ? size_ : 0, 0.0);
  k2_.resize(size_);
  kmag_.resize(size_);
  conj_.resize(size_);
  nyquist_.resize(size_);
  retained_.resize(size_);

  for (std::size_t idx = 0; idx < size_; ++idx) {
    const auto a = wavenumber(idx);
    double k2 = 0.0;
    bool nyq = false;
    bool keep = true;
    std::array<int, 3> neg{};
    for (int d = 0; d < dim_; ++d) {
      const double kd = k_unit_ * a[d];
      kvec_[d][idx] = kd;
      k2 += kd * kd;
      nyq = nyq || std::abs(a[d]) == n_ / 2;
      keep = keep && std::abs(a[d]) <= dealias_cutoff_;
      neg[d] = a[d] == n_ / 2 ? a[d] : -a[d];
    }
    k2_[idx] = k2;
    kmag_[idx] = std::sqrt(k2);
    nyquist_[idx] = nyq;
    retained_[idx] = keep && !nyq;
    conj_[idx] = index_of(neg);
  }
  k2_values_ = k2_;
  std::sort(k2_values_.begin(), k2_values_.end());
  k2_values_.erase(std::unique(k2_values_.begin(), k2_values_.end()), k2_values_.end());
  k2_class_.resize(size_);
  for (std::size_t idx = 0; idx < size_; ++idx)
    k2_class_[idx] = static_cast<std::uint32_t>(
        std::lower_bound(k2_values_.begin(), k2_values_.end(), k2_[idx]) - k2_values_.begin());
  transform_ = std::make_unique<FourierTransform>(dim_, n_);
}

WaveGrid::~WaveGrid() = default;

std::array<int, 3> WaveGrid::wavenumber(std::size_t idx) const {
  std::array<int, 3> a{};
  for (int d = dim_ - 1; d >= 0; --d) {
    a[d] = wavenumber_of(static_cast<int>(idx % n_), n_);
    idx /= n_;
  }
  return a;
}

std::size_t WaveGrid::index_of(const std::array<int, 3>& a) const {
  std::size_t idx = 0;
  for (int d = 0; d < dim_; ++d) {
    const int i = a[d] < 0 ? a[d] + n_ : a[d];
    idx = idx * n_ + static_cast<std::size_t>(i);
  }
  return idx;
}

bool WaveGrid::same_as(const WaveGrid& other) const {
  return this == &other || (dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_ &&
                            dealias_cutoff_ == other.dealias_cutoff_);
}

}  // namespace leray
