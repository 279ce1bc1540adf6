#include "leray/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "leray/errors.hpp"

namespace leray {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const Complex* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<Complex*>(p));
}

constexpr double kSymmetryTolerance = 1e-10;

std::vector<Complex>& scratch(int slot, std::size_t size) {
  thread_local std::vector<Complex> buffers[2];
  auto& b = buffers[slot];
  if (b.size() != size) b.assign(size, Complex{});
  return b;
}

}  // namespace

FourierTransform::FourierTransform(int dim, int n) {
  std::array<int, 3> dims{n, n, n};
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n);
  std::vector<Complex> a(size_), b(size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(dim, dims.data(), as_fftw(a.data()), as_fftw(b.data()),
                                FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft(dim, dims.data(), as_fftw(a.data()), as_fftw(b.data()),
                                 FFTW_BACKWARD, flags);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void FourierTransform::forward(std::span<const Complex> in, std::span<Complex> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : out) v *= scale;
}

void FourierTransform::forward(std::span<const double> in, std::span<Complex> out) const {
  auto& buf = scratch(0, size_);
  std::copy(in.begin(), in.end(), buf.begin());
  forward(std::span<const Complex>(buf), out);
}

void FourierTransform::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(in.data()), as_fftw(out.data()));
}

void FourierTransform::inverse(std::span<const Complex> in, std::span<double> out) const {
  auto& buf = scratch(0, size_);
  inverse(in, std::span<Complex>(buf));
  for (std::size_t i = 0; i < size_; ++i) out[i] = buf[i].real();
}

double hermitian_residual(const SpectralVectorField& s) {
  const auto& g = s.grid();
  double worst = 0.0;
  double largest = 0.0;
  for (int c = 0; c < s.components(); ++c) {
    const auto data = s.component(c);
    for (std::size_t i = 0; i < g.size(); ++i) {
      largest = std::max(largest, std::norm(data[i]));
      worst = std::max(worst, std::norm(data[i] - std::conj(data[g.conjugate_index(i)])));
    }
  }
  return largest > 0.0 ? std::sqrt(worst / largest) : 0.0;
}

void symmetrize(SpectralVectorField& s) {
  const auto& g = s.grid();
  for (int c = 0; c < s.components(); ++c) {
    auto data = s.component(c);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t j = g.conjugate_index(i);
      if (j < i) continue;
      const Complex avg = 0.5 * (data[i] + std::conj(data[j]));
      data[i] = avg;
      data[j] = std::conj(avg);
    }
  }
}

// Two real components share one complex transform: c = r0 + i r1 on the way
// in, and the Hermitian / anti-Hermitian parts of C separate them on the way out.
SpectralVectorField forward_transform(const RealVectorField& r) {
  SpectralVectorField s(r.grid_ptr(), r.components());
  const auto& g = r.grid();
  const auto& tr = g.transform();
  const int pairs = (r.components() + 1) / 2;
#pragma omp parallel for schedule(static)
  for (int p = 0; p < pairs; ++p) {
    const int c0 = 2 * p;
    const bool single = c0 + 1 == r.components();
    auto& in = scratch(0, g.size());
    auto& out = scratch(1, g.size());
    const auto r0 = r.component(c0);
    if (single) {
      for (std::size_t i = 0; i < g.size(); ++i) in[i] = Complex(r0[i], 0.0);
    } else {
      const auto r1 = r.component(c0 + 1);
      for (std::size_t i = 0; i < g.size(); ++i) in[i] = Complex(r0[i], r1[i]);
    }
    tr.forward(std::span<const Complex>(in), std::span<Complex>(out));
    auto s0 = s.component(c0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex cj = std::conj(out[g.conjugate_index(i)]);
      s0[i] = 0.5 * (out[i] + cj);
      if (!single) s.component(c0 + 1)[i] = Complex(0.0, -0.5) * (out[i] - cj);
    }
  }
  return s;
}

RealVectorField inverse_transform(const SpectralVectorField& s) {
  if (hermitian_residual(s) > kSymmetryTolerance)
    throw SymmetryViolation("inverse_transform: coefficients are not Hermitian-symmetric");
  RealVectorField r(s.grid_ptr(), s.components());
  const auto& g = s.grid();
  const auto& tr = g.transform();
  const int pairs = (s.components() + 1) / 2;
#pragma omp parallel for schedule(static)
  for (int p = 0; p < pairs; ++p) {
    const int c0 = 2 * p;
    const bool single = c0 + 1 == s.components();
    auto& in = scratch(0, g.size());
    auto& out = scratch(1, g.size());
    const auto s0 = s.component(c0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t j = g.conjugate_index(i);
      in[i] = 0.5 * (s0[i] + std::conj(s0[j]));
      if (!single) {
        const auto s1 = s.component(c0 + 1);
        in[i] += Complex(0.0, 1.0) * (0.5 * (s1[i] + std::conj(s1[j])));
      }
    }
    tr.inverse(std::span<const Complex>(in), std::span<Complex>(out));
    auto r0 = r.component(c0);
    for (std::size_t i = 0; i < g.size(); ++i) r0[i] = out[i].real();
    if (!single) {
      auto r1 = r.component(c0 + 1);
      for (std::size_t i = 0; i < g.size(); ++i) r1[i] = out[i].imag();
    }
  }
  return r;
}

SpectralScalarField forward_transform(GridPtr grid, std::span<const double> r) {
  SpectralScalarField s(grid);
  grid->transform().forward(r, s.data());
  auto data = s.data();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const std::size_t j = grid->conjugate_index(i);
    if (j < i) continue;
    const Complex avg = 0.5 * (data[i] + std::conj(data[j]));
    data[i] = avg;
    data[j] = std::conj(avg);
  }
  return s;
}

std::vector<double> inverse_transform(const SpectralScalarField& s) {
  std::vector<double> out(s.grid().size());
  s.grid().transform().inverse(s.data(), std::span<double>(out));
  return out;
}

}  // namespace leray
