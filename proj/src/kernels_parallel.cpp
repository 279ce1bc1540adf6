#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "leray/kernels.hpp"

namespace leray::kernels {

namespace {

using Index = std::ptrdiff_t;

// Sums fixed blocks in parallel, then the block sums in order, so the result
// is independent of the number of threads.
template <class BlockSum>
double blocked_sum(std::size_t n, BlockSum&& block_sum) {
  const Index nblocks = static_cast<Index>((n + kReductionBlock - 1) / kReductionBlock);
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    partial[b] = block_sum(lo, hi);
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

}  // namespace

namespace parallel {

void convective_product(int dim, std::span<const ConstRealSpan> w,
                        std::span<const ConstRealSpan> grad, std::span<const RealSpan> out) {
  const Index npts = static_cast<Index>(out[0].size());
  for (int i = 0; i < dim; ++i) {
#pragma omp parallel for schedule(static)
    for (Index p = 0; p < npts; ++p) {
      double acc = 0.0;
      for (int j = 0; j < dim; ++j) acc += w[j][p] * grad[i * dim + j][p];
      out[i][p] = acc;
    }
  }
}

void derivative(ConstComplexSpan in, ConstRealSpan k_axis, std::span<const unsigned char> skip,
                ComplexSpan out) {
  const Index n = static_cast<Index>(in.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i)
    out[i] = skip[i] ? Complex{} : Complex(-k_axis[i] * in[i].imag(), k_axis[i] * in[i].real());
}

void scale(ConstComplexSpan in, ConstRealSpan factor, ComplexSpan out) {
  const Index n = static_cast<Index>(in.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[i] = in[i] * factor[i];
}

void apply_mask(ComplexSpan data, std::span<const unsigned char> keep) {
  const Index n = static_cast<Index>(data.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i)
    if (!keep[i]) data[i] = Complex{};
}

void leray_project(int dim, std::span<const ConstRealSpan> kvec, ConstRealSpan k2,
                   std::span<const unsigned char> keep, std::span<const ComplexSpan> comps) {
  const Index n = static_cast<Index>(k2.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    if (!keep[i] || k2[i] == 0.0) {
      for (int c = 0; c < dim; ++c) comps[c][i] = Complex{};
      continue;
    }
    Complex kdotu{};
    for (int c = 0; c < dim; ++c) kdotu += kvec[c][i] * comps[c][i];
    const Complex s = kdotu / k2[i];
    for (int c = 0; c < dim; ++c) comps[c][i] -= kvec[c][i] * s;
  }
}

double weighted_norm2(ConstComplexSpan data, ConstRealSpan weight) {
  return blocked_sum(data.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += weight[i] * std::norm(data[i]);
    return acc;
  });
}

double dot(ConstRealSpan a, ConstRealSpan b) {
  return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += a[i] * b[i];
    return acc;
  });
}

double max_magnitude(std::span<const ConstRealSpan> comps) {
  const Index n = static_cast<Index>(comps[0].size());
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (Index p = 0; p < n; ++p) {
    double s = 0.0;
    for (const auto& c : comps) s += c[p] * c[p];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace parallel

int configure_threads_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("LERAY_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < omp_get_max_threads())
      omp_set_num_threads(static_cast<int>(v));
  }
#endif
  return max_threads();
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace leray::kernels
