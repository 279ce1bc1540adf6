// Reference loops.

#include <algorithm>
#include <cmath>

#include "leray/kernels.hpp"

namespace leray::kernels::serial {

void convective_product(int dim, std::span<const ConstRealSpan> w,
                        std::span<const ConstRealSpan> grad, std::span<const RealSpan> out) {
  const std::size_t npts = out[0].size();
  for (int i = 0; i < dim; ++i) {
    for (std::size_t p = 0; p < npts; ++p) {
      double acc = 0.0;
      for (int j = 0; j < dim; ++j) acc += w[j][p] * grad[i * dim + j][p];
      out[i][p] = acc;
    }
  }
}

void derivative(ConstComplexSpan in, ConstRealSpan k_axis, std::span<const unsigned char> skip,
                ComplexSpan out) {
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = skip[i] ? Complex{} : Complex(-k_axis[i] * in[i].imag(), k_axis[i] * in[i].real());
}

void scale(ConstComplexSpan in, ConstRealSpan factor, ComplexSpan out) {
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * factor[i];
}

void apply_mask(ComplexSpan data, std::span<const unsigned char> keep) {
  for (std::size_t i = 0; i < data.size(); ++i)
    if (!keep[i]) data[i] = Complex{};
}

void leray_project(int dim, std::span<const ConstRealSpan> kvec, ConstRealSpan k2,
                   std::span<const unsigned char> keep, std::span<const ComplexSpan> comps) {
  for (std::size_t i = 0; i < k2.size(); ++i) {
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
  double acc = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) acc += weight[i] * std::norm(data[i]);
  return acc;
}

double dot(ConstRealSpan a, ConstRealSpan b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double max_magnitude(std::span<const ConstRealSpan> comps) {
  double best = 0.0;
  for (std::size_t p = 0; p < comps[0].size(); ++p) {
    double s = 0.0;
    for (const auto& c : comps) s += c[p] * c[p];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace leray::kernels::serial
