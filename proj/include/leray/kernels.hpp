#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the plain
// reference loop kept for testing and benchmarking, `parallel` is the OpenMP
// version used by the library. Elementwise kernels agree bitwise; reductions
// in `parallel` sum fixed-size blocks in a fixed order, so their result does
// not depend on the thread count (it may differ from `serial` in the last
// bits).

#include <cstddef>
#include <span>

#include "leray/grid.hpp"

namespace leray::kernels {

using RealSpan = std::span<double>;
using ConstRealSpan = std::span<const double>;
using ComplexSpan = std::span<Complex>;
using ConstComplexSpan = std::span<const Complex>;

/// Block length of the deterministic reductions.
inline constexpr std::size_t kReductionBlock = 4096;

namespace serial {
/// out[i] = sum_j w[j] * grad[i*dim + j], with grad[i*dim + j] = d_j v_i.
void convective_product(int dim, std::span<const ConstRealSpan> w,
                        std::span<const ConstRealSpan> grad, std::span<const RealSpan> out);
/// out = i * k_axis * in, zero where skip != 0.
void derivative(ConstComplexSpan in, ConstRealSpan k_axis, std::span<const unsigned char> skip,
                ComplexSpan out);
/// out = in * factor; out may alias in.
void scale(ConstComplexSpan in, ConstRealSpan factor, ComplexSpan out);
void apply_mask(ComplexSpan data, std::span<const unsigned char> keep);
/// Per mode u -= k (k.u)/|k|^2 where keep != 0 and |k| > 0; u = 0 elsewhere.
void leray_project(int dim, std::span<const ConstRealSpan> kvec, ConstRealSpan k2,
                   std::span<const unsigned char> keep, std::span<const ComplexSpan> comps);
/// sum_i weight[i] * |data[i]|^2
double weighted_norm2(ConstComplexSpan data, ConstRealSpan weight);
double dot(ConstRealSpan a, ConstRealSpan b);
/// Largest Euclidean length of the pointwise vector (c_0, ..., c_{d-1}).
double max_magnitude(std::span<const ConstRealSpan> comps);
}  // namespace serial

// Same contracts as serial::.
namespace parallel {
// out[i] = sum_j w[j] * grad[i*dim + j], with grad[i*dim + j] = d_j v_i.
void convective_product(int dim, std::span<const ConstRealSpan> w,
                        std::span<const ConstRealSpan> grad, std::span<const RealSpan> out);
// out = i * k_axis * in, zero where skip != 0.
void derivative(ConstComplexSpan in, ConstRealSpan k_axis, std::span<const unsigned char> skip,
                ComplexSpan out);
// out = in * factor; out may alias in.
void scale(ConstComplexSpan in, ConstRealSpan factor, ComplexSpan out);
void apply_mask(ComplexSpan data, std::span<const unsigned char> keep);
// Per mode u -= k (k.u)/|k|^2 where keep != 0 and |k| > 0; u = 0 elsewhere.
void leray_project(int dim, std::span<const ConstRealSpan> kvec, ConstRealSpan k2,
                   std::span<const unsigned char> keep, std::span<const ComplexSpan> comps);
// sum_i weight[i] * |data[i]|^2
double weighted_norm2(ConstComplexSpan data, ConstRealSpan weight);
double dot(ConstRealSpan a, ConstRealSpan b);
// Largest Euclidean length of the pointwise vector (c_0, ..., c_{d-1}).
double max_magnitude(std::span<const ConstRealSpan> comps);
}  // namespace parallel

/// Caps OpenMP parallelism at LERAY_THREADS when that variable is set to a
/// positive integer. Returns the effective maximum thread count.
int configure_threads_from_env();
int max_threads();

}  // namespace leray::kernels
