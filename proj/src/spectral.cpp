#include "leray/spectral.hpp"

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "leray/errors.hpp"
#include "leray/kernels.hpp"

namespace leray {

namespace {

// f evaluated once per distinct |k|^2, gathered per mode; 0 at k = 0.
template <class F>
std::vector<double> per_shell(const WaveGrid& g, F f) {
  const auto& values = g.k2_values();
  std::vector<double> table(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) table[j] = values[j] == 0.0 ? 0.0 : f(values[j]);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = table[g.k2_class(i)];
  return w;
}

std::vector<double> radial_weights(const WaveGrid& g, const std::function<double(double)>& m) {
  return per_shell(g, [&](double k2) { return m(std::sqrt(k2)); });
}

std::vector<double> sobolev_weights(const WaveGrid& g, double sexp) {
  if (sexp == 0.0) return per_shell(g, [](double) { return 1.0; });
  return per_shell(g, [sexp](double k2) { return std::pow(k2, sexp); });
}

std::array<kernels::ConstRealSpan, 3> k_spans(const WaveGrid& g) {
  std::array<kernels::ConstRealSpan, 3> k{};
  for (int d = 0; d < g.dim(); ++d) k[d] = g.k_axis(d);
  return k;
}

// Uniform double in [-1, 1) from the raw 64-bit engine output.
double symmetric_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace

SpectralVectorField apply_radial_multiplier(const SpectralVectorField& s,
                                            const std::function<double(double)>& m) {
  const auto w = radial_weights(s.grid(), m);
  SpectralVectorField out(s.grid_ptr(), s.components());
  for (int c = 0; c < s.components(); ++c)
    kernels::parallel::scale(s.component(c), w, out.component(c));
  out.set_solenoidal(s.solenoidal());
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& s) {
  const auto& g = s.grid();
  if (s.components() != g.dim()) throw InvariantViolation("leray_project: needs a d-vector field");
  SpectralVectorField out = s;
  std::array<kernels::ComplexSpan, 3> comps{};
  for (int c = 0; c < g.dim(); ++c) comps[c] = out.component(c);
  std::vector<unsigned char> keep(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) keep[i] = !g.is_nyquist(i);
  const auto k = k_spans(g);
  kernels::parallel::leray_project(g.dim(), std::span(k.data(), g.dim()), g.k2(), keep,
                                   std::span(comps.data(), g.dim()));
  out.set_solenoidal(true);
  return out;
}

SpectralVectorField fractional_laplacian(const SpectralVectorField& s, double theta) {
  if (theta < 0.0) throw InvariantViolation("fractional_laplacian: theta must be >= 0");
  if (theta == 0.0) {
    SpectralVectorField out = s;
    for (int c = 0; c < out.components(); ++c) out(c, 0) = Complex{};
    return out;
  }
  return apply_radial_multiplier(s, [theta](double k) { return std::pow(k * k, theta); });
}

SpectralVectorField galerkin_project(const SpectralVectorField& s, int m) {
  if (m < 1) throw InvariantViolation("galerkin_project: m must be >= 1");
  const auto& g = s.grid();
  std::vector<unsigned char> keep(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto a = g.wavenumber(i);
    long a2 = 0;
    for (int d = 0; d < g.dim(); ++d) a2 += static_cast<long>(a[d]) * a[d];
    keep[i] = a2 <= static_cast<long>(m) * m;
  }
  SpectralVectorField out = s;
  for (int c = 0; c < out.components(); ++c) kernels::parallel::apply_mask(out.component(c), keep);
  return out;
}

double sobolev_norm(const SpectralVectorField& s, double sexp) {
  const auto w = sobolev_weights(s.grid(), sexp);
  double acc = 0.0;
  for (int c = 0; c < s.components(); ++c) acc += kernels::parallel::weighted_norm2(s.component(c), w);
  return std::sqrt(acc);
}

double sobolev_inner(const SpectralVectorField& u, const SpectralVectorField& v, double sexp) {
  require_same_grid(u.grid(), v.grid(), "sobolev_inner");
  const auto& g = u.grid();
  const auto w = sobolev_weights(g, sexp);
  double acc = 0.0;
  for (int c = 0; c < u.components(); ++c) {
    const auto a = u.component(c);
    const auto b = v.component(c);
    for (std::size_t i = 0; i < g.size(); ++i)
      acc += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  }
  return acc;
}

double divergence_residual(const SpectralVectorField& s) {
  const auto& g = s.grid();
  const double norm = sobolev_norm(s, 0.0);
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    Complex div{};
    for (int c = 0; c < g.dim(); ++c) div += g.k(c, i) * s(c, i);
    worst = std::max(worst, std::abs(div));
  }
  return worst / norm;
}

void dealias(SpectralVectorField& s) {
  for (int c = 0; c < s.components(); ++c)
    kernels::parallel::apply_mask(s.component(c), s.grid().retained_mask());
}

SpectralVectorField partial_derivative(const SpectralVectorField& s, int axis) {
  const auto& g = s.grid();
  std::vector<unsigned char> skip(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) skip[i] = g.is_nyquist(i);
  SpectralVectorField out(s.grid_ptr(), s.components());
  for (int c = 0; c < s.components(); ++c)
    kernels::parallel::derivative(s.component(c), g.k_axis(axis), skip, out.component(c));
  return out;
}

int shell_index(const WaveGrid& grid, std::size_t idx) {
  const auto a = grid.wavenumber(idx);
  double a2 = 0.0;
  for (int d = 0; d < grid.dim(); ++d) a2 += static_cast<double>(a[d]) * a[d];
  return static_cast<int>(std::floor(std::sqrt(a2) + 0.5));
}

SpectralVectorField random_solenoidal(GridPtr grid, std::uint64_t seed, double spectrum_slope,
                                      int cutoff_shell) {
  const auto& g = *grid;
  if (cutoff_shell < 1 || cutoff_shell > g.dealias_cutoff())
    throw InvariantViolation("random_solenoidal: cutoff_shell must be in [1, dealias_cutoff]");
  const int dim = g.dim();

  std::vector<std::size_t> count(cutoff_shell + 1, 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int j = shell_index(g, i);
    if (j >= 1 && j <= cutoff_shell) ++count[j];
  }

  SpectralVectorField out(grid);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int j = shell_index(g, i);
    if (j < 1 || j > cutoff_shell) continue;
    const std::size_t partner = g.conjugate_index(i);
    if (partner < i) continue;
    // Shell kinetic energy (1/2) sum |u_k|^2 = j^{2 slope}.
    const double amp = std::sqrt(2.0 * std::pow(j, 2.0 * spectrum_slope) / count[j]);

    std::array<Complex, 3> c{};
    double norm2 = 0.0;
    while (norm2 < 1e-6) {
      for (int d = 0; d < dim; ++d) c[d] = Complex(symmetric_uniform(rng), symmetric_uniform(rng));
      Complex kdotc{};
      for (int d = 0; d < dim; ++d) kdotc += g.k(d, i) * c[d];
      norm2 = 0.0;
      for (int d = 0; d < dim; ++d) {
        c[d] -= g.k(d, i) * kdotc / g.k2(i);
        norm2 += std::norm(c[d]);
      }
    }
    const double scale = amp / std::sqrt(norm2);
    for (int d = 0; d < dim; ++d) {
      out(d, i) = c[d] * scale;
      out(d, partner) = std::conj(out(d, i));
    }
  }
  out.set_solenoidal(true);
  return out;
}

SpectralVectorField taylor_green(GridPtr grid, double amplitude) {
  const auto& g = *grid;
  if (std::abs(g.length() - WaveGrid::kDefaultLength) > 1e-12)
    throw InvariantViolation("taylor_green: needs length 2 pi");
  SpectralVectorField out(grid);
  for (int s0 : {-1, 1}) {
    for (int s1 : {-1, 1}) {
      const std::size_t i = g.index_of({s0, s1, 0});
      out(0, i) = Complex(0.0, -0.25 * s0 * amplitude);
      out(1, i) = Complex(0.0, 0.25 * s1 * amplitude);
    }
  }
  out.set_solenoidal(true);
  return out;
}

}  // namespace leray
