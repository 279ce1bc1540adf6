#include "leray/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "leray/errors.hpp"
#include "leray/kernels.hpp"
#include "leray/spectral.hpp"
#include "leray/transform.hpp"

namespace leray {

namespace {
constexpr double kTiny = 1e-300;
}

EnergyRecord measure(const SimState& state, const ModelConfig& cfg) {
  EnergyRecord r;
  r.t = state.t;
  const double l2 = sobolev_norm(state.u, 0.0);
  const double h1 = sobolev_norm(state.u, 1.0);
  const double hh = sobolev_norm(state.u, 0.5);
  r.e_kin = 0.5 * l2 * l2;
  r.grad_u = h1 * h1;
  r.h_half = hh * hh;
  r.div_residual = divergence_residual(state.u);
  if (state.b) {
    const double bl2 = sobolev_norm(*state.b, 0.0);
    const double bh1 = sobolev_norm(*state.b, 1.0);
    r.e_mag = 0.5 * bl2 * bl2;
    r.grad_b = bh1 * bh1;
    r.div_residual = std::max(r.div_residual, divergence_residual(*state.b));
  }
  if (!cfg.forcing.is_zero())
    r.inject = sobolev_inner(cfg.forcing.evaluate(state.u.grid_ptr(), state.t), state.u, 0.0);
  return r;
}

double energy_budget_residual(std::span<const EnergyRecord> s, const ModelConfig& cfg) {
  if (s.size() < 3) throw TooFewSamples("energy_budget_residual: need at least 3 samples");
  const double h = s[1].t - s[0].t;
  if (!(h > 0.0)) throw InvariantViolation("energy_budget_residual: times must increase");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs((s[i].t - s[i - 1].t) - h) > 1e-9 * h)
      throw InvariantViolation("energy_budget_residual: samples must be uniformly spaced");

  const bool mhd = cfg.kind == ModelKind::MHDDeconv;
  auto energy = [&](const EnergyRecord& r) { return mhd ? r.e_kin + r.e_mag : r.e_kin; };
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double dedt = (energy(s[i + 1]) - energy(s[i - 1])) / (s[i + 1].t - s[i - 1].t);
    const double diss = cfg.nu * s[i].grad_u + (mhd ? cfg.nu2 * s[i].grad_b : 0.0);
    const double inject = mhd ? 0.0 : s[i].inject;
    worst = std::max(worst, std::abs(dedt + diss - inject) / std::max(diss, kTiny));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Local energy balance

double BumpTestFunction::time_profile(double t) const {
  if (t < t0 || t > t1) return 0.0;
  return std::pow(std::sin(std::numbers::pi * (t - t0) / (t1 - t0)), 3);
}

double BumpTestFunction::time_derivative(double t) const {
  if (t < t0 || t > t1) return 0.0;
  const double w = std::numbers::pi / (t1 - t0);
  const double sn = std::sin(w * (t - t0));
  return 3.0 * w * sn * sn * std::cos(w * (t - t0));
}

SpectralScalarField BumpTestFunction::spatial(const GridPtr& grid) const {
  const auto& g = *grid;
  SpectralScalarField out(grid);
  // Fourier coefficients of the periodized Gaussian exp(-y^2 / (2 width^2)).
  const double norm = width * std::sqrt(2.0 * std::numbers::pi) / g.length();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_nyquist(i)) continue;
    Complex c = 1.0;
    for (int d = 0; d < g.dim(); ++d) {
      const double k = g.k(d, i);
      c *= norm * std::exp(-0.5 * k * k * width * width) * std::polar(1.0, -k * center[d]);
    }
    out[i] = c;
  }
  return out;
}

namespace {


std::vector<std::vector<double>> to_physical(const SpectralVectorField& s) {
  const auto r = inverse_transform(s);
  std::vector<std::vector<double>> out(r.components());
  for (int c = 0; c < r.components(); ++c) out[c].assign(r.component(c).begin(), r.component(c).end());
  return out;
}

std::vector<std::vector<double>> gradient_physical(const SpectralScalarField& s) {
  const auto& g = s.grid();
  std::vector<std::vector<double>> out;
  for (int d = 0; d < g.dim(); ++d) {
    SpectralScalarField ds(s.grid_ptr());
    for (std::size_t i = 0; i < g.size(); ++i)
      ds[i] = g.is_nyquist(i) ? Complex{} : Complex(0.0, g.k(d, i)) * s[i];
    out.push_back(inverse_transform(ds));
  }
  return out;
}

// sum_j |grad v_j|^2 pointwise
std::vector<double> gradient_energy(const SpectralVectorField& v) {
  const auto& g = v.grid();
  std::vector<double> out(g.size(), 0.0);
  for (int d = 0; d < g.dim(); ++d) {
    const auto dv = to_physical(partial_derivative(v, d));
    for (const auto& c : dv)
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += c[p] * c[p];
  }
  return out;
}

std::vector<double> dot_pointwise(const std::vector<std::vector<double>>& a,
                                  const std::vector<std::vector<double>>& b) {
  std::vector<double> out(a[0].size(), 0.0);
  for (std::size_t c = 0; c < a.size(); ++c)
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += a[c][p] * b[c][p];
  return out;
}

double mean(std::span<const double> a, std::span<const double> b) {
  return kernels::parallel::dot(a, b) / static_cast<double>(a.size());
}

struct Integrands {
  double lhs = 0.0;
  double rhs = 0.0;
};

}  // namespace

LocalEnergyBalance local_energy_residual(std::span<const SimState> checkpoints,
                                         std::span<const SpectralScalarField> pressures,
                                         const BumpTestFunction& phi, const ModelConfig& cfg) {
  if (checkpoints.size() != pressures.size())
    throw InvariantViolation("local_energy_residual: one pressure per checkpoint required");
  if (checkpoints.size() < 2) throw TooFewSamples("local_energy_residual: need >= 2 checkpoints");
  if (!(phi.t1 > phi.t0) || !(phi.width > 0.0))
    throw InvariantViolation("local_energy_residual: invalid test function");
  const bool mhd = cfg.kind == ModelKind::MHDDeconv;

  const double h = checkpoints[1].t - checkpoints[0].t;
  const double tol = 1e-9 * h;
  std::size_t first = checkpoints.size();
  std::size_t last = checkpoints.size();
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (i > 0 && std::abs(checkpoints[i].t - checkpoints[i - 1].t - h) > tol)
      throw InvariantViolation("local_energy_residual: checkpoints must be uniformly spaced");
    if (std::abs(checkpoints[i].t - phi.t0) <= tol) first = i;
    if (std::abs(checkpoints[i].t - phi.t1) <= tol) last = i;
  }
  if (first == checkpoints.size() || last == checkpoints.size())
    throw InvariantViolation("local_energy_residual: phi.t0 and phi.t1 must be checkpoint times");

  const auto grid = checkpoints[first].u.grid_ptr();
  const auto g_hat = phi.spatial(grid);
  const auto g = inverse_transform(g_hat);
  const auto grad_g = gradient_physical(g_hat);
  SpectralScalarField lap_hat(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) lap_hat[i] = -grid->k2(i) * g_hat[i];
  const auto lap_g = inverse_transform(lap_hat);

  auto integrands = [&](std::size_t i) {
    const auto& st = checkpoints[i];
    const double w = phi.time_profile(st.t);
    const double wt = phi.time_derivative(st.t);
    const auto u = to_physical(st.u);
    const auto a_u = to_physical(advecting_field(st.u, cfg));
    const auto p = inverse_transform(pressures[i]);
    const auto u2 = dot_pointwise(u, u);
    const auto grad_u2 = gradient_energy(st.u);

    Integrands out;
    out.lhs = 2.0 * cfg.nu * w * mean(grad_u2, g);
    // |u|^2 (phi_t + nu Lap phi)
    out.rhs = wt * mean(u2, g) + cfg.nu * w * mean(u2, lap_g);
    // flux term: (e a_u + 2 p u + ...) . grad phi
    std::vector<double> energy = u2;
    if (mhd) {
      const auto b = to_physical(*st.b);
      const auto b2 = dot_pointwise(b, b);
      const auto grad_b2 = gradient_energy(*st.b);
      const auto a_b = to_physical(deconvolve(*st.b, cfg.filter));
      const auto q = inverse_transform(induction_potential(st, cfg));
      const auto ub = dot_pointwise(u, b);
      out.lhs += 2.0 * cfg.nu2 * w * mean(grad_b2, g);
      out.rhs += wt * mean(b2, g) + cfg.nu2 * w * mean(b2, lap_g);
      for (std::size_t k = 0; k < energy.size(); ++k) energy[k] += b2[k];
      for (int d = 0; d < grid->dim(); ++d) {
        std::vector<double> f(u2.size());
        for (std::size_t k = 0; k < f.size(); ++k)
          f[k] = 2.0 * q[k] * b[d][k] - 2.0 * ub[k] * a_b[d][k];
        out.rhs += w * mean(f, grad_g[d]);
      }
    }
    for (int d = 0; d < grid->dim(); ++d) {
      std::vector<double> f(u2.size());
      for (std::size_t k = 0; k < f.size(); ++k) f[k] = energy[k] * a_u[d][k] + 2.0 * p[k] * u[d][k];
      out.rhs += w * mean(f, grad_g[d]);
    }
    if (!cfg.forcing.is_zero()) {
      const auto f = to_physical(cfg.forcing.evaluate(grid, st.t));
      out.rhs += 2.0 * w * mean(dot_pointwise(f, u), g);
    }
    return out;
  };

  LocalEnergyBalance bal;
  for (std::size_t i = first; i <= last; ++i) {
    const double weight = (i == first || i == last) ? 0.5 * h : h;
    const auto v = integrands(i);
    bal.lhs += weight * v.lhs;
    bal.rhs += weight * v.rhs;
  }
  bal.residual = (bal.lhs - bal.rhs) / std::max(std::abs(bal.lhs), kTiny);
  return bal;
}

LocalEnergyBalance local_energy_residual(std::span<const SimState> checkpoints,
                                         const BumpTestFunction& phi, const ModelConfig& cfg) {
  std::vector<SpectralScalarField> p;
  p.reserve(checkpoints.size());
  for (const auto& s : checkpoints) p.push_back(total_pressure(s, cfg));
  return local_energy_residual(checkpoints, p, phi, cfg);
}

// ---------------------------------------------------------------------------
// Sweeps

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

namespace {

void require_non_increasing(const std::vector<double>& errors, const char* what) {
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] > errors[i - 1] * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << what << ": error increases at point " << i << " (" << errors[i - 1] << " -> "
          << errors[i] << ")";
      throw NonMonotone(msg.str());
    }
  }
}

}  // namespace

SweepReport alpha_sweep(const SpectralVectorField& u_ref, const FilterParams& p,
                        std::span<const double> alphas, double s_norm,
                        std::optional<double> target, double tolerance) {
  p.validate();
  if (alphas.size() < 3) throw InvariantViolation("alpha_sweep: need at least 3 alpha values");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0.0)) throw InvariantViolation("alpha_sweep: alphas must be >= 0");
    if (i > 0 && !(alphas[i] < alphas[i - 1]))
      throw InvariantViolation("alpha_sweep: alphas must be strictly decreasing");
  }
  SweepReport r;
  r.target = target.value_or(2.0 * p.theta);
  r.tolerance = tolerance;
  std::vector<double> lx, ly;
  for (double a : alphas) {
    FilterParams q = p;
    q.alpha = a;
    auto diff = filter_apply(u_ref, q);
    diff -= u_ref;
    const double e = sobolev_norm(diff, s_norm);
    r.parameters.push_back(a);
    r.errors.push_back(e);
    if (a > 0.0 && e > 0.0) {
      lx.push_back(std::log(a));
      ly.push_back(std::log(e));
    }
  }
  require_non_increasing(r.errors, "alpha_sweep");
  r.fit_points = static_cast<int>(lx.size());
  r.exact = std::all_of(r.errors.begin(), r.errors.end(), [](double e) { return e == 0.0; });
  if (r.exact) {
    r.pass = true;
  } else if (lx.size() >= 2) {
    r.fitted = least_squares_slope(lx, ly);
    r.pass = std::abs(r.fitted - r.target) <= tolerance;
  }
  return r;
}

SweepReport n_sweep(const SpectralVectorField& u_ref, const FilterParams& p,
                    std::span<const int> n_values, double s_norm, double tolerance) {
  p.validate();
  if (n_values.size() < 2) throw InvariantViolation("n_sweep: need at least 2 orders");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 0) throw InvariantViolation("n_sweep: orders must be >= 0");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw InvariantViolation("n_sweep: orders must be increasing");
  }
  const auto& g = u_ref.grid();
  double x_max = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool present = false;
    for (int c = 0; c < u_ref.components(); ++c) present = present || u_ref(c, i) != Complex{};
    if (present) x_max = std::max(x_max, filter_strength(g.k_mag(i), p));
  }

  SweepReport r;
  r.target = x_max / (1.0 + x_max);
  r.tolerance = tolerance;
  const double floor = 1e-12 * sobolev_norm(u_ref, s_norm);
  std::vector<double> lx, ly;
  for (int n : n_values) {
    FilterParams q = p;
    q.n_deconv = n;
    auto diff = deconvolve(u_ref, q);
    diff -= u_ref;
    const double e = sobolev_norm(diff, s_norm);
    r.parameters.push_back(n);
    r.errors.push_back(e);
    if (e > floor) {
      lx.push_back(n);
      ly.push_back(std::log(e));
    }
  }
  require_non_increasing(r.errors, "n_sweep");
  r.fit_points = static_cast<int>(lx.size());
  r.exact = std::all_of(r.errors.begin(), r.errors.end(), [floor](double e) { return e <= floor; });
  if (r.exact) {
    r.pass = true;
  } else if (lx.size() >= 2) {
    r.fitted = std::exp(least_squares_slope(lx, ly));
    r.pass = r.fitted <= r.target + tolerance;
  }
  return r;
}

std::vector<std::pair<int, double>> shell_spectrum(const SpectralVectorField& u) {
  const auto& g = u.grid();
  int max_shell = 0;
  for (std::size_t i = 0; i < g.size(); ++i) max_shell = std::max(max_shell, shell_index(g, i));
  std::vector<std::pair<int, double>> out(max_shell + 1);
  for (int j = 0; j <= max_shell; ++j) out[j] = {j, 0.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    double e = 0.0;
    for (int c = 0; c < u.components(); ++c) e += std::norm(u(c, i));
    out[shell_index(g, i)].second += 0.5 * e;
  }
  return out;
}

}  // namespace leray
