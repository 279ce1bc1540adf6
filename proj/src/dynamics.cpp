#include "leray/dynamics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "leray/errors.hpp"
#include "leray/kernels.hpp"
#include "leray/spectral.hpp"
#include "leray/transform.hpp"

namespace leray {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::NSE: return "nse";
    case ModelKind::LerayAlpha: return "leray-alpha";
    case ModelKind::LerayDeconv: return "leray-deconv";
    case ModelKind::MHDDeconv: return "mhd-deconv";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (auto k : {ModelKind::NSE, ModelKind::LerayAlpha, ModelKind::LerayDeconv, ModelKind::MHDDeconv})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Forcing

void ForcingSpec::validate(const WaveGrid& grid) const {
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    const std::string tag = "forcing term " + std::to_string(t + 1);
    bool zero = true;
    for (int d = 0; d < grid.dim(); ++d) {
      if (std::abs(term.wavenumber[d]) > grid.dealias_cutoff())
        throw InvariantViolation(tag + ": wavenumber outside the dealiased band");
      zero = zero && term.wavenumber[d] == 0;
    }
    if (zero) throw InvariantViolation(tag + ": wavenumber must be nonzero");
    if (grid.dim() == 2 && (term.wavenumber[2] != 0 || term.amplitude[2] != Complex{}))
      throw InvariantViolation(tag + ": third component must vanish in 2D");
    Complex kdotf{};
    double fnorm = 0.0;
    double knorm = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      kdotf += static_cast<double>(term.wavenumber[d]) * term.amplitude[d];
      fnorm += std::norm(term.amplitude[d]);
      knorm += static_cast<double>(term.wavenumber[d]) * term.wavenumber[d];
    }
    if (std::abs(kdotf) > 1e-12 * std::sqrt(fnorm * knorm))
      throw InvariantViolation(tag + ": amplitude must be orthogonal to its wavevector");
    if (!(term.decay >= 0.0)) throw InvariantViolation(tag + ": decay must be >= 0");
    for (std::size_t o = 0; o < t; ++o) {
      bool same = true;
      bool opposite = true;
      for (int d = 0; d < 3; ++d) {
        same = same && terms[o].wavenumber[d] == term.wavenumber[d];
        opposite = opposite && terms[o].wavenumber[d] == -term.wavenumber[d];
      }
      if (same || opposite)
        throw InvariantViolation(tag + ": duplicates the wavevector (or its conjugate) of term " +
                                 std::to_string(o + 1));
    }
  }
}

SpectralVectorField ForcingSpec::evaluate(const GridPtr& grid, double t) const {
  SpectralVectorField f(grid);
  for (const auto& term : terms) {
    const std::size_t i = grid->index_of(term.wavenumber);
    const std::size_t j = grid->conjugate_index(i);
    const double envelope = term.decay == 0.0 ? 1.0 : std::exp(-term.decay * t);
    for (int d = 0; d < grid->dim(); ++d) {
      f(d, i) += term.amplitude[d] * envelope;
      f(d, j) += std::conj(term.amplitude[d] * envelope);
    }
  }
  f.set_solenoidal(true);
  return f;
}

// ---------------------------------------------------------------------------
// Model configuration

void check_criticality(const ModelConfig& cfg) {
  if (cfg.kind == ModelKind::NSE || cfg.unsafe_subcritical) return;
  if (cfg.filter.theta < kCriticalTheta) {
    std::ostringstream msg;
    msg << "theta = " << cfg.filter.theta << " is below the critical value 1/4 for "
        << to_string(cfg.kind) << " (set unsafe_subcritical to override)";
    throw CriticalityViolation(msg.str());
  }
}

void ModelConfig::validate(const WaveGrid& grid) const {
  if (!(nu > 0.0)) throw InvariantViolation("nu must be > 0");
  filter.validate();
  if (kind == ModelKind::MHDDeconv) {
    if (!(nu2 > 0.0)) throw InvariantViolation("nu2 must be > 0 for mhd-deconv");
    if (!forcing.is_zero()) throw InvariantViolation("forcing: mhd-deconv is integrated unforced");
  }
  if (kind == ModelKind::LerayAlpha && filter.n_deconv != 0)
    throw InvariantViolation("order: leray-alpha is the N = 0 model; use leray-deconv");
  forcing.validate(grid);
}

// ---------------------------------------------------------------------------
// Pseudo-spectral products

namespace {

RealVectorField physical_gradient(const SpectralVectorField& v) {
  const auto& g = v.grid();
  const int dim = g.dim();
  SpectralVectorField grad(v.grid_ptr(), dim * dim);
  std::vector<unsigned char> skip(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) skip[i] = g.is_nyquist(i);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      kernels::parallel::derivative(v.component(i), g.k_axis(j), skip, grad.component(i * dim + j));
  return inverse_transform(grad);
}

// out = (w . grad) v in physical space, accumulated with sign.
void accumulate_product(const RealVectorField& w, const RealVectorField& grad_v, double sign,
                        RealVectorField& out) {
  const int dim = w.grid().dim();
  RealVectorField tmp(w.grid_ptr(), dim);
  std::array<kernels::ConstRealSpan, 3> ws{};
  std::array<kernels::ConstRealSpan, 9> gs{};
  std::array<kernels::RealSpan, 3> os{};
  for (int i = 0; i < dim; ++i) {
    ws[i] = w.component(i);
    os[i] = tmp.component(i);
  }
  for (int i = 0; i < dim * dim; ++i) gs[i] = grad_v.component(i);
  kernels::parallel::convective_product(dim, std::span(ws.data(), dim), std::span(gs.data(), dim * dim),
                                        std::span(os.data(), dim));
  for (int i = 0; i < dim; ++i) {
    auto dst = out.component(i);
    auto src = tmp.component(i);
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += sign * src[p];
  }
}

SpectralVectorField band_limited(const SpectralVectorField& s) {
  auto out = s;
  dealias(out);
  out.set_solenoidal(s.solenoidal());
  return out;
}

SpectralVectorField to_spectral(const RealVectorField& r, bool mask) {
  auto s = forward_transform(r);
  if (mask) dealias(s);
  return s;
}

// Unprojected nonlinear terms N_u (and N_b for MHD), dealiased:
//   N_u = (a_u . grad) u - (a_b . grad) b,  N_b = (a_u . grad) b - (a_b . grad) u.
struct Nonlinear {
  SpectralVectorField nu;
  std::optional<SpectralVectorField> nb;
};

Nonlinear nonlinear_terms(const SimState& state, const ModelConfig& cfg) {
  const auto u = band_limited(state.u);
  const auto a_u = inverse_transform(advecting_field(u, cfg));
  const auto grad_u = physical_gradient(u);
  RealVectorField n_u(u.grid_ptr(), u.components());
  accumulate_product(a_u, grad_u, 1.0, n_u);
  if (cfg.kind != ModelKind::MHDDeconv) return {to_spectral(n_u, true), std::nullopt};

  if (!state.b) throw MissingMagneticField("mhd-deconv state has no magnetic field");
  require_same_grid(u.grid(), state.b->grid(), "rhs");
  const auto b = band_limited(*state.b);
  const auto a_b = inverse_transform(deconvolve(b, cfg.filter));
  const auto grad_b = physical_gradient(b);
  RealVectorField n_b(u.grid_ptr(), u.components());
  accumulate_product(a_b, grad_b, -1.0, n_u);
  accumulate_product(a_u, grad_b, 1.0, n_b);
  accumulate_product(a_b, grad_u, -1.0, n_b);
  return {to_spectral(n_u, true), to_spectral(n_b, true)};
}

SpectralScalarField pressure_from(const SpectralVectorField& n) {
  // -Delta p = div N  =>  |k|^2 p_k = i k . N_k
  const auto& g = n.grid();
  SpectralScalarField p(n.grid_ptr());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.k2(i) == 0.0) continue;
    Complex kdotn{};
    for (int d = 0; d < g.dim(); ++d) kdotn += g.k(d, i) * n(d, i);
    p[i] = Complex(0.0, 1.0) * kdotn / g.k2(i);
  }
  return p;
}

}  // namespace

SpectralVectorField advect(const SpectralVectorField& w, const SpectralVectorField& v,
                           AdvectOptions opts) {
  require_same_grid(w.grid(), v.grid(), "advect");
  const auto w_phys = inverse_transform(opts.dealias ? band_limited(w) : w);
  const auto grad_v = physical_gradient(opts.dealias ? band_limited(v) : v);
  RealVectorField prod(v.grid_ptr(), v.components());
  accumulate_product(w_phys, grad_v, 1.0, prod);
  auto out = to_spectral(prod, opts.dealias);
  return opts.project ? leray_project(out) : out;
}

SpectralVectorField advecting_field(const SpectralVectorField& u, const ModelConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::NSE: return u;
    case ModelKind::LerayAlpha: return filter_apply(u, cfg.filter);
    case ModelKind::LerayDeconv:
    case ModelKind::MHDDeconv: return deconvolve(u, cfg.filter);
  }
  return u;
}

Tendency rhs(const SimState& state, const ModelConfig& cfg) {
  check_criticality(cfg);
  auto n = nonlinear_terms(state, cfg);
  Tendency out{leray_project(n.nu), std::nullopt};
  out.du *= -1.0;
  if (!cfg.forcing.is_zero()) out.du += cfg.forcing.evaluate(state.u.grid_ptr(), state.t);
  out.du.set_solenoidal(true);
  if (n.nb) {
    out.db = leray_project(*n.nb);
    *out.db *= -1.0;
  }
  return out;
}

SpectralScalarField total_pressure(const SimState& state, const ModelConfig& cfg) {
  return pressure_from(nonlinear_terms(state, cfg).nu);
}

SpectralScalarField induction_potential(const SimState& state, const ModelConfig& cfg) {
  if (cfg.kind != ModelKind::MHDDeconv)
    throw InvariantViolation("induction_potential: only defined for mhd-deconv");
  return pressure_from(*nonlinear_terms(state, cfg).nb);
}

SpectralScalarField pressure_solve(const SimState& state, const ModelConfig& cfg) {
  auto p = total_pressure(state, cfg);
  if (cfg.kind != ModelKind::MHDDeconv) return p;
  const auto b = inverse_transform(*state.b);
  std::vector<double> b2(b.grid().size(), 0.0);
  for (int c = 0; c < b.components(); ++c) {
    const auto bc = b.component(c);
    for (std::size_t i = 0; i < b2.size(); ++i) b2[i] += bc[i] * bc[i];
  }
  const auto b2_hat = forward_transform(state.b->grid_ptr(), b2);
  const auto& g = state.b->grid();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.retained(i) && g.k2(i) != 0.0) p[i] -= 0.5 * b2_hat[i];
  return p;
}

}  // namespace leray
