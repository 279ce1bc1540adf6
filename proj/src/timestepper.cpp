#include "leray/timestepper.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "leray/errors.hpp"
#include "leray/kernels.hpp"
#include "leray/spectral.hpp"
#include "leray/transform.hpp"

namespace leray {

void StepperConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvariantViolation("dt must be > 0");
  if (!(t_end >= dt)) throw InvariantViolation("t_end must be >= dt");
  if (sample_every < 1) throw InvariantViolation("sample_every must be >= 1");
  if (!(cfl_limit > 0.0)) throw InvariantViolation("cfl_limit must be > 0");
}

std::uint64_t StepperConfig::total_steps() const {
  return static_cast<std::uint64_t>(std::llround(t_end / dt));
}

double cfl_number(const SimState& state, double dt) {
  const auto u = inverse_transform(state.u);
  std::array<kernels::ConstRealSpan, 3> comps{};
  for (int c = 0; c < u.components(); ++c) comps[c] = u.component(c);
  const double umax = kernels::parallel::max_magnitude(std::span(comps.data(), u.components()));
  return umax * dt / u.grid().spacing();
}

namespace {

// e^{-nu |k|^2 h} per mode.
std::vector<double> decay_factors(const WaveGrid& g, double nu, double h) {
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::exp(-nu * g.k2(i) * h);
  return f;
}

SpectralVectorField scaled(const SpectralVectorField& s, const std::vector<double>& f) {
  SpectralVectorField out(s.grid_ptr(), s.components());
  for (int c = 0; c < s.components(); ++c) kernels::parallel::scale(s.component(c), f, out.component(c));
  out.set_solenoidal(s.solenoidal());
  return out;
}

// Integrating-factor operators for u (and b).
struct Propagator {
  std::vector<double> full_u, half_u, full_b, half_b;
};

struct Fields {
  SpectralVectorField u;
  std::optional<SpectralVectorField> b;
};

Fields combine(const Fields& base, double h, const Tendency& k) {
  Fields out = base;
  out.u.axpy(h, k.du);
  if (out.b) out.b->axpy(h, *k.db);
  return out;
}

Fields propagate(const Fields& f, const std::vector<double>& eu, const std::vector<double>& eb) {
  Fields out{scaled(f.u, eu), std::nullopt};
  if (f.b) out.b = scaled(*f.b, eb);
  return out;
}

Tendency propagate(const Tendency& k, const std::vector<double>& eu, const std::vector<double>& eb) {
  Tendency out{scaled(k.du, eu), std::nullopt};
  if (k.db) out.db = scaled(*k.db, eb);
  return out;
}

Tendency eval(const Fields& f, double t, std::uint64_t step_index, const ModelConfig& cfg) {
  return rhs(SimState{t, step_index, f.u, f.b}, cfg);
}

bool all_finite(const SpectralVectorField& s) {
  for (int c = 0; c < s.components(); ++c)
    for (const auto& v : s.component(c))
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

SimState step(const SimState& state, const ModelConfig& cfg, const StepperConfig& sc) {
  const auto& g = state.u.grid();
  const double h = sc.dt;
  const double t = static_cast<double>(state.step) * h;
  const bool mhd = cfg.kind == ModelKind::MHDDeconv;
  if (mhd && !state.b) throw MissingMagneticField("mhd-deconv state has no magnetic field");

  const auto eu = decay_factors(g, cfg.nu, h);
  const auto eb = mhd ? decay_factors(g, cfg.nu2, h) : std::vector<double>{};
  Fields y0{state.u, mhd ? state.b : std::nullopt};

  Fields y1 = [&] {
    if (sc.scheme == Scheme::IFEuler) {
      const auto k1 = eval(y0, t, state.step, cfg);
      return propagate(combine(y0, h, k1), eu, eb);
    }
    // Lawson IF-RK4: v = e^{nu k^2 (t - t_n)} u satisfies v' = e^{...} N.
    const auto eu2 = decay_factors(g, cfg.nu, 0.5 * h);
    const auto eb2 = mhd ? decay_factors(g, cfg.nu2, 0.5 * h) : std::vector<double>{};
    const auto k1 = eval(y0, t, state.step, cfg);
    const auto y0_half = propagate(y0, eu2, eb2);
    const auto k2 = eval(propagate(combine(y0, 0.5 * h, k1), eu2, eb2), t + 0.5 * h, state.step, cfg);
    const auto k3 = eval(combine(y0_half, 0.5 * h, k2), t + 0.5 * h, state.step, cfg);
    const auto k4 = eval(combine(propagate(y0, eu, eb), h, propagate(k3, eu2, eb2)), t + h,
                         state.step, cfg);
    // y1 = E y0 + h/6 (E k1 + 2 E_half (k2 + k3) + k4)
    Fields acc = propagate(y0, eu, eb);
    acc = combine(acc, h / 6.0, propagate(k1, eu, eb));
    acc = combine(acc, h / 3.0, propagate(k2, eu2, eb2));
    acc = combine(acc, h / 3.0, propagate(k3, eu2, eb2));
    acc = combine(acc, h / 6.0, k4);
    return acc;
  }();

  y1.u.set_solenoidal(true);
  if (y1.b) y1.b->set_solenoidal(true);
  if (!all_finite(y1.u) || (y1.b && !all_finite(*y1.b))) {
    std::ostringstream msg;
    msg << "non-finite field after step to t = " << t + h;
    throw NonFinite(msg.str());
  }
  SimState out{static_cast<double>(state.step + 1) * h, state.step + 1, std::move(y1.u),
               std::move(y1.b)};
  return out;
}

SimState run(SimState initial, const ModelConfig& cfg, const StepperConfig& sc, const RunHooks& hooks) {
  sc.validate();
  cfg.validate(initial.u.grid());
  check_criticality(cfg);
  const std::uint64_t total = sc.total_steps();
  SimState state = std::move(initial);
  state.t = static_cast<double>(state.step) * sc.dt;
  if (hooks.sample) hooks.sample(state);
  while (state.step < total) {
    try {
      if (hooks.warning) {
        const double cfl = cfl_number(state, sc.dt);
        if (cfl > sc.cfl_limit) {
          std::ostringstream msg;
          msg << "CFL number " << cfl << " exceeds limit " << sc.cfl_limit << " at t = " << state.t;
          hooks.warning(msg.str());
        }
      }
      state = step(state, cfg, sc);
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError(e.what(), state.t, e.exit_code());
    }
    const bool last = state.step == total;
    if (hooks.sample && (state.step % static_cast<std::uint64_t>(sc.sample_every) == 0 || last))
      hooks.sample(state);
    if (hooks.checkpoint && hooks.checkpoint_every > 0 && state.step % hooks.checkpoint_every == 0)
      hooks.checkpoint(state);
  }
  return state;
}

}  // namespace leray
