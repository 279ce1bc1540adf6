#include <doctest.h>

#include <cmath>

#include "leray/dynamics.hpp"
#include "leray/errors.hpp"
#include "leray/spectral.hpp"
#include "leray/transform.hpp"
#include "oracles.hpp"

using namespace leray;

namespace {

ModelConfig model(ModelKind kind, double alpha = 0.3, int order = 0, double theta = 0.5) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.nu = 0.01;
  cfg.nu2 = 0.02;
  cfg.filter = {alpha, theta, order};
  return cfg;
}

SimState state_of(SpectralVectorField u) { return SimState{0.0, 0, std::move(u), std::nullopt}; }

double energy_rate(const Tendency& t, const SimState& s) {
  double r = sobolev_inner(t.du, s.u);
  if (t.db) r += sobolev_inner(*t.db, *s.b);
  return r;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("advection matches the explicit convolution") {
  for (int dim : {2, 3}) {
    const auto g = WaveGrid::create(dim, dim == 3 ? 8 : 16);
    const auto w = random_solenoidal(g, 11, -1.0, g->dealias_cutoff());
    const auto v = random_solenoidal(g, 12, -1.0, g->dealias_cutoff());
    for (bool project : {false, true}) {
      const auto fast = advect(w, v, {true, project});
      const auto ref = oracle::convolve(w, v, project);
      CHECK(oracle::l2_diff(fast, ref) <= 1e-13 * (1.0 + oracle::l2(ref)));
    }
  }
}

TEST_CASE("advection is skew-symmetric only when dealiased") {
  const auto g = WaveGrid::create(3, 16);
  RealVectorField r(g, 3);
  for (int c = 0; c < 3; ++c) {
    const auto v = oracle::random_values(g->size(), 40 + c);
    std::copy(v.begin(), v.end(), r.component(c).begin());
  }
  const auto rough = leray_project(forward_transform(r));
  const auto v = random_solenoidal(g, 3, -1.0, g->dealias_cutoff());
  const double scale = sobolev_norm(rough, 1.0) * sobolev_norm(v, 0.0) * sobolev_norm(v, 0.0);
  const double on = sobolev_inner(advect(rough, v), v) / scale;
  CHECK(std::abs(on) < 1e-14);
  const auto rough_v = leray_project(forward_transform(r));
  const double off = sobolev_inner(advect(rough, rough_v, {false, true}), rough_v);
  const double off_scale = sobolev_norm(rough, 1.0) * std::pow(sobolev_norm(rough_v, 0.0), 2);
  CHECK(std::abs(off) / off_scale > 1e-8);
}

TEST_CASE("every model conserves energy in its nonlinear term") {
  const auto g = WaveGrid::create(3, 16);
  const auto u = random_solenoidal(g, 21, -1.0, 5);
  for (auto kind : {ModelKind::NSE, ModelKind::LerayAlpha, ModelKind::LerayDeconv}) {
    const auto cfg = model(kind, 0.3, kind == ModelKind::LerayDeconv ? 3 : 0);
    const auto s = state_of(u);
    const auto t = rhs(s, cfg);
    CHECK(t.du.solenoidal());
    CHECK(std::abs(energy_rate(t, s)) < 1e-14 * sobolev_norm(u, 1.0) * std::pow(sobolev_norm(u, 0.0), 2));
  }
}

TEST_CASE("Taylor-Green is a steady solution of the Euler nonlinearity") {
  const auto g = WaveGrid::create(2, 32);
  const auto tg = taylor_green(g, 1.3);
  for (auto kind : {ModelKind::NSE, ModelKind::LerayAlpha, ModelKind::LerayDeconv}) {
    const auto t = rhs(state_of(tg), model(kind, 0.2, kind == ModelKind::LerayDeconv ? 2 : 0));
    CHECK(oracle::l2(t.du) < 1e-14);
  }
}

TEST_CASE("Taylor-Green pressure") {
  const auto g = WaveGrid::create(2, 32);
  const double amp = 1.3;
  const auto tg = taylor_green(g, amp);
  const double alpha = 0.2, theta = 0.5;
  const double x = oracle::strength(alpha, theta, std::sqrt(2.0));
  for (auto kind : {ModelKind::NSE, ModelKind::LerayAlpha}) {
    const auto p = inverse_transform(pressure_solve(state_of(tg), model(kind, alpha, 0, theta)));
    const double scale = kind == ModelKind::NSE ? 1.0 : 1.0 / (1.0 + x);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto xy = oracle::position(*g, i);
      const double exact = scale * amp * amp * (std::cos(2 * xy[0]) + std::cos(2 * xy[1])) / 4.0;
      err = std::max(err, std::abs(p[i] - exact));
    }
    CHECK(err < 1e-14);
  }
}

TEST_CASE("order zero deconvolution reproduces Leray-alpha") {
  const auto g = WaveGrid::create(3, 16);
  const auto s = state_of(random_solenoidal(g, 5, -1.0, 5));
  const auto a = rhs(s, model(ModelKind::LerayAlpha, 0.4, 0));
  const auto d = rhs(s, model(ModelKind::LerayDeconv, 0.4, 0));
  CHECK(a.du.identical(d.du));
}

TEST_CASE("criticality gate") {
  const auto g = WaveGrid::create(2, 16);
  const auto s = state_of(taylor_green(g));
  auto cfg = model(ModelKind::LerayAlpha, 0.2, 0, 0.2);
  CHECK_THROWS_AS(rhs(s, cfg), CriticalityViolation);
  cfg.unsafe_subcritical = true;
  CHECK_NOTHROW(rhs(s, cfg));
  CHECK_NOTHROW(rhs(s, model(ModelKind::NSE, 0.2, 0, 0.0)));
}

TEST_CASE("model configuration is validated") {
  const auto g = WaveGrid::create(3, 16);
  auto cfg = model(ModelKind::LerayAlpha, 0.2, 2);
  CHECK_THROWS_AS(cfg.validate(*g), InvariantViolation);
  cfg = model(ModelKind::MHDDeconv);
  cfg.nu2 = 0.0;
  CHECK_THROWS_AS(cfg.validate(*g), InvariantViolation);
  cfg = model(ModelKind::NSE);
  cfg.nu = -1.0;
  CHECK_THROWS_AS(cfg.validate(*g), InvariantViolation);
  CHECK(parse_model_kind("mhd-deconv") == ModelKind::MHDDeconv);
  CHECK_FALSE(parse_model_kind("mhd").has_value());
}

TEST_CASE("magnetic model") {
  const auto g = WaveGrid::create(3, 16);
  SimState s = state_of(random_solenoidal(g, 31, -1.0, 5));
  auto cfg = model(ModelKind::MHDDeconv, 0.3, 2);
  CHECK_THROWS_AS(rhs(s, cfg), MissingMagneticField);
  s.b = random_solenoidal(g, 32, -1.0, 5);

  const auto t = rhs(s, cfg);
  REQUIRE(t.db.has_value());
  CHECK(divergence_residual(*t.db) < 1e-14);
  const double scale = (sobolev_norm(s.u, 1.0) + sobolev_norm(*s.b, 1.0)) *
                       std::pow(sobolev_norm(s.u, 0.0) + sobolev_norm(*s.b, 0.0), 2);
  CHECK(std::abs(energy_rate(t, s)) < 1e-14 * scale);

  CHECK(max_abs(inverse_transform(induction_potential(s, cfg))) > 1e-6);
  cfg.filter.alpha = 0.0;
  CHECK(max_abs(inverse_transform(induction_potential(s, cfg))) < 1e-14);
  CHECK_THROWS_AS(induction_potential(s, model(ModelKind::NSE)), InvariantViolation);
}

TEST_CASE("magnetic pressure subtraction") {
  const auto g = WaveGrid::create(2, 32);
  SimState s = state_of(SpectralVectorField(g));
  s.b = taylor_green(g);
  const double alpha = 0.2, theta = 0.5;
  const auto cfg = model(ModelKind::MHDDeconv, alpha, 2, theta);
  const double x = oracle::strength(alpha, theta, std::sqrt(2.0));
  const double h = 1.0 - std::pow(x / (1.0 + x), 3);
  const auto p = inverse_transform(pressure_solve(s, cfg));
  const auto ptot = inverse_transform(total_pressure(s, cfg));
  const auto b = inverse_transform(*s.b);
  double err = 0.0, err_tot = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto xy = oracle::position(*g, i);
    const double tot = -h * (std::cos(2 * xy[0]) + std::cos(2 * xy[1])) / 4.0;
    const double b2 = b.component(0)[i] * b.component(0)[i] + b.component(1)[i] * b.component(1)[i];
    err_tot = std::max(err_tot, std::abs(ptot[i] - tot));
    err = std::max(err, std::abs(p[i] - (tot - b2 / 2.0 + 0.25)));
  }
  CHECK(err_tot < 1e-14);
  CHECK(err < 1e-14);
}

TEST_CASE("forcing") {
  const auto g = WaveGrid::create(3, 16, 3.0);
  ForcingSpec f;
  f.terms.push_back({{1, 0, 0}, {Complex{}, Complex(0.5, 0.1), Complex{}}, 0.0});
  f.terms.push_back({{0, 1, 1}, {Complex(0.5), Complex(0.0, 0.3), Complex(0.0, -0.3)}, 2.0});
  CHECK_NOTHROW(f.validate(*g));

  const double t = 0.3;
  const auto phys = inverse_transform(f.evaluate(g, t));
  const double unit = 2.0 * std::numbers::pi / 3.0;
  double err = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto x = oracle::position(*g, i);
    std::array<double, 3> exact{};
    for (const auto& term : f.terms) {
      double ph = 0.0;
      for (int d = 0; d < 3; ++d) ph += unit * term.wavenumber[d] * x[d];
      const double env = std::exp(-term.decay * t);
      for (int d = 0; d < 3; ++d) exact[d] += 2.0 * env * (term.amplitude[d] * std::polar(1.0, ph)).real();
    }
    for (int d = 0; d < 3; ++d) err = std::max(err, std::abs(phys.component(d)[i] - exact[d]));
  }
  CHECK(err < 1e-14);

  auto bad = f;
  bad.terms[0].amplitude = {Complex(1.0), Complex{}, Complex{}};
  CHECK_THROWS_AS(bad.validate(*g), InvariantViolation);
  bad = f;
  bad.terms[1].wavenumber = {-1, 0, 0};
  bad.terms[1].amplitude = {Complex{}, Complex(1.0), Complex{}};
  CHECK_THROWS_AS(bad.validate(*g), InvariantViolation);
  bad = f;
  bad.terms[0].wavenumber = {9, 0, 0};
  CHECK_THROWS_AS(bad.validate(*g), InvariantViolation);
  bad = f;
  bad.terms[0].wavenumber = {0, 0, 0};
  CHECK_THROWS_AS(bad.validate(*g), InvariantViolation);
  bad = f;
  bad.terms[1].decay = -1.0;
  CHECK_THROWS_AS(bad.validate(*g), InvariantViolation);

  auto cfg = model(ModelKind::MHDDeconv);
  cfg.forcing = f;
  CHECK_THROWS_AS(cfg.validate(*g), InvariantViolation);
}
