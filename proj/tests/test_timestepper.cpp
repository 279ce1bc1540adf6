#include <doctest.h>

#include <cmath>
#include <limits>

#include "leray/errors.hpp"
#include "leray/spectral.hpp"
#include "leray/timestepper.hpp"
#include "oracles.hpp"

using namespace leray;

namespace {

ModelConfig nse(double nu) {
  ModelConfig cfg;
  cfg.nu = nu;
  return cfg;
}

SimState initial(SpectralVectorField u) { return SimState{0.0, 0, std::move(u), std::nullopt}; }

SpectralVectorField integrate(const SpectralVectorField& u0, const ModelConfig& cfg, double dt,
                              double t_end, Scheme scheme) {
  StepperConfig sc;
  sc.dt = dt;
  sc.t_end = t_end;
  sc.scheme = scheme;
  return run(initial(u0), cfg, sc).u;
}

}  // namespace

TEST_CASE("Taylor-Green decays at the viscous rate") {
  const auto g = WaveGrid::create(2, 32);
  const double nu = 0.05, t_end = 0.5;
  for (auto scheme : {Scheme::IFRK4, Scheme::IFEuler}) {
    const auto u = integrate(taylor_green(g), nse(nu), 0.01, t_end, scheme);
    auto exact = taylor_green(g, std::exp(-2.0 * nu * t_end));
    CHECK(oracle::l2_diff(u, exact) < 1e-13);
  }
}

TEST_CASE("temporal order of the schemes") {
  const auto g = WaveGrid::create(2, 16);
  auto u0 = random_solenoidal(g, 9, -1.0, 5);
  u0 *= 3.0;
  const auto cfg = nse(0.02);
  const double t_end = 0.2;
  const auto ref = integrate(u0, cfg, 0.00125, t_end, Scheme::IFRK4);

  const double r4 = oracle::l2_diff(integrate(u0, cfg, 0.02, t_end, Scheme::IFRK4), ref) /
                    oracle::l2_diff(integrate(u0, cfg, 0.01, t_end, Scheme::IFRK4), ref);
  CHECK(r4 == doctest::Approx(16.0).epsilon(0.2));

  const auto ref1 = integrate(u0, cfg, 0.0003125, t_end, Scheme::IFRK4);
  const double r1 = oracle::l2_diff(integrate(u0, cfg, 0.01, t_end, Scheme::IFEuler), ref1) /
                    oracle::l2_diff(integrate(u0, cfg, 0.005, t_end, Scheme::IFEuler), ref1);
  CHECK(r1 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("sampling, checkpoint cadence and time bookkeeping") {
  const auto g = WaveGrid::create(2, 16);
  StepperConfig sc;
  sc.dt = 1e-3;
  sc.t_end = 0.01;
  std::vector<double> times;
  std::vector<std::uint64_t> ckpts;
  RunHooks hooks;
  hooks.sample = [&](const SimState& s) { times.push_back(s.t); };
  hooks.checkpoint = [&](const SimState& s) { ckpts.push_back(s.step); };
  hooks.checkpoint_every = 4;
  const auto end = run(initial(taylor_green(g)), nse(0.01), sc, hooks);
  CHECK(times.size() == 11);
  CHECK(times.front() == 0.0);
  CHECK(end.step == 10);
  CHECK(end.t == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(ckpts == std::vector<std::uint64_t>{4, 8});

  times.clear();
  sc.sample_every = 3;
  run(initial(taylor_green(g)), nse(0.01), sc, hooks);
  CHECK(times.size() == 5);  // 0, 3, 6, 9, 10
}

TEST_CASE("resuming from a mid-run state is bit-identical") {
  const auto g = WaveGrid::create(2, 16);
  const auto cfg = nse(0.02);
  StepperConfig sc;
  sc.dt = 0.01;
  sc.t_end = 0.1;
  std::optional<SimState> mid;
  RunHooks hooks;
  hooks.checkpoint = [&](const SimState& s) {
    if (s.step == 4) mid = s;
  };
  hooks.checkpoint_every = 4;
  const auto full = run(initial(random_solenoidal(g, 4, -1.0, 5)), cfg, sc, hooks);
  REQUIRE(mid.has_value());
  const auto resumed = run(*mid, cfg, sc);
  CHECK(resumed.u.identical(full.u));
}

TEST_CASE("non-finite fields abort the run with the failing time") {
  const auto g = WaveGrid::create(2, 16);
  auto u = taylor_green(g);
  u(0, g->index_of({1, 1, 0})) = std::numeric_limits<double>::quiet_NaN();
  StepperConfig sc;
  sc.dt = 0.01;
  sc.t_end = 0.05;
  CHECK_THROWS_AS(step(initial(u), nse(0.01), sc), NonFinite);
  try {
    run(initial(u), nse(0.01), sc);
    FAIL("expected StepError");
  } catch (const StepError& e) {
    CHECK(e.exit_code() == 15);
    CHECK(e.time() == 0.0);
  }
}

TEST_CASE("CFL warning") {
  const auto g = WaveGrid::create(2, 16);
  StepperConfig sc;
  sc.dt = 0.01;
  sc.t_end = 0.02;
  sc.cfl_limit = 0.01;
  std::vector<std::string> warnings;
  RunHooks hooks;
  hooks.warning = [&](const std::string& w) { warnings.push_back(w); };
  run(initial(taylor_green(g)), nse(0.01), sc, hooks);
  REQUIRE(warnings.size() == 2);
  CHECK(warnings[0].find("CFL") != std::string::npos);
  CHECK(cfl_number(initial(taylor_green(g)), 0.01) == doctest::Approx(0.01 / g->spacing()).epsilon(1e-12));
}

TEST_CASE("unforced kinetic energy never grows") {
  const auto g = WaveGrid::create(3, 16);
  ModelConfig cfg;
  cfg.kind = ModelKind::LerayDeconv;
  cfg.nu = 0.02;
  cfg.filter = {0.2, 0.5, 2};
  StepperConfig sc;
  sc.dt = 0.01;
  sc.t_end = 0.2;
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true;
  RunHooks hooks;
  hooks.sample = [&](const SimState& s) {
    const double e = sobolev_norm(s.u, 0.0);
    monotone = monotone && e <= prev;
    prev = e;
  };
  run(initial(random_solenoidal(g, 8, -1.0, 5)), cfg, sc, hooks);
  CHECK(monotone);
}

TEST_CASE("stepper configuration is validated") {
  StepperConfig sc;
  sc.dt = 0.0;
  CHECK_THROWS_AS(sc.validate(), InvariantViolation);
  sc = {};
  sc.t_end = sc.dt / 2;
  CHECK_THROWS_AS(sc.validate(), InvariantViolation);
  sc = {};
  sc.sample_every = 0;
  CHECK_THROWS_AS(sc.validate(), InvariantViolation);
  sc = {};
  sc.dt = 0.1;
  sc.t_end = 0.30000000000000004;
  CHECK(sc.total_steps() == 3);
}
