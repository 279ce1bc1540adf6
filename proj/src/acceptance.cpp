#include "leray/acceptance.hpp"

#include <stdlib.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "leray/checkpoint.hpp"
#include "leray/commands.hpp"
#include "leray/diagnostics.hpp"
#include "leray/errors.hpp"
#include "leray/spectral.hpp"
#include "leray/timestepper.hpp"
#include "leray/transform.hpp"

namespace leray {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Collects named checks of one criterion.
class Checks {
 public:
  void add(const std::string& label, double value, bool ok) {
    ok_ = ok_ && ok;
    if (!detail_.empty()) detail_ += "  ";
    detail_ += label + "=" + sci(value) + (ok ? "" : "(!)");
  }
  void note(const std::string& text) {
    if (!detail_.empty()) detail_ += "  ";
    detail_ += text;
  }
  bool ok() const { return ok_; }
  const std::string& detail() const { return detail_; }

 private:
  bool ok_ = true;
  std::string detail_;
};

double l2_distance(const SpectralVectorField& a, const SpectralVectorField& b) {
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.grid().size(); ++i) s += std::norm(a(c, i) - b(c, i));
  return std::sqrt(s);
}

double l2(const SpectralVectorField& a) {
  double s = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t i = 0; i < a.grid().size(); ++i) s += std::norm(a(c, i));
  return std::sqrt(s);
}

double max_abs_physical(const SpectralVectorField& s) {
  const auto r = inverse_transform(s);
  double m = 0.0;
  for (std::size_t i = 0; i < r.grid().size(); ++i) {
    double v = 0.0;
    for (int c = 0; c < r.components(); ++c) v += r.component(c)[i] * r.component(c)[i];
    m = std::max(m, std::sqrt(v));
  }
  return m;
}

// Solenoidal field with every non-Nyquist mode populated.
SpectralVectorField rough_field(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealVectorField r(grid, grid->dim());
  for (int c = 0; c < grid->dim(); ++c)
    for (auto& v : r.component(c)) v = dist(rng);
  return leray_project(forward_transform(r));
}

// (w . grad) v by explicit convolution over the dealias box, truncated to the box.
SpectralVectorField direct_advect(const SpectralVectorField& w, const SpectralVectorField& v,
                                  bool project) {
  const auto& g = v.grid();
  const int dim = g.dim();
  const int K = g.dealias_cutoff();
  std::vector<std::size_t> box;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto a = g.wavenumber(i);
    bool in = true;
    for (int d = 0; d < dim; ++d) in = in && std::abs(a[d]) <= K;
    if (in) box.push_back(i);
  }
  SpectralVectorField out(v.grid_ptr());
  const Complex I(0.0, 1.0);
  for (auto p : box) {
    const auto ap = g.wavenumber(p);
    for (auto q : box) {
      const auto aq = g.wavenumber(q);
      std::array<int, 3> a{};
      bool in = true;
      for (int d = 0; d < dim; ++d) {
        a[d] = ap[d] + aq[d];
        in = in && std::abs(a[d]) <= K;
      }
      if (!in) continue;
      Complex s{};
      for (int j = 0; j < dim; ++j) s += w(j, p) * I * (g.k_unit() * aq[j]);
      const auto k = g.index_of(a);
      for (int c = 0; c < dim; ++c) out(c, k) += s * v(c, q);
    }
  }
  if (project) {
    for (auto k : box) {
      const auto a = g.wavenumber(k);
      double kk = 0.0;
      for (int d = 0; d < dim; ++d) kk += double(a[d]) * a[d];
      if (kk == 0.0) {
        for (int c = 0; c < dim; ++c) out(c, k) = 0.0;
        continue;
      }
      Complex kd{};
      for (int d = 0; d < dim; ++d) kd += double(a[d]) * out(d, k);
      for (int c = 0; c < dim; ++c) out(c, k) -= double(a[c]) * kd / kk;
    }
  }
  return out;
}

std::vector<SimState> trajectory(SimState initial, const ModelConfig& m, double dt,
                                 std::uint64_t steps, int every) {
  StepperConfig sc;
  sc.dt = dt;
  sc.t_end = static_cast<double>(steps) * dt;
  sc.sample_every = every;
  std::vector<SimState> out;
  RunHooks hooks;
  hooks.sample = [&](const SimState& s) { out.push_back(s); };
  run(std::move(initial), m, sc, hooks);
  return out;
}

std::vector<EnergyRecord> records_of(const std::vector<SimState>& states, const ModelConfig& m) {
  std::vector<EnergyRecord> r;
  for (const auto& s : states) r.push_back(measure(s, m));
  return r;
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

// ---------------------------------------------------------------------------

std::vector<std::pair<GridPtr, std::vector<SpectralVectorField>>> bound_fields() {
  std::vector<std::pair<GridPtr, std::vector<SpectralVectorField>>> sets;
  for (auto [dim, n] : {std::pair{3, 32}, std::pair{2, 64}}) {
    const auto g = WaveGrid::create(dim, n);
    std::vector<SpectralVectorField> fields;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
      fields.push_back(random_solenoidal(g, 1000 * dim + seed, -1.0, g->dealias_cutoff()));
    sets.emplace_back(g, std::move(fields));
  }
  return sets;
}

constexpr double kBoundAlphas[] = {0.05, 0.2, 1.0};
constexpr double kThetas[] = {0.25, 0.5, 1.0};
constexpr double kNorms[] = {-1.0, 0.0, 0.5};

void filter_bound(Checks& out, const AcceptanceOptions&) {
  double worst = 0.0;
  for (const auto& [grid, fields] : bound_fields())
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const double alpha = kBoundAlphas[f % 3];
      for (double theta : kThetas) {
        const auto bar = filter_apply(fields[f], {alpha, theta, 0});
        for (double s : kNorms) {
          const double lhs = sobolev_norm(bar, s + 2.0 * theta);
          const double rhs = std::pow(alpha, -2.0 * theta) * sobolev_norm(fields[f], s);
          worst = std::max(worst, lhs / rhs);
        }
      }
    }
  out.add("max_ratio", worst, worst <= 1.0 + 1e-12);
}

void deconvolution_norm(Checks& out, const AcceptanceOptions&) {
  double worst = 0.0;
  double series = 0.0;
  for (const auto& [grid, fields] : bound_fields())
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const double alpha = kBoundAlphas[f % 3];
      for (double theta : kThetas) {
        for (int order : {0, 1, 4, 16}) {
          const auto h = deconvolve(fields[f], {alpha, theta, order});
          for (double s : kNorms)
            worst = std::max(worst, sobolev_norm(h, s) / sobolev_norm(fields[f], s));
        }
        if (f < 10)
          for (int order = 0; order <= 8; ++order) {
            const FilterParams p{alpha, theta, order};
            const auto closed = deconvolve(fields[f], p);
            const auto iter = van_cittert_series(fields[f], p);
            series = std::max(series, l2_distance(closed, iter) / l2(iter));
          }
      }
    }
  out.add("max_norm_ratio", worst, worst <= 1.0 + 1e-12);
  out.add("series_rel", series, series <= 1e-12);
}

void advection_oracle(Checks& out, const AcceptanceOptions& opts) {
  double worst = 0.0;
  for (auto [dim, n] : {std::pair{3, 8}, std::pair{2, 16}}) {
    const auto g = WaveGrid::create(dim, n);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto w = random_solenoidal(g, seed, -1.0, g->dealias_cutoff());
      const auto v = random_solenoidal(g, seed + 50, -1.0, g->dealias_cutoff());
      for (bool project : {false, true}) {
        const auto ref = direct_advect(w, v, project);
        const auto got = advect(w, v, {true, project});
        worst = std::max(worst, l2_distance(got, ref) / l2(ref));
      }
    }
  }
  out.add("oracle_rel", worst, worst <= 1e-12);

  const auto g = WaveGrid::create(3, 32);
  AdvectOptions ao;
  ao.dealias = !opts.inject_skew_fault;
  double skew = 0.0;
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const auto v = rough_field(g, 500 + seed);
    const SpectralVectorField ws[] = {rough_field(g, 600 + seed), filter_apply(v, {0.1, 0.25, 0}),
                                      deconvolve(v, {0.1, 0.25, 2})};
    for (const auto& w : ws) {
      const double value = std::abs(sobolev_inner(advect(w, v, ao), v));
      const double scale = max_abs_physical(w) * sobolev_norm(v, 1.0) * sobolev_norm(v, 0.0);
      skew = std::max(skew, value / scale);
    }
  }
  out.add("skew", skew, skew <= 1e-11);
  if (opts.inject_skew_fault) out.note("(dealiasing disabled)");
}

void taylor_green_exactness(Checks& out, const AcceptanceOptions&) {
  const auto g = WaveGrid::create(2, 64);
  const double nu = 0.01;
  struct Case {
    const char* label;
    ModelKind kind;
    double alpha;
  };
  for (const Case& c : {Case{"nse", ModelKind::NSE, 0.0}, Case{"alpha0", ModelKind::LerayAlpha, 0.0},
                        Case{"alpha0.5", ModelKind::LerayAlpha, 0.5}}) {
    ModelConfig m;
    m.kind = c.kind;
    m.nu = nu;
    m.filter = {c.alpha, 0.25, 0};
    StepperConfig sc;
    sc.dt = 1e-3;
    sc.t_end = 1.0;
    const auto final_state = run(SimState{0.0, 0, taylor_green(g, 1.0), std::nullopt}, m, sc);
    const auto u = inverse_transform(final_state.u);
    const double decay = std::exp(-2.0 * nu * final_state.t);
    double err = 0.0;
    for (int i = 0; i < g->n(); ++i)
      for (int j = 0; j < g->n(); ++j) {
        const double x = g->coordinate(i), y = g->coordinate(j);
        const std::size_t p = static_cast<std::size_t>(i) * g->n() + j;
        err = std::max(err, std::abs(u.component(0)[p] - std::sin(x) * std::cos(y) * decay));
        err = std::max(err, std::abs(u.component(1)[p] + std::cos(x) * std::sin(y) * decay));
      }
    out.add(std::string("err_") + c.label, err, err < 1e-10);
  }
}

// Shared setup of the forced Leray-alpha runs.
ModelConfig forced_alpha_model(const GridPtr& g) {
  ModelConfig m;
  m.kind = ModelKind::LerayAlpha;
  m.nu = 0.02;
  m.filter = {0.1, 0.25, 0};
  m.forcing.terms.push_back({{1, 0, 0}, {Complex(0.0), Complex(0.5), Complex(0.0)}, 0.0});
  m.forcing.terms.push_back({{0, 1, 1}, {Complex(0.5), Complex(0.0, 0.3), Complex(0.0, -0.3)}, 0.0});
  m.validate(*g);
  return m;
}

SimState forced_alpha_initial(const GridPtr& g) {
  return SimState{0.0, 0, random_solenoidal(g, 7, -1.0, 4), std::nullopt};
}

void energy_budget(Checks& out, const AcceptanceOptions&) {
  const auto g = WaveGrid::create(3, 32);
  const auto m = forced_alpha_model(g);
  const auto coarse = records_of(trajectory(forced_alpha_initial(g), m, 1e-3, 200, 1), m);
  const double full = energy_budget_residual(coarse, m);
  // Refinement compared over [0, 0.1].
  const double window = energy_budget_residual(std::span(coarse.data(), 101), m);
  const auto fine = records_of(trajectory(forced_alpha_initial(g), m, 5e-4, 200, 1), m);
  const double half = energy_budget_residual(fine, m);
  out.add("residual", full, full < 1e-4);
  out.add("ratio", window / half, in_range(window / half, 3.0, 5.0));
}

void local_energy(Checks& out, const AcceptanceOptions&) {
  const auto g = WaveGrid::create(3, 32);
  const auto m = forced_alpha_model(g);
  const auto states = trajectory(forced_alpha_initial(g), m, 1e-3, 200, 5);
  std::vector<SimState> every10;
  for (std::size_t i = 0; i < states.size(); i += 2) every10.push_back(states[i]);
  BumpTestFunction phi;
  phi.center = {std::numbers::pi, std::numbers::pi, std::numbers::pi};
  phi.width = 1.0;
  phi.t0 = 0.0;
  phi.t1 = 0.2;
  const double r10 = local_energy_residual(every10, phi, m).residual;
  const double r5 = local_energy_residual(states, phi, m).residual;
  out.add("residual", r10, std::abs(r10) < 1e-3);
  out.add("ratio", std::abs(r10 / r5), in_range(std::abs(r10 / r5), 2.0, 6.0));
  out.note("extrapolated=" + sci(r5 - (r10 - r5) / 15.0));
}

void convergence_sweeps(Checks& out, const AcceptanceOptions&) {
  const auto g = WaveGrid::create(3, 32);
  const auto u = random_solenoidal(g, 11, -1.0, 4);
  const std::vector<double> alphas = {1e-4, 5e-5, 2.5e-5};
  for (double theta : {0.25, 0.5}) {
    const auto r = alpha_sweep(u, {0.0, theta, 0}, alphas, 0.0, 2.0 * theta, 0.05);
    out.add(std::string(theta == 0.25 ? "slope(theta=1/4)" : "slope(theta=1/2)"), r.fitted, r.pass);
  }
  const std::vector<int> orders = {16, 20, 24, 28, 32};
  for (double theta : {0.25, 0.5}) {
    const auto r = n_sweep(u, {0.5, theta, 0}, orders, 0.0, 0.02);
    const bool ok = !r.exact && std::abs(r.fitted - r.target) <= 0.02;
    out.add(std::string(theta == 0.25 ? "ratio(theta=1/4)" : "ratio(theta=1/2)"), r.fitted, ok);
    out.add(theta == 0.25 ? "target(theta=1/4)" : "target(theta=1/2)", r.target, true);
  }
}

void model_family(Checks& out, const AcceptanceOptions&) {
  auto distance = [](const std::vector<SimState>& a, const std::vector<SimState>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      worst = std::max(worst, l2_distance(a[i].u, b[i].u) / l2(b[i].u));
    return worst;
  };
  auto model = [](ModelKind kind, double alpha, int order) {
    ModelConfig m;
    m.kind = kind;
    m.nu = 0.02;
    m.filter = {alpha, 0.25, order};
    return m;
  };
  {
    const auto g = WaveGrid::create(3, 32);
    const SimState init{0.0, 0, random_solenoidal(g, 5, -1.0, 4), std::nullopt};
    const auto deconv0 = trajectory(init, model(ModelKind::LerayDeconv, 0.1, 0), 1e-3, 100, 10);
    const auto alpha = trajectory(init, model(ModelKind::LerayAlpha, 0.1, 0), 1e-3, 100, 10);
    out.add("deconv0_vs_alpha", distance(deconv0, alpha), distance(deconv0, alpha) <= 1e-13);
    const auto alpha0 = trajectory(init, model(ModelKind::LerayAlpha, 0.0, 0), 1e-3, 100, 10);
    const auto nse = trajectory(init, model(ModelKind::NSE, 0.0, 0), 1e-3, 100, 10);
    out.add("alpha0_vs_nse", distance(alpha0, nse), distance(alpha0, nse) <= 1e-13);
  }
  // Fixed-resolution trend towards NSE as alpha decreases; only monotonicity is asserted.
  const auto g = WaveGrid::create(3, 16);
  const SimState init{0.0, 0, random_solenoidal(g, 5, -1.0, 4), std::nullopt};
  const auto nse = trajectory(init, model(ModelKind::NSE, 0.0, 0), 1e-3, 100, 100);
  double previous = INFINITY;
  bool monotone = true;
  std::string trend = "trend:";
  for (double alpha : {0.4, 0.2, 0.1, 0.05}) {
    const auto a = trajectory(init, model(ModelKind::LerayAlpha, alpha, 0), 1e-3, 100, 100);
    const double d = l2_distance(a.back().u, nse.back().u) / l2(nse.back().u);
    monotone = monotone && d < previous;
    previous = d;
    trend += " " + sci(d);
  }
  out.note(trend + (monotone ? "" : "(!)"));
  if (!monotone) out.add("monotone", 0.0, false);
}

void mhd_identity(Checks& out, const AcceptanceOptions&) {
  const auto g = WaveGrid::create(3, 32);
  ModelConfig m;
  m.kind = ModelKind::MHDDeconv;
  m.nu = 0.02;
  m.nu2 = 0.02;
  m.filter = {0.1, 0.25, 2};
  const SimState init{0.0, 0, random_solenoidal(g, 21, -1.0, 4), random_solenoidal(g, 22, -1.0, 4)};
  const double coarse = energy_budget_residual(records_of(trajectory(init, m, 1e-3, 50, 1), m), m);
  const double fine = energy_budget_residual(records_of(trajectory(init, m, 5e-4, 100, 1), m), m);
  out.add("residual", coarse, coarse < 1e-4);
  out.add("ratio", coarse / fine, in_range(coarse / fine, 3.0, 5.0));

  double cancel = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto u = rough_field(g, 700 + seed);
    const auto b = rough_field(g, 800 + seed);
    const auto w = deconvolve(b, m.filter);
    const AdvectOptions raw{true, false};
    const double value = sobolev_inner(advect(w, b, raw), u) + sobolev_inner(advect(w, u, raw), b);
    const double scale =
        max_abs_physical(w) * (sobolev_norm(b, 1.0) * sobolev_norm(u, 0.0) +
                               sobolev_norm(u, 1.0) * sobolev_norm(b, 0.0));
    cancel = std::max(cancel, std::abs(value) / scale);
  }
  out.add("cancellation", cancel, cancel <= 1e-11);
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(Checks& out, const AcceptanceOptions&) {
  std::string tmpl = (std::filesystem::temp_directory_path() / "leray-accept-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw IoError("cannot create a temporary directory");
  const std::filesystem::path root = tmpl;
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove_all(p, ec);
    }
  } cleanup{root};

  auto write_config = [&](const std::string& name, const std::string& dir, const std::string& initial) {
    const auto path = root / name;
    std::ofstream(path) << "[grid]\ndim = 3\nn = 16\n"
                        << "[model]\nkind = leray-deconv\nnu = 0.02\nalpha = 0.1\ntheta = 0.25\norder = 2\n"
                        << "[forcing]\nmode1 = 1 0 0 | 0 0 0.5 0 0 0\n"
                        << "[stepper]\ndt = 0.001\nt_end = 0.02\n"
                        << "[initial]\n" << initial << "\n"
                        << "[output]\ndirectory = " << (root / dir).string() << "\ncheckpoint_every = 10\n";
    return path.string();
  };
  const std::string random = "preset = random\nseed = 3\nslope = -1\ncutoff = 4";
  std::ostringstream sink;
  cmd_run(write_config("a.cfg", "a", random), sink);
  cmd_run(write_config("b.cfg", "b", random), sink);
  const bool csv_same = read_bytes(root / "a" / "energy.csv") == read_bytes(root / "b" / "energy.csv");
  const bool ck_same = read_bytes(root / "a" / "final.bin") == read_bytes(root / "b" / "final.bin");
  out.add("repeat_identical", csv_same && ck_same ? 1.0 : 0.0, csv_same && ck_same);

  const auto resume_from = (root / "a" / "checkpoint_00000010.bin").string();
  cmd_run(write_config("c.cfg", "c", "preset = checkpoint\npath = " + resume_from), sink);
  const auto grid = WaveGrid::create(3, 16);
  const auto straight = load_checkpoint((root / "a" / "final.bin").string()).to_state(grid);
  const auto resumed = load_checkpoint((root / "c" / "final.bin").string()).to_state(grid);
  const double rel = l2_distance(straight.u, resumed.u) / l2(straight.u);
  out.add("resume_rel", rel, rel <= 1e-13 && straight.step == resumed.step);

  ModelConfig mhd;
  mhd.kind = ModelKind::MHDDeconv;
  mhd.nu = mhd.nu2 = 0.02;
  const SimState s{0.25, 250, random_solenoidal(grid, 1, -1.0, 4), random_solenoidal(grid, 2, -1.0, 4)};
  const auto back = decode_checkpoint(encode_checkpoint(Checkpoint::from_state(s, mhd))).to_state(grid);
  const bool exact = back.u.identical(s.u) && back.b->identical(*s.b) && back.t == s.t && back.step == s.step;
  out.add("roundtrip_exact", exact ? 1.0 : 0.0, exact);
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  void (*body)(Checks&, const AcceptanceOptions&);
};

constexpr Criterion kCriteria[] = {
    {1, "filter-bound", 10.0, filter_bound},
    {2, "deconvolution-norm", 10.0, deconvolution_norm},
    {3, "advection-oracle", 30.0, advection_oracle},
    {4, "taylor-green", 20.0, taylor_green_exactness},
    {5, "energy-budget", 60.0, energy_budget},
    {6, "local-energy", 90.0, local_energy},
    {7, "convergence-sweeps", 10.0, convergence_sweeps},
    {8, "model-family", 60.0, model_family},
    {9, "mhd-identity", 90.0, mhd_identity},
    {10, "determinism", 30.0, determinism},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (const auto& c : kCriteria) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end())
      continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_seconds = c.budget;
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(checks, opts);
      r.pass = checks.ok();
      r.detail = checks.detail();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = checks.detail() + (checks.detail().empty() ? "" : "  ") + "error: " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.budget_seconds) {
      r.pass = false;
      r.detail += "  over runtime budget";
    }
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_row(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d %-20s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str());
  return std::string(head) + " " + r.detail;
}

}  // namespace leray
