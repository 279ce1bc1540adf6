#include <doctest.h>

#include "leray/diagnostics.hpp"
#include "leray/errors.hpp"
#include "leray/spectral.hpp"
#include "leray/transform.hpp"
#include "oracles.hpp"

using namespace leray;

namespace {

RealVectorField random_real(const GridPtr& g, int comps, std::uint64_t seed) {
  RealVectorField r(g, comps);
  for (int c = 0; c < comps; ++c) {
    const auto v = oracle::random_values(g->size(), seed + c);
    std::copy(v.begin(), v.end(), r.component(c).begin());
  }
  return r;
}

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("storage index and wavenumber tables agree") {
  for (int dim : {2, 3}) {
    const auto g = WaveGrid::create(dim, 8);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto a = g->wavenumber(i);
      CHECK(a == oracle::wave(*g, i));
      CHECK(g->index_of(a) == i);
      CHECK(g->conjugate_index(g->conjugate_index(i)) == i);
      bool nyq = false;
      for (int d = 0; d < dim; ++d) nyq = nyq || std::abs(a[d]) == 4;
      CHECK(g->is_nyquist(i) == nyq);
    }
  }
}

TEST_CASE("dealias cutoff is the largest alias-free box") {
  const std::pair<int, int> expected[] = {{8, 2}, {16, 5}, {24, 7}, {32, 10}, {64, 21}};
  for (auto [n, k] : expected) {
    CHECK(WaveGrid::create(2, n)->dealias_cutoff() == k);
    // p + q - n must stay outside the box for |p|, |q| <= k.
    CHECK(2 * k - n < -k);
  }
}

TEST_CASE("grid rejects bad descriptors") {
  CHECK_THROWS_AS(WaveGrid::create(4, 16), InvariantViolation);
  CHECK_THROWS_AS(WaveGrid::create(2, 15), InvariantViolation);
  CHECK_THROWS_AS(WaveGrid::create(2, 16, -1.0), InvariantViolation);
}

TEST_CASE("forward transform matches the direct DFT") {
  for (int dim : {2, 3}) {
    const auto g = WaveGrid::create(dim, 8, 3.0);
    const auto r = random_real(g, 1, 11);
    const auto s = forward_transform(r);
    const auto ref = oracle::dft(*g, as_vector(r.component(0)));
    double err = 0.0;
    for (std::size_t k = 0; k < g->size(); ++k) err = std::max(err, std::abs(s(0, k) - ref[k]));
    CHECK(err < 1e-14);
    CHECK(hermitian_residual(s) == 0.0);
  }
}

TEST_CASE("inverse transform matches direct synthesis") {
  const auto g = WaveGrid::create(3, 8);
  const auto u = random_solenoidal(g, 4, -1.0, 2);
  const auto r = inverse_transform(u);
  for (int c = 0; c < 3; ++c) {
    const auto ref = oracle::synthesize(*g, u.component(c));
    CHECK(oracle::max_abs_diff(r.component(c), ref) < 1e-13);
  }
}

TEST_CASE("round trip keeps the Nyquist content") {
  const auto g = WaveGrid::create(3, 16);
  const auto r = random_real(g, 3, 5);
  const auto back = inverse_transform(forward_transform(r));
  for (int c = 0; c < 3; ++c) CHECK(oracle::max_abs_diff(back.component(c), r.component(c)) < 1e-14);
}

TEST_CASE("inverse transform rejects non-Hermitian coefficients") {
  const auto g = WaveGrid::create(2, 16);
  SpectralVectorField s(g);
  s(0, g->index_of({1, 2, 0})) = Complex(1.0, 0.0);
  CHECK(hermitian_residual(s) > 0.5);
  CHECK_THROWS_AS(inverse_transform(s), SymmetryViolation);
  symmetrize(s);
  CHECK_NOTHROW(inverse_transform(s));
}

TEST_CASE("scalar transforms round trip") {
  const auto g = WaveGrid::create(2, 16);
  const auto f = oracle::random_values(g->size(), 3);
  const auto back = inverse_transform(forward_transform(g, f));
  CHECK(oracle::max_abs_diff(back, f) < 1e-14);
}

TEST_CASE("L2 norm equals the physical mean square") {
  const auto g = WaveGrid::create(3, 16);
  const auto u = random_solenoidal(g, 9, -0.5, 5);
  const auto r = inverse_transform(u);
  double phys = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto v = as_vector(r.component(c));
    phys += oracle::mean_product(v, v);
  }
  CHECK(sobolev_norm(u, 0.0) * sobolev_norm(u, 0.0) == doctest::Approx(phys).epsilon(1e-13));
}

TEST_CASE("H1 seminorm equals the physical gradient norm") {
  const auto g = WaveGrid::create(2, 32, 5.0);
  const auto u = random_solenoidal(g, 2, -1.0, 6);
  double phys = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const auto du = inverse_transform(partial_derivative(u, axis));
    for (int c = 0; c < 2; ++c) {
      const auto v = as_vector(du.component(c));
      phys += oracle::mean_product(v, v);
    }
  }
  CHECK(sobolev_norm(u, 1.0) * sobolev_norm(u, 1.0) == doctest::Approx(phys).epsilon(1e-12));
}

TEST_CASE("Leray projection") {
  const auto g = WaveGrid::create(3, 16);
  const auto raw = forward_transform(random_real(g, 3, 21));
  const auto p = leray_project(raw);
  CHECK(p.solenoidal());

  SUBCASE("is divergence-free in physical space") {
    std::vector<double> div(g->size(), 0.0);
    for (int axis = 0; axis < 3; ++axis) {
      SpectralVectorField comp(g, 1);
      std::copy(p.component(axis).begin(), p.component(axis).end(), comp.component(0).begin());
      const auto d = inverse_transform(partial_derivative(comp, axis));
      for (std::size_t i = 0; i < g->size(); ++i) div[i] += d.component(0)[i];
    }
    double worst = 0.0;
    for (double v : div) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-12);
    CHECK(divergence_residual(p) < 1e-15);
  }
  SUBCASE("is idempotent") { CHECK(oracle::l2_diff(leray_project(p), p) < 1e-15 * oracle::l2(p)); }
  SUBCASE("removes an orthogonal gradient part") {
    auto rest = raw;
    rest -= p;
    CHECK(std::abs(sobolev_inner(rest, p)) < 1e-15 * oracle::l2(raw) * oracle::l2(raw));
  }
  SUBCASE("zeroes mean and Nyquist modes") {
    for (std::size_t i = 0; i < g->size(); ++i)
      if (g->is_nyquist(i) || g->k2(i) == 0.0)
        for (int c = 0; c < 3; ++c) CHECK(p(c, i) == Complex{});
  }
}

TEST_CASE("fractional Laplacian") {
  const auto g = WaveGrid::create(2, 32);
  const auto u = random_solenoidal(g, 3, -1.0, 8);
  SUBCASE("theta = 1 is minus the Laplacian") {
    auto lap = partial_derivative(partial_derivative(u, 0), 0);
    lap += partial_derivative(partial_derivative(u, 1), 1);
    lap *= -1.0;
    CHECK(oracle::l2_diff(fractional_laplacian(u, 1.0), lap) < 1e-13 * oracle::l2(lap));
  }
  SUBCASE("theta = 0 only removes the mean") {
    auto with_mean = u;
    with_mean(0, 0) = 3.0;
    CHECK(fractional_laplacian(with_mean, 0.0).identical(u));
  }
  SUBCASE("half powers compose") {
    const auto twice = fractional_laplacian(fractional_laplacian(u, 0.25), 0.25);
    CHECK(oracle::l2_diff(twice, fractional_laplacian(u, 0.5)) < 1e-13 * oracle::l2(twice));
  }
}

TEST_CASE("Galerkin projection keeps the ball |a| <= m") {
  const auto g = WaveGrid::create(3, 16);
  const auto u = random_solenoidal(g, 8, 0.0, 5);
  const auto p = galerkin_project(u, 3);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto a = g->wavenumber(i);
    const int a2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    for (int c = 0; c < 3; ++c) CHECK(p(c, i) == (a2 <= 9 ? u(c, i) : Complex{}));
  }
  CHECK_THROWS_AS(galerkin_project(u, 0), InvariantViolation);
}

TEST_CASE("Sobolev norm of a single Fourier pair") {
  const auto g = WaveGrid::create(3, 16);
  SpectralVectorField u(g);
  const auto i = g->index_of({0, 3, 4});
  u(0, i) = Complex(0.5, 0.25);
  u(0, g->conjugate_index(i)) = std::conj(u(0, i));
  for (double s : {-1.0, 0.0, 0.5, 2.0}) {
    const double expected = std::pow(5.0, s) * std::sqrt(2.0 * std::norm(u(0, i)));
    CHECK(sobolev_norm(u, s) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("random solenoidal generator") {
  const auto g = WaveGrid::create(3, 32);
  const auto u = random_solenoidal(g, 42, -1.5, 9);

  SUBCASE("shell energies are exactly j^(2 slope)") {
    const auto shells = shell_spectrum(u);
    for (const auto& [j, e] : shells) {
      if (j >= 1 && j <= 9) CHECK(e == doctest::Approx(std::pow(j, -3.0)).epsilon(1e-12));
      else CHECK(e == 0.0);
    }
  }
  SUBCASE("is solenoidal, Hermitian and deterministic") {
    CHECK(divergence_residual(u) < 1e-15);
    CHECK(hermitian_residual(u) == 0.0);
    CHECK(random_solenoidal(g, 42, -1.5, 9).identical(u));
    CHECK_FALSE(random_solenoidal(g, 43, -1.5, 9).identical(u));
  }
  SUBCASE("cutoff must stay inside the dealias box") {
    CHECK_THROWS_AS(random_solenoidal(g, 1, -1.0, 11), InvariantViolation);
    CHECK_THROWS_AS(random_solenoidal(g, 1, -1.0, 0), InvariantViolation);
  }
  SUBCASE("amplitude slope -2 gives an energy spectrum slope of -4") {
    const auto v = random_solenoidal(g, 7, -2.0, 10);
    std::vector<double> lx, ly;
    for (const auto& [j, e] : shell_spectrum(v))
      if (j >= 1 && j <= 10) {
        lx.push_back(std::log(j));
        ly.push_back(std::log(e));
      }
    CHECK(least_squares_slope(lx, ly) == doctest::Approx(-4.0).epsilon(0.025));
  }
}

TEST_CASE("shell spectrum partitions the energy") {
  const auto g = WaveGrid::create(3, 16);
  SpectralVectorField single(g);
  const auto i = g->index_of({3, 0, 0});
  single(1, i) = 1.0;
  single(1, g->conjugate_index(i)) = 1.0;
  for (const auto& [j, e] : shell_spectrum(single)) CHECK(e == (j == 3 ? 1.0 : 0.0));

  const auto u = random_solenoidal(g, 5, -1.0, 5);
  double total = 0.0;
  for (const auto& [j, e] : shell_spectrum(u)) total += e;
  CHECK(total == doctest::Approx(0.5 * sobolev_norm(u, 0.0) * sobolev_norm(u, 0.0)).epsilon(1e-12));
}

TEST_CASE("Taylor-Green coefficients match the DFT of the analytic field") {
  const auto g = WaveGrid::create(2, 16);
  const auto u = taylor_green(g, 1.5);
  std::vector<double> ux(g->size()), uy(g->size());
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto x = oracle::position(*g, i);
    ux[i] = 1.5 * std::sin(x[0]) * std::cos(x[1]);
    uy[i] = -1.5 * std::cos(x[0]) * std::sin(x[1]);
  }
  const auto rx = oracle::dft(*g, ux);
  const auto ry = oracle::dft(*g, uy);
  for (std::size_t k = 0; k < g->size(); ++k) {
    CHECK(std::abs(u(0, k) - rx[k]) < 1e-15);
    CHECK(std::abs(u(1, k) - ry[k]) < 1e-15);
  }
  CHECK_THROWS_AS(taylor_green(WaveGrid::create(2, 16, 3.0)), InvariantViolation);
}

TEST_CASE("field arithmetic and grid checks") {
  const auto g = WaveGrid::create(2, 8);
  const auto other = WaveGrid::create(2, 16);
  SpectralVectorField a(g), b(other);
  CHECK_THROWS_AS(a += b, GridMismatch);
  CHECK_THROWS_AS(sobolev_inner(a, b), GridMismatch);
  const auto u = random_solenoidal(g, 1, -1.0, 2);
  auto v = u;
  v.axpy(2.0, u);
  auto w = u;
  w *= 3.0;
  CHECK(oracle::l2_diff(v, w) < 1e-15);
}
