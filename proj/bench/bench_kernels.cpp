#include <benchmark/benchmark.h>

#include <array>
#include <random>
#include <vector>

#include "leray/dynamics.hpp"
#include "leray/kernels.hpp"
#include "leray/spectral.hpp"

using namespace leray;
namespace k = leray::kernels;

namespace {

std::vector<double> random_real(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<Complex> random_complex(std::size_t n, unsigned seed) {
  const auto re = random_real(n, seed);
  const auto im = random_real(n, seed + 100);
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {re[i], im[i]};
  return v;
}

struct Product {
  std::vector<std::vector<double>> w, grad, out;
  std::array<k::ConstRealSpan, 3> ws{};
  std::array<k::ConstRealSpan, 9> gs{};
  std::array<k::RealSpan, 3> os{};

  explicit Product(std::size_t n) {
    for (unsigned c = 0; c < 3; ++c) w.push_back(random_real(n, c));
    for (unsigned c = 0; c < 9; ++c) grad.push_back(random_real(n, 10 + c));
    out.assign(3, std::vector<double>(n));
    for (int c = 0; c < 3; ++c) {
      ws[c] = w[c];
      os[c] = out[c];
    }
    for (int c = 0; c < 9; ++c) gs[c] = grad[c];
  }
};

template <bool Parallel>
void BM_convective_product(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  Product p(n * n * n);
  for (auto _ : st) {
    if constexpr (Parallel)
      k::parallel::convective_product(3, p.ws, p.gs, p.os);
    else
      k::serial::convective_product(3, p.ws, p.gs, p.os);
    benchmark::DoNotOptimize(p.out[0].data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(n * n * n));
}

template <bool Parallel>
void BM_leray_project(benchmark::State& st) {
  const auto g = WaveGrid::create(3, static_cast<int>(st.range(0)));
  std::array<std::vector<Complex>, 3> u;
  for (unsigned c = 0; c < 3; ++c) u[c] = random_complex(g->size(), c);
  std::array<k::ConstRealSpan, 3> kv{g->k_axis(0), g->k_axis(1), g->k_axis(2)};
  std::array<k::ComplexSpan, 3> comps{u[0], u[1], u[2]};
  for (auto _ : st) {
    if constexpr (Parallel)
      k::parallel::leray_project(3, kv, g->k2(), g->retained_mask(), comps);
    else
      k::serial::leray_project(3, kv, g->k2(), g->retained_mask(), comps);
    benchmark::DoNotOptimize(u[0].data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g->size()));
}

template <bool Parallel>
void BM_weighted_norm2(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  const auto data = random_complex(n * n * n, 1);
  const auto weight = random_real(n * n * n, 2);
  for (auto _ : st) {
    double r = Parallel ? k::parallel::weighted_norm2(data, weight) : k::serial::weighted_norm2(data, weight);
    benchmark::DoNotOptimize(r);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(n * n * n));
}

template <bool Parallel>
void BM_scale(benchmark::State& st) {
  const std::size_t n = static_cast<std::size_t>(st.range(0));
  auto data = random_complex(n * n * n, 1);
  const auto factor = random_real(n * n * n, 2);
  for (auto _ : st) {
    if constexpr (Parallel)
      k::parallel::scale(data, factor, data);
    else
      k::serial::scale(data, factor, data);
    benchmark::DoNotOptimize(data.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(n * n * n));
}

void BM_rhs(benchmark::State& st) {
  const auto g = WaveGrid::create(3, static_cast<int>(st.range(0)));
  ModelConfig cfg;
  cfg.kind = ModelKind::LerayDeconv;
  cfg.filter = {0.1, 0.5, 2};
  const SimState s{0.0, 0, random_solenoidal(g, 1, -1.0, 4), std::nullopt};
  for (auto _ : st) benchmark::DoNotOptimize(rhs(s, cfg));
}

}  // namespace

BENCHMARK(BM_convective_product<false>)->Arg(32)->Arg(64);
BENCHMARK(BM_convective_product<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_leray_project<false>)->Arg(32)->Arg(64);
BENCHMARK(BM_leray_project<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_weighted_norm2<false>)->Arg(32)->Arg(64);
BENCHMARK(BM_weighted_norm2<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_scale<false>)->Arg(32)->Arg(64);
BENCHMARK(BM_scale<true>)->Arg(32)->Arg(64);
BENCHMARK(BM_rhs)->Arg(32)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  k::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
