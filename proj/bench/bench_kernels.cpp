#include "minsec/fixtures.hpp"
#include "minsec/kernels.hpp"
#include "minsec/solver.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace minsec;
namespace k = minsec::kernels;

namespace {

// Corner count of a mesh with about 10k faces.
constexpr Eigen::Index kRows = 30000;
constexpr int kN = 64;

Eigen::ArrayXXd random_array(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::ArrayXXd a(r, c);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return a;
}

k::CovectorSamples random_samples(unsigned seed) {
  k::CovectorSamples s;
  s.hx = random_array(kRows, kN, seed);
  s.hy = random_array(kRows, kN, seed + 1);
  s.v = random_array(kRows, kN, seed + 2);
  return s;
}

template <bool Omp>
void BM_FourierForward(benchmark::State& state) {
  const k::FourierTable t(kN, kN / 2 - 1);
  const Eigen::ArrayXXd x = random_array(kRows, kN, 1);
  Eigen::ArrayXXcd c;
  for (auto _ : state) {
    if constexpr (Omp) k::omp::fourier_forward(x, t, c);
    else k::serial::fourier_forward(x, t, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * kRows);
}

template <bool Omp>
void BM_FourierInverse(benchmark::State& state) {
  const k::FourierTable t(kN, kN / 2 - 1);
  Eigen::ArrayXXcd c;
  k::serial::fourier_forward(random_array(kRows, kN, 2), t, c);
  Eigen::ArrayXXd x;
  for (auto _ : state) {
    if constexpr (Omp) k::omp::fourier_inverse(c, t, x);
    else k::serial::fourier_inverse(c, t, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * kRows);
}

template <bool Omp>
void BM_ShrinkSigma(benchmark::State& state) {
  const k::CovectorSamples in = random_samples(3);
  k::CovectorSamples out;
  for (auto _ : state) {
    if constexpr (Omp) k::omp::shrink_sigma(in, 0.7, 1.0, out);
    else k::serial::shrink_sigma(in, 0.7, 1.0, out);
    benchmark::DoNotOptimize(out.v.data());
  }
  state.SetItemsProcessed(state.iterations() * kRows * kN);
}

template <bool Omp>
void BM_DualUpdate(benchmark::State& state) {
  const k::CovectorSamples sigma = random_samples(10), reached = random_samples(20), prev = random_samples(30);
  const Eigen::VectorXd w = random_array(kRows, 1, 40).abs().matrix();
  k::CovectorSamples dual = random_samples(50);
  for (auto _ : state) {
    k::Residual2 r;
    if constexpr (Omp) r = k::omp::sigma_dual_update(sigma, reached, prev, w, 1.0, dual);
    else r = k::serial::sigma_dual_update(sigma, reached, prev, w, 1.0, dual);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * kRows * kN);
}

template <bool Serial>
void BM_AdmmIteration(benchmark::State& state) {
  const TriMesh m = fixtures::unit_area_disk(static_cast<int>(state.range(0)));
  SolverConfig c;
  c.degree = 4;
  c.N = 32;
  c.serial_kernels = Serial;
  c.check_kkt = false;
  Problem p(m, c, BoundarySpec::Tangent());
  BundleState s = init_state(p);
  for (auto _ : state) admm_iteration(p, s);
  state.counters["faces"] = m.num_faces();
}

}  // namespace

BENCHMARK(BM_FourierForward<false>)->Name("fourier_forward/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierForward<true>)->Name("fourier_forward/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FourierInverse<false>)->Name("fourier_inverse/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FourierInverse<true>)->Name("fourier_inverse/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShrinkSigma<false>)->Name("shrink_sigma/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShrinkSigma<true>)->Name("shrink_sigma/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DualUpdate<false>)->Name("dual_update/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DualUpdate<true>)->Name("dual_update/omp")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AdmmIteration<true>)->Name("admm_iteration/serial")->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdmmIteration<false>)
    ->Name("admm_iteration/omp")
    ->Arg(1000)
    ->Arg(5000)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
