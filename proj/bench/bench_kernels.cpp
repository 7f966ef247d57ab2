/********************************************************************************
* Copyright 2026 The EBLC Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*    http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
********************************************************************************/

// Serial reference kernels against their OpenMP counterparts on a 1280x720
// frame. Run with OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "eblc/kernels.hpp"
#include "eblc/rng.hpp"

namespace {

namespace k = eblc::kernels;

constexpr int kWidth = 1280;
constexpr int kHeight = 720;
constexpr std::size_t kSamples = static_cast<std::size_t>(kWidth) * kHeight * 3;
constexpr std::size_t kPixels = static_cast<std::size_t>(kWidth) * kHeight;

struct Inputs {
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;
  std::vector<double> luma_a;
  std::vector<double> luma_b;

  Inputs() : a(kSamples), b(kSamples), luma_a(kPixels), luma_b(kPixels) {
    eblc::Rng rng(1);
    for (std::size_t i = 0; i < kSamples; ++i) {
      a[i] = static_cast<std::uint8_t>(rng() & 0xff);
      b[i] = static_cast<std::uint8_t>((a[i] + (rng() & 7)) & 0xff);
    }
    k::serial::luma_plane(a, luma_a);
    k::serial::luma_plane(b, luma_b);
  }
};

const Inputs& inputs() {
  static const Inputs in;
  return in;
}

void set_bytes(benchmark::State& state, std::size_t per_iteration) {
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * per_iteration));
}

template <auto Fn>
void squared_error(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.a, in.b));
  set_bytes(state, 2 * kSamples);
}

template <auto Fn>
void luma(benchmark::State& state) {
  std::vector<double> out(kPixels);
  for (auto _ : state) {
    Fn(inputs().a, out);
    benchmark::ClobberMemory();
  }
  set_bytes(state, kSamples);
}

template <auto Fn>
void quantize(benchmark::State& state) {
  std::vector<std::uint8_t> out(kSamples);
  for (auto _ : state) {
    Fn(inputs().a, out, 31);
    benchmark::ClobberMemory();
  }
  set_bytes(state, kSamples);
}

template <auto Fn>
void lightness(benchmark::State& state) {
  std::vector<std::uint8_t> out(kSamples);
  for (auto _ : state) {
    Fn(inputs().a, out, 0.5);
    benchmark::ClobberMemory();
  }
  set_bytes(state, kSamples);
}

template <auto Fn>
void blur(benchmark::State& state) {
  std::vector<std::uint8_t> out(kSamples);
  for (auto _ : state) {
    Fn(inputs().a, out, kWidth, kHeight, 3);
    benchmark::ClobberMemory();
  }
  set_bytes(state, kSamples);
}

template <auto Fn>
void box_mean(benchmark::State& state) {
  std::vector<double> out(kPixels);
  for (auto _ : state) {
    Fn(inputs().luma_a, out, kWidth, kHeight, 69);
    benchmark::ClobberMemory();
  }
  set_bytes(state, kPixels * sizeof(double));
}

template <auto Fn>
void ssim(benchmark::State& state) {
  const auto& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.luma_a, in.luma_b, kWidth, kHeight));
  set_bytes(state, 2 * kPixels * sizeof(double));
}

template <auto Fn>
void ridge(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(Fn(inputs().luma_a, kWidth, kHeight, 4, 0.5));
  }
  set_bytes(state, kPixels * sizeof(double));
}

template <auto Fn>
void laplacian(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(inputs().luma_a, kWidth, kHeight));
  set_bytes(state, kPixels * sizeof(double));
}

template <auto Fn>
void moments(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(inputs().a));
  set_bytes(state, kSamples);
}

#define EBLC_BENCH_PAIR(name, serial_fn, parallel_fn)                             \
  BENCHMARK(name<serial_fn>)->Name(#name "/serial")->Unit(benchmark::kMillisecond); \
  BENCHMARK(name<parallel_fn>)->Name(#name "/parallel")->Unit(benchmark::kMillisecond)

EBLC_BENCH_PAIR(squared_error, k::serial::squared_error_sum, k::parallel::squared_error_sum);
EBLC_BENCH_PAIR(luma, k::serial::luma_plane, k::parallel::luma_plane);
EBLC_BENCH_PAIR(quantize, k::serial::quantize, k::parallel::quantize);
EBLC_BENCH_PAIR(lightness, k::serial::scale_lightness, k::parallel::scale_lightness);
EBLC_BENCH_PAIR(blur, k::serial::box_blur, k::parallel::box_blur);
EBLC_BENCH_PAIR(box_mean, k::serial::box_mean, k::parallel::box_mean);
EBLC_BENCH_PAIR(ssim, k::serial::ssim_mean, k::parallel::ssim_mean);
EBLC_BENCH_PAIR(ridge, k::serial::ridge_energy, k::parallel::ridge_energy);
EBLC_BENCH_PAIR(laplacian, k::serial::laplacian_moments, k::parallel::laplacian_moments);
EBLC_BENCH_PAIR(moments, k::serial::lightness_moments, k::parallel::lightness_moments);

}  // namespace

BENCHMARK_MAIN();
