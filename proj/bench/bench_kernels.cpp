/*
 * Copyright 2026 The thddc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <random>

#include "thddc/kernels.hpp"

namespace
{
using thddc::Matrix;
using thddc::Vector;

constexpr int kP = 20;
constexpr int kD = 4;

struct Inputs
{
    Matrix x;
    Vector w;
    Vector mu;
    Matrix orient;
    Vector a;
    double b = 0.5;
};

Inputs make_inputs(int n)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    Inputs in;
    in.x = Matrix::NullaryExpr(n, kP, [&] { return z(rng); });
    in.w = Vector::NullaryExpr(n, [&] { return std::abs(z(rng)); });
    in.mu = Vector::Zero(kP);
    Eigen::HouseholderQR<Matrix> qr(Matrix::NullaryExpr(kP, kP, [&] { return z(rng); }));
    in.orient = qr.householderQ() * Matrix::Identity(kP, kP);
    in.a = Vector::LinSpaced(kD, 4.0, 1.0);
    return in;
}

template <Vector (*Kernel)(const Matrix&, const Vector&, const Matrix&, const Vector&, double)>
void distances(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<int>(state.range(0)));
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(Kernel(in.x, in.mu, in.orient, in.a, in.b));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Matrix (*Kernel)(const Matrix&, const Vector&, const Vector&)>
void scatter(benchmark::State& state)
{
    const Inputs in = make_inputs(static_cast<int>(state.range(0)));
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(Kernel(in.x, in.w, in.mu));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
}  // namespace

BENCHMARK(distances<thddc::kernels::serial::subspace_distances>)->Name("distances/serial")->Range(1 << 10, 1 << 17);
BENCHMARK(distances<thddc::kernels::parallel::subspace_distances>)->Name("distances/parallel")->Range(1 << 10, 1 << 17)->UseRealTime();
BENCHMARK(scatter<thddc::kernels::serial::weighted_scatter>)->Name("scatter/serial")->Range(1 << 10, 1 << 17);
BENCHMARK(scatter<thddc::kernels::parallel::weighted_scatter>)->Name("scatter/parallel")->Range(1 << 10, 1 << 17)->UseRealTime();

BENCHMARK_MAIN();
