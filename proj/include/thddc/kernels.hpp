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

#pragma once

// Row-parallel kernels behind the E-step and the scatter update. Every
// kernel has an OpenMP version (used by the library) and a plain serial
// version kept as the reference for tests and benchmarks.
//
// The parallel scatter accumulates fixed-size row blocks and combines the
// block partials in block order, so its result does not depend on the
// number of threads.

#include "thddc/numerics.hpp"

namespace thddc::kernels
{
inline constexpr Eigen::Index kScatterMinBlockRows = 256;
inline constexpr Eigen::Index kScatterMaxBlocks = 64;

// Squared distance of every row of data to a component in its
// subspace parameterization. With c = orient'(x - mu) and d = a.size():
//   sum_{j<d} c_j^2 / a_j + sum_{j>=d} c_j^2 / b
// orient is p x p orthonormal; its first d columns span the subspace.
namespace serial
{
Vector subspace_distances(const Matrix& data, const Vector& mu, const Matrix& orient,
                          const Vector& a, double b);
// Unnormalized sum_i w_i (x_i - mu)(x_i - mu)'.
Matrix weighted_scatter(const Matrix& data, const Vector& weights, const Vector& mu);
}  // namespace serial

namespace parallel
{
Vector subspace_distances(const Matrix& data, const Vector& mu, const Matrix& orient,
                          const Vector& a, double b);
Matrix weighted_scatter(const Matrix& data, const Vector& weights, const Vector& mu);
}  // namespace parallel
}  // namespace thddc::kernels
