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

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "thddc/numerics.hpp"

namespace thddc
{
// Location mu, positive-definite scale sigma, degrees of freedom nu.
struct TParams
{
    Vector mu;
    Matrix sigma;
    double nu = 1.0;
};

struct MixtureParams
{
    Vector proportions;
    std::vector<TParams> components;
};

// Checks TParams / MixtureParams invariants; throws on violation.
void validate(const TParams& params);
void validate(const MixtureParams& params);

double t_log_density(const Vector& x, const TParams& params);

// sum_i log sum_g pi_g f_t(x_i | theta_g), stabilized with log-sum-exp.
double mixture_log_likelihood(const Matrix& data, const MixtureParams& params);

// Rows are mu + y / sqrt(w) with y ~ N(0, sigma) and w ~ Gamma(nu/2, rate nu/2).
Matrix t_sample(const TParams& params, int n, std::uint64_t seed);

struct LabeledSample
{
    Matrix x;
    std::vector<int> labels;
};

LabeledSample mixture_sample(const MixtureParams& params, int n, std::uint64_t seed);
}  // namespace thddc
