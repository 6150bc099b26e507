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

#include <Eigen/Dense>

namespace thddc
{
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A matrix is treated as positive definite when its smallest eigenvalue
// exceeds this fraction of its largest.
inline constexpr double kPdRelativeThreshold = 1e-12;

// Spectral decomposition of a symmetric matrix. values are sorted
// non-increasing and column j of vectors pairs with values(j). Each column
// has its largest-magnitude entry non-negative.
struct EigenPair
{
    Vector values;
    Matrix vectors;
};

// Throws NumericInputError on non-finite entries. The input is symmetrized
// as (m + m') / 2 before solving.
EigenPair sym_eigen(const Matrix& m);

// ln Gamma(x); DomainError for x <= 0.
double log_gamma(double x);

// d/dx ln Gamma(x); DomainError for x <= 0.
double digamma(double x);

bool is_positive_definite(const Matrix& sigma);

// (x - mu)' sigma^{-1} (x - mu). SingularMatrixError unless sigma is
// positive definite.
double mahalanobis(const Vector& x, const Vector& mu, const Matrix& sigma);

// sum_i w_i (x_i - mu)(x_i - mu)' / normalizer, with x_i the rows of data.
// DegenerateComponentError when no weight is positive.
Matrix weighted_scatter(const Matrix& data, const Vector& weights, const Vector& mu,
                        double normalizer);

// log(sum_k exp(v_k)), stable for large magnitudes.
double log_sum_exp(const Eigen::Ref<const Vector>& v);
}  // namespace thddc
