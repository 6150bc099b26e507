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

#include "thddc/numerics.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "thddc/error.hpp"
#include "thddc/kernels.hpp"

namespace thddc
{
EigenPair sym_eigen(const Matrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0)
    {
        throw ShapeError("sym_eigen: matrix must be square and non-empty");
    }
    if (!m.allFinite())
    {
        throw NumericInputError("sym_eigen: matrix has non-finite entries");
    }
    const Matrix sym = (m + m.transpose()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
    {
        throw NumericInputError("sym_eigen: eigensolver did not converge");
    }

    // Eigen returns ascending order.
    const Eigen::Index p = m.rows();
    EigenPair out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
    for (Eigen::Index j = 0; j < p; ++j)
    {
        Eigen::Index at = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&at);
        if (out.vectors(at, j) < 0.0)
        {
            out.vectors.col(j) *= -1.0;
        }
    }
    return out;
}

double log_gamma(double x)
{
    if (!(x > 0.0))
    {
        throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
    }
    return std::lgamma(x);
}

double digamma(double x)
{
    if (!(x > 0.0))
    {
        throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
    }
    return boost::math::digamma(x);
}

bool is_positive_definite(const Matrix& sigma)
{
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || !sigma.allFinite())
    {
        return false;
    }
    const Vector values = sym_eigen(sigma).values;
    const double top = values(0);
    const double bottom = values(values.size() - 1);
    return top > 0.0 && bottom > kPdRelativeThreshold * top;
}

double mahalanobis(const Vector& x, const Vector& mu, const Matrix& sigma)
{
    if (x.size() != mu.size() || sigma.rows() != x.size() || sigma.cols() != x.size())
    {
        throw ShapeError("mahalanobis: dimension mismatch");
    }
    if (!is_positive_definite(sigma))
    {
        throw SingularMatrixError("mahalanobis: scale matrix is not positive definite");
    }
    const Eigen::LLT<Matrix> llt(sigma);
    const Vector white = llt.matrixL().solve(x - mu);
    return white.squaredNorm();
}

Matrix weighted_scatter(const Matrix& data, const Vector& weights, const Vector& mu,
                        double normalizer)
{
    if (weights.size() != data.rows() || mu.size() != data.cols())
    {
        throw ShapeError("weighted_scatter: dimension mismatch");
    }
    if ((weights.array() < 0.0).any())
    {
        throw DomainError("weighted_scatter: weights must be non-negative");
    }
    if (!(weights.array() > 0.0).any())
    {
        throw DegenerateComponentError("weighted_scatter: all weights are zero");
    }
    if (!(normalizer > 0.0))
    {
        throw DomainError("weighted_scatter: normalizer must be positive");
    }
    return kernels::parallel::weighted_scatter(data, weights, mu) / normalizer;
}

double log_sum_exp(const Eigen::Ref<const Vector>& v)
{
    const double top = v.maxCoeff();
    if (!std::isfinite(top))
    {
        return top;
    }
    return top + std::log((v.array() - top).exp().sum());
}
}  // namespace thddc
