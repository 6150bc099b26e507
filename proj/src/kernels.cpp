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

#include "thddc/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace thddc::kernels
{
namespace serial
{
Vector subspace_distances(const Matrix& data, const Vector& mu, const Matrix& orient,
                          const Vector& a, double b)
{
    const Eigen::Index n = data.rows();
    const Eigen::Index d = a.size();
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const Vector y = data.row(i).transpose() - mu;
        const Vector c = orient.transpose() * y;
        double dist = 0.0;
        for (Eigen::Index j = 0; j < c.size(); ++j)
        {
            dist += c(j) * c(j) / (j < d ? a(j) : b);
        }
        out(i) = dist;
    }
    return out;
}

Matrix weighted_scatter(const Matrix& data, const Vector& weights, const Vector& mu)
{
    const Eigen::Index p = data.cols();
    Matrix s = Matrix::Zero(p, p);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
    {
        if (weights(i) == 0.0)
        {
            continue;
        }
        const Vector y = data.row(i).transpose() - mu;
        s.noalias() += weights(i) * y * y.transpose();
    }
    return s;
}
}  // namespace serial

namespace parallel
{
Vector subspace_distances(const Matrix& data, const Vector& mu, const Matrix& orient,
                          const Vector& a, double b)
{
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    const Eigen::Index d = a.size();
    Vector scale(p);
    scale.head(d) = a.cwiseInverse();
    scale.tail(p - d).setConstant(1.0 / b);

    Vector out(n);
#pragma omp parallel
    {
        Vector y(p);
        Vector c(p);
#pragma omp for schedule(static)
        for (Eigen::Index i = 0; i < n; ++i)
        {
            y.noalias() = data.row(i).transpose() - mu;
            c.noalias() = orient.transpose() * y;
            out(i) = c.cwiseAbs2().dot(scale);
        }
    }
    return out;
}

Matrix weighted_scatter(const Matrix& data, const Vector& weights, const Vector& mu)
{
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    const Eigen::Index block =
        std::max(kScatterMinBlockRows, (n + kScatterMaxBlocks - 1) / kScatterMaxBlocks);
    const Eigen::Index n_blocks = (n + block - 1) / block;

    std::vector<Matrix> partial(static_cast<std::size_t>(n_blocks));
#pragma omp parallel for schedule(static)
    for (Eigen::Index k = 0; k < n_blocks; ++k)
    {
        const Eigen::Index begin = k * block;
        const Eigen::Index rows = std::min(block, n - begin);
        const Matrix centered = data.middleRows(begin, rows).rowwise() - mu.transpose();
        const Matrix weighted = centered.array().colwise() * weights.segment(begin, rows).array();
        partial[static_cast<std::size_t>(k)].noalias() = weighted.transpose() * centered;
    }

    Matrix s = Matrix::Zero(p, p);
    for (const auto& m : partial)
    {
        s += m;
    }
    return (s + s.transpose()) * 0.5;
}
}  // namespace parallel
}  // namespace thddc::kernels
