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

// Random fixtures shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "thddc/ecm.hpp"

namespace fixture
{
inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols)
{
    std::normal_distribution<double> z;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
    {
        for (Eigen::Index i = 0; i < rows; ++i)
        {
            m(i, j) = z(rng);
        }
    }
    return m;
}

inline Eigen::MatrixXd random_orthonormal(std::mt19937_64& rng, Eigen::Index p)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(rng, p, p));
    return qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
}

// A valid component in p dimensions with intrinsic dimension d.
inline thddc::ComponentState random_state(std::mt19937_64& rng, int p, int d, double pi = 0.5)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    thddc::ComponentState s;
    s.pi = pi;
    s.mu = 2.0 * gaussian_matrix(rng, p, 1).col(0);
    s.orient = random_orthonormal(rng, p);
    s.b = 0.05 + 0.5 * unif(rng);
    std::vector<double> a(static_cast<std::size_t>(d));
    for (double& v : a)
    {
        v = s.b + 0.1 + 4.0 * unif(rng);
    }
    std::sort(a.rbegin(), a.rend());
    s.a = Eigen::Map<Eigen::VectorXd>(a.data(), d);
    s.d = d;
    s.nu = 0.5 + 30.0 * unif(rng);
    return s;
}

// Data drawn near the component means, mixed with wider noise.
inline Eigen::MatrixXd random_points(std::mt19937_64& rng, const std::vector<thddc::ComponentState>& states,
                                     int n)
{
    const Eigen::Index p = states.front().mu.size();
    Eigen::MatrixXd x = 3.0 * gaussian_matrix(rng, n, p);
    for (int i = 0; i < n; ++i)
    {
        x.row(i) += states[static_cast<std::size_t>(i) % states.size()].mu.transpose();
    }
    return x;
}
}  // namespace fixture
