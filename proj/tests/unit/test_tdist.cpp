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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "thddc/error.hpp"
#include "thddc/tdist.hpp"

using namespace thddc;

namespace
{
TParams reference_params(double nu)
{
    TParams t;
    t.mu = (Vector(4) << 0.5, -1.0, 2.0, 0.0).finished();
    t.sigma.resize(4, 4);
    t.sigma << 2.0, 0.3, 0.1, 0.0,  //
        0.3, 1.5, -0.2, 0.1,        //
        0.1, -0.2, 1.0, 0.05,       //
        0.0, 0.1, 0.05, 0.8;
    t.nu = nu;
    return t;
}

struct Frozen
{
    double x[4];
    double nu;
    double value;
};

// Generated by tests/oracles/t_density.py (mpmath, 50 digits).
constexpr Frozen kFrozen[] = {
    {{0.5, -1.0, 2.0, 0.0}, 1.0, -2.9738473341492767166},
    {{1.0, 0.0, 1.0, -1.0}, 2.5, -5.9327944777198802172},
    {{3.0, -2.0, 0.0, 1.5}, 10.0, -10.000635189029479788},
    {{-4.0, 5.0, 2.0, 3.0}, 0.5, -12.844437985626697924},
    {{0.0, 0.0, 0.0, 0.0}, 100.0, -6.2651021907137980359},
};
}  // namespace

TEST_CASE("t_log_density matches high-precision reference values")
{
    for (const auto& f : kFrozen)
    {
        const Vector x = Eigen::Map<const Vector>(f.x, 4);
        CHECK(t_log_density(x, reference_params(f.nu)) == doctest::Approx(f.value).epsilon(1e-13));
    }
}

TEST_CASE("t density integrates to one")
{
    // p = 1 under x = tan(t).
    TParams one{Vector::Zero(1), Matrix::Constant(1, 1, 1.7), 1.3};
    const int m = 200000;
    double total = 0.0;
    for (int k = 0; k < m; ++k)
    {
        const double t = -M_PI / 2 + (k + 0.5) * M_PI / m;
        const double x = std::tan(t);
        total += std::exp(t_log_density(Vector::Constant(1, x), one)) / (std::cos(t) * std::cos(t));
    }
    CHECK(total * M_PI / m == doctest::Approx(1.0).epsilon(1e-6));

    // p = 2 in polar coordinates with r = tan(t); the scale is isotropic.
    TParams two{Vector::Zero(2), 0.6 * Matrix::Identity(2, 2), 2.2};
    const int mr = 20000;
    double radial = 0.0;
    for (int k = 0; k < mr; ++k)
    {
        const double t = (k + 0.5) * (M_PI / 2) / mr;
        const double r = std::tan(t);
        radial += std::exp(t_log_density(Vector::Constant(2, r / std::sqrt(2.0)), two)) * r /
                  (std::cos(t) * std::cos(t));
    }
    CHECK(2 * M_PI * radial * (M_PI / 2) / mr == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("t_log_density agrees with the dense oracle and rejects bad parameters")
{
    const TParams t = reference_params(3.5);
    const Vector x = (Vector(4) << 1, 2, 3, 4).finished();
    CHECK(t_log_density(x, t) == doctest::Approx(oracle::t_log_density(x, t.mu, t.sigma, t.nu)).epsilon(1e-12));

    TParams bad = t;
    bad.nu = 0.0;
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad = t;
    bad.sigma(0, 0) = -1.0;
    CHECK_THROWS(validate(bad));
    CHECK_THROWS_AS(t_log_density(Vector::Zero(3), t), ShapeError);
}

TEST_CASE("mixture_log_likelihood equals the naive sum")
{
    MixtureParams m;
    m.proportions = (Vector(2) << 0.3, 0.7).finished();
    m.components = {reference_params(2.0), reference_params(7.0)};
    m.components[1].mu.setConstant(3.0);
    const Matrix x = mixture_sample(m, 50, 3).x;
    double naive = 0.0;
    for (int i = 0; i < x.rows(); ++i)
    {
        double s = 0.0;
        for (int g = 0; g < 2; ++g)
        {
            const auto& c = m.components[static_cast<std::size_t>(g)];
            s += m.proportions(g) * std::exp(oracle::t_log_density(x.row(i).transpose(), c.mu, c.sigma, c.nu));
        }
        naive += std::log(s);
    }
    CHECK(mixture_log_likelihood(x, m) == doctest::Approx(naive).epsilon(1e-12));

    m.proportions << 0.3, 0.6;
    CHECK_THROWS(validate(m));
}

TEST_CASE("t_sample moments and determinism")
{
    TParams t = reference_params(8.0);
    const Matrix x = t_sample(t, 200000, 42);
    const Vector mean = x.colwise().mean().transpose();
    CHECK((mean - t.mu).cwiseAbs().maxCoeff() < 0.02);
    const Matrix centered = x.rowwise() - mean.transpose();
    const Matrix cov = centered.transpose() * centered / double(x.rows() - 1);
    const Matrix expected = t.sigma * (t.nu / (t.nu - 2.0));
    CHECK((cov - expected).cwiseAbs().maxCoeff() < 0.06);
    CHECK(t_sample(t, 10, 42) == t_sample(t, 10, 42));
    CHECK_FALSE(t_sample(t, 10, 42) == t_sample(t, 10, 43));
}

TEST_CASE("mixture_sample proportions")
{
    MixtureParams m;
    m.proportions = (Vector(2) << 0.25, 0.75).finished();
    m.components = {reference_params(5.0), reference_params(5.0)};
    const LabeledSample s = mixture_sample(m, 40000, 1);
    int ones = 0;
    for (int l : s.labels)
    {
        ones += l == 1;
    }
    CHECK(ones / 40000.0 == doctest::Approx(0.75).epsilon(0.02));
}
