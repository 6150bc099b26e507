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

#include "thddc/tdist.hpp"

#include <cmath>
#include <numbers>

#include "thddc/error.hpp"

namespace thddc
{
namespace
{
struct Factored
{
    Eigen::LLT<Matrix> llt;
    double log_det = 0.0;
};

Factored factor(const Matrix& sigma)
{
    if (!is_positive_definite(sigma))
    {
        throw SingularMatrixError("scale matrix is not positive definite");
    }
    Factored f{Eigen::LLT<Matrix>(sigma), 0.0};
    f.log_det = 2.0 * f.llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return f;
}

double log_density_factored(const Vector& x, const Vector& mu, const Factored& f, double nu)
{
    const double p = static_cast<double>(x.size());
    const double delta = f.llt.matrixL().solve(x - mu).squaredNorm();
    return std::lgamma((nu + p) / 2.0) - std::lgamma(nu / 2.0) - 0.5 * f.log_det -
           0.5 * p * std::log(std::numbers::pi * nu) -
           0.5 * (nu + p) * std::log1p(delta / nu);
}

void draw_t_row(const Vector& mu, const Matrix& lower, double nu, std::mt19937_64& rng,
                Eigen::Ref<Vector> out)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::gamma_distribution<double> mixing(nu / 2.0, 2.0 / nu);
    Vector z(mu.size());
    for (Eigen::Index j = 0; j < z.size(); ++j)
    {
        z(j) = normal(rng);
    }
    const double w = mixing(rng);
    out = mu + lower * z / std::sqrt(w);
}
}  // namespace

void validate(const TParams& params)
{
    const Eigen::Index p = params.mu.size();
    if (p == 0 || params.sigma.rows() != p || params.sigma.cols() != p)
    {
        throw ShapeError("t parameters: mu and sigma dimensions disagree");
    }
    if (!(params.nu > 0.0) || !std::isfinite(params.nu))
    {
        throw DomainError("t parameters: nu must be positive and finite");
    }
    if (!params.mu.allFinite())
    {
        throw NumericInputError("t parameters: mu has non-finite entries");
    }
    if (!is_positive_definite(params.sigma))
    {
        throw SingularMatrixError("t parameters: sigma is not positive definite");
    }
}

void validate(const MixtureParams& params)
{
    const auto g = static_cast<Eigen::Index>(params.components.size());
    if (g == 0 || params.proportions.size() != g)
    {
        throw ShapeError("mixture: proportions and components disagree in length");
    }
    if ((params.proportions.array() <= 0.0).any() ||
        std::abs(params.proportions.sum() - 1.0) > 1e-12)
    {
        throw DomainError("mixture: proportions must be positive and sum to one");
    }
    const Eigen::Index p = params.components.front().mu.size();
    for (const auto& c : params.components)
    {
        validate(c);
        if (c.mu.size() != p)
        {
            throw ShapeError("mixture: components have different dimensions");
        }
    }
}

double t_log_density(const Vector& x, const TParams& params)
{
    validate(params);
    if (x.size() != params.mu.size())
    {
        throw ShapeError("t_log_density: dimension mismatch");
    }
    return log_density_factored(x, params.mu, factor(params.sigma), params.nu);
}

double mixture_log_likelihood(const Matrix& data, const MixtureParams& params)
{
    validate(params);
    const Eigen::Index g = params.proportions.size();
    if (data.cols() != params.components.front().mu.size())
    {
        throw ShapeError("mixture_log_likelihood: data and component dimensions differ");
    }
    std::vector<Factored> factors;
    factors.reserve(static_cast<std::size_t>(g));
    for (const auto& c : params.components)
    {
        factors.push_back(factor(c.sigma));
    }

    double total = 0.0;
    Vector terms(g);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
    {
        const Vector x = data.row(i).transpose();
        for (Eigen::Index k = 0; k < g; ++k)
        {
            const auto& c = params.components[static_cast<std::size_t>(k)];
            terms(k) = std::log(params.proportions(k)) +
                       log_density_factored(x, c.mu, factors[static_cast<std::size_t>(k)], c.nu);
        }
        total += log_sum_exp(terms);
    }
    return total;
}

Matrix t_sample(const TParams& params, int n, std::uint64_t seed)
{
    validate(params);
    if (n < 1)
    {
        throw DomainError("t_sample: n must be positive");
    }
    std::mt19937_64 rng(seed);
    const Matrix lower = Eigen::LLT<Matrix>(params.sigma).matrixL();
    Matrix out(n, params.mu.size());
    Vector row(params.mu.size());
    for (int i = 0; i < n; ++i)
    {
        draw_t_row(params.mu, lower, params.nu, rng, row);
        out.row(i) = row.transpose();
    }
    return out;
}

LabeledSample mixture_sample(const MixtureParams& params, int n, std::uint64_t seed)
{
    validate(params);
    if (n < 1)
    {
        throw DomainError("mixture_sample: n must be positive");
    }
    std::mt19937_64 rng(seed);
    std::vector<Matrix> lowers;
    for (const auto& c : params.components)
    {
        lowers.emplace_back(Eigen::LLT<Matrix>(c.sigma).matrixL());
    }
    std::discrete_distribution<int> pick(params.proportions.data(),
                                         params.proportions.data() + params.proportions.size());

    const Eigen::Index p = params.components.front().mu.size();
    LabeledSample out{Matrix(n, p), std::vector<int>(static_cast<std::size_t>(n))};
    Vector row(p);
    for (int i = 0; i < n; ++i)
    {
        const int g = pick(rng);
        const auto& c = params.components[static_cast<std::size_t>(g)];
        draw_t_row(c.mu, lowers[static_cast<std::size_t>(g)], c.nu, rng, row);
        out.x.row(i) = row.transpose();
        out.labels[static_cast<std::size_t>(i)] = g;
    }
    return out;
}
}  // namespace thddc
