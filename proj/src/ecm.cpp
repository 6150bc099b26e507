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

#include "thddc/ecm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "thddc/criteria.hpp"
#include "thddc/error.hpp"
#include "thddc/kernels.hpp"

namespace thddc
{
namespace
{
// Variances at or below this fraction of the largest eigenvalue mark a
// component whose scatter has collapsed onto a subspace (for instance a
// group holding d + 1 points). The likelihood is unbounded there, so the
// attempt is abandoned instead of climbing towards the singularity.
constexpr double kEigenFloorRel = 1e-10;

double log_weighted_density(double dist, const ComponentState& s, double p, double log_det,
                            bool gaussian)
{
    if (gaussian)
    {
        return std::log(s.pi) - 0.5 * (log_det + p * std::log(2.0 * std::numbers::pi) + dist);
    }
    const double nu = s.nu;
    return std::log(s.pi) + std::lgamma((nu + p) / 2.0) - std::lgamma(nu / 2.0) - 0.5 * log_det -
           0.5 * p * std::log(std::numbers::pi * nu) - 0.5 * (nu + p) * std::log1p(dist / nu);
}

Matrix distance_matrix(const Matrix& data, const std::vector<ComponentState>& states)
{
    Matrix dist(data.rows(), static_cast<Eigen::Index>(states.size()));
    for (std::size_t g = 0; g < states.size(); ++g)
    {
        const auto& s = states[g];
        dist.col(static_cast<Eigen::Index>(g)) =
            kernels::parallel::subspace_distances(data, s.mu, s.orient, s.a, s.b);
    }
    return dist;
}

Matrix log_weight_matrix(const Matrix& dist, const std::vector<ComponentState>& states,
                         bool gaussian)
{
    const double p = static_cast<double>(states.front().mu.size());
    Matrix out(dist.rows(), dist.cols());
    for (Eigen::Index g = 0; g < dist.cols(); ++g)
    {
        const auto& s = states[static_cast<std::size_t>(g)];
        const double log_det = s.log_det();
        for (Eigen::Index i = 0; i < dist.rows(); ++i)
        {
            out(i, g) = log_weighted_density(dist(i, g), s, p, log_det, gaussian);
        }
    }
    return out;
}

double total_loglik(const Matrix& log_weights)
{
    double total = 0.0;
    for (Eigen::Index i = 0; i < log_weights.rows(); ++i)
    {
        total += log_sum_exp(log_weights.row(i).transpose());
    }
    return total;
}

EStep estep_from_distances(const Matrix& dist, const std::vector<ComponentState>& states,
                           bool gaussian)
{
    const Eigen::Index n = dist.rows();
    const Eigen::Index groups = dist.cols();
    const double p = static_cast<double>(states.front().mu.size());
    const Matrix log_w = log_weight_matrix(dist, states, gaussian);

    EStep out;
    out.resp.z.resize(n, groups);
    Vector row_lse(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double lse = log_sum_exp(log_w.row(i).transpose());
        row_lse(i) = lse;
        out.resp.z.row(i) = (log_w.row(i).array() - lse).exp().matrix();
    }
    out.loglik = row_lse.sum();

    if (gaussian)
    {
        out.resp.u = Matrix::Ones(n, groups);
    }
    else
    {
        out.resp.u.resize(n, groups);
        for (Eigen::Index g = 0; g < groups; ++g)
        {
            const double nu = states[static_cast<std::size_t>(g)].nu;
            out.resp.u.col(g) = ((nu + p) / (nu + dist.col(g).array())).matrix();
        }
    }
    const Vector n_g = out.resp.z.colwise().sum().transpose();
    for (Eigen::Index g = 0; g < groups; ++g)
    {
        if (n_g(g) < 1.0)
        {
            out.empty_components.push_back(static_cast<int>(g));
        }
    }
    return out;
}

// Spectral statistics of one group: orientation and the variances along its
// columns (eigenvalues for a free orientation, diag(D' S_g D) for a common one).
struct GroupSpectrum
{
    Matrix orient;
    Vector lambda;
};

struct ScaleFit
{
    std::vector<Vector> a;
    std::vector<double> b;
    // sum_g n_g [log|Delta_g| + tr(Delta_g^{-1} D_g' S_g D_g)], to be minimized.
    double objective = 0.0;
};

double floored_mean(const Eigen::Ref<const Vector>& v, double floor)
{
    return std::max(v.mean(), floor);
}

ScaleFit scale_fit(const std::vector<GroupSpectrum>& spectra, const Vector& n_g,
                   const std::vector<int>& dims, const ModelSpec& spec, double floor)
{
    const auto groups = spectra.size();
    const Eigen::Index p = spectra.front().lambda.size();
    ScaleFit out;
    out.a.resize(groups);
    out.b.resize(groups);

    // Subspace eigenvalues.
    if (spec.a == AConstraint::C)
    {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t g = 0; g < groups; ++g)
        {
            num += n_g(static_cast<Eigen::Index>(g)) * spectra[g].lambda.head(dims[g]).sum();
            den += n_g(static_cast<Eigen::Index>(g)) * dims[g];
        }
        const double common = std::max(num / den, floor);
        for (std::size_t g = 0; g < groups; ++g)
        {
            out.a[g] = Vector::Constant(dims[g], common);
        }
    }
    else if (spec.a == AConstraint::G)
    {
        const int d = dims.front();
        Vector common = Vector::Zero(d);
        for (std::size_t g = 0; g < groups; ++g)
        {
            common += n_g(static_cast<Eigen::Index>(g)) * spectra[g].lambda.head(d);
        }
        common = (common / n_g.sum()).cwiseMax(floor);
        for (std::size_t g = 0; g < groups; ++g)
        {
            out.a[g] = common;
        }
    }
    else
    {
        for (std::size_t g = 0; g < groups; ++g)
        {
            const auto head = spectra[g].lambda.head(dims[g]);
            out.a[g] = spec.a == AConstraint::D
                           ? Vector::Constant(dims[g], floored_mean(head, floor))
                           : Vector(head.cwiseMax(floor));
        }
    }

    // Noise variance outside the subspace.
    if (spec.b == Sharing::C)
    {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t g = 0; g < groups; ++g)
        {
            num += n_g(static_cast<Eigen::Index>(g)) * spectra[g].lambda.tail(p - dims[g]).sum();
            den += n_g(static_cast<Eigen::Index>(g)) * static_cast<double>(p - dims[g]);
        }
        std::fill(out.b.begin(), out.b.end(), std::max(num / den, floor));
    }
    else
    {
        for (std::size_t g = 0; g < groups; ++g)
        {
            out.b[g] = floored_mean(spectra[g].lambda.tail(p - dims[g]), floor);
        }
    }

    for (std::size_t g = 0; g < groups; ++g)
    {
        const Vector& lam = spectra[g].lambda;
        const int d = dims[g];
        const double b = out.b[g];
        double term = static_cast<double>(p - d) * std::log(b) + lam.tail(p - d).sum() / b;
        term += out.a[g].array().log().sum() +
                (lam.head(d).array() / out.a[g].array()).sum();
        out.objective += n_g(static_cast<Eigen::Index>(g)) * term;
    }
    return out;
}

bool valid_dims(const std::vector<ComponentState>& previous, std::size_t groups, Eigen::Index p)
{
    if (previous.size() != groups)
    {
        return false;
    }
    return std::all_of(previous.begin(), previous.end(),
                       [p](const ComponentState& s) { return s.d >= 1 && s.d <= p - 1; });
}

double nu_from_k(double k, double nu_old)
{
    const double ek = std::exp(k);
    const double correction = std::exp(digamma(nu_old / 2.0)) + (1.0 - nu_old) / 2.0;
    return (-ek + 2.0 * ek * correction) / (1.0 - ek);
}
}  // namespace

int FitConfig::restarts() const
{
    if (n_init > 0)
    {
        return n_init;
    }
    return init == InitMethod::kmeans ? 1 : 10;
}

void validate(const FitConfig& config)
{
    if (config.n_init < 0)
    {
        throw UsageError("n_init must be non-negative");
    }
    if (config.max_iter < 3)
    {
        throw UsageError("max_iter must be at least 3");
    }
    if (!(config.epsilon > 0.0))
    {
        throw UsageError("epsilon must be positive");
    }
    if (!(config.scree_threshold > 0.0 && config.scree_threshold < 1.0))
    {
        throw UsageError("scree threshold must lie in (0, 1)");
    }
    if (!(config.nu_min > 0.0 && config.nu_min <= config.nu_max))
    {
        throw UsageError("nu bounds must satisfy 0 < nu_min <= nu_max");
    }
    if (config.max_restarts < 0)
    {
        throw UsageError("max_restarts must be non-negative");
    }
}

Matrix ComponentState::covariance() const
{
    const Eigen::Index p = mu.size();
    Vector delta(p);
    delta.head(d) = a;
    delta.tail(p - d).setConstant(b);
    return orient * delta.asDiagonal() * orient.transpose();
}

double ComponentState::log_det() const
{
    return a.array().log().sum() + static_cast<double>(mu.size() - d) * std::log(b);
}

void validate(const ComponentState& state, Eigen::Index p)
{
    if (state.mu.size() != p || state.orient.rows() != p || state.orient.cols() != p)
    {
        throw ShapeError("component state: dimension mismatch");
    }
    if (state.d < 1 || state.d > p - 1 || state.a.size() != state.d)
    {
        throw ConstraintViolationError("component state: intrinsic dimension out of range");
    }
    if (!(state.b > 0.0) || (state.a.array() <= 0.0).any())
    {
        throw DomainError("component state: eigenvalues must be positive");
    }
    for (Eigen::Index j = 1; j < state.d; ++j)
    {
        if (state.a(j) > state.a(j - 1) * (1.0 + 1e-12))
        {
            throw ConstraintViolationError("component state: a must be non-increasing");
        }
    }
    const Matrix gram = state.orient.transpose() * state.orient;
    if ((gram - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() > 1e-10)
    {
        throw NumericInputError("component state: orientation is not orthonormal");
    }
    if (!(state.pi > 0.0 && state.pi <= 1.0) || !(state.nu > 0.0))
    {
        throw DomainError("component state: pi or nu out of range");
    }
}

Projection project(const Vector& x, const ComponentState& state)
{
    const Eigen::Index p = state.mu.size();
    const Vector y = x - state.mu;
    const auto top = state.orient.leftCols(state.d);
    const auto rest = state.orient.rightCols(p - state.d);
    return {state.mu + top * (top.transpose() * y), state.mu + rest * (rest.transpose() * y)};
}

double cost_K(const Vector& x, const ComponentState& state, bool gaussian_mode)
{
    const Eigen::Index p = state.mu.size();
    const Projection proj = project(x, state);
    // |mu - P(x)|^2 in the metric orient_d diag(a)^{-1} orient_d'.
    const Vector coords = state.orient.leftCols(state.d).transpose() * (proj.in_subspace - state.mu);
    const double in_dist = (coords.array().square() / state.a.array()).sum();
    const double out_dist = (x - proj.in_subspace).squaredNorm() / state.b;
    return -2.0 * log_weighted_density(in_dist + out_dist, state, static_cast<double>(p),
                                       state.log_det(), gaussian_mode);
}

EStep e_step(const Matrix& data, const std::vector<ComponentState>& states, bool gaussian_mode)
{
    if (states.empty())
    {
        throw ShapeError("e_step: no components");
    }
    for (const auto& s : states)
    {
        validate(s, data.cols());
    }
    return estep_from_distances(distance_matrix(data, states), states, gaussian_mode);
}

PiMu update_pi_mu(const Matrix& data, const Responsibilities& resp)
{
    const Eigen::Index n = data.rows();
    if (resp.z.rows() != n || resp.u.rows() != n || resp.z.cols() != resp.u.cols())
    {
        throw ShapeError("update_pi_mu: responsibilities do not match the data");
    }
    const Eigen::Index groups = resp.z.cols();
    PiMu out;
    out.pi = resp.z.colwise().sum().transpose() / static_cast<double>(n);
    out.mu.reserve(static_cast<std::size_t>(groups));
    for (Eigen::Index g = 0; g < groups; ++g)
    {
        const Vector w = resp.z.col(g).cwiseProduct(resp.u.col(g));
        const double total = w.sum();
        if (!(total > 0.0))
        {
            throw DegenerateComponentError("component " + std::to_string(g + 1) +
                                           " has zero total weight");
        }
        out.mu.emplace_back(data.transpose() * w / total);
    }
    return out;
}

NuUpdate update_nu(const Responsibilities& resp, const std::vector<ComponentState>& states,
                   int p, bool constrained, double nu_min, double nu_max)
{
    const auto groups = static_cast<Eigen::Index>(states.size());
    if (resp.z.cols() != groups || resp.u.cols() != groups)
    {
        throw ShapeError("update_nu: responsibilities do not match the states");
    }
    const Matrix weighted =
        resp.z.cwiseProduct((resp.u.array().log() - resp.u.array()).matrix());

    NuUpdate out;
    out.nu.resize(static_cast<std::size_t>(groups));
    auto solve = [&](double mean_term, double nu_old) {
        const double half = (nu_old + p) / 2.0;
        const double k = -1.0 - mean_term - digamma(half) + std::log(half);
        double nu = nu_from_k(k, nu_old);
        if (std::isnan(nu) || nu <= 0.0 || !(k > 0.0))
        {
            out.fell_back = true;
            nu = nu_old;
        }
        return std::clamp(nu, nu_min, nu_max);
    };

    if (constrained)
    {
        const double mean_term = weighted.sum() / resp.z.sum();
        const double nu = solve(mean_term, states.front().nu);
        std::fill(out.nu.begin(), out.nu.end(), nu);
    }
    else
    {
        for (Eigen::Index g = 0; g < groups; ++g)
        {
            const double mean_term = weighted.col(g).sum() / resp.z.col(g).sum();
            out.nu[static_cast<std::size_t>(g)] =
                solve(mean_term, states[static_cast<std::size_t>(g)].nu);
        }
    }
    return out;
}

int scree_dimension(const Vector& eigvals, double threshold)
{
    const Eigen::Index p = eigvals.size();
    if (p < 2)
    {
        throw DimensionError("scree: need at least two eigenvalues");
    }
    const Vector gaps = eigvals.head(p - 1) - eigvals.tail(p - 1);
    const double largest = gaps.maxCoeff();
    if (!(largest > 0.0))
    {
        return 1;
    }
    int d = 1;
    for (Eigen::Index j = 0; j < p - 1; ++j)
    {
        if (gaps(j) >= threshold * largest)
        {
            d = static_cast<int>(j) + 1;
        }
    }
    return d;
}

DimensionAssignment select_dims(const std::vector<Vector>& eigvals, const Vector& n_g,
                                const ModelSpec& spec, const FitConfig& config, int n)
{
    if (eigvals.empty() || n_g.size() != static_cast<Eigen::Index>(eigvals.size()))
    {
        throw ShapeError("select_dims: spectra and group sizes disagree");
    }
    const Eigen::Index p = eigvals.front().size();
    if (p < 2)
    {
        throw DimensionError("select_dims: p must be at least 2");
    }
    const int groups = static_cast<int>(eigvals.size());
    const bool common = spec.dim == Sharing::C || spec.orient == Sharing::C;

    double top = 0.0;
    for (const auto& v : eigvals)
    {
        top = std::max(top, v.maxCoeff());
    }
    const double floor = std::max(kEigenFloorRel * top, std::numeric_limits<double>::min());

    // -n_g (d log mean(top d) + (p - d) log mean(rest)), the d-dependent part
    // of twice the per-group log-likelihood.
    auto fit_term = [&](int g, int d) {
        const Vector& v = eigvals[static_cast<std::size_t>(g)];
        const double a = floored_mean(v.head(d), floor);
        const double b = floored_mean(v.tail(p - d), floor);
        return -n_g(g) * (d * std::log(a) + static_cast<double>(p - d) * std::log(b));
    };
    const double log_n = std::log(static_cast<double>(n));

    DimensionAssignment out;
    out.dims.assign(static_cast<std::size_t>(groups), 1);
    if (common)
    {
        int chosen = 1;
        if (config.dim_method == DimMethod::scree)
        {
            Vector pooled = Vector::Zero(p);
            for (int g = 0; g < groups; ++g)
            {
                pooled += n_g(g) * eigvals[static_cast<std::size_t>(g)];
            }
            chosen = scree_dimension(pooled / n_g.sum(), config.scree_threshold);
        }
        else
        {
            double best = -std::numeric_limits<double>::infinity();
            for (int d = 1; d <= p - 1; ++d)
            {
                double crit = 0.0;
                for (int g = 0; g < groups; ++g)
                {
                    crit += fit_term(g, d);
                }
                const DimensionAssignment trial{std::vector<int>(groups, d)};
                crit -= free_param_count(spec, groups, static_cast<int>(p), trial, config.rho) *
                        log_n;
                if (crit > best)
                {
                    best = crit;
                    chosen = d;
                }
            }
        }
        std::fill(out.dims.begin(), out.dims.end(), chosen);
        return out;
    }

    for (int g = 0; g < groups; ++g)
    {
        if (config.dim_method == DimMethod::scree)
        {
            out.dims[static_cast<std::size_t>(g)] =
                scree_dimension(eigvals[static_cast<std::size_t>(g)], config.scree_threshold);
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (int d = 1; d <= p - 1; ++d)
        {
            // Other groups sit at d = 1; the count is additive over groups,
            // so they only shift every candidate by the same constant.
            DimensionAssignment trial{std::vector<int>(groups, 1)};
            trial.dims[static_cast<std::size_t>(g)] = d;
            const double crit =
                fit_term(g, d) -
                free_param_count(spec, groups, static_cast<int>(p), trial, config.rho) * log_n;
            if (crit > best)
            {
                best = crit;
                out.dims[static_cast<std::size_t>(g)] = d;
            }
        }
    }
    return out;
}

std::vector<ComponentState> cm_step(const Matrix& data, const Responsibilities& resp,
                                    const ModelSpec& spec,
                                    const std::vector<ComponentState>& previous,
                                    const FitConfig& config)
{
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    if (p < 2)
    {
        throw DimensionError("cm_step: p must be at least 2");
    }
    const PiMu pimu = update_pi_mu(data, resp);
    const auto groups = static_cast<std::size_t>(resp.z.cols());
    const Vector n_g = resp.z.colwise().sum().transpose();
    for (std::size_t g = 0; g < groups; ++g)
    {
        if (n_g(static_cast<Eigen::Index>(g)) < 2.0)
        {
            throw DegenerateComponentError("component " + std::to_string(g + 1) + " has n_g = " +
                                           std::to_string(n_g(static_cast<Eigen::Index>(g))) +
                                           " < 2");
        }
    }

    std::vector<Matrix> scatter(groups);
    for (std::size_t g = 0; g < groups; ++g)
    {
        const auto col = static_cast<Eigen::Index>(g);
        const Vector w = resp.z.col(col).cwiseProduct(resp.u.col(col));
        scatter[g] = weighted_scatter(data, w, pimu.mu[g], n_g(col));
        if (!scatter[g].allFinite())
        {
            throw NumericalError("cm_step: non-finite scatter matrix");
        }
    }

    std::vector<GroupSpectrum> spectra(groups);
    if (spec.orient == Sharing::C)
    {
        Matrix pooled = Matrix::Zero(p, p);
        for (std::size_t g = 0; g < groups; ++g)
        {
            pooled += (n_g(static_cast<Eigen::Index>(g)) / static_cast<double>(n)) * scatter[g];
        }
        const EigenPair common = sym_eigen(pooled);
        for (std::size_t g = 0; g < groups; ++g)
        {
            spectra[g].orient = common.vectors;
            spectra[g].lambda = (common.vectors.transpose() * scatter[g] * common.vectors).diagonal();
        }
    }
    else
    {
        for (std::size_t g = 0; g < groups; ++g)
        {
            EigenPair eig = sym_eigen(scatter[g]);
            spectra[g].orient = std::move(eig.vectors);
            spectra[g].lambda = std::move(eig.values);
        }
    }

    double top = 0.0;
    std::vector<Vector> eigvals(groups);
    for (std::size_t g = 0; g < groups; ++g)
    {
        eigvals[g] = spectra[g].lambda;
        top = std::max(top, spectra[g].lambda.maxCoeff());
    }
    if ((n_g.array() < 0.0).any() || !(top > 0.0))
    {
        throw DegenerateComponentError("cm_step: scatter matrices vanish");
    }
    const double floor = std::max(kEigenFloorRel * top, std::numeric_limits<double>::min());

    std::vector<int> dims = select_dims(eigvals, n_g, spec, config, static_cast<int>(n)).dims;
    ScaleFit scale = scale_fit(spectra, n_g, dims, spec, floor);
    if (valid_dims(previous, groups, p))
    {
        std::vector<int> old_dims(groups);
        std::transform(previous.begin(), previous.end(), old_dims.begin(),
                       [](const ComponentState& s) { return s.d; });
        if (old_dims != dims)
        {
            ScaleFit kept = scale_fit(spectra, n_g, old_dims, spec, floor);
            if (kept.objective < scale.objective)
            {
                dims = std::move(old_dims);
                scale = std::move(kept);
            }
        }
    }

    for (std::size_t g = 0; g < groups; ++g)
    {
        if (scale.b[g] <= floor || scale.a[g].minCoeff() <= floor)
        {
            throw DegenerateComponentError("component " + std::to_string(g + 1) +
                                           " collapsed onto a subspace (n_g = " +
                                           std::to_string(n_g(static_cast<Eigen::Index>(g))) + ")");
        }
    }

    std::vector<ComponentState> out(groups);
    for (std::size_t g = 0; g < groups; ++g)
    {
        auto& s = out[g];
        s.pi = pimu.pi(static_cast<Eigen::Index>(g));
        s.mu = pimu.mu[g];
        s.orient = std::move(spectra[g].orient);
        s.d = dims[g];
        s.a = std::move(scale.a[g]);
        s.b = scale.b[g];
        s.nu = previous.size() == groups
                   ? previous[g].nu
                   : std::clamp(config.nu_init, config.nu_min, config.nu_max);
    }
    return out;
}

std::vector<int> kmeans(const Matrix& data, int k, std::uint64_t seed, int restarts, double tol,
                        int max_iter)
{
    const Eigen::Index n = data.rows();
    if (k < 1 || k > n)
    {
        throw InfeasibleError("kmeans: need 1 <= k <= n");
    }
    std::mt19937_64 rng(seed);

    auto assign = [&](const Matrix& centers, std::vector<int>& labels, Vector& dist2) {
        for (Eigen::Index i = 0; i < n; ++i)
        {
            Eigen::Index best = 0;
            dist2(i) = (centers.rowwise() - data.row(i)).rowwise().squaredNorm().minCoeff(&best);
            labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        }
    };

    std::vector<int> best_labels;
    double best_inertia = std::numeric_limits<double>::infinity();
    std::vector<int> labels(static_cast<std::size_t>(n));
    Vector dist2(n);
    for (int r = 0; r < std::max(restarts, 1); ++r)
    {
        Matrix centers(k, data.cols());
        std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
        centers.row(0) = data.row(first(rng));
        Vector nearest = (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c)
        {
            Eigen::Index pick = 0;
            if (nearest.sum() > 0.0)
            {
                std::discrete_distribution<Eigen::Index> draw(nearest.data(),
                                                              nearest.data() + nearest.size());
                pick = draw(rng);
            }
            else
            {
                pick = first(rng);
            }
            centers.row(c) = data.row(pick);
            nearest = nearest.cwiseMin((data.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }

        for (int it = 0; it < max_iter; ++it)
        {
            assign(centers, labels, dist2);
            Matrix next = Matrix::Zero(k, data.cols());
            Vector counts = Vector::Zero(k);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                next.row(labels[static_cast<std::size_t>(i)]) += data.row(i);
                counts(labels[static_cast<std::size_t>(i)]) += 1.0;
            }
            for (int c = 0; c < k; ++c)
            {
                if (counts(c) > 0.0)
                {
                    next.row(c) /= counts(c);
                }
                else
                {
                    // Re-seed an empty cluster at the worst-served point.
                    Eigen::Index far = 0;
                    dist2.maxCoeff(&far);
                    next.row(c) = data.row(far);
                    dist2(far) = 0.0;
                }
            }
            const double shift = (next - centers).rowwise().norm().maxCoeff();
            centers = std::move(next);
            if (shift < tol)
            {
                break;
            }
        }
        assign(centers, labels, dist2);
        const double inertia = dist2.sum();
        if (inertia < best_inertia)
        {
            best_inertia = inertia;
            best_labels = labels;
        }
    }
    return best_labels;
}

Responsibilities initialize(const Matrix& data, int groups, const FitConfig& config,
                            std::uint64_t seed)
{
    const Eigen::Index n = data.rows();
    if (groups < 1)
    {
        throw UsageError("initialize: G must be positive");
    }
    if (groups > n)
    {
        throw InfeasibleError("initialize: G = " + std::to_string(groups) + " exceeds n = " +
                              std::to_string(n));
    }
    std::vector<int> labels;
    if (config.init == InitMethod::kmeans)
    {
        labels = kmeans(data, groups, seed);
    }
    else
    {
        std::mt19937_64 rng(seed);
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        labels.assign(static_cast<std::size_t>(n), 0);
        std::uniform_int_distribution<int> pick(0, groups - 1);
        for (std::size_t r = 0; r < order.size(); ++r)
        {
            labels[static_cast<std::size_t>(order[r])] =
                r < static_cast<std::size_t>(groups) ? static_cast<int>(r) : pick(rng);
        }
    }
    Responsibilities out{Matrix::Zero(n, groups), Matrix::Ones(n, groups)};
    for (Eigen::Index i = 0; i < n; ++i)
    {
        out.z(i, labels[static_cast<std::size_t>(i)]) = 1.0;
    }
    return out;
}

std::vector<int> hard_labels(const Matrix& z)
{
    std::vector<int> out(static_cast<std::size_t>(z.rows()));
    for (Eigen::Index i = 0; i < z.rows(); ++i)
    {
        Eigen::Index best = 0;
        z.row(i).maxCoeff(&best);
        out[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b)
{
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

DimensionAssignment FitResult::dims() const
{
    DimensionAssignment out;
    for (const auto& s : states)
    {
        out.dims.push_back(s.d);
    }
    return out;
}

namespace
{
// Applies the closed-form nu update, keeping each proposal only when it does
// not lower the observed log-likelihood.
void guarded_nu_step(const Matrix& dist, const Responsibilities& resp,
                     std::vector<ComponentState>& states, const ModelSpec& spec,
                     const FitConfig& config, std::vector<std::string>& diagnostics, int iter)
{
    const int p = static_cast<int>(states.front().mu.size());
    const NuUpdate proposal = update_nu(resp, states, p, spec.nu == Sharing::C, config.nu_min,
                                        config.nu_max);
    if (proposal.fell_back)
    {
        diagnostics.push_back("iteration " + std::to_string(iter) +
                              ": nu update was non-finite, kept previous value");
    }
    double current = total_loglik(log_weight_matrix(dist, states, false));
    if (spec.nu == Sharing::C)
    {
        auto trial = states;
        for (auto& s : trial)
        {
            s.nu = proposal.nu.front();
        }
        const double l = total_loglik(log_weight_matrix(dist, trial, false));
        if (l >= current)
        {
            states = std::move(trial);
        }
        return;
    }
    for (std::size_t g = 0; g < states.size(); ++g)
    {
        const double old = states[g].nu;
        states[g].nu = proposal.nu[g];
        const double l = total_loglik(log_weight_matrix(dist, states, false));
        if (l >= current)
        {
            current = l;
        }
        else
        {
            states[g].nu = old;
        }
    }
}

FitResult fit_once(const Matrix& data, const ModelSpec& spec, int groups,
                   const FitConfig& config, std::uint64_t seed)
{
    FitResult out;
    out.spec = spec;
    out.groups = groups;
    out.n = static_cast<int>(data.rows());
    out.p = static_cast<int>(data.cols());
    out.gaussian_mode = config.gaussian_mode;

    Responsibilities resp = initialize(data, groups, config, seed);
    std::vector<ComponentState> states;
    for (int iter = 1; iter <= config.max_iter; ++iter)
    {
        states = cm_step(data, resp, spec, states, config);
        const Matrix dist = distance_matrix(data, states);
        if (!config.gaussian_mode)
        {
            guarded_nu_step(dist, resp, states, spec, config, out.diagnostics, iter);
        }
        EStep es = estep_from_distances(dist, states, config.gaussian_mode);
        if (!std::isfinite(es.loglik))
        {
            throw DegenerateComponentError("log-likelihood became non-finite at iteration " +
                                           std::to_string(iter));
        }
        if (!es.empty_components.empty())
        {
            throw DegenerateComponentError("component " +
                                           std::to_string(es.empty_components.front() + 1) +
                                           " emptied at iteration " + std::to_string(iter));
        }
        resp = std::move(es.resp);
        out.loglik_trace.push_back(es.loglik);
        out.iterations = iter;
        const std::size_t t = out.loglik_trace.size();
        if (t >= 3 && aitken_check(out.loglik_trace[t - 3], out.loglik_trace[t - 2],
                                   out.loglik_trace[t - 1], config.epsilon)
                          .converged)
        {
            out.converged = true;
            break;
        }
    }

    out.states = std::move(states);
    out.resp = std::move(resp);
    out.labels = hard_labels(out.resp.z);
    out.loglik = out.loglik_trace.back();
    out.n_params = free_param_count(spec, groups, out.p, out.dims(), config.rho);
    if (config.gaussian_mode)
    {
        out.n_params -= spec.nu == Sharing::U ? groups : 1;
    }
    out.bic = bic(out.loglik, out.n_params, out.n);
    return out;
}
}  // namespace

FitResult fit(const Matrix& data, const ModelSpec& spec, int groups, const FitConfig& config)
{
    validate(config);
    if (data.cols() < 2)
    {
        throw DimensionError("fit: p must be at least 2");
    }
    if (groups < 1 || data.rows() <= groups)
    {
        throw InfeasibleError("fit: need 1 <= G < n");
    }
    if (!data.allFinite())
    {
        throw NumericInputError("fit: data has non-finite entries");
    }

    std::optional<FitResult> best;
    std::vector<std::string> failures;
    int attempts = 0;
    int successes = 0;
    const int wanted = config.restarts();
    while (successes < wanted && static_cast<int>(failures.size()) <= config.max_restarts)
    {
        const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(attempts));
        ++attempts;
        try
        {
            FitConfig attempt_config = config;
            if (!failures.empty())
            {
                attempt_config.init = InitMethod::random;
            }
            FitResult r = fit_once(data, spec, groups, attempt_config, seed);
            ++successes;
            if (!best || r.loglik > best->loglik)
            {
                best = std::move(r);
            }
        }
        catch (const NumericalError& e)
        {
            failures.push_back("attempt " + std::to_string(attempts) + ": " + e.what());
        }
    }
    if (!best)
    {
        std::string msg = "fit of " + spec.code + " with G=" + std::to_string(groups) +
                          " failed after " + std::to_string(attempts) + " attempts";
        for (const auto& f : failures)
        {
            msg += "; " + f;
        }
        throw FitFailedError(msg);
    }
    best->attempts = attempts;
    best->diagnostics.insert(best->diagnostics.end(), failures.begin(), failures.end());
    return std::move(*best);
}

Prediction predict(const FitResult& result, const Matrix& newdata)
{
    if (result.states.empty())
    {
        throw ShapeError("predict: model has no components");
    }
    if (newdata.cols() != result.states.front().mu.size())
    {
        throw ShapeError("predict: data has " + std::to_string(newdata.cols()) +
                         " columns, model expects " +
                         std::to_string(result.states.front().mu.size()));
    }
    EStep es = e_step(newdata, result.states, result.gaussian_mode);
    return {hard_labels(es.resp.z), std::move(es.resp.z)};
}
}  // namespace thddc
