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
#include <string>
#include <vector>

#include "thddc/model_space.hpp"
#include "thddc/numerics.hpp"

namespace thddc
{
enum class InitMethod
{
    kmeans,
    random
};

enum class DimMethod
{
    bic,
    scree
};

struct FitConfig
{
    InitMethod init = InitMethod::kmeans;
    // 0 selects the default: 1 restart for kmeans, 10 for random starts.
    int n_init = 0;
    int max_iter = 200;
    double epsilon = 1e-2;
    DimMethod dim_method = DimMethod::scree;
    double scree_threshold = 0.2;
    double nu_min = 1.0;
    double nu_max = 200.0;
    double nu_init = 50.0;
    bool gaussian_mode = false;
    RhoConvention rho = RhoConvention::standard;
    std::uint64_t seed = 0;
    // Extra attempts allowed when a component empties during a fit.
    int max_restarts = 5;

    int restarts() const;
};

// UsageError on an inconsistent configuration.
void validate(const FitConfig& config);

// Parameters of one mixture component in its subspace parameterization.
// The covariance is orient * diag(a_1..a_d, b..b) * orient'.
struct ComponentState
{
    double pi = 1.0;
    Vector mu;
    Matrix orient;
    Vector a;
    double b = 1.0;
    int d = 1;
    double nu = 50.0;

    // Dense covariance matrix, mainly for tests and diagnostics.
    Matrix covariance() const;
    double log_det() const;
};

// Throws on a malformed state (shapes, orthonormality, positivity).
void validate(const ComponentState& state, Eigen::Index p);

// n x G posterior memberships z and latent weights u.
struct Responsibilities
{
    Matrix z;
    Matrix u;
};

struct Projection
{
    // P_g(x): projection of x on the affine subspace mu + span(first d columns).
    Vector in_subspace;
    // The projection on the orthogonal complement through mu.
    Vector orthogonal;
};

Projection project(const Vector& x, const ComponentState& state);

// K_g(x) = -2 log(pi_g f(x | mu_g, Sigma_g, nu_g)); the Gaussian density
// replaces f in gaussian mode.
double cost_K(const Vector& x, const ComponentState& state, bool gaussian_mode = false);

struct EStep
{
    Responsibilities resp;
    double loglik = 0.0;
    // Components whose z column sums to zero.
    std::vector<int> empty_components;
};

EStep e_step(const Matrix& data, const std::vector<ComponentState>& states,
             bool gaussian_mode = false);

struct PiMu
{
    Vector pi;
    std::vector<Vector> mu;
};

PiMu update_pi_mu(const Matrix& data, const Responsibilities& resp);

struct NuUpdate
{
    std::vector<double> nu;
    // Set when a non-finite intermediate forced a fallback to the old value.
    bool fell_back = false;
};

// Closed-form approximate CM-step for the degrees of freedom. With
// constrained set the k statistic pools all groups with normalizer n and
// every entry of the result is equal.
NuUpdate update_nu(const Responsibilities& resp, const std::vector<ComponentState>& states,
                   int p, bool constrained, double nu_min, double nu_max);

// Picks intrinsic dimensions from per-group spectra (each sorted
// descending, length p). n_g are the group sizes and n the number of rows.
DimensionAssignment select_dims(const std::vector<Vector>& eigvals, const Vector& n_g,
                                const ModelSpec& spec, const FitConfig& config, int n);

// Scree rule on one spectrum: the largest j in 1..p-1 whose eigenvalue gap
// is at least threshold times the largest gap; 1 for a flat spectrum.
int scree_dimension(const Vector& eigvals, double threshold);

// Second CM-step: proportions, locations, orientations, eigenvalues and
// intrinsic dimensions under the constraints of spec. nu is carried over
// from previous (or config.nu_init when previous is empty). When previous
// holds a different dimension assignment, the new one is kept only if it
// does not lower the expected complete-data log-likelihood.
std::vector<ComponentState> cm_step(const Matrix& data, const Responsibilities& resp,
                                    const ModelSpec& spec,
                                    const std::vector<ComponentState>& previous,
                                    const FitConfig& config);

// Hard starting partition with u = 1.
Responsibilities initialize(const Matrix& data, int groups, const FitConfig& config,
                            std::uint64_t seed);

// Lloyd's k-means with D^2-weighted seeding; returns labels in [0, k).
std::vector<int> kmeans(const Matrix& data, int k, std::uint64_t seed, int restarts = 10,
                        double tol = 1e-6, int max_iter = 100);

struct FitResult
{
    ModelSpec spec;
    int groups = 0;
    int n = 0;
    int p = 0;
    bool gaussian_mode = false;
    std::vector<ComponentState> states;
    Responsibilities resp;
    std::vector<int> labels;
    std::vector<double> loglik_trace;
    double loglik = 0.0;
    int n_params = 0;
    double bic = 0.0;
    bool converged = false;
    int iterations = 0;
    // Fits attempted, including restarts after an emptied component.
    int attempts = 0;
    std::vector<std::string> diagnostics;

    DimensionAssignment dims() const;
};

// Fits one (spec, G) pair; best of the configured restarts by final
// log-likelihood. FitFailedError when every attempt degenerates.
FitResult fit(const Matrix& data, const ModelSpec& spec, int groups, const FitConfig& config);

struct Prediction
{
    std::vector<int> labels;
    Matrix z;
};

Prediction predict(const FitResult& result, const Matrix& newdata);

// Row-wise argmax, ties to the lowest index.
std::vector<int> hard_labels(const Matrix& z);

// Deterministic seed mixing (splitmix64 finalizer over the inputs).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);
}  // namespace thddc
