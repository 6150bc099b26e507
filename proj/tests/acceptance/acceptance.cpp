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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "thddc/data_io.hpp"
#include "thddc/evaluation.hpp"
#include "thddc/selection.hpp"
#include "thddc/tdist.hpp"

using namespace thddc;
namespace fs = std::filesystem;

namespace
{
// Simulation.
constexpr double kSimAriFloor = 0.90;
constexpr int kSimMaxG = 4;
constexpr double kSimBudgetSeconds = 600.0;
// Iris.
constexpr double kIrisAriFloor = 0.85;
constexpr int kIrisExpectedG = 3;
constexpr double kReferenceAri = 0.904;
constexpr double kReferenceTolerance = 0.001;
constexpr double kIrisBudgetSeconds = 120.0;
// Wine.
constexpr double kWineAriFloor = 0.85;
constexpr double kWineBudgetSeconds = 120.0;
// Monotonicity.
constexpr int kMonoDatasets = 5;
constexpr int kMonoN = 200;
constexpr int kMonoP = 8;
constexpr int kMonoG = 2;
constexpr double kMonoSlack = 1e-8;
constexpr double kMonoBudgetSeconds = 300.0;
// Cost function / posterior.
constexpr int kCostTrials = 200;
constexpr int kCostMaxP = 6;
constexpr double kCostTolerance = 1e-8;
constexpr double kCostBudgetSeconds = 60.0;
// Parameter counts.
constexpr double kCountBudgetSeconds = 1.0;
// ARI oracle.
constexpr int kAriPairs = 500;
constexpr int kAriMaxN = 10;
constexpr double kAriTolerance = 1e-12;
constexpr double kAriBudgetSeconds = 10.0;
// Boundary identity.
constexpr int kBoundaryTrials = 200;
constexpr double kBoundaryBudgetSeconds = 1.0;
// Determinism.
constexpr double kDeterminismBudgetSeconds = 120.0;

struct Outcome
{
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, double budget, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
        o = body();
    }
    catch (const std::exception& e)
    {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > budget)
    {
        o.pass = false;
        o.detail += " (over the time budget)";
    }
    failures += !o.pass;
    std::printf("[%s] %d %-28s %s [%.1fs / %.0fs]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.c_str(), secs, budget);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double best_ari(const Matrix& x, const std::vector<int>& truth, bool gaussian)
{
    GridRequest req;
    req.specs = enumerate_models();
    for (int g = 1; g <= kSimMaxG; ++g)
    {
        req.g_values.push_back(g);
    }
    req.config.gaussian_mode = gaussian;
    return *grid_search(x, req, truth).best_entry().ari;
}

Outcome simulation()
{
    const auto sets = simulate_study(default_sim_spec());
    double t_sum = 0.0, g_sum = 0.0;
    for (const auto& ds : sets)
    {
        const auto truth = encode_labels(*ds.labels);
        t_sum += best_ari(ds.x, truth, false);
        g_sum += best_ari(ds.x, truth, true);
    }
    const double t_mean = t_sum / static_cast<double>(sets.size());
    const double g_mean = g_sum / static_cast<double>(sets.size());
    return {t_mean >= kSimAriFloor && g_mean < t_mean,
            fmt("t mean ARI %.4f (>= %.2f), gaussian mean ARI %.4f (< t)", t_mean, kSimAriFloor, g_mean)};
}

Outcome iris()
{
    const Dataset ds = read_csv(THDDC_DATA_DIR "/iris.csv", true, std::string("species"));
    GridRequest req;
    req.specs = enumerate_models();
    req.g_values = {1, 2, 3, 4};
    const GridResult g = grid_search(ds.x, req, encode_labels(*ds.labels));
    const GridEntry& best = g.best_entry();
    const auto reference = read_labels(THDDC_TEST_DATA_DIR "/iris_reference_pred.csv");
    const double fixed_ari = ari(*ds.labels, reference);
    const bool pass = best.groups == kIrisExpectedG && *best.ari >= kIrisAriFloor &&
                      std::abs(fixed_ari - kReferenceAri) <= kReferenceTolerance;
    return {pass, "best " + best.spec.code +
                      fmt(" G=%.0f ARI %.4f (>= %.2f)", best.groups, *best.ari, kIrisAriFloor) +
                      fmt("; fixed confusion ARI %.4f (%.3f +- %.3f)", fixed_ari, kReferenceAri, kReferenceTolerance)};
}

Outcome wine()
{
    const Dataset ds = standardize(read_csv(THDDC_DATA_DIR "/wine.csv", true, std::string("cultivar")));
    const FitResult r = fit(ds.x, parse_model("GCCCC"), 3, FitConfig{});
    const double a = ari(encode_labels(*ds.labels), r.labels);
    return {a >= kWineAriFloor, fmt("GCCCC G=3 ARI %.4f (>= %.2f)", a, kWineAriFloor)};
}

Outcome monotonicity()
{
    double worst = 0.0;
    int fits = 0, steps = 0;
    for (int k = 0; k < kMonoDatasets; ++k)
    {
        std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(k));
        MixtureParams m;
        m.proportions = (Vector(2) << 0.4, 0.6).finished();
        for (int g = 0; g < kMonoG; ++g)
        {
            const auto s = fixture::random_state(rng, kMonoP, 2);
            m.components.push_back({s.mu, s.covariance(), 2.0 + 3.0 * g});
        }
        const Matrix x = mixture_sample(m, kMonoN, 77 + static_cast<std::uint64_t>(k)).x;
        for (const auto& spec : enumerate_models())
        {
            const FitResult r = fit(x, spec, kMonoG, FitConfig{});
            ++fits;
            for (std::size_t i = 1; i < r.loglik_trace.size(); ++i)
            {
                worst = std::min(worst, r.loglik_trace[i] - r.loglik_trace[i - 1]);
                ++steps;
            }
        }
    }
    return {worst >= -kMonoSlack,
            fmt("%.0f fits, %.0f steps, largest decrease %.3g", fits, steps, worst < 0.0 ? -worst : 0.0)};
}

Outcome cost_equivalence()
{
    std::mt19937_64 rng(2024);
    double worst_k = 0.0, worst_z = 0.0;
    for (int t = 0; t < kCostTrials; ++t)
    {
        const int p = 2 + t % (kCostMaxP - 1);
        const int groups = 1 + t % 3;
        std::vector<ComponentState> states;
        std::uniform_int_distribution<int> dim(1, p - 1);
        for (int g = 0; g < groups; ++g)
        {
            states.push_back(fixture::random_state(rng, p, dim(rng), 1.0 / groups));
        }
        const Matrix x = fixture::random_points(rng, states, 1);
        const Vector xi = x.row(0).transpose();
        const EStep es = e_step(x, states);
        Vector lw(groups);
        for (int g = 0; g < groups; ++g)
        {
            const auto& s = states[static_cast<std::size_t>(g)];
            lw(g) = std::log(s.pi) + oracle::t_log_density(xi, s.mu, s.covariance(), s.nu);
            worst_k = std::max(worst_k, std::abs(cost_K(xi, s) + 2.0 * lw(g)));
        }
        const double m = lw.maxCoeff();
        const Vector z = (lw.array() - m).exp() / (lw.array() - m).exp().sum();
        worst_z = std::max(worst_z, (es.resp.z.row(0).transpose() - z).cwiseAbs().maxCoeff());
    }
    return {worst_k < kCostTolerance && worst_z < kCostTolerance,
            fmt("max |K + 2 log(pi f)| %.3g, max |dz| %.3g (< %.0e)", worst_k, worst_z, kCostTolerance)};
}

Outcome parameter_counts()
{
    const auto& table = oracle::table_counts();
    int checked = 0, wrong = 0;
    for (const auto& spec : enumerate_models())
    {
        for (int G : {1, 2, 3})
        {
            for (int p : {4, 8})
            {
                for (const auto& d : oracle::all_dim_tuples(G, 1, 3))
                {
                    if (spec.dim == Sharing::C && std::set<int>(d.begin(), d.end()).size() > 1)
                    {
                        continue;
                    }
                    ++checked;
                    wrong += free_param_count(spec, G, p, {d}, RhoConvention::literal) !=
                             table.at(spec.code)({G, p, d});
                }
            }
        }
    }
    return {wrong == 0, fmt("%.0f cases, %.0f mismatches", checked, wrong)};
}

Outcome ari_oracle()
{
    std::mt19937_64 rng(555);
    double worst = 0.0;
    bool self_ok = true, relabel_ok = true;
    for (int t = 0; t < kAriPairs; ++t)
    {
        std::uniform_int_distribution<int> size(2, kAriMaxN), k(1, 5);
        const int n = size(rng);
        std::uniform_int_distribution<int> la(0, k(rng) - 1), lb(0, k(rng) - 1);
        std::vector<int> a(n), b(n), b_relabeled(n);
        for (int i = 0; i < n; ++i)
        {
            a[i] = la(rng);
            b[i] = lb(rng);
            b_relabeled[i] = 7 - 2 * b[i];
        }
        worst = std::max(worst, std::abs(ari(a, b) - oracle::brute_force_ari(a, b)));
        self_ok = self_ok && ari(a, a) == 1.0;
        relabel_ok = relabel_ok && ari(a, b) == ari(a, b_relabeled);
    }
    return {worst < kAriTolerance && self_ok && relabel_ok,
            fmt("max deviation %.3g (< %.0e)", worst, kAriTolerance) + (self_ok ? ", ari(x,x)=1" : ", ari(x,x)!=1") +
                (relabel_ok ? ", relabeling exact" : ", relabeling inexact")};
}

Outcome boundary()
{
    std::mt19937_64 rng(808);
    int exact = 0;
    for (int t = 0; t < kBoundaryTrials; ++t)
    {
        const int p = 2 + t % 9;
        std::vector<ComponentState> states{fixture::random_state(rng, p, 1 + t % (p - 1), 0.5),
                                           fixture::random_state(rng, p, 1, 0.5)};
        const int g = t % 2;
        Matrix x(1, p);
        x.row(0) = states[static_cast<std::size_t>(g)].mu.transpose();
        const double nu = states[static_cast<std::size_t>(g)].nu;
        exact += e_step(x, states).resp.u(0, g) == (nu + p) / nu;
    }
    return {exact == kBoundaryTrials, fmt("%.0f / %.0f exact", exact, kBoundaryTrials)};
}

Outcome determinism()
{
    const fs::path dir = fs::temp_directory_path() / "thddc_acceptance";
    fs::create_directories(dir);
    std::string text[2];
    for (int k = 0; k < 2; ++k)
    {
        const fs::path out = dir / ("grid_" + std::to_string(k) + ".csv");
        const std::string data = THDDC_DATA_DIR "/iris.csv";
        const std::string path = out.string();
        const char* argv[] = {"thddc", "grid", "--data", data.c_str(), "--labels", "species", "--models",
                              "all", "-G", "1..4", "--seed", "2017", "--out", path.c_str()};
        std::ostringstream sink;
        if (cli::run(static_cast<int>(std::size(argv)), argv, sink, sink) != 0)
        {
            return {false, "grid run failed"};
        }
        std::ifstream in(out, std::ios::binary);
        text[k].assign(std::istreambuf_iterator<char>(in), {});
    }
    return {!text[0].empty() && text[0] == text[1],
            fmt("%.0f bytes, identical", static_cast<double>(text[0].size()))};
}
}  // namespace

int main()
{
    report(1, "simulation robustness", kSimBudgetSeconds, simulation);
    report(2, "iris", kIrisBudgetSeconds, iris);
    report(3, "wine", kWineBudgetSeconds, wine);
    report(4, "likelihood monotonicity", kMonoBudgetSeconds, monotonicity);
    report(5, "cost/posterior equivalence", kCostBudgetSeconds, cost_equivalence);
    report(6, "parameter-count oracle", kCountBudgetSeconds, parameter_counts);
    report(7, "ARI oracle", kAriBudgetSeconds, ari_oracle);
    report(8, "latent weight boundary", kBoundaryBudgetSeconds, boundary);
    report(9, "grid determinism", kDeterminismBudgetSeconds, determinism);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
