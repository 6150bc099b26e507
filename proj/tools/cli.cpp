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

#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "thddc/data_io.hpp"
#include "thddc/error.hpp"
#include "thddc/evaluation.hpp"
#include "thddc/model_space.hpp"
#include "thddc/selection.hpp"

namespace thddc::cli
{
namespace
{
struct FitOptions
{
    std::string data;
    std::string labels;
    std::string groups;
    std::string init = "kmeans";
    int n_init = 0;
    double epsilon = 1e-2;
    int max_iter = 200;
    std::string dim_method = "scree";
    double scree_threshold = 0.2;
    bool standardize = false;
    bool gaussian = false;
    bool rho_literal = false;
    std::uint64_t seed = 1;
};

void add_fit_flags(CLI::App& app, FitOptions& o)
{
    app.add_option("--data", o.data, "Input CSV with a header row")->required();
    app.add_option("--labels", o.labels, "Label column (name or 0-based index), excluded from the features");
    app.add_option("--init", o.init, "Starting partition")->check(CLI::IsMember({"kmeans", "random"}));
    app.add_option("--n-init", o.n_init, "Starts per fit (0: 1 for kmeans, 10 for random)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--epsilon", o.epsilon, "Aitken tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", o.max_iter, "Iteration cap")->check(CLI::Range(3, 1000000));
    app.add_option("--dim-method", o.dim_method, "Intrinsic dimension rule")
        ->check(CLI::IsMember({"bic", "scree"}));
    app.add_option("--scree-threshold", o.scree_threshold, "Scree gap threshold")
        ->check(CLI::Range(0.0, 1.0));
    app.add_flag("--standardize", o.standardize, "Scale columns to zero mean and unit variance");
    app.add_flag("--gaussian", o.gaussian, "Gaussian mixture mode (the nu letter is ignored)");
    app.add_flag("--rho-literal", o.rho_literal, "Count Gp + G + 1 mean/proportion parameters");
    app.add_option("--seed", o.seed, "Random seed");
}

FitConfig make_config(const FitOptions& o)
{
    FitConfig c;
    c.init = o.init == "random" ? InitMethod::random : InitMethod::kmeans;
    c.n_init = o.n_init;
    c.epsilon = o.epsilon;
    c.max_iter = o.max_iter;
    c.dim_method = o.dim_method == "bic" ? DimMethod::bic : DimMethod::scree;
    c.scree_threshold = o.scree_threshold;
    c.gaussian_mode = o.gaussian;
    c.rho = o.rho_literal ? RhoConvention::literal : RhoConvention::standard;
    c.seed = o.seed;
    validate(c);
    return c;
}

struct Loaded
{
    Dataset data;
    std::vector<int> truth;
};

Loaded load(const std::string& path, const std::string& label_column, bool standardize_columns)
{
    Loaded l;
    l.data = read_csv(path, true,
                      label_column.empty() ? std::nullopt : std::optional<std::string>(label_column));
    validate(l.data);
    if (standardize_columns)
    {
        l.data = standardize(l.data);
    }
    if (l.data.labels)
    {
        l.truth = encode_labels(*l.data.labels);
    }
    return l;
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<int> one_based(const std::vector<int>& labels)
{
    std::vector<int> out(labels);
    for (int& l : out)
    {
        ++l;
    }
    return out;
}

std::vector<ModelSpec> parse_models(const std::string& text)
{
    if (text == "all")
    {
        return enumerate_models();
    }
    std::vector<ModelSpec> specs;
    std::stringstream ss(text);
    std::string code;
    while (std::getline(ss, code, ','))
    {
        specs.push_back(parse_model(code));
    }
    if (specs.empty())
    {
        throw UsageError("--models: empty list");
    }
    return specs;
}

void warn_gaussian(const std::vector<ModelSpec>& specs, bool gaussian, std::ostream& err)
{
    if (!gaussian)
    {
        return;
    }
    for (const auto& s : specs)
    {
        err << "warning: --gaussian ignores the nu letter of " << s.code << '\n';
    }
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f || !(f << text))
    {
        throw ParseError("cannot write '" + path + "'");
    }
}

std::string dims_text(const FitResult& r)
{
    std::string s;
    for (const auto& st : r.states)
    {
        s += (s.empty() ? "" : ",") + std::to_string(st.d);
    }
    return s;
}

int cmd_fit(const FitOptions& o, const std::string& code, const std::string& model_out,
            const std::string& labels_out, std::ostream& out, std::ostream& err)
{
    const auto groups = parse_groups(o.groups);
    if (groups.size() != 1)
    {
        throw UsageError("fit takes a single -G value");
    }
    const ModelSpec spec = parse_model(code);
    const FitConfig config = make_config(o);
    warn_gaussian({spec}, o.gaussian, err);
    const Loaded in = load(o.data, o.labels, o.standardize);

    const FitResult r = fit(in.data.x, spec, groups.front(), config);
    out << "model       " << r.spec.code << (r.gaussian_mode ? " (gaussian)" : "") << '\n'
        << "G           " << r.groups << '\n'
        << "d           " << dims_text(r) << '\n'
        << "loglik      " << fixed(r.loglik, 6) << '\n'
        << "bic         " << fixed(r.bic, 6) << '\n'
        << "iterations  " << r.iterations << '\n'
        << "converged   " << (r.converged ? "yes" : "no") << '\n';
    if (!in.truth.empty())
    {
        out << "ari         " << fixed(ari(in.truth, r.labels), 6) << '\n';
    }
    if (!model_out.empty())
    {
        save_model(r, model_out);
    }
    if (!labels_out.empty())
    {
        write_labels(one_based(r.labels), labels_out);
    }
    return 0;
}

std::string grid_csv(const GridResult& g, bool timing)
{
    std::ostringstream s;
    s << "model,G,bic,ari,converged,iterations,seconds\n";
    for (std::size_t i : g.ranking())
    {
        const GridEntry& e = g.entries[i];
        s << e.spec.code << ',' << e.groups << ',';
        if (e.ok)
        {
            s << fixed(e.bic, 6) << ',' << (e.ari ? fixed(*e.ari, 6) : "") << ','
              << (e.fit->converged ? "true" : "false") << ',' << e.fit->iterations;
        }
        else
        {
            s << ",,false,";
        }
        s << ',' << (timing ? fixed(e.seconds, 3) : "") << '\n';
    }
    return s.str();
}

int cmd_grid(const FitOptions& o, const std::string& models, int jobs, bool timing,
             const std::string& csv_out, const std::string& best_out, std::ostream& out,
             std::ostream& err)
{
    GridRequest req;
    req.specs = parse_models(models);
    req.g_values = parse_groups(o.groups);
    req.config = make_config(o);
    req.jobs = jobs;
    warn_gaussian(req.specs, o.gaussian, err);
    const Loaded in = load(o.data, o.labels, o.standardize);

    const GridResult g = grid_search(in.data.x, req, in.truth);
    out << "rank  model  G           bic      ari  iter  conv\n";
    int rank = 0;
    for (std::size_t i : g.ranking())
    {
        const GridEntry& e = g.entries[i];
        char line[160];
        if (e.ok)
        {
            std::snprintf(line, sizeof line, "%4d  %s  %d  %12.4f  %7s  %4d  %s\n", ++rank,
                          e.spec.code.c_str(), e.groups, e.bic,
                          e.ari ? fixed(*e.ari, 4).c_str() : "-", e.fit->iterations,
                          e.fit->converged ? "yes" : "no");
        }
        else
        {
            std::snprintf(line, sizeof line, "   -  %s  %d  failed\n", e.spec.code.c_str(), e.groups);
        }
        out << line;
    }
    const GridEntry& best = g.best_entry();
    out << "best: " << best.spec.code << " G=" << best.groups << " bic=" << fixed(best.bic, 6);
    if (best.ari)
    {
        out << " ari=" << fixed(*best.ari, 6);
    }
    out << '\n';
    if (!csv_out.empty())
    {
        write_text(csv_out, grid_csv(g, timing));
    }
    if (!best_out.empty())
    {
        save_model(*best.fit, best_out);
    }
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data, const std::string& labels,
                bool standardize_columns, const std::string& labels_out, std::ostream& out)
{
    const FitResult model = load_model(model_path);
    const Loaded in = load(data, labels, standardize_columns);
    const Prediction pred = predict(model, in.data.x);
    std::vector<int> sizes(static_cast<std::size_t>(model.groups), 0);
    for (int l : pred.labels)
    {
        ++sizes[static_cast<std::size_t>(l)];
    }
    out << "model " << model.spec.code << " G=" << model.groups << " rows=" << pred.labels.size() << '\n';
    for (std::size_t g = 0; g < sizes.size(); ++g)
    {
        out << "cluster " << g + 1 << ": " << sizes[g] << '\n';
    }
    if (!in.truth.empty())
    {
        out << "ari " << fixed(ari(in.truth, pred.labels), 6) << '\n';
    }
    if (!labels_out.empty())
    {
        write_labels(one_based(pred.labels), labels_out);
    }
    return 0;
}

std::vector<double> parse_doubles(const std::string& text)
{
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (ec != std::errc() || ptr != item.data() + item.size())
        {
            throw UsageError("'" + item + "' is not a number");
        }
        v.push_back(x);
    }
    return v;
}

int cmd_simulate(const std::string& dir, int n, int datasets, std::uint64_t seed,
                 const std::string& nu, double separation, std::ostream& out)
{
    SimSpec spec = default_sim_spec(seed, separation);
    spec.n = n;
    spec.datasets = datasets;
    if (!nu.empty())
    {
        const auto values = parse_doubles(nu);
        if (values.size() != spec.components.size())
        {
            throw UsageError("--nu needs " + std::to_string(spec.components.size()) + " values");
        }
        for (std::size_t g = 0; g < values.size(); ++g)
        {
            if (!(values[g] > 0.0))
            {
                throw DomainError("--nu values must be positive");
            }
            spec.components[g].nu = values[g];
        }
    }
    const auto sets = simulate_study(spec);
    std::filesystem::create_directories(dir);
    const int width = datasets >= 100 ? 3 : 2;
    for (std::size_t k = 0; k < sets.size(); ++k)
    {
        char name[32];
        std::snprintf(name, sizeof name, "sim_%0*zu.csv", width, k + 1);
        const auto path = std::filesystem::path(dir) / name;
        write_csv(sets[k], path);
        out << path.string() << '\n';
    }
    write_text((std::filesystem::path(dir) / "manifest.json").string(), sim_manifest(spec).dump(2) + "\n");
    return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& pred_path,
                 const std::string& truth_col, const std::string& pred_col,
                 const std::string& table_out, std::ostream& out)
{
    auto column = [](const std::string& c) {
        return c.empty() ? std::nullopt : std::optional<std::string>(c);
    };
    const auto truth = read_labels(truth_path, column(truth_col));
    const auto pred = read_labels(pred_path, column(pred_col));
    if (truth.size() != pred.size())
    {
        throw ShapeError("label files have " + std::to_string(truth.size()) + " and " +
                         std::to_string(pred.size()) + " rows");
    }
    const ConfusionTable t = confusion(truth, pred);
    out << "ari   " << fixed(ari(t), 6) << '\n' << "rand  " << fixed(rand_index(t), 6) << '\n' << '\n'
        << t.to_text();
    if (!table_out.empty())
    {
        write_text(table_out, t.to_csv());
    }
    return 0;
}

int parse_int(const std::string& s)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    {
        throw UsageError("-G: '" + s + "' is not an integer");
    }
    return v;
}
}  // namespace

std::vector<int> parse_groups(const std::string& text)
{
    std::vector<int> g;
    if (const auto dots = text.find(".."); dots != std::string::npos)
    {
        const int lo = parse_int(text.substr(0, dots));
        const int hi = parse_int(text.substr(dots + 2));
        if (hi < lo)
        {
            throw UsageError("-G: empty range '" + text + "'");
        }
        for (int k = lo; k <= hi; ++k)
        {
            g.push_back(k);
        }
    }
    else
    {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            g.push_back(parse_int(item));
        }
    }
    if (g.empty())
    {
        throw UsageError("-G: no values");
    }
    for (int k : g)
    {
        if (k < 1)
        {
            throw UsageError("-G: number of groups must be at least 1");
        }
    }
    return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Subspace t-mixture clustering"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    FitOptions fit_opt;
    std::string code, model_out, labels_out;
    auto* fit_cmd = app.add_subcommand("fit", "Fit one model at one G");
    add_fit_flags(*fit_cmd, fit_opt);
    fit_cmd->add_option("--model", code, "Five-letter model code")->required();
    fit_cmd->add_option("-G", fit_opt.groups, "Number of groups")->required();
    fit_cmd->add_option("--out", model_out, "Model JSON output");
    fit_cmd->add_option("--labels-out", labels_out, "Cluster labels CSV output");

    FitOptions grid_opt;
    grid_opt.groups = "1..4";
    std::string models = "all", grid_out, best_out;
    int jobs = 1;
    bool timing = false;
    auto* grid_cmd = app.add_subcommand("grid", "BIC search over models and G");
    add_fit_flags(*grid_cmd, grid_opt);
    grid_cmd->add_option("--models", models, "Comma-separated codes or 'all'");
    grid_cmd->add_option("-G", grid_opt.groups, "Groups: INT, LIST or LO..HI");
    grid_cmd->add_option("--jobs", jobs, "Cells fitted concurrently")->check(CLI::PositiveNumber);
    grid_cmd->add_option("--out", grid_out, "Ranked grid CSV output");
    grid_cmd->add_option("--best-out", best_out, "Best model JSON output");
    grid_cmd->add_flag("--timing", timing, "Fill the seconds column of the grid CSV");

    std::string pred_model, pred_data, pred_labels, pred_out;
    bool pred_std = false;
    auto* pred_cmd = app.add_subcommand("predict", "Assign rows to the clusters of a saved model");
    pred_cmd->add_option("--model", pred_model, "Model JSON")->required();
    pred_cmd->add_option("--data", pred_data, "Input CSV with a header row")->required();
    pred_cmd->add_option("--labels", pred_labels, "Label column, excluded from the features");
    pred_cmd->add_flag("--standardize", pred_std, "Scale columns to zero mean and unit variance");
    pred_cmd->add_option("--out", pred_out, "Cluster labels CSV output");

    std::string sim_dir, sim_nu;
    int sim_n = 500, sim_sets = 10;
    std::uint64_t sim_seed = 2017;
    double sim_sep = 10.0;
    auto* sim_cmd = app.add_subcommand("simulate", "Write a two-component t simulation study");
    sim_cmd->add_option("--out", sim_dir, "Output directory")->required();
    sim_cmd->add_option("--n", sim_n, "Rows per dataset")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--datasets", sim_sets, "Number of datasets")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--seed", sim_seed, "Random seed");
    sim_cmd->add_option("--nu", sim_nu, "Per-component degrees of freedom, e.g. 2,3");
    sim_cmd->add_option("--separation", sim_sep, "Distance between the two means")
        ->check(CLI::NonNegativeNumber);

    std::string ev_truth, ev_pred, ev_truth_col, ev_pred_col, ev_out;
    auto* ev_cmd = app.add_subcommand("evaluate", "Compare two label files");
    ev_cmd->add_option("--truth", ev_truth, "Reference labels CSV")->required();
    ev_cmd->add_option("--pred", ev_pred, "Predicted labels CSV")->required();
    ev_cmd->add_option("--truth-column", ev_truth_col, "Column in the reference file (default first)");
    ev_cmd->add_option("--pred-column", ev_pred_col, "Column in the predicted file (default first)");
    ev_cmd->add_option("--out", ev_out, "Confusion table CSV output");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code_ = app.exit(e, out, err);
        return code_ == 0 ? 0 : 1;
    }

    try
    {
        if (*fit_cmd)
        {
            return cmd_fit(fit_opt, code, model_out, labels_out, out, err);
        }
        if (*grid_cmd)
        {
            return cmd_grid(grid_opt, models, jobs, timing, grid_out, best_out, out, err);
        }
        if (*pred_cmd)
        {
            return cmd_predict(pred_model, pred_data, pred_labels, pred_std, pred_out, out);
        }
        if (*sim_cmd)
        {
            return cmd_simulate(sim_dir, sim_n, sim_sets, sim_seed, sim_nu, sim_sep, out);
        }
        return cmd_evaluate(ev_truth, ev_pred, ev_truth_col, ev_pred_col, ev_out, out);
    }
    catch (const NumericalError& e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}
}  // namespace thddc::cli
