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

#include "thddc/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "thddc/error.hpp"
#include "thddc/tdist.hpp"

namespace thddc
{
namespace
{
std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"')
    {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(
            start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos)
        {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(const std::string& s)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+')
    {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || s.empty() || !std::isfinite(v))
    {
        return std::nullopt;
    }
    return v;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::vector<std::size_t>& line_numbers)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0)
        {
            line.erase(0, 3);
        }
        if (trim(line).empty())
        {
            continue;
        }
        rows.push_back(split_line(line));
        line_numbers.push_back(number);
    }
    return rows;
}

std::size_t resolve_column(const std::string& spec, const std::vector<std::string>& header,
                           std::size_t width)
{
    for (std::size_t j = 0; j < header.size(); ++j)
    {
        if (header[j] == spec)
        {
            return j;
        }
    }
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), idx);
    if (ec == std::errc() && ptr == spec.data() + spec.size() && idx < width)
    {
        return idx;
    }
    throw ParseError("label column '" + spec + "' not found");
}

nlohmann::json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector json_vec(const nlohmann::json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}
}  // namespace

void validate(const Dataset& ds)
{
    if (ds.x.rows() < 1 || ds.x.cols() < 1)
    {
        throw ShapeError("dataset must have at least one row and one column");
    }
    if (!ds.x.allFinite())
    {
        throw NumericInputError("dataset has non-finite values");
    }
    if (ds.labels && static_cast<Eigen::Index>(ds.labels->size()) != ds.x.rows())
    {
        throw ShapeError("dataset labels do not match the number of rows");
    }
    if (!ds.names.empty() && static_cast<Eigen::Index>(ds.names.size()) != ds.x.cols())
    {
        throw ShapeError("dataset column names do not match the number of columns");
    }
}

Dataset read_csv(const std::filesystem::path& path, bool has_header,
                 const std::optional<std::string>& label_column)
{
    std::vector<std::size_t> lines;
    auto rows = read_rows(path, lines);
    std::vector<std::string> header;
    std::size_t header_line = 0;
    if (has_header)
    {
        if (rows.empty())
        {
            throw ParseError("'" + path.string() + "' is empty");
        }
        header = std::move(rows.front());
        header_line = lines.front();
        rows.erase(rows.begin());
        lines.erase(lines.begin());
    }
    if (rows.empty())
    {
        throw ParseError("'" + path.string() + "' has no data rows");
    }
    const std::size_t width = has_header ? header.size() : rows.front().size();
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        if (rows[r].size() != width)
        {
            throw ParseError(path.string() + ":" + std::to_string(lines[r]) + ": expected " +
                             std::to_string(width) + " fields, found " +
                             std::to_string(rows[r].size()));
        }
    }
    (void)header_line;

    std::optional<std::size_t> label_idx;
    if (label_column)
    {
        label_idx = resolve_column(*label_column, header, width);
    }

    Dataset ds;
    const auto p = static_cast<Eigen::Index>(width - (label_idx ? 1 : 0));
    ds.x.resize(static_cast<Eigen::Index>(rows.size()), p);
    if (label_idx)
    {
        ds.labels.emplace();
        ds.labels->reserve(rows.size());
        ds.label_name = has_header ? header[*label_idx] : "label";
    }
    for (std::size_t j = 0; j < width; ++j)
    {
        if (label_idx && j == *label_idx)
        {
            continue;
        }
        ds.names.push_back(has_header ? header[j] : "x" + std::to_string(ds.names.size() + 1));
    }
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < width; ++j)
        {
            if (label_idx && j == *label_idx)
            {
                ds.labels->push_back(rows[r][j]);
                continue;
            }
            const auto v = parse_double(rows[r][j]);
            if (!v)
            {
                throw ParseError(path.string() + ":" + std::to_string(lines[r]) + ": column " +
                                 std::to_string(j + 1) + ": '" + rows[r][j] +
                                 "' is not a finite number");
            }
            ds.x(static_cast<Eigen::Index>(r), col++) = *v;
        }
    }
    return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path)
{
    validate(ds);
    std::ofstream out(path);
    if (!out)
    {
        throw ParseError("cannot write '" + path.string() + "'");
    }
    out.precision(17);
    for (Eigen::Index j = 0; j < ds.x.cols(); ++j)
    {
        out << (j ? "," : "")
            << (ds.names.empty() ? "x" + std::to_string(j + 1) : ds.names[static_cast<std::size_t>(j)]);
    }
    if (ds.labels)
    {
        out << ',' << ds.label_name;
    }
    out << '\n';
    for (Eigen::Index i = 0; i < ds.x.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < ds.x.cols(); ++j)
        {
            out << (j ? "," : "") << ds.x(i, j);
        }
        if (ds.labels)
        {
            out << ',' << (*ds.labels)[static_cast<std::size_t>(i)];
        }
        out << '\n';
    }
}

Dataset standardize(const Dataset& ds)
{
    validate(ds);
    if (ds.x.rows() < 2)
    {
        throw DomainError("standardize: need at least two rows");
    }
    Dataset out = ds;
    const double n = static_cast<double>(ds.x.rows());
    for (Eigen::Index j = 0; j < ds.x.cols(); ++j)
    {
        const double mean = ds.x.col(j).mean();
        const double var = (ds.x.col(j).array() - mean).square().sum() / (n - 1.0);
        if (!(var > 0.0))
        {
            const std::string name =
                ds.names.empty() ? "#" + std::to_string(j + 1) : ds.names[static_cast<std::size_t>(j)];
            throw DomainError("standardize: column '" + name + "' has zero variance");
        }
        out.x.col(j) = (ds.x.col(j).array() - mean) / std::sqrt(var);
    }
    return out;
}

std::vector<std::string> read_labels(const std::filesystem::path& path,
                                     const std::optional<std::string>& column, bool has_header)
{
    std::vector<std::size_t> lines;
    auto rows = read_rows(path, lines);
    std::vector<std::string> header;
    if (has_header && !rows.empty())
    {
        header = std::move(rows.front());
        rows.erase(rows.begin());
        lines.erase(lines.begin());
    }
    if (rows.empty())
    {
        throw ParseError("'" + path.string() + "' has no labels");
    }
    const std::size_t width = has_header ? header.size() : rows.front().size();
    const std::size_t idx = column ? resolve_column(*column, header, width) : 0;
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
        if (rows[r].size() != width)
        {
            throw ParseError(path.string() + ":" + std::to_string(lines[r]) + ": expected " +
                             std::to_string(width) + " fields");
        }
        out.push_back(rows[r][idx]);
    }
    return out;
}

void write_labels(const std::vector<int>& labels, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ParseError("cannot write '" + path.string() + "'");
    }
    out << "label\n";
    for (int l : labels)
    {
        out << l << '\n';
    }
}

std::vector<int> encode_labels(const std::vector<std::string>& labels)
{
    std::unordered_map<std::string, int> codes;
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto& l : labels)
    {
        out.push_back(codes.try_emplace(l, static_cast<int>(codes.size())).first->second);
    }
    return out;
}

SimSpec default_sim_spec(std::uint64_t seed, double separation)
{
    constexpr int p = 10;
    SimSpec spec;
    spec.seed = seed;
    spec.proportions = Vector::Constant(2, 0.5);
    SimComponent first{Vector::Zero(p), Matrix::Identity(p, p), 2.0};
    SimComponent second{Vector::Zero(p), Matrix::Identity(p, p), 3.0};
    second.mu(0) = separation;
    spec.components = {first, second};
    return spec;
}

std::vector<Dataset> simulate_study(const SimSpec& spec)
{
    MixtureParams params;
    params.proportions = spec.proportions;
    for (const auto& c : spec.components)
    {
        params.components.push_back({c.mu, c.sigma, c.nu});
    }
    validate(params);
    if (spec.n < 1 || spec.datasets < 1)
    {
        throw DomainError("simulate_study: n and dataset count must be positive");
    }

    std::vector<Dataset> out;
    for (int k = 0; k < spec.datasets; ++k)
    {
        LabeledSample s =
            mixture_sample(params, spec.n, derive_seed(spec.seed, static_cast<std::uint64_t>(k)));
        Dataset ds;
        ds.x = std::move(s.x);
        ds.labels.emplace();
        for (int l : s.labels)
        {
            ds.labels->push_back(std::to_string(l + 1));
        }
        for (int j = 0; j < spec.p(); ++j)
        {
            ds.names.push_back("x" + std::to_string(j + 1));
        }
        ds.label_name = "label";
        out.push_back(std::move(ds));
    }
    return out;
}

nlohmann::json sim_manifest(const SimSpec& spec)
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : spec.components)
    {
        comps.push_back({{"mu", vec_json(c.mu)},
                         {"sigma", vec_json(Eigen::Map<const Vector>(c.sigma.data(), c.sigma.size()))},
                         {"nu", c.nu}});
    }
    return {{"G", spec.groups()},
            {"p", spec.p()},
            {"n", spec.n},
            {"datasets", spec.datasets},
            {"seed", spec.seed},
            {"proportions", vec_json(spec.proportions)},
            {"nu", [&] {
                 std::vector<double> v;
                 for (const auto& c : spec.components)
                 {
                     v.push_back(c.nu);
                 }
                 return v;
             }()},
            {"components", comps}};
}

nlohmann::json model_to_json(const FitResult& r)
{
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& s : r.states)
    {
        comps.push_back({{"pi", s.pi},
                         {"mu", vec_json(s.mu)},
                         {"orient", vec_json(Eigen::Map<const Vector>(s.orient.data(), s.orient.size()))},
                         {"a", vec_json(s.a)},
                         {"b", s.b},
                         {"d", s.d},
                         {"nu", s.nu}});
    }
    return {{"schema_version", kModelSchemaVersion},
            {"model_code", r.spec.code},
            {"G", r.groups},
            {"p", r.p},
            {"n", r.n},
            {"gaussian_mode", r.gaussian_mode},
            {"components", comps},
            {"loglik_trace", r.loglik_trace},
            {"loglik", r.loglik},
            {"n_params", r.n_params},
            {"bic", r.bic},
            {"bic_minimized", -r.bic},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"labels", r.labels}};
}

FitResult model_from_json(const nlohmann::json& doc)
{
    try
    {
        const auto version = doc.at("schema_version").get<std::string>();
        if (version != kModelSchemaVersion)
        {
            throw SchemaVersionError("model schema version '" + version + "' is not supported (expected '" +
                                     kModelSchemaVersion + "')");
        }
        FitResult r;
        r.spec = parse_model(doc.at("model_code").get<std::string>());
        r.groups = doc.at("G").get<int>();
        r.p = doc.at("p").get<int>();
        r.n = doc.value("n", 0);
        r.gaussian_mode = doc.value("gaussian_mode", false);
        for (const auto& c : doc.at("components"))
        {
            ComponentState s;
            s.pi = c.at("pi").get<double>();
            s.mu = json_vec(c.at("mu"));
            const Vector flat = json_vec(c.at("orient"));
            if (flat.size() != static_cast<Eigen::Index>(r.p) * r.p || s.mu.size() != r.p)
            {
                throw ParseError("model component has wrong dimensions");
            }
            s.orient = Eigen::Map<const Matrix>(flat.data(), r.p, r.p);
            s.a = json_vec(c.at("a"));
            s.b = c.at("b").get<double>();
            s.d = c.at("d").get<int>();
            s.nu = c.at("nu").get<double>();
            validate(s, r.p);
            r.states.push_back(std::move(s));
        }
        if (static_cast<int>(r.states.size()) != r.groups)
        {
            throw ParseError("model has " + std::to_string(r.states.size()) + " components, G = " +
                             std::to_string(r.groups));
        }
        r.loglik_trace = doc.at("loglik_trace").get<std::vector<double>>();
        r.loglik = doc.value("loglik", r.loglik_trace.empty() ? 0.0 : r.loglik_trace.back());
        r.n_params = doc.value("n_params", 0);
        r.bic = doc.at("bic").get<double>();
        r.converged = doc.at("converged").get<bool>();
        r.iterations = doc.value("iterations", static_cast<int>(r.loglik_trace.size()));
        r.labels = doc.value("labels", std::vector<int>{});
        return r;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const FitResult& result, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ParseError("cannot write '" + path.string() + "'");
    }
    out << model_to_json(result).dump(2) << '\n';
}

FitResult load_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return model_from_json(doc);
}
}  // namespace thddc
