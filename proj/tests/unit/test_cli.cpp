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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "thddc/error.hpp"

namespace fs = std::filesystem;

namespace
{
struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run call(std::vector<std::string> args)
{
    args.insert(args.begin(), "thddc");
    std::vector<const char*> argv;
    for (const auto& a : args)
    {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = thddc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "thddc_cli";
    fs::create_directories(dir);
    return dir / name;
}

const std::string kIris = THDDC_DATA_DIR "/iris.csv";
}  // namespace

TEST_CASE("-G parsing")
{
    using thddc::cli::parse_groups;
    CHECK(parse_groups("3") == std::vector<int>{3});
    CHECK(parse_groups("1..4") == std::vector<int>{1, 2, 3, 4});
    CHECK(parse_groups("2,5") == std::vector<int>{2, 5});
    CHECK_THROWS_AS(parse_groups("0"), thddc::UsageError);
    CHECK_THROWS_AS(parse_groups("4..1"), thddc::UsageError);
    CHECK_THROWS_AS(parse_groups("x"), thddc::UsageError);
}

TEST_CASE("fit prints a summary and writes artifacts only on request")
{
    const auto model = scratch("fit.json");
    const auto labels = scratch("fit_labels.csv");
    const Run r = call({"fit", "--data", kIris, "--labels", "species", "--model", "UUUCC", "-G", "3",
                        "--out", model.string(), "--labels-out", labels.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("UUUCC") != std::string::npos);
    CHECK(r.out.find("ari") != std::string::npos);
    CHECK(fs::exists(model));

    const auto again = scratch("predict_labels.csv");
    const Run p = call({"predict", "--model", model.string(), "--data", kIris, "--labels", "species",
                        "--out", again.string()});
    CHECK(p.code == 0);
    CHECK(slurp(again) == slurp(labels));
}

TEST_CASE("usage errors exit with 1")
{
    const Run bad_model = call({"fit", "--data", kIris, "--labels", "species", "--model", "ZZZZZ", "-G", "3"});
    CHECK(bad_model.code == 1);
    CHECK(bad_model.err.find("ZZZZZ") != std::string::npos);
    CHECK(call({"fit", "--data", kIris, "--labels", "species", "--model", "UUUUU", "-G", "0"}).code == 1);
    CHECK(call({"fit", "--data", "/nonexistent.csv", "--model", "UUUUU", "-G", "2"}).code == 1);
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({}).code == 1);
    CHECK(call({"fit", "--data", kIris, "--model", "UUUUU", "-G", "2"}).code == 1);
}

TEST_CASE("numerical failure exits with 2")
{
    const auto tiny = scratch("tiny.csv");
    std::ofstream(tiny) << "a,b\n0,0\n1,1\n2,2.5\n3,3\n";
    CHECK(call({"grid", "--data", tiny.string(), "--models", "UUUUU", "-G", "3"}).code == 2);
}

TEST_CASE("grid writes one row per cell and is reproducible")
{
    const auto a = scratch("grid_a.csv");
    const auto b = scratch("grid_b.csv");
    const auto best = scratch("best.json");
    const std::vector<std::string> base{"grid", "--data", kIris, "--labels", "species",
                                        "--models", "UUUUU,CCCCC", "-G", "1..3", "--seed", "5"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string(), "--best-out", best.string()});
    CHECK(call(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out", b.string(), "--jobs", "2"});
    CHECK(call(args).code == 0);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.rfind("model,G,bic,ari,converged,iterations,seconds\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 3);
    CHECK(fs::exists(best));
}

TEST_CASE("gaussian mode warns that the nu letter is ignored")
{
    const Run r = call({"fit", "--data", kIris, "--labels", "species", "--model", "UUUCC", "-G", "3",
                        "--gaussian"});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("simulate writes datasets and a manifest")
{
    const auto d1 = scratch("sim1");
    const auto d2 = scratch("sim2");
    fs::remove_all(d1);
    fs::remove_all(d2);
    CHECK(call({"simulate", "--out", d1.string(), "--seed", "7", "--n", "50"}).code == 0);
    CHECK(call({"simulate", "--out", d2.string(), "--seed", "7", "--n", "50", "--nu", "2,3"}).code == 0);
    int files = 0;
    for (const auto& e : fs::directory_iterator(d1))
    {
        files += e.path().extension() == ".csv";
    }
    CHECK(files == 10);
    CHECK(slurp(d1 / "sim_01.csv") == slurp(d2 / "sim_01.csv"));
    CHECK(slurp(d1 / "manifest.json").find("\"nu\"") != std::string::npos);
    CHECK(call({"simulate", "--out", d1.string(), "--nu", "2"}).code == 1);
}

TEST_CASE("evaluate")
{
    const Run self = call({"evaluate", "--truth", kIris, "--truth-column", "species", "--pred", kIris,
                           "--pred-column", "species"});
    CHECK(self.code == 0);
    CHECK(self.out.find("ari   1.000000") != std::string::npos);
    const Run reference = call({"evaluate", "--truth", kIris, "--truth-column", "species", "--pred",
                             THDDC_TEST_DATA_DIR "/iris_reference_pred.csv"});
    CHECK(reference.out.find("ari   0.903874") != std::string::npos);
    const auto short_file = scratch("short.csv");
    std::ofstream(short_file) << "label\n1\n2\n";
    CHECK(call({"evaluate", "--truth", kIris, "--truth-column", "species", "--pred", short_file.string()}).code == 1);
}
