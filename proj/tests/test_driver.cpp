// Copyright 2026-present the faultchain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "faultchain/corpus.hpp"
#include "faultchain/driver.hpp"

using namespace faultchain;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "faultchain");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = driver::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("faultchain_driver_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// golden program and suite on disk, traced into <dir>/trace
fs::path golden_trace(const std::string& name) {
    const auto dir = scratch(name);
    const auto g = corpus::motivating_example();
    corpus::write_case(dir / "case", g.bundle, corpus::golden_expected_json(g));
    const auto r = cli({"trace", (dir / "case" / "program.src").string(), (dir / "case" / "tests.json").string(), "-o",
                        (dir / "trace").string()});
    REQUIRE(r.code == 0);
    return dir;
}

}  // namespace

TEST_CASE("trace exports spectra, graphs and verdicts") {
    const auto dir = golden_trace("trace");
    const auto t = dir / "trace";
    for (const char* f : {"spectrum.coverage.json", "spectrum.slice.json", "pdg.json", "verdicts.json"}) {
        CHECK(fs::exists(t / f));
    }
    const auto verdicts = nlohmann::json::parse(slurp(t / "verdicts.json"));
    REQUIRE(verdicts.size() == 12);
    std::size_t failing = 0;
    for (const auto& v : verdicts) {
        failing += v.at("verdict") == "fail";
        CHECK(fs::exists(t / "ddg" / (v.at("id").get<std::string>() + ".json")));
    }
    CHECK(failing == 6);
    fs::remove_all(dir);
}

TEST_CASE("input errors exit with 2 and name the culprit") {
    const auto dir = scratch("errors");
    std::ofstream(dir / "p.src") << "read(a);\nprint(a);\n";
    auto r = cli({"trace", (dir / "p.src").string(), (dir / "missing.json").string(), "-o", (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("missing.json") != std::string::npos);

    std::ofstream(dir / "silent.src") << "read(a);\na = a + 1;\n";
    std::ofstream(dir / "t.json") << R"([{"id": "t1", "inputs": {"a": 1}, "expected": [2]}])";
    r = cli({"trace", (dir / "silent.src").string(), (dir / "t.json").string(), "-o", (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());

    std::ofstream(dir / "bad.src") << "read(a);\nprint(a +);\n";
    r = cli({"trace", (dir / "bad.src").string(), (dir / "t.json").string(), "-o", (dir / "o").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("bad.src") != std::string::npos);

    r = cli({"localize", (dir / "nope.json").string(), (dir / "nope.json").string()});
    CHECK(r.code == 2);
    r = cli({"localize"});
    CHECK(r.code == 2);
    r = cli({"frobnicate"});
    CHECK(r.code == 2);
    fs::remove_all(dir);
}

TEST_CASE("parameter validation") {
    const auto dir = golden_trace("params");
    const auto t = dir / "trace";
    const std::string s = (t / "spectrum.slice.json").string();
    const std::string p = (t / "pdg.json").string();
    CHECK(cli({"localize", s, p, "--delta-fraction", "0"}).code == 2);
    CHECK(cli({"localize", s, p, "--delta-fraction", "1.5"}).code == 2);
    CHECK(cli({"localize", s, p, "--chain-cap", "0"}).code == 2);
    CHECK(cli({"localize", s, p, "--phi", "renyi"}).code == 2);
    CHECK(cli({"localize", s, p, "--matching", "optimal"}).code == 2);
    CHECK(cli({"localize", s, p, "--technique", "tarantula"}).code == 2);
    std::ofstream(dir / "prior.json") << R"({"S9": -1})";
    CHECK(cli({"localize", s, p, "--prior-file", (dir / "prior.json").string()}).code == 2);
    std::ofstream(dir / "prior.json") << R"({"S9": 0.5})";
    CHECK(cli({"localize", s, p, "--prior-file", (dir / "prior.json").string()}).code == 0);
    fs::remove_all(dir);
}

TEST_CASE("a passing suite is a precondition failure") {
    const auto dir = scratch("passing");
    const auto g = corpus::motivating_example();
    auto fixed = g.bundle;
    fixed.faults.clear();
    corpus::write_case(dir / "case", fixed, "{}");
    auto r = cli({"trace", (dir / "case" / "program.src").string(), (dir / "case" / "tests.json").string(), "-o",
                  (dir / "trace").string()});
    REQUIRE(r.code == 0);
    r = cli({"localize", (dir / "trace" / "spectrum.slice.json").string(), (dir / "trace" / "pdg.json").string()});
    CHECK(r.code == 3);
    CHECK_FALSE(r.err.empty());
    fs::remove_all(dir);
}

TEST_CASE("localize on the golden case") {
    const auto dir = golden_trace("localize");
    const auto t = dir / "trace";
    const auto r = cli({"localize", (t / "spectrum.coverage.json").string(), (t / "pdg.json").string(),
                        "--causal-spectrum", (t / "spectrum.slice.json").string(), "-o", (dir / "r.json").string(),
                        "--text", (dir / "r.txt").string()});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
    const auto& e = j.at("entries");
    REQUIRE(e.size() >= 3);
    CHECK(e[0].at("statement") == "S9");
    CHECK(e[1].at("statement") == "S15");
    CHECK(e[2].at("statement") == "S6");
    REQUIRE(j.at("chains").size() == 2);
    CHECK(j.at("chains")[0].at("members") == nlohmann::json::array({"S9", "S15"}));
    CHECK(j.contains("config"));
    CHECK(slurp(dir / "r.txt").find("S9") != std::string::npos);

    const auto o = cli({"localize", (t / "spectrum.coverage.json").string(), (t / "pdg.json").string(), "--technique",
                        "ochiai"});
    REQUIRE(o.code == 0);
    const auto oj = nlohmann::json::parse(o.out);
    CHECK(oj.at("chains").empty());
    CHECK(oj.at("entries").size() == 16);
    fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte-identical") {
    const auto dir = golden_trace("repeat");
    const auto t = dir / "trace";
    const std::vector<std::string> args = {"localize", (t / "spectrum.slice.json").string(),
                                           (t / "pdg.json").string()};
    const auto a = cli(args);
    const auto b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    REQUIRE(cli({"corpus-gen", (dir / "corpus").string(), "--cases", "2", "--seed", "5"}).code == 0);
    const auto e1 = cli({"evaluate", (dir / "corpus").string(), "--json", (dir / "e1.json").string()});
    const auto e2 = cli({"evaluate", (dir / "corpus").string(), "--json", (dir / "e2.json").string()});
    REQUIRE(e1.code == 0);
    CHECK(e1.out == e2.out);
    CHECK(slurp(dir / "e1.json") == slurp(dir / "e2.json"));
    CHECK(e1.out.find("motivating") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("evaluate skips malformed cases with a warning") {
    const auto dir = scratch("malformed");
    REQUIRE(cli({"corpus-gen", (dir / "corpus").string(), "--cases", "1"}).code == 0);
    fs::create_directories(dir / "corpus" / "broken");
    std::ofstream(dir / "corpus" / "broken" / "program.src") << "read(a);\nprint(a);\n";
    const auto r = cli({"evaluate", (dir / "corpus").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("broken") != std::string::npos);
    CHECK(cli({"evaluate", (dir / "nothing").string()}).code == 2);
    fs::remove_all(dir);
}
