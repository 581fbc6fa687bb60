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

#include <json.hpp>

#include "faultchain/corpus.hpp"

namespace faultchain::corpus {

namespace {

constexpr const char* kMotivatingSource = R"(read(a, b, c);
result = 0;
rdiv = 1;
rsum = a + b;
if ((a > 0) && (b > 0))
    rdiv = a / b;
rmax = b;
if (a > b)
    rmax = b;  // correct: rmax = a;
if (c == 1)
    result = rsum;
if (c == 2)
    result = rdiv;
if (c == 3)
    result = rmax;
return result;
)";

struct GoldenTest {
    Value a, b, c, expected;
};

constexpr GoldenTest kTests[] = {
    {4, 1, 3, 4},  {7, 6, 3, 7},   {6, 3, 3, 6},   {2, 1, 3, 2},  {3, 2, 3, 3},  {9, 7, 3, 9},
    {8, -3, 2, 1}, {9, -2, 2, 1}, {-6, 8, 3, 8}, {7, 6, 1, 13}, {6, 8, 3, 8}, {-8, 9, 3, 9},
};

void ref(std::vector<ExpectedValue>& out, std::string key, double value, double tol) {
    out.push_back({std::move(key), value, tol, "reference"});
}

void derived(std::vector<ExpectedValue>& out, std::string key, double value, double tol) {
    out.push_back({std::move(key), value, tol, "derived"});
}

}  // namespace

GoldenCase motivating_example() {
    GoldenCase g;
    g.name = "motivating";
    g.source = kMotivatingSource;
    for (std::size_t i = 0; i < std::size(kTests); ++i) {
        const auto& t = kTests[i];
        TestCase tc;
        tc.id = "t" + std::to_string(i + 1);
        tc.inputs = {{"a", t.a}, {"b", t.b}, {"c", t.c}};
        tc.expected = std::vector<Value>{t.expected};
        g.suite.push_back(std::move(tc));
    }

    minilang::Program faulty = minilang::parse(g.source);
    faulty.statements[*faulty.index_of("S9")].expr = minilang::Expr::var("a");
    g.bundle.name = g.name;
    g.bundle.base_source = minilang::format(faulty);
    g.bundle.faults = {{"S9", MutationKind::WrongVariable, "a", "b"}};
    g.bundle.suite = g.suite;

    auto& e = g.expected;
    ref(e, "ochiai/S6", 0.87, 0.01);
    ref(e, "ochiai/S9", 0.81, 0.01);
    ref(e, "ochiai/S15", 0.81, 0.01);
    ref(e, "o/S6", 4, 0);
    ref(e, "o/S9", 3, 0);
    ref(e, "o/S15", 3, 0);
    ref(e, "gp19/S6", 16.97, 0.01);
    ref(e, "gp19/S9", 14.69, 0.01);
    ref(e, "gp19/S15", 14.69, 0.01);
    derived(e, "dstar/S6", 18, 1e-9);
    derived(e, "dstar/S9", 12, 1e-9);

    ref(e, "relevance/S6", 0.48, 0.01);
    ref(e, "relevance/S9", 0.34, 0.01);
    ref(e, "relevance/S11", 0.12, 0.01);
    ref(e, "relevance/S13", 0.23, 0.01);
    ref(e, "relevance/S15", 0.34, 0.01);
    ref(e, "rc/S6", 1, 0);
    ref(e, "rc/S9", 1, 0);
    ref(e, "rc/S11", -1, 0);
    ref(e, "rc/S13", -1, 0);
    ref(e, "rc/S15", 1, 0);
    ref(e, "cr/S9|S6", -0.12, 0.01);
    ref(e, "cr/S11|S6", 0.15, 0.01);
    ref(e, "cr/S13|S6", -0.23, 0.01);
    ref(e, "cr/S15|S6", -0.12, 0.01);
    ref(e, "cr/S11|S9", 0.08, 0.01);
    ref(e, "cr/S13|S9", 0.18, 0.01);
    ref(e, "cr/S15|S9", 0.41, 0.01);
    ref(e, "w2/S9", 0.88, 0.01);
    ref(e, "w2/S11", 1.15, 0.01);
    ref(e, "w2/S13", 0.77, 0.01);
    ref(e, "w2/S15", 0.88, 0.01);
    ref(e, "w3/S11", 1.24, 0.01);
    ref(e, "w3/S13", 0.91, 0.01);
    ref(e, "w3/S15", 1.24, 0.01);
    ref(e, "j1/S6", 0.48, 0.01);
    ref(e, "j1/S9", 0.34, 0.01);
    ref(e, "j1/S11", -0.12, 0.01);
    ref(e, "j1/S13", -0.23, 0.01);
    ref(e, "j1/S15", 0.34, 0.01);
    ref(e, "j2/S9", 0.30, 0.01);
    ref(e, "j2/S11", -0.14, 0.01);
    ref(e, "j2/S13", -0.18, 0.01);
    ref(e, "j2/S15", 0.30, 0.01);
    ref(e, "j3/S11", -0.15, 0.01);
    ref(e, "j3/S13", -0.21, 0.01);
    ref(e, "j3/S15", 0.42, 0.01);
    derived(e, "entropy/S6", 0.918, 0.001);
    derived(e, "mi/S6", 0.459, 0.001);
    derived(e, "cmi/S13|S6", 0.0, 1e-9);
    derived(e, "cmi/S15|S9", 0.689, 0.001);
    derived(e, "failing_tests", 6, 0);
    derived(e, "exam_best/inference", 100.0 / 16.0, 1e-9);

    g.expected_selection = {"S6", "S9", "S15"};
    g.expected_top = {"S9", "S15", "S6"};
    g.expected_chains = {{"S9", "S15"}, {"S6"}};
    return g;
}

std::string golden_expected_json(const GoldenCase& golden) {
    using nlohmann::ordered_json;
    ordered_json values = ordered_json::array();
    for (const auto& v : golden.expected) {
        values.push_back({{"key", v.key}, {"value", v.value}, {"tolerance", v.tolerance}, {"source", v.source}});
    }
    std::set<std::string> faulty = golden.bundle.fault_statements();
    ordered_json doc{
        {"case", golden.name},
        {"faulty_statements", std::vector<std::string>(faulty.begin(), faulty.end())},
        {"pipeline", {{"selection_spectrum", "coverage"}, {"causal_spectrum", "slice"}}},
        {"values", values},
        {"orderings",
         {{"selection", {{"value", golden.expected_selection}, {"source", "reference"}}},
          {"inference_top", {{"value", golden.expected_top}, {"source", "reference"}}},
          {"chains", {{"value", golden.expected_chains}, {"source", "reference"}}}}},
    };
    return doc.dump(2) + "\n";
}

}  // namespace faultchain::corpus
