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

#include <algorithm>

#include <json.hpp>

#include "faultchain/error.hpp"
#include "faultchain/minilang.hpp"

namespace faultchain::minilang {

using nlohmann::json;

BackwardDynamicSlice backward_slice(const DynamicDependenceGraph& ddg, std::size_t root) {
    const std::size_t roots[] = {root};
    return backward_slice(ddg, roots);
}

BackwardDynamicSlice backward_slice(const DynamicDependenceGraph& ddg, std::span<const std::size_t> roots) {
    BackwardDynamicSlice slice;
    if (roots.empty()) {
        throw InputError("backward slice needs at least one root instance");
    }
    slice.root = roots.front();
    std::vector<std::uint8_t> seen(ddg.size(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t r : roots) {
        if (r >= ddg.size()) {
            throw InputError("slice root instance " + std::to_string(r) + " is not in the dependence graph");
        }
        if (!seen[r]) {
            seen[r] = 1;
            stack.push_back(r);
        }
    }
    while (!stack.empty()) {
        const std::size_t n = stack.back();
        stack.pop_back();
        for (const auto& dep : ddg.dependencies(n)) {
            if (!seen[dep.target]) {
                seen[dep.target] = 1;
                stack.push_back(dep.target);
            }
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i]) {
            slice.instances.push_back(i);
            slice.statements.insert(ddg.statement_id(i));
        }
    }
    return slice;
}

std::vector<std::size_t> slice_roots(const ExecutionResult& run, const TestCase& tc) {
    std::vector<std::size_t> roots;
    if (tc.verdict == Verdict::Pass || !tc.expected) {
        for (const auto& ev : run.output_events) {
            roots.push_back(ev.instance);
        }
    } else {
        const auto& expected = *tc.expected;
        for (std::size_t k = 0; k < run.output_events.size(); ++k) {
            if (k >= expected.size() || expected[k] != run.output_events[k].value) {
                roots.push_back(run.output_events[k].instance);
            }
        }
        if (run.crash_instance) {
            roots.push_back(*run.crash_instance);
        }
        if (roots.empty()) {
            // Wrong only by omission (too few outputs, or a step-limit crash).
            for (const auto& ev : run.output_events) {
                roots.push_back(ev.instance);
            }
        }
    }
    if (roots.empty() && run.ddg.size() > 0) {
        roots.push_back(run.ddg.size() - 1);
    }
    return roots;
}

SuiteTrace trace_suite(const Program& program, std::vector<TestCase> suite, std::size_t step_limit) {
    if (!program.has_output()) {
        throw InputError("program has no output statement (print or return)");
    }
    SuiteTrace trace;
    trace.runs.reserve(suite.size());
    for (auto& tc : suite) {
        ExecutionResult run = run_with_trace(program, tc.inputs, step_limit);
        tc.crashed = run.crashed();
        tc.observed = run.outputs;
        trace.runs.push_back(std::move(run));
    }
    classify_tests(suite);

    const std::size_t n_stmts = program.statements.size();
    std::vector<std::vector<std::uint8_t>> cov_rows;
    std::vector<std::vector<std::uint8_t>> slice_rows;
    std::vector<std::string> test_ids;
    std::vector<Verdict> verdicts;
    for (std::size_t t = 0; t < suite.size(); ++t) {
        const auto& run = trace.runs[t];
        cov_rows.push_back(run.covered);
        std::vector<std::uint8_t> row(n_stmts, 0);
        const auto roots = slice_roots(run, suite[t]);
        if (!roots.empty()) {
            const auto slice = backward_slice(run.ddg, roots);
            for (std::size_t inst : slice.instances) {
                row[run.ddg.node(inst).statement] = 1;
            }
        }
        slice_rows.push_back(std::move(row));
        test_ids.push_back(suite[t].id);
        verdicts.push_back(suite[t].verdict);
    }
    trace.coverage = SliceSpectrum(program.ids(), test_ids, cov_rows, verdicts, SpectrumMode::Coverage);
    trace.slice = SliceSpectrum(program.ids(), test_ids, slice_rows, verdicts, SpectrumMode::Slice);
    trace.suite = std::move(suite);
    return trace;
}

SliceSpectrum build_slice_spectrum(const Program& program, std::vector<TestCase>& suite, SpectrumMode mode,
                                   std::size_t step_limit) {
    SuiteTrace trace = trace_suite(program, suite, step_limit);
    suite = trace.suite;
    return mode == SpectrumMode::Slice ? std::move(trace.slice) : std::move(trace.coverage);
}

std::set<std::string> infected_statements(const Program& program, const SuiteTrace& trace,
                                          const std::set<std::string>& faulty) {
    std::set<std::string> out = faulty;
    std::vector<std::uint8_t> is_faulty(program.statements.size(), 0);
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
        is_faulty[i] = faulty.count(program.statements[i].id) ? 1 : 0;
    }
    for (std::size_t t = 0; t < trace.suite.size(); ++t) {
        if (trace.suite[t].verdict != Verdict::Fail) {
            continue;
        }
        const auto& ddg = trace.runs[t].ddg;
        // Forward closure from faulty instances; node order is topological.
        std::vector<std::uint8_t> tainted(ddg.size(), 0);
        for (std::size_t n = 0; n < ddg.size(); ++n) {
            if (is_faulty[ddg.node(n).statement]) {
                tainted[n] = 1;
                continue;
            }
            for (const auto& d : ddg.dependencies(n)) {
                if (tainted[d.target]) {
                    tainted[n] = 1;
                    break;
                }
            }
        }
        const auto roots = slice_roots(trace.runs[t], trace.suite[t]);
        if (roots.empty()) {
            continue;
        }
        const auto slice = backward_slice(ddg, roots);
        for (std::size_t inst : slice.instances) {
            if (tainted[inst]) {
                out.insert(ddg.statement_id(inst));
            }
        }
    }
    return out;
}

std::string ddg_to_json(const DynamicDependenceGraph& ddg) {
    json nodes = json::array();
    json edges = json::array();
    for (std::size_t i = 0; i < ddg.size(); ++i) {
        nodes.push_back({{"id", i}, {"statement", ddg.statement_id(i)}, {"occurrence", ddg.node(i).occurrence}});
        for (const auto& d : ddg.dependencies(i)) {
            edges.push_back({{"from", i}, {"to", d.target}, {"type", to_string(d.type)}});
        }
    }
    return json{{"nodes", nodes}, {"edges", edges}}.dump(2) + "\n";
}

std::string pdg_to_json(const StaticPDG& pdg) {
    json edges = json::array();
    for (const auto& e : pdg.edges()) {
        edges.push_back({{"from", e.from}, {"to", e.to}, {"type", to_string(e.type)}});
    }
    return json{{"nodes", pdg.nodes()}, {"edges", edges}}.dump(2) + "\n";
}

StaticPDG pdg_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        auto nodes = doc.at("nodes").get<std::vector<std::string>>();
        std::vector<PdgEdge> edges;
        for (const auto& e : doc.at("edges")) {
            const auto type = e.at("type").get<std::string>();
            if (type != "data" && type != "control") {
                throw InputError("unknown dependence type '" + type + "'");
            }
            edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                             type == "data" ? DepType::Data : DepType::Control});
        }
        return StaticPDG(std::move(nodes), std::move(edges));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed dependence graph: ") + e.what());
    }
}

std::vector<TestCase> suite_from_json(const std::string& text) {
    std::vector<TestCase> suite;
    try {
        const json doc = json::parse(text);
        if (!doc.is_array()) {
            throw InputError("test suite must be a JSON list");
        }
        std::set<std::string> ids;
        for (const auto& t : doc) {
            TestCase tc;
            tc.id = t.at("id").get<std::string>();
            if (!ids.insert(tc.id).second) {
                throw InputError("duplicate test id '" + tc.id + "'");
            }
            for (const auto& [name, value] : t.at("inputs").items()) {
                tc.inputs[name] = value.get<Value>();
            }
            if (t.contains("expected")) {
                const auto& e = t.at("expected");
                tc.expected = e.is_array() ? e.get<std::vector<Value>>() : std::vector<Value>{e.get<Value>()};
            }
            suite.push_back(std::move(tc));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed test suite: ") + e.what());
    }
    return suite;
}

std::string suite_to_json(const std::vector<TestCase>& suite) {
    json doc = json::array();
    for (const auto& tc : suite) {
        json t{{"id", tc.id}, {"inputs", tc.inputs}};
        if (tc.expected) {
            if (tc.expected->size() == 1) {
                t["expected"] = tc.expected->front();
            } else {
                t["expected"] = *tc.expected;
            }
        }
        doc.push_back(std::move(t));
    }
    return doc.dump(2) + "\n";
}

}  // namespace faultchain::minilang
