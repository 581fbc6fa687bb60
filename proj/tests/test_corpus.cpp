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

#include <json.hpp>

#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"

using namespace faultchain;
using namespace faultchain::corpus;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("faultchain_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

const std::vector<FaultBundle>& small_corpus() {
    static const std::vector<FaultBundle> bundles = [] {
        GeneratorConfig cfg;
        cfg.cases = 5;
        return generate_corpus(42, cfg);
    }();
    return bundles;
}

}  // namespace

TEST_CASE("golden case fails six tests and the fix passes all") {
    const auto g = motivating_example();
    CHECK(g.suite.size() == 12);
    CHECK(failing_tests(g.source, g.suite) == 6);
    CHECK(g.bundle.combined_source() == minilang::format(minilang::parse(g.source)));
    CHECK(failing_tests(g.bundle.base_source, g.suite) == 0);
    CHECK(g.bundle.fault_statements() == std::set<std::string>{"S9"});
    CHECK(g.expected_top == std::vector<std::string>{"S9", "S15", "S6"});

    // expectation JSON carries provenance on every value
    const auto j = nlohmann::json::parse(golden_expected_json(g));
    CHECK(j.at("faulty_statements") == nlohmann::json::array({"S9"}));
    for (const auto& v : j.at("values")) {
        const auto src = v.at("source").get<std::string>();
        CHECK((src == "reference" || src == "derived"));
    }
    CHECK(j.at("values").size() == g.expected.size());
}

TEST_CASE("generation is deterministic per seed") {
    CHECK(generate_program(3, 40) == generate_program(3, 40));
    CHECK(generate_program(3, 40) != generate_program(4, 40));
    const auto p = minilang::parse(generate_program(11, 60));
    const auto s1 = generate_suite(p, 5, 80);
    const auto s2 = generate_suite(p, 5, 80);
    REQUIRE(s1.size() == 80);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i].inputs == s2[i].inputs);
        CHECK(s1[i].expected == s2[i].expected);
    }
    GeneratorConfig cfg;
    cfg.cases = 2;
    const auto a = generate_corpus(9, cfg);
    const auto b = generate_corpus(9, cfg);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].base_source == b[i].base_source);
        CHECK(a[i].faults == b[i].faults);
    }
}

TEST_CASE("generated programs respect the configured size and run on every test") {
    for (const auto& b : small_corpus()) {
        const auto base = minilang::parse(b.base_source);
        CHECK(base.ids().size() >= 30);
        CHECK(base.ids().size() <= 80);
        CHECK(b.suite.size() >= 50);
        CHECK(b.suite.size() <= 200);
        CHECK(failing_tests(b.base_source, b.suite, kGeneratedStepLimit) == 0);
    }
}

TEST_CASE("single-fault variant equals the mutant built directly") {
    const auto& b = small_corpus().front();
    const auto base = minilang::parse(b.base_source);
    for (const auto& f : b.faults) {
        const auto direct = minilang::format(apply_faults(base, {f}));
        CHECK(b.variant_source({f.statement}) == direct);
        CHECK(b.variant_source({f.statement}) != minilang::format(base));
    }
    CHECK(b.variant_source({}) == minilang::format(base));
}

TEST_CASE("seeded faults are distinct, failure-inducing and monotone") {
    std::size_t three = 0;
    for (const auto& b : small_corpus()) {
        INFO(b.name);
        REQUIRE_FALSE(b.faults.empty());
        CHECK(b.fault_statements().size() == b.faults.size());
        for (const auto& f : b.faults) {
            const auto fails = failing_tests(b.variant_source({f.statement}), b.suite, kGeneratedStepLimit);
            CHECK(fails >= 1);
            CHECK(fails * 2 <= b.suite.size());
        }
        CHECK(is_monotone(b));
        three += b.faults.size() == 3;
    }
    const auto base = generate_program(1234, 50);
    const auto suite = generate_suite(minilang::parse(base), 1, 100);
    const auto b = seed_faults("three", base, suite, 3, 77);
    CHECK(b.faults.size() == 3);
    CHECK(b.fault_statements().size() == 3);
    CHECK(is_monotone(b));
}

TEST_CASE("candidate mutations never touch loop control") {
    const auto base = minilang::parse("read(a);\ni = 0;\nwhile (i < 3) {\n  i = i + 1;\n  a = a + 2;\n}\nprint(a);\n");
    const auto muts = candidate_mutations(base);
    REQUIRE_FALSE(muts.empty());
    for (const auto& m : muts) {
        CHECK(m.original != m.mutated);
        CHECK(m.original != "i < 3");
        CHECK(m.original != "i + 1");
    }
}

TEST_CASE("mutation kinds round-trip") {
    for (auto k : all_mutation_kinds()) {
        CHECK(parse_mutation_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_mutation_kind("swap"), InputError);
}

TEST_CASE("apply_faults rejects mismatched faults") {
    const auto g = motivating_example();
    const auto base = minilang::parse(g.bundle.base_source);
    CHECK_THROWS_AS(apply_faults(base, {Fault{"S99", MutationKind::WrongVariable, "a", "b"}}), InputError);
    CHECK_THROWS_AS(apply_faults(base, {Fault{"S9", MutationKind::WrongVariable, "c", "b"}}), InputError);
}

TEST_CASE("case files round-trip") {
    const auto dir = scratch("roundtrip");
    const auto& b = small_corpus().front();
    write_case(dir / b.name, b, "{\"case\": \"x\"}");
    const auto c = load_case(dir / b.name);
    CHECK(c.name == b.name);
    CHECK(c.program_source == b.combined_source());
    CHECK(c.bundle.base_source == b.base_source);
    CHECK(c.bundle.faults == b.faults);
    REQUIRE(c.bundle.suite.size() == b.suite.size());
    for (std::size_t i = 0; i < b.suite.size(); ++i) {
        CHECK(c.bundle.suite[i].inputs == b.suite[i].inputs);
        CHECK(c.bundle.suite[i].expected == b.suite[i].expected);
    }

    // a program.src that disagrees with faults.json is rejected
    std::ofstream(dir / b.name / "program.src") << "read(a);\nprint(a);\n";
    CHECK_THROWS_AS(load_case(dir / b.name), InputError);
    std::filesystem::remove(dir / b.name / "tests.json");
    CHECK_THROWS_AS(load_case(dir / b.name), InputError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("write_corpus lays out the golden case and sorted generated cases") {
    const auto dir = scratch("layout");
    GeneratorConfig cfg;
    cfg.cases = 2;
    write_corpus(dir, 42, cfg);
    const auto dirs = case_directories(dir);
    REQUIRE(dirs.size() == 3);
    CHECK(dirs[0].filename() == "gen01");
    CHECK(dirs[1].filename() == "gen02");
    CHECK(dirs[2].filename() == "motivating");
    const auto golden = load_case(dirs[2]);
    CHECK(golden.bundle.fault_statements() == std::set<std::string>{"S9"});
    std::filesystem::remove_all(dir);
}
