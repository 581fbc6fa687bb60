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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "faultchain/minilang.hpp"
#include "faultchain/spectrum.hpp"

namespace faultchain::corpus {

enum class MutationKind { WrongVariable, WrongOperator, WrongConstant, NegatedPredicate };

const char* to_string(MutationKind k) noexcept;
MutationKind parse_mutation_kind(const std::string& text);
const std::vector<MutationKind>& all_mutation_kinds();

/// A seeded fault replaces the expression of one statement.
struct Fault {
    std::string statement;
    MutationKind kind = MutationKind::WrongVariable;
    std::string original;  // format_expr of the correct expression
    std::string mutated;

    friend bool operator==(const Fault&, const Fault&) = default;
};

struct FaultBundle {
    std::string name;
    std::string base_source;  // the correct program
    std::vector<Fault> faults;
    std::vector<TestCase> suite;  // expected outputs come from the base program

    std::set<std::string> fault_statements() const;
    /// Base program with the faults located at `active` applied.
    std::string variant_source(const std::set<std::string>& active) const;
    /// Every fault applied.
    std::string combined_source() const;
    /// fault -> combined variant with that one fault fixed.
    std::map<std::string, std::string> fixed_variants() const;
};

/// Applies faults by statement id. Throws InputError when a fault names an
/// unknown statement or its `original` does not match the program.
minilang::Program apply_faults(const minilang::Program& base, const std::vector<Fault>& faults);

struct ExpectedValue {
    std::string key;    // e.g. "ochiai/S6", "table2/R/S9"
    double value = 0;
    double tolerance = 0;
    std::string source;  // "reference" or "derived"
};

struct GoldenCase {
    std::string name;
    std::string source;  // faulty program
    std::vector<TestCase> suite;
    FaultBundle bundle;
    std::vector<ExpectedValue> expected;
    std::vector<std::string> expected_selection;  // selection order
    std::vector<std::string> expected_top;        // leading Inference report entries
    std::vector<std::vector<std::string>> expected_chains;
};

GoldenCase motivating_example();
/// The golden case's expectation table as JSON (stable formatting).
std::string golden_expected_json(const GoldenCase& golden);

/// Failing-test count of a variant; crashes count as failures.
std::size_t failing_tests(const std::string& source, const std::vector<TestCase>& suite,
                          std::size_t step_limit = minilang::kDefaultStepLimit);

// ---- generation ---------------------------------------------------------

inline constexpr std::size_t kGeneratedStepLimit = 100'000;

/// Straight-line code, branches and bounded loops over four inputs a..d.
std::string generate_program(std::uint64_t seed, std::size_t target_statements);

/// Random inputs in [-10, 10] plus boundary values; expected outputs are the
/// base program's. Throws PreconditionError when the base crashes.
std::vector<TestCase> generate_suite(const minilang::Program& base, std::uint64_t seed, std::size_t num_tests);

/// Every single-expression mutation of the program, in source order. Loop
/// predicates and assignments to loop-control variables are never mutated.
std::vector<Fault> candidate_mutations(const minilang::Program& base);

/// Draws `num_faults` faults on distinct statements. Each must fail >= 1 and
/// pass >= 1 test on its own, failing at most `max_failing_fraction` of the
/// suite, and the bundle must be monotone: removing any
/// active fault from any active subset strictly lowers the failing count.
/// Throws PreconditionError when no such bundle is found within `attempts`.
FaultBundle seed_faults(const std::string& name, const std::string& base_source, std::vector<TestCase> suite,
                        std::size_t num_faults, std::uint64_t seed, std::size_t attempts = 400,
                        const std::vector<MutationKind>& kinds = all_mutation_kinds(),
                        double max_failing_fraction = 0.5);

bool is_monotone(const FaultBundle& bundle, std::size_t step_limit = kGeneratedStepLimit);

struct GeneratorConfig {
    std::size_t cases = 10;
    std::size_t min_statements = 30;
    std::size_t max_statements = 80;
    std::size_t min_tests = 50;
    std::size_t max_tests = 200;
    std::size_t max_faults = 3;
};

std::vector<FaultBundle> generate_corpus(std::uint64_t seed, const GeneratorConfig& cfg = {});

// ---- on-disk layout: <case>/program.src, tests.json, faults.json, expected.json

struct CorpusCase {
    std::string name;
    std::string program_source;  // the faulty program
    FaultBundle bundle;
    std::string expected_json;
};

void write_case(const std::filesystem::path& dir, const FaultBundle& bundle, const std::string& expected_json);
CorpusCase load_case(const std::filesystem::path& dir);
/// Case directories sorted by name.
std::vector<std::filesystem::path> case_directories(const std::filesystem::path& root);

/// Writes the golden case ("motivating") and the generated cases.
void write_corpus(const std::filesystem::path& root, std::uint64_t seed, const GeneratorConfig& cfg = {});

}  // namespace faultchain::corpus
