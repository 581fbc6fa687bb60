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
#include <string>
#include <vector>

#include "faultchain/bitcolumn.hpp"

namespace faultchain {

enum class Verdict { Pass, Fail };
enum class SpectrumMode { Coverage, Slice };

const char* to_string(Verdict v) noexcept;
const char* to_string(SpectrumMode m) noexcept;
SpectrumMode parse_mode(const std::string& text);

using Value = std::int64_t;
using Bindings = std::map<std::string, Value>;

/// One test of a suite. `expected` holds the full output sequence (prints in
/// order, then the returned value); suites written with a scalar "expected"
/// load as a one-element sequence.
struct TestCase {
    std::string id;
    Bindings inputs;
    std::optional<std::vector<Value>> expected;
    std::optional<std::vector<Value>> observed;
    bool crashed = false;
    Verdict verdict = Verdict::Pass;
};

/// Assigns verdicts: Fail iff the run crashed or observed != expected.
/// Throws InputError for a test without an expected output or without any
/// observation.
void classify_tests(std::vector<TestCase>& suite);

/// Boolean test x statement matrix stored column-major (one BitColumn per
/// statement) plus per-test verdicts. Immutable once built.
class SliceSpectrum {
public:
    SliceSpectrum() = default;

    /// rows[t][s] != 0 marks test t covering statement s. Throws InputError on
    /// dimension mismatch (naming the test) or duplicate ids.
    SliceSpectrum(std::vector<std::string> statements, std::vector<std::string> tests,
                  const std::vector<std::vector<std::uint8_t>>& rows, std::vector<Verdict> verdicts,
                  SpectrumMode mode);

    const std::vector<std::string>& statements() const noexcept { return statements_; }
    const std::vector<std::string>& tests() const noexcept { return tests_; }
    const std::vector<Verdict>& verdicts() const noexcept { return verdicts_; }
    SpectrumMode mode() const noexcept { return mode_; }

    std::size_t num_statements() const noexcept { return statements_.size(); }
    std::size_t num_tests() const noexcept { return tests_.size(); }

    bool covers(std::size_t test, std::size_t statement) const { return columns_[statement].test(test); }
    const BitColumn& column(std::size_t statement) const { return columns_[statement]; }
    /// Failure indicator per test (1 = Fail); the outcome variable.
    const BitColumn& failures() const noexcept { return failures_; }

    std::size_t num_failing() const noexcept { return failures_.count(); }

    std::optional<std::size_t> index_of(const std::string& statement_id) const;
    /// Like index_of, but throws InputError for unknown ids.
    std::size_t require_index(const std::string& statement_id) const;

    std::vector<std::uint8_t> row(std::size_t test) const;

    friend bool operator==(const SliceSpectrum&, const SliceSpectrum&) = default;

private:
    std::vector<std::string> statements_;
    std::vector<std::string> tests_;
    std::vector<BitColumn> columns_;
    std::vector<Verdict> verdicts_;
    BitColumn failures_;
    SpectrumMode mode_ = SpectrumMode::Coverage;
    std::map<std::string, std::size_t> index_;
};

/// Per-statement coverage counts split by verdict.
struct StatementCounts {
    std::size_t covered_failed = 0;    // N_CF
    std::size_t uncovered_failed = 0;  // N_UF
    std::size_t covered_passed = 0;    // N_CP
    std::size_t uncovered_passed = 0;  // N_UP

    friend bool operator==(const StatementCounts&, const StatementCounts&) = default;
};

struct SpectrumStats {
    std::vector<std::string> statements;
    std::vector<StatementCounts> counts;
    std::size_t total_failed = 0;  // N_F
    std::size_t total_passed = 0;  // N_P

    const StatementCounts& at(const std::string& statement_id) const;
};

/// Throws PreconditionError when the spectrum has no failing test.
SpectrumStats build_stats(const SliceSpectrum& spectrum);

/// Rejects spectra that cannot enter the pipeline (no failing test).
void require_failing_tests(const SliceSpectrum& spectrum);

SliceSpectrum load_spectrum(const std::filesystem::path& path);
void save_spectrum(const SliceSpectrum& spectrum, const std::filesystem::path& path);

std::string spectrum_to_json(const SliceSpectrum& spectrum);
SliceSpectrum spectrum_from_json(const std::string& text);

}  // namespace faultchain
