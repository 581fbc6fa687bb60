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

#include "faultchain/spectrum.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "faultchain/error.hpp"
#include "faultchain/kernels.hpp"

namespace faultchain {

using nlohmann::json;

const char* to_string(Verdict v) noexcept { return v == Verdict::Fail ? "fail" : "pass"; }

const char* to_string(SpectrumMode m) noexcept { return m == SpectrumMode::Slice ? "slice" : "coverage"; }

SpectrumMode parse_mode(const std::string& text) {
    if (text == "slice") {
        return SpectrumMode::Slice;
    }
    if (text == "coverage") {
        return SpectrumMode::Coverage;
    }
    throw InputError("unknown spectrum mode '" + text + "' (expected coverage|slice)");
}

void classify_tests(std::vector<TestCase>& suite) {
    for (auto& tc : suite) {
        if (!tc.expected) {
            throw InputError("test '" + tc.id + "' has no expected output");
        }
        if (tc.crashed) {
            tc.verdict = Verdict::Fail;
            continue;
        }
        if (!tc.observed) {
            throw InputError("test '" + tc.id + "' has neither an observed output nor a crash flag");
        }
        tc.verdict = (*tc.observed == *tc.expected) ? Verdict::Pass : Verdict::Fail;
    }
}

SliceSpectrum::SliceSpectrum(std::vector<std::string> statements, std::vector<std::string> tests,
                             const std::vector<std::vector<std::uint8_t>>& rows, std::vector<Verdict> verdicts,
                             SpectrumMode mode)
    : statements_(std::move(statements)), tests_(std::move(tests)), verdicts_(std::move(verdicts)), mode_(mode) {
    if (rows.size() != tests_.size()) {
        throw InputError("matrix has " + std::to_string(rows.size()) + " rows but there are " +
                         std::to_string(tests_.size()) + " tests");
    }
    if (verdicts_.size() != tests_.size()) {
        throw InputError("verdict count does not match test count");
    }
    for (std::size_t s = 0; s < statements_.size(); ++s) {
        if (!index_.emplace(statements_[s], s).second) {
            throw InputError("duplicate statement id '" + statements_[s] + "'");
        }
    }
    std::set<std::string> seen;
    for (const auto& t : tests_) {
        if (!seen.insert(t).second) {
            throw InputError("duplicate test id '" + t + "'");
        }
    }
    columns_.assign(statements_.size(), BitColumn(tests_.size()));
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != statements_.size()) {
            throw InputError("matrix row for test '" + tests_[t] + "' has " + std::to_string(rows[t].size()) +
                             " entries, expected " + std::to_string(statements_.size()));
        }
        for (std::size_t s = 0; s < statements_.size(); ++s) {
            if (rows[t][s] > 1) {
                throw InputError("matrix entry for test '" + tests_[t] + "' is not 0 or 1");
            }
            columns_[s].set(t, rows[t][s] != 0);
        }
    }
    failures_ = BitColumn(tests_.size());
    for (std::size_t t = 0; t < verdicts_.size(); ++t) {
        failures_.set(t, verdicts_[t] == Verdict::Fail);
    }
}

std::optional<std::size_t> SliceSpectrum::index_of(const std::string& statement_id) const {
    auto it = index_.find(statement_id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t SliceSpectrum::require_index(const std::string& statement_id) const {
    if (auto idx = index_of(statement_id)) {
        return *idx;
    }
    throw InputError("statement '" + statement_id + "' is not in the spectrum");
}

std::vector<std::uint8_t> SliceSpectrum::row(std::size_t test) const {
    std::vector<std::uint8_t> out(statements_.size());
    for (std::size_t s = 0; s < statements_.size(); ++s) {
        out[s] = columns_[s].test(test) ? 1 : 0;
    }
    return out;
}

const StatementCounts& SpectrumStats::at(const std::string& statement_id) const {
    for (std::size_t i = 0; i < statements.size(); ++i) {
        if (statements[i] == statement_id) {
            return counts[i];
        }
    }
    throw InputError("statement '" + statement_id + "' has no statistics");
}

void require_failing_tests(const SliceSpectrum& spectrum) {
    if (spectrum.num_failing() == 0) {
        throw PreconditionError("spectrum has no failing tests; nothing to localize");
    }
}

SpectrumStats build_stats(const SliceSpectrum& spectrum) {
    require_failing_tests(spectrum);
    SpectrumStats stats;
    stats.statements = spectrum.statements();
    stats.total_failed = spectrum.num_failing();
    stats.total_passed = spectrum.num_tests() - stats.total_failed;
    stats.counts.resize(spectrum.num_statements());
    const auto fail_words = spectrum.failures().words();
    for (std::size_t s = 0; s < spectrum.num_statements(); ++s) {
        const auto col = spectrum.column(s).words();
        auto& c = stats.counts[s];
        const std::size_t covered = kernels::popcount(col);
        c.covered_failed = kernels::and_popcount(col, fail_words);
        c.covered_passed = covered - c.covered_failed;
        c.uncovered_failed = stats.total_failed - c.covered_failed;
        c.uncovered_passed = stats.total_passed - c.covered_passed;
    }
    return stats;
}

std::string spectrum_to_json(const SliceSpectrum& spectrum) {
    json doc;
    doc["statements"] = spectrum.statements();
    json tests = json::array();
    for (std::size_t t = 0; t < spectrum.num_tests(); ++t) {
        tests.push_back({{"id", spectrum.tests()[t]}, {"verdict", to_string(spectrum.verdicts()[t])}});
    }
    doc["tests"] = std::move(tests);
    json matrix = json::array();
    for (std::size_t t = 0; t < spectrum.num_tests(); ++t) {
        json row = json::array();
        for (auto b : spectrum.row(t)) {
            row.push_back(static_cast<int>(b));
        }
        matrix.push_back(std::move(row));
    }
    doc["matrix"] = std::move(matrix);
    doc["mode"] = to_string(spectrum.mode());
    return doc.dump(2) + "\n";
}

SliceSpectrum spectrum_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("spectrum is not valid JSON: ") + e.what());
    }
    try {
        auto statements = doc.at("statements").get<std::vector<std::string>>();
        std::vector<std::string> tests;
        std::vector<Verdict> verdicts;
        for (const auto& t : doc.at("tests")) {
            tests.push_back(t.at("id").get<std::string>());
            const auto v = t.at("verdict").get<std::string>();
            if (v != "pass" && v != "fail") {
                throw InputError("test '" + tests.back() + "' has unknown verdict '" + v + "'");
            }
            verdicts.push_back(v == "fail" ? Verdict::Fail : Verdict::Pass);
        }
        std::vector<std::vector<std::uint8_t>> rows;
        for (const auto& r : doc.at("matrix")) {
            std::vector<std::uint8_t> row;
            for (const auto& cell : r) {
                const int v = cell.get<int>();
                row.push_back(static_cast<std::uint8_t>(v == 0 ? 0 : (v == 1 ? 1 : 2)));
            }
            rows.push_back(std::move(row));
        }
        const auto mode = parse_mode(doc.value("mode", std::string("coverage")));
        return SliceSpectrum(std::move(statements), std::move(tests), rows, std::move(verdicts), mode);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed spectrum: ") + e.what());
    }
}

SliceSpectrum load_spectrum(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open spectrum file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return spectrum_from_json(buf.str());
}

void save_spectrum(const SliceSpectrum& spectrum, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write spectrum file '" + path.string() + "'");
    }
    out << spectrum_to_json(spectrum);
}

}  // namespace faultchain
