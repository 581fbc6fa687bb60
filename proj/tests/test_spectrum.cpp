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

#include "faultchain/error.hpp"
#include "faultchain/spectrum.hpp"

using namespace faultchain;

namespace {

SliceSpectrum small() {
    return SliceSpectrum({"S1", "S2", "S3"}, {"t1", "t2", "t3", "t4"},
                         {{1, 1, 0}, {1, 0, 0}, {1, 1, 1}, {1, 0, 1}},
                         {Verdict::Fail, Verdict::Fail, Verdict::Pass, Verdict::Pass}, SpectrumMode::Slice);
}

}  // namespace

TEST_CASE("counts split by verdict") {
    auto stats = build_stats(small());
    CHECK(stats.total_failed == 2);
    CHECK(stats.total_passed == 2);
    CHECK(stats.at("S1") == StatementCounts{2, 0, 2, 0});
    CHECK(stats.at("S2") == StatementCounts{1, 1, 1, 1});
    CHECK(stats.at("S3") == StatementCounts{0, 2, 2, 0});
    CHECK_THROWS_AS(stats.at("S9"), InputError);
}

TEST_CASE("each count table sums to the number of tests") {
    auto stats = build_stats(small());
    for (const auto& c : stats.counts) {
        CHECK(c.covered_failed + c.uncovered_failed + c.covered_passed + c.uncovered_passed == 4);
        CHECK(c.covered_failed + c.uncovered_failed == stats.total_failed);
    }
}

TEST_CASE("malformed spectra are rejected with the offending test") {
    try {
        SliceSpectrum({"S1", "S2"}, {"t1", "t2"}, {{1, 0}, {1}}, {Verdict::Fail, Verdict::Pass},
                      SpectrumMode::Coverage);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("t2") != std::string::npos);
    }
    CHECK_THROWS_AS(SliceSpectrum({"S1", "S1"}, {"t1"}, {{1, 1}}, {Verdict::Fail}, SpectrumMode::Coverage),
                    InputError);
    CHECK_THROWS_AS(SliceSpectrum({"S1"}, {"t1", "t2"}, {{1}}, {Verdict::Fail}, SpectrumMode::Coverage), InputError);
}

TEST_CASE("no failing test is a precondition violation") {
    SliceSpectrum s({"S1"}, {"t1"}, {{1}}, {Verdict::Pass}, SpectrumMode::Coverage);
    CHECK_THROWS_AS(build_stats(s), PreconditionError);
    CHECK_THROWS_AS(require_failing_tests(s), PreconditionError);
}

TEST_CASE("JSON round trip") {
    const auto s = small();
    const auto text = spectrum_to_json(s);
    CHECK(spectrum_from_json(text) == s);
    CHECK(spectrum_to_json(spectrum_from_json(text)) == text);

    const auto path = std::filesystem::temp_directory_path() / "faultchain_spectrum_rt.json";
    save_spectrum(s, path);
    CHECK(load_spectrum(path) == s);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_spectrum(path), InputError);
    CHECK_THROWS_AS(spectrum_from_json("{\"statements\": 3}"), InputError);
}

TEST_CASE("verdicts come from expected versus observed output") {
    std::vector<TestCase> suite(3);
    suite[0].id = "a";
    suite[0].expected = std::vector<Value>{1};
    suite[0].observed = std::vector<Value>{1};
    suite[1].id = "b";
    suite[1].expected = std::vector<Value>{1};
    suite[1].observed = std::vector<Value>{2};
    suite[2].id = "c";
    suite[2].expected = std::vector<Value>{1};
    suite[2].observed = std::vector<Value>{1};
    suite[2].crashed = true;
    classify_tests(suite);
    CHECK(suite[0].verdict == Verdict::Pass);
    CHECK(suite[1].verdict == Verdict::Fail);
    CHECK(suite[2].verdict == Verdict::Fail);

    std::vector<TestCase> missing(1);
    missing[0].id = "m";
    missing[0].observed = std::vector<Value>{1};
    CHECK_THROWS_AS(classify_tests(missing), InputError);
}

TEST_CASE("mode parsing") {
    CHECK(parse_mode("slice") == SpectrumMode::Slice);
    CHECK(parse_mode("coverage") == SpectrumMode::Coverage);
    CHECK_THROWS_AS(parse_mode("bogus"), InputError);
}
