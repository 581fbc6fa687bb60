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

#include <random>

#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"
#include "faultchain/selection.hpp"

using namespace faultchain;
using namespace faultchain::selection;

namespace {

struct Golden {
    SliceSpectrum coverage;
    minilang::StaticPDG pdg;
};

Golden golden() {
    const auto g = corpus::motivating_example();
    const auto p = minilang::parse(g.source);
    return {minilang::trace_suite(p, g.suite).coverage, minilang::static_pdg(p)};
}

double cell(const std::map<std::size_t, double>& m, const SliceSpectrum& s, const char* id) {
    return m.at(*s.index_of(id));
}

}  // namespace

TEST_CASE("threshold rounds up and tolerates binary fractions") {
    CHECK(threshold(0.30, 5) == 2);
    CHECK(threshold(0.30, 10) == 3);
    CHECK(threshold(0.30, 16) == 5);
    CHECK(threshold(1.0, 7) == 7);
    CHECK(threshold(0.1, 30) == 3);
    CHECK_THROWS_AS(threshold(0.0, 5), InputError);
    CHECK_THROWS_AS(threshold(1.5, 5), InputError);
}

TEST_CASE("candidates are the informative columns") {
    const auto g = golden();
    std::vector<std::string> ids;
    for (auto i : informative_statements(g.coverage)) {
        ids.push_back(g.coverage.statements()[i]);
    }
    CHECK(ids == std::vector<std::string>{"S6", "S9", "S11", "S13", "S15"});

    SliceSpectrum flat({"S1", "S2"}, {"t1", "t2"}, {{1, 1}, {1, 1}}, {Verdict::Fail, Verdict::Pass},
                       SpectrumMode::Coverage);
    CHECK(informative_statements(flat).size() == 2);
}

TEST_CASE("weighting trace on the golden case") {
    const auto g = golden();
    const auto& s = g.coverage;
    const auto r = run_selection(s, g.pdg, SelectionConfig{});
    REQUIRE(r.trace.size() == 3);

    const auto& j1 = r.trace[0].scores;
    CHECK(std::abs(cell(j1, s, "S6") - 0.48) <= 0.01);
    CHECK(std::abs(cell(j1, s, "S9") - 0.34) <= 0.01);
    CHECK(std::abs(cell(j1, s, "S11") - -0.12) <= 0.01);
    CHECK(std::abs(cell(j1, s, "S13") - -0.23) <= 0.01);
    CHECK(std::abs(cell(j1, s, "S15") - 0.34) <= 0.01);
    for (double w : r.trace[0].weights_before) {
        CHECK(w == 1.0);
    }

    const auto& w2 = r.trace[1].weights_before;
    CHECK(std::abs(w2[*s.index_of("S9")] - 0.88) <= 0.01);
    CHECK(std::abs(w2[*s.index_of("S11")] - 1.15) <= 0.01);
    CHECK(std::abs(w2[*s.index_of("S13")] - 0.77) <= 0.01);
    CHECK(std::abs(w2[*s.index_of("S15")] - 0.88) <= 0.01);

    const auto& j2 = r.trace[1].scores;
    CHECK(j2.size() == 4);
    CHECK(std::abs(cell(j2, s, "S9") - 0.30) <= 0.01);
    CHECK(std::abs(cell(j2, s, "S11") - -0.14) <= 0.01);
    CHECK(std::abs(cell(j2, s, "S13") - -0.18) <= 0.01);
    CHECK(std::abs(cell(j2, s, "S15") - 0.30) <= 0.01);

    const auto& w3 = r.trace[2].weights_before;
    CHECK(std::abs(w3[*s.index_of("S11")] - 1.24) <= 0.01);
    CHECK(std::abs(w3[*s.index_of("S13")] - 0.91) <= 0.01);
    CHECK(std::abs(w3[*s.index_of("S15")] - 1.24) <= 0.01);

    const auto& j3 = r.trace[2].scores;
    CHECK(std::abs(cell(j3, s, "S11") - -0.15) <= 0.01);
    CHECK(std::abs(cell(j3, s, "S13") - -0.21) <= 0.01);
    CHECK(std::abs(cell(j3, s, "S15") - 0.42) <= 0.01);
    // S6 left the candidate set after the first iteration, so it has no J3.
    CHECK(j3.count(*s.index_of("S6")) == 0);

    CHECK(r.selected == std::vector<std::string>{"S6", "S9", "S15"});
    REQUIRE(r.chains.size() == 2);
    CHECK(r.chains[0].members == std::vector<std::string>{"S6"});
    CHECK(r.chains[1].members == std::vector<std::string>{"S9", "S15"});
    REQUIRE(r.chains[1].links.size() == 1);
    CHECK(r.chains[1].links[0] == ChainLink{"S15", "S9", minilang::DepType::Data});
    CHECK(r.discarded.empty());
}

TEST_CASE("explicit delta of three still starts S6, S9, S15") {
    const auto g = golden();
    SelectionConfig cfg;
    cfg.delta = 3;
    const auto r = run_selection(g.coverage, g.pdg, cfg);
    REQUIRE(r.selected.size() == 4);
    CHECK(std::vector<std::string>(r.selected.begin(), r.selected.begin() + 3) ==
          std::vector<std::string>{"S6", "S9", "S15"});
}

TEST_CASE("delta fraction one exhausts the candidates") {
    const auto g = golden();
    SelectionConfig cfg;
    cfg.delta_fraction = 1.0;
    const auto r = run_selection(g.coverage, g.pdg, cfg);
    CHECK(r.selected.size() == 5);
    CHECK(r.state.candidates.empty());
}

TEST_CASE("priors raise initial weights") {
    const auto g = golden();
    const auto st = initialize(g.coverage, {{"S9", 1.0}}, SelectionConfig{});
    CHECK(st.weights[*g.coverage.index_of("S9")] == 2.0);
    const auto r = run_selection(g.coverage, g.pdg, SelectionConfig{}, {{"S9", 1.0}});
    CHECK(r.selected.front() == "S9");
    CHECK_THROWS_AS(initialize(g.coverage, {{"S9", -1.0}}, SelectionConfig{}), InputError);
    CHECK_THROWS_AS(initialize(g.coverage, {{"S99", 1.0}}, SelectionConfig{}), InputError);
}

TEST_CASE("argmax ordering when every statement characterises passing runs") {
    // Every column is denser among passing tests, so all RC are -1.
    const std::vector<std::vector<std::uint8_t>> rows = {
        {0, 0, 1}, {0, 1, 0}, {1, 1, 1}, {1, 1, 1}, {1, 1, 0}, {1, 0, 1},
    };
    SliceSpectrum s({"S1", "S2", "S3"}, {"t1", "t2", "t3", "t4", "t5", "t6"}, rows,
                    {Verdict::Fail, Verdict::Fail, Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Pass},
                    SpectrumMode::Slice);
    minilang::StaticPDG pdg({"S1", "S2", "S3"}, {});
    auto st = initialize(s, {}, SelectionConfig{});
    for (int rc : st.relevance_class) {
        CHECK(rc == -1);
    }
    const auto scores = score_candidates(st);
    std::size_t brute = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (scores.at(i) > scores.at(brute) + 1e-12) {
            brute = i;
        }
    }
    CHECK(select_next(st, scores) == brute);
    const auto r = run_selection(s, pdg, SelectionConfig{});
    CHECK(!r.selected.empty());
}

TEST_CASE("chain attachment: join, merge, create, discard") {
    minilang::StaticPDG pdg({"A", "B", "C", "D", "E"},
                            {{"C", "A", minilang::DepType::Data}, {"C", "B", minilang::DepType::Control}});
    std::vector<CauseEffectChain> chains;
    CHECK(attach_to_chains(chains, "A", pdg, 2) == AttachOutcome::Created);
    CHECK(attach_to_chains(chains, "B", pdg, 2) == AttachOutcome::Created);
    CHECK(attach_to_chains(chains, "D", pdg, 2) == AttachOutcome::Discarded);
    CHECK(chains.size() == 2);
    CHECK(attach_to_chains(chains, "C", pdg, 2) == AttachOutcome::Merged);
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].members == std::vector<std::string>{"A", "B", "C"});
    CHECK(chains[0].links.size() == 2);
    CHECK(chains[0].contains("B"));

    std::vector<CauseEffectChain> one;
    attach_to_chains(one, "A", pdg, 5);
    CHECK(attach_to_chains(one, "C", pdg, 5) == AttachOutcome::Joined);
    CHECK(one[0].members == std::vector<std::string>{"A", "C"});
}

TEST_CASE("chain cap bounds the chain count") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 12;
        std::vector<std::string> ids;
        std::vector<std::string> tids;
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back("S" + std::to_string(i + 1));
        }
        std::vector<std::vector<std::uint8_t>> rows(20, std::vector<std::uint8_t>(n));
        std::vector<Verdict> v(20);
        for (std::size_t t = 0; t < 20; ++t) {
            tids.push_back("t" + std::to_string(t));
            for (auto& c : rows[t]) {
                c = static_cast<std::uint8_t>(rng() & 1);
            }
            v[t] = t % 3 == 0 ? Verdict::Fail : Verdict::Pass;
        }
        SliceSpectrum s(ids, tids, rows, v, SpectrumMode::Slice);
        minilang::StaticPDG pdg(ids, {});
        SelectionConfig cfg;
        cfg.delta_fraction = 1.0;
        cfg.chain_cap = 3;
        const auto r = run_selection(s, pdg, cfg);
        CHECK(r.chains.size() <= 3);
        CHECK(r.discarded.size() + r.chains.size() == r.selected.size());
        for (const auto& [id, w] : r.final_weights) {
            CHECK(w >= kWeightFloor);
        }
    }
}

TEST_CASE("spectrum statements must be in the PDG") {
    const auto g = golden();
    minilang::StaticPDG partial({"S1"}, {});
    CHECK_THROWS_AS(run_selection(g.coverage, partial, SelectionConfig{}), InputError);
    SliceSpectrum passing({"S1"}, {"t1"}, {{1}}, {Verdict::Pass}, SpectrumMode::Slice);
    CHECK_THROWS_AS(run_selection(passing, minilang::StaticPDG({"S1"}, {}), SelectionConfig{}), PreconditionError);
}
