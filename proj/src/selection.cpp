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

#include "faultchain/selection.hpp"

#include <algorithm>
#include <cmath>

#include "faultchain/error.hpp"

namespace faultchain::selection {

bool CauseEffectChain::contains(const std::string& id) const {
    return std::find(members.begin(), members.end(), id) != members.end();
}

std::vector<std::size_t> informative_statements(const SliceSpectrum& spectrum) {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < spectrum.num_statements(); ++s) {
        const std::size_t covered = spectrum.column(s).count();
        if (covered != 0 && covered != spectrum.num_tests()) {
            out.push_back(s);
        }
    }
    if (out.empty()) {
        for (std::size_t s = 0; s < spectrum.num_statements(); ++s) {
            out.push_back(s);
        }
    }
    return out;
}

std::size_t threshold(double delta_fraction, std::size_t n) {
    if (!(delta_fraction > 0.0 && delta_fraction <= 1.0)) {
        throw InputError("delta fraction must lie in (0, 1]");
    }
    // 0.3 * 10 evaluates to 3.0000000000000004; do not let that round up.
    return static_cast<std::size_t>(std::ceil(delta_fraction * static_cast<double>(n) - 1e-9));
}

SelectionState initialize(const SliceSpectrum& spectrum, const std::map<std::string, double>& priors,
                          const SelectionConfig& cfg) {
    const SpectrumStats stats = build_stats(spectrum);
    SelectionState st;
    st.candidates = informative_statements(spectrum);
    st.initial_candidates = st.candidates.size();
    st.delta = cfg.delta ? *cfg.delta : threshold(cfg.delta_fraction, st.candidates.size());
    st.chain_cap = cfg.chain_cap;
    st.weights.assign(spectrum.num_statements(), 1.0);
    for (const auto& [id, prior] : priors) {
        if (prior < 0 || !std::isfinite(prior)) {
            throw InputError("fault-proneness prior for '" + id + "' must be a non-negative number");
        }
        st.weights[spectrum.require_index(id)] = 1.0 + prior;
    }
    st.relevance.resize(spectrum.num_statements());
    st.relevance_class.resize(spectrum.num_statements());
    for (std::size_t s = 0; s < spectrum.num_statements(); ++s) {
        st.relevance[s] = info::relevance(spectrum, s, cfg.entropy);
        st.relevance_class[s] = info::relevance_class(stats, s);
    }
    return st;
}

std::map<std::size_t, double> score_candidates(const SelectionState& state) {
    std::map<std::size_t, double> scores;
    for (std::size_t s : state.candidates) {
        scores[s] = state.relevance[s] * state.weights[s] * state.relevance_class[s];
    }
    return scores;
}

std::size_t select_next(SelectionState& state, const std::map<std::size_t, double>& scores) {
    if (state.candidates.empty()) {
        throw PreconditionError("no candidate statements left to select");
    }
    // Candidates are in source order, so strict '>' keeps the earliest on ties.
    std::size_t best = state.candidates.front();
    double best_score = scores.at(best);
    for (std::size_t s : state.candidates) {
        const double j = scores.at(s);
        if (j > best_score + 1e-12) {
            best = s;
            best_score = j;
        }
    }
    state.candidates.erase(std::find(state.candidates.begin(), state.candidates.end(), best));
    state.selected.push_back(best);
    return best;
}

void update_weights(SelectionState& state, std::size_t newly_selected, const SliceSpectrum& spectrum,
                    const info::EntropyConfig& cfg) {
    auto reweight = [&](std::size_t i) {
        if (i == newly_selected) {
            return;
        }
        const double cr = info::correlation_ratio(spectrum, i, newly_selected, cfg).cr;
        state.weights[i] = std::max(kWeightFloor, state.weights[i] * (1.0 + cr));
    };
    for (std::size_t i : state.candidates) {
        reweight(i);
    }
    for (std::size_t i : state.selected) {
        reweight(i);
    }
}

AttachOutcome attach_to_chains(std::vector<CauseEffectChain>& chains, const std::string& statement,
                               const minilang::StaticPDG& pdg, std::size_t chain_cap) {
    std::vector<std::size_t> adjacent;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (const auto& m : chains[c].members) {
            if (!pdg.edges_between(statement, m).empty()) {
                adjacent.push_back(c);
                break;
            }
        }
    }
    if (adjacent.empty()) {
        if (chains.size() < chain_cap) {
            chains.push_back(CauseEffectChain{{statement}, {}, 0.0});
            return AttachOutcome::Created;
        }
        return AttachOutcome::Discarded;
    }
    // Merge into the earliest adjacent chain, preserving member order.
    CauseEffectChain& target = chains[adjacent.front()];
    for (std::size_t k = 1; k < adjacent.size(); ++k) {
        const auto& other = chains[adjacent[k]];
        target.members.insert(target.members.end(), other.members.begin(), other.members.end());
        target.links.insert(target.links.end(), other.links.begin(), other.links.end());
    }
    for (const auto& m : target.members) {
        for (const auto& e : pdg.edges_between(statement, m)) {
            target.links.push_back({e.from, e.to, e.type});
        }
    }
    target.members.push_back(statement);
    for (std::size_t k = adjacent.size(); k-- > 1;) {
        chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(adjacent[k]));
    }
    return adjacent.size() == 1 ? AttachOutcome::Joined : AttachOutcome::Merged;
}

SelectionResult run_selection(const SliceSpectrum& spectrum, const minilang::StaticPDG& pdg,
                              const SelectionConfig& cfg, const std::map<std::string, double>& priors) {
    for (const auto& id : spectrum.statements()) {
        if (!pdg.contains(id)) {
            throw InputError("statement '" + id + "' is missing from the dependence graph");
        }
    }
    SelectionResult result;
    result.state = initialize(spectrum, priors, cfg);
    auto& st = result.state;
    while (st.iteration <= st.delta && !st.candidates.empty()) {
        IterationTrace it;
        it.weights_before = st.weights;
        it.scores = score_candidates(st);
        it.chosen = select_next(st, it.scores);
        for (std::size_t i = 0; i < spectrum.num_statements(); ++i) {
            const bool in_play = std::find(st.candidates.begin(), st.candidates.end(), i) != st.candidates.end() ||
                                 std::find(st.selected.begin(), st.selected.end(), i) != st.selected.end();
            if (in_play && i != it.chosen) {
                it.correlation[i] = info::correlation_ratio(spectrum, i, it.chosen, cfg.entropy).cr;
            }
        }
        update_weights(st, it.chosen, spectrum, cfg.entropy);
        const std::string& id = spectrum.statements()[it.chosen];
        it.outcome = attach_to_chains(result.chains, id, pdg, st.chain_cap);
        if (it.outcome == AttachOutcome::Discarded) {
            result.discarded.push_back(id);
        }
        result.selected.push_back(id);
        result.trace.push_back(std::move(it));
        ++st.iteration;
    }
    for (std::size_t s : st.selected) {
        result.final_weights[spectrum.statements()[s]] = st.weights[s];
    }
    for (std::size_t s : st.candidates) {
        result.final_weights[spectrum.statements()[s]] = st.weights[s];
    }
    return result;
}

}  // namespace faultchain::selection
