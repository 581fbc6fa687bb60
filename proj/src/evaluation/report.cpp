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
#include <cmath>
#include <numeric>

#include "faultchain/error.hpp"
#include "faultchain/evaluation.hpp"

namespace faultchain::eval {

namespace {

bool same_score(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) {
        return a == b;
    }
    return std::abs(a - b) <= 1e-12;
}

// Appends one tier; tie groups continue the numbering of earlier tiers.
void append_tier(RankedReport& report, const std::vector<std::string>& statements, const std::vector<double>& scores,
                 int tier) {
    std::vector<std::size_t> order(statements.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::size_t group = report.entries.empty() ? 0 : report.entries.back().tie_group + 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t i = order[k];
        if (k > 0 && !same_score(scores[order[k - 1]], scores[i])) {
            ++group;
        }
        report.entries.push_back({statements[i], scores[i], tier, group});
    }
}

}  // namespace

std::vector<std::vector<std::string>> RankedReport::tie_groups() const {
    std::vector<std::vector<std::string>> out;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (k == 0 || entries[k].tie_group != entries[k - 1].tie_group) {
            out.emplace_back();
        }
        out.back().push_back(entries[k].statement);
    }
    return out;
}

std::optional<std::size_t> RankedReport::position(const std::string& statement) const {
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (entries[k].statement == statement) {
            return k;
        }
    }
    return std::nullopt;
}

RankedReport rank_by_scores(const std::string& technique, const std::vector<std::string>& statements,
                            const std::vector<double>& scores, int tier) {
    if (statements.size() != scores.size()) {
        throw InputError("rank_by_scores: " + std::to_string(statements.size()) + " statements but " +
                         std::to_string(scores.size()) + " scores");
    }
    RankedReport report;
    report.technique = technique;
    append_tier(report, statements, scores, tier);
    return report;
}

RankedReport assemble_report(const selection::SelectionResult& selected,
                             const std::map<std::string, causal::CausalEffect>& effects,
                             const SliceSpectrum& spectrum) {
    RankedReport report;
    report.technique = to_string(Technique::Inference);

    std::vector<std::uint8_t> is_selected(spectrum.num_statements(), 0);
    for (const auto& id : selected.selected) {
        is_selected[spectrum.require_index(id)] = 1;
    }

    std::vector<std::string> first;
    std::vector<double> first_scores;
    std::vector<std::string> second;
    std::vector<double> second_scores;
    std::map<std::string, double> tau;
    const auto& state = selected.state;
    for (std::size_t s = 0; s < spectrum.num_statements(); ++s) {
        const std::string& id = spectrum.statements()[s];
        if (is_selected[s]) {
            auto it = effects.find(id);
            if (it == effects.end()) {
                throw InputError("no causal effect for selected statement " + id);
            }
            first.push_back(id);
            first_scores.push_back(it->second.tau_hat);
            tau[id] = it->second.tau_hat;
        } else {
            second.push_back(id);
            const double r = s < state.relevance.size() ? state.relevance[s] : 0.0;
            const int rc = s < state.relevance_class.size() ? state.relevance_class[s] : -1;
            second_scores.push_back(r * rc);
        }
    }
    append_tier(report, first, first_scores, 1);
    append_tier(report, second, second_scores, 2);
    report.chains = causal::rank_chains(selected.chains, tau, spectrum.statements());
    return report;
}

}  // namespace faultchain::eval
