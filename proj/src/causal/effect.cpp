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
#include <limits>

#include "faultchain/causal.hpp"
#include "faultchain/error.hpp"

namespace faultchain::causal {

const char* to_string(MatchingStrategy m) noexcept { return m == MatchingStrategy::Full ? "full" : "nearest"; }

MatchingStrategy parse_matching(const std::string& text) {
    if (text == "nearest") {
        return MatchingStrategy::Nearest;
    }
    if (text == "full") {
        return MatchingStrategy::Full;
    }
    throw InputError("unknown matching strategy '" + text + "' (expected nearest|full)");
}

ConfounderVector confounder_vector(const std::string& statement, const minilang::StaticPDG& pdg,
                                   const SliceSpectrum& spectrum) {
    if (!pdg.contains(statement)) {
        throw InputError("statement '" + statement + "' is not in the dependence graph");
    }
    spectrum.require_index(statement);
    ConfounderVector cv;
    cv.statement = statement;
    // Source order of the PDG node list, not lexicographic id order.
    for (const auto& node : pdg.nodes()) {
        if (node == statement) {
            continue;
        }
        if (pdg.has_edge(statement, node, minilang::DepType::Control)) {
            cv.control_parents.push_back(node);
        }
        if (pdg.has_edge(statement, node, minilang::DepType::Data)) {
            cv.data_parents.push_back(node);
        }
    }
    std::vector<std::string> all = cv.control_parents;
    all.insert(all.end(), cv.data_parents.begin(), cv.data_parents.end());
    cv.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spectrum.num_tests()),
                                      static_cast<Eigen::Index>(all.size()));
    for (std::size_t k = 0; k < all.size(); ++k) {
        const BitColumn& col = spectrum.column(spectrum.require_index(all[k]));
        for (std::size_t t = 0; t < spectrum.num_tests(); ++t) {
            cv.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = col.test(t) ? 1.0 : 0.0;
        }
    }
    return cv;
}

CausalEffect impute_and_estimate(std::span<const std::uint8_t> outcomes, const MatchedSample& matched) {
    const std::size_t n = outcomes.size();
    if (n != matched.matches.size() || n != matched.treatment.size()) {
        throw InputError("outcome vector and matched sample differ in length");
    }
    CausalEffect eff;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    eff.imputed_control.assign(n, nan);
    eff.imputed_treated.assign(n, nan);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& js = matched.matches[i];
        if (js.empty()) {
            continue;
        }
        double counterfactual = 0;
        for (std::size_t j : js) {
            counterfactual += outcomes[j] ? 1.0 : 0.0;
        }
        counterfactual /= static_cast<double>(js.size());
        const double observed = outcomes[i] ? 1.0 : 0.0;
        if (matched.treatment[i]) {
            eff.imputed_treated[i] = observed;
            eff.imputed_control[i] = counterfactual;
        } else {
            eff.imputed_treated[i] = counterfactual;
            eff.imputed_control[i] = observed;
        }
        sum += eff.imputed_treated[i] - eff.imputed_control[i];
        ++eff.retained;
    }
    if (eff.retained == 0) {
        throw PreconditionError("matched sample retains no units");
    }
    eff.tau_hat = std::clamp(sum / static_cast<double>(eff.retained), -1.0, 1.0);
    return eff;
}

namespace {

// Difference of group failure rates; an empty group takes the overall rate.
double risk_difference(std::span<const std::uint8_t> treatment, std::span<const std::uint8_t> outcomes) {
    double nt = 0, nc = 0, ft = 0, fc = 0;
    for (std::size_t i = 0; i < treatment.size(); ++i) {
        if (treatment[i]) {
            ++nt;
            ft += outcomes[i] ? 1 : 0;
        } else {
            ++nc;
            fc += outcomes[i] ? 1 : 0;
        }
    }
    const double overall = (ft + fc) / (nt + nc);
    const double mt = nt > 0 ? ft / nt : overall;
    const double mc = nc > 0 ? fc / nc : overall;
    return mt - mc;
}

}  // namespace

CausalEffect failure_causing_effect(const std::string& statement, const minilang::StaticPDG& pdg,
                                    const SliceSpectrum& spectrum, const CausalConfig& cfg) {
    const ConfounderVector cv = confounder_vector(statement, pdg, spectrum);
    const auto treatment = spectrum.column(spectrum.require_index(statement)).to_bytes();
    const auto outcomes = spectrum.failures().to_bytes();

    auto fallback = [&](std::string reason) {
        CausalEffect eff;
        eff.tau_hat = risk_difference(treatment, outcomes);
        eff.degenerate = true;
        eff.reason = std::move(reason);
        return eff;
    };

    CausalEffect eff;
    const auto model = fit_propensity(treatment, cv.values, cfg.ridge);
    if (!model) {
        const bool all = std::all_of(treatment.begin(), treatment.end(), [](auto t) { return t != 0; });
        eff = fallback(all ? "covered by every test" : "covered by no test");
    } else {
        const Eigen::VectorXd p = model->predict(cv.values);
        const std::vector<double> props(p.data(), p.data() + p.size());
        const MatchedSample matched = match_executions(treatment, props, cfg.matching, cfg.caliper);
        eff = matched.degenerate ? fallback(matched.reason) : impute_and_estimate(outcomes, matched);
    }
    eff.statement = statement;
    eff.confounders = cv.size();
    return eff;
}

std::map<std::string, CausalEffect> estimate_effects(const std::vector<std::string>& statements,
                                                     const minilang::StaticPDG& pdg, const SliceSpectrum& spectrum,
                                                     const CausalConfig& cfg) {
    std::map<std::string, CausalEffect> out;
    for (const auto& s : statements) {
        out.emplace(s, failure_causing_effect(s, pdg, spectrum, cfg));
    }
    return out;
}

std::vector<selection::CauseEffectChain> rank_chains(std::vector<selection::CauseEffectChain> chains,
                                                     const std::map<std::string, double>& effects,
                                                     const std::vector<std::string>& source_order) {
    auto position = [&](const std::string& id) {
        auto it = std::find(source_order.begin(), source_order.end(), id);
        return it == source_order.end() ? source_order.size() : static_cast<std::size_t>(it - source_order.begin());
    };
    auto id_less = [&](const std::string& a, const std::string& b) {
        const auto pa = position(a), pb = position(b);
        return pa != pb ? pa < pb : a < b;
    };
    auto effect = [&](const std::string& id) {
        auto it = effects.find(id);
        if (it == effects.end()) {
            throw InputError("chain member '" + id + "' has no estimated effect");
        }
        return it->second;
    };
    std::vector<double> best(chains.size());
    std::vector<std::string> first(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
        auto& ch = chains[c];
        std::stable_sort(ch.members.begin(), ch.members.end(), [&](const auto& a, const auto& b) {
            const double ea = effect(a), eb = effect(b);
            return ea != eb ? ea > eb : id_less(a, b);
        });
        double sum = 0;
        for (const auto& m : ch.members) {
            sum += effect(m);
        }
        ch.aggregate_effect = ch.members.empty() ? 0.0 : sum / static_cast<double>(ch.members.size());
    }
    std::vector<std::size_t> order(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
        order[c] = c;
        best[c] = chains[c].members.empty() ? 0.0 : effect(chains[c].members.front());
        first[c] = chains[c].members.empty()
                       ? std::string{}
                       : *std::min_element(chains[c].members.begin(), chains[c].members.end(), id_less);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (chains[a].aggregate_effect != chains[b].aggregate_effect) {
            return chains[a].aggregate_effect > chains[b].aggregate_effect;
        }
        if (best[a] != best[b]) {
            return best[a] > best[b];
        }
        return id_less(first[a], first[b]);
    });
    std::vector<selection::CauseEffectChain> ranked;
    ranked.reserve(chains.size());
    for (std::size_t c : order) {
        ranked.push_back(std::move(chains[c]));
    }
    return ranked;
}

}  // namespace faultchain::causal
