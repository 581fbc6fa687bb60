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

#include <cmath>
#include <limits>

#include "faultchain/error.hpp"
#include "faultchain/evaluation.hpp"

namespace faultchain::eval {

const char* to_string(Technique t) noexcept {
    switch (t) {
        case Technique::Inference: return "inference";
        case Technique::Ochiai: return "ochiai";
        case Technique::O: return "o";
        case Technique::GP19: return "gp19";
        case Technique::DStar: return "dstar";
    }
    return "?";
}

Technique parse_technique(const std::string& text) {
    for (Technique t : all_techniques()) {
        if (text == to_string(t)) {
            return t;
        }
    }
    throw InputError("unknown technique '" + text + "' (expected inference, ochiai, o, gp19 or dstar)");
}

const std::vector<Technique>& all_techniques() {
    static const std::vector<Technique> all = {Technique::Inference, Technique::Ochiai, Technique::O,
                                               Technique::GP19, Technique::DStar};
    return all;
}

double ochiai(const StatementCounts& c, std::size_t total_failed) {
    const double denom = std::sqrt(static_cast<double>(total_failed) *
                                   static_cast<double>(c.covered_failed + c.covered_passed));
    if (denom == 0) {
        return 0;
    }
    return static_cast<double>(c.covered_failed) / denom;
}

double o_score(const StatementCounts& c) {
    if (c.uncovered_failed > 0) {
        return -1;
    }
    return static_cast<double>(c.uncovered_passed);
}

double gp19(const StatementCounts& c) {
    const double radicand = static_cast<double>(c.covered_passed) - static_cast<double>(c.covered_failed) +
                            static_cast<double>(c.uncovered_failed) - static_cast<double>(c.uncovered_passed);
    return static_cast<double>(c.covered_failed) * std::sqrt(std::abs(radicand));
}

double dstar(const StatementCounts& c, double star) {
    const double num = std::pow(static_cast<double>(c.covered_failed), star);
    const auto denom = c.uncovered_failed + c.covered_passed;
    if (denom == 0) {
        return c.covered_failed > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return num / static_cast<double>(denom);
}

double baseline_score(Technique t, const SpectrumStats& stats, std::size_t statement) {
    const StatementCounts& c = stats.counts.at(statement);
    switch (t) {
        case Technique::Ochiai: return ochiai(c, stats.total_failed);
        case Technique::O: return o_score(c);
        case Technique::GP19: return gp19(c);
        case Technique::DStar: return dstar(c);
        case Technique::Inference: break;
    }
    throw InputError("inference is not a baseline formula");
}

RankedReport baseline_report(Technique t, const SpectrumStats& stats) {
    std::vector<double> scores(stats.statements.size());
    for (std::size_t s = 0; s < scores.size(); ++s) {
        scores[s] = baseline_score(t, stats, s);
    }
    return rank_by_scores(to_string(t), stats.statements, scores);
}

}  // namespace faultchain::eval
