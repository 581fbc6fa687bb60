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
#include <cstdint>

#include "faultchain/error.hpp"
#include "faultchain/evaluation.hpp"

namespace faultchain::eval {

std::size_t statements_examined(const RankedReport& report, const std::set<std::string>& faulty, ExamMode mode) {
    if (faulty.empty()) {
        throw InputError("exam: empty faulty-statement set");
    }
    std::size_t best_group = SIZE_MAX;
    for (const auto& f : faulty) {
        auto pos = report.position(f);
        if (!pos) {
            throw InputError("exam: faulty statement " + f + " is not ranked by " + report.technique);
        }
        best_group = std::min(best_group, report.entries[*pos].tie_group);
    }
    std::size_t above = 0;
    std::size_t through = 0;
    for (const auto& e : report.entries) {
        if (e.tie_group < best_group) {
            ++above;
        }
        if (e.tie_group <= best_group) {
            ++through;
        }
    }
    return mode == ExamMode::Best ? above + 1 : through;
}

double exam_score(const RankedReport& report, const std::set<std::string>& faulty, ExamMode mode) {
    const std::size_t n = statements_examined(report, faulty, mode);
    return 100.0 * static_cast<double>(n) / static_cast<double>(report.entries.size());
}

PrecisionRecall chain_prf(const std::vector<selection::CauseEffectChain>& chains,
                          const std::set<std::string>& ground_truth) {
    if (ground_truth.empty()) {
        throw InputError("chain_prf: empty ground truth");
    }
    std::set<std::string> members;
    for (const auto& c : chains) {
        members.insert(c.members.begin(), c.members.end());
    }
    PrecisionRecall out;
    if (members.empty()) {
        return out;
    }
    std::size_t hit = 0;
    for (const auto& m : members) {
        hit += ground_truth.count(m);
    }
    out.precision = static_cast<double>(hit) / static_cast<double>(members.size());
    out.recall = static_cast<double>(hit) / static_cast<double>(ground_truth.size());
    if (out.precision + out.recall > 0) {
        out.f_measure = 2 * out.precision * out.recall / (out.precision + out.recall);
    }
    return out;
}

}  // namespace faultchain::eval
