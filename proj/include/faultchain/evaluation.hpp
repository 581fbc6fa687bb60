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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "faultchain/causal.hpp"
#include "faultchain/selection.hpp"
#include "faultchain/spectrum.hpp"

namespace faultchain::corpus {
struct FaultBundle;
}

namespace faultchain::eval {

enum class Technique { Inference, Ochiai, O, GP19, DStar };

const char* to_string(Technique t) noexcept;
Technique parse_technique(const std::string& text);
const std::vector<Technique>& all_techniques();

// Baseline suspiciousness formulas over per-statement counts.
double ochiai(const StatementCounts& c, std::size_t total_failed);
double o_score(const StatementCounts& c);
double gp19(const StatementCounts& c);
/// +infinity when nothing is in the denominator but the statement is covered by a failing test.
double dstar(const StatementCounts& c, double star = 2.0);

double baseline_score(Technique t, const SpectrumStats& stats, std::size_t statement);

struct RankedEntry {
    std::string statement;
    double score = 0;
    int tier = 1;
    std::size_t tie_group = 0;
};

/// Statements in inspection order. Tier 1 always precedes tier 2; within a
/// tier scores are non-increasing and equal scores share a tie group.
struct RankedReport {
    std::string technique;
    std::vector<RankedEntry> entries;
    std::vector<selection::CauseEffectChain> chains;

    std::vector<std::vector<std::string>> tie_groups() const;
    std::optional<std::size_t> position(const std::string& statement) const;  // 0-based
};

/// Orders statements by descending score; ties keep the given (source) order.
RankedReport rank_by_scores(const std::string& technique, const std::vector<std::string>& statements,
                            const std::vector<double>& scores, int tier = 1);

RankedReport baseline_report(Technique t, const SpectrumStats& stats);

/// Tier 1: selected statements by tau_hat; tier 2: the rest by R * RC.
RankedReport assemble_report(const selection::SelectionResult& selected,
                             const std::map<std::string, causal::CausalEffect>& effects,
                             const SliceSpectrum& spectrum);

enum class ExamMode { Best, Worst };

/// Statements inspected until the best-ranked faulty statement is reached;
/// Best resolves its tie group optimistically, Worst pessimistically.
/// Throws InputError when `faulty` is empty or names an unranked statement.
std::size_t statements_examined(const RankedReport& report, const std::set<std::string>& faulty, ExamMode mode);
/// statements_examined as a percentage of ranked statements.
double exam_score(const RankedReport& report, const std::set<std::string>& faulty, ExamMode mode);

struct PrecisionRecall {
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
};

/// Members of all chains against the infected-statement ground truth.
PrecisionRecall chain_prf(const std::vector<selection::CauseEffectChain>& chains,
                          const std::set<std::string>& ground_truth);

struct ExpenseIteration {
    std::size_t iteration = 0;
    std::size_t failing_tests = 0;
    std::string located_fault;
    std::size_t examined_best = 0;
    std::size_t examined_worst = 0;
    double exam_best = 0;
    double exam_worst = 0;
};

using Localizer = std::function<RankedReport(const minilang::Program&, const minilang::SuiteTrace&)>;

/// One-fault-at-a-time: localize, fix the first fault reached in the ranking,
/// re-run the suite, repeat until nothing fails. Throws PreconditionError when
/// a ranking reaches no remaining fault or failures outlive every fix.
std::vector<ExpenseIteration> expense_iterate(const corpus::FaultBundle& bundle, const Localizer& localizer,
                                              std::size_t step_limit = minilang::kDefaultStepLimit);

}  // namespace faultchain::eval
