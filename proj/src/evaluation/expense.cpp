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

#include <cstdint>

#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"
#include "faultchain/evaluation.hpp"

namespace faultchain::eval {

std::vector<ExpenseIteration> expense_iterate(const corpus::FaultBundle& bundle, const Localizer& localizer,
                                              std::size_t step_limit) {
    std::set<std::string> active = bundle.fault_statements();
    std::vector<ExpenseIteration> out;
    std::size_t previous = SIZE_MAX;
    for (std::size_t iteration = 1;; ++iteration) {
        const minilang::Program program = minilang::parse(bundle.variant_source(active));
        const minilang::SuiteTrace trace = minilang::trace_suite(program, bundle.suite, step_limit);
        const std::size_t failing = trace.coverage.num_failing();
        if (failing == 0) {
            break;
        }
        if (active.empty()) {
            throw PreconditionError(bundle.name + ": " + std::to_string(failing) +
                                    " tests still fail after every fault was fixed");
        }
        if (failing >= previous) {
            throw PreconditionError(bundle.name + ": failing tests did not decrease at iteration " +
                                    std::to_string(iteration));
        }
        previous = failing;

        const RankedReport report = localizer(program, trace);
        std::optional<std::size_t> first;
        std::string located;
        for (const auto& f : active) {
            auto pos = report.position(f);
            if (pos && (!first || *pos < *first)) {
                first = pos;
                located = f;
            }
        }
        if (!first) {
            throw PreconditionError(bundle.name + ": the " + report.technique +
                                    " ranking reaches none of the remaining faults");
        }
        ExpenseIteration it;
        it.iteration = iteration;
        it.failing_tests = failing;
        it.located_fault = located;
        it.examined_best = statements_examined(report, active, ExamMode::Best);
        it.examined_worst = statements_examined(report, active, ExamMode::Worst);
        it.exam_best = exam_score(report, active, ExamMode::Best);
        it.exam_worst = exam_score(report, active, ExamMode::Worst);
        out.push_back(it);
        active.erase(located);
    }
    return out;
}

}  // namespace faultchain::eval
