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
#include <numeric>

#include "faultchain/causal.hpp"
#include "faultchain/error.hpp"

namespace faultchain::causal {

namespace {

constexpr double kTie = 1e-12;

double logit(double p) { return std::log(p / (1.0 - p)); }

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::size_t MatchedSample::num_retained() const {
    std::size_t n = 0;
    for (const auto& m : matches) {
        n += m.empty() ? 0 : 1;
    }
    return n;
}

MatchedSample match_executions(std::span<const std::uint8_t> treatment, std::span<const double> propensities,
                               MatchingStrategy strategy, double caliper) {
    if (treatment.size() != propensities.size()) {
        throw InputError("treatment and propensity vectors differ in length");
    }
    const std::size_t n = treatment.size();
    MatchedSample out;
    out.treatment.assign(treatment.begin(), treatment.end());
    out.matches.assign(n, {});
    std::size_t treated = 0;
    for (auto t : treatment) {
        treated += t ? 1 : 0;
    }
    if (treated == 0 || treated == n) {
        out.degenerate = true;
        out.reason = treated == 0 ? "no treated units" : "no control units";
        for (std::size_t i = 0; i < n; ++i) {
            out.discarded.push_back(i);
        }
        return out;
    }

    std::vector<double> logits(n);
    double mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
        logits[i] = logit(propensities[i]);
        mean += logits[i];
    }
    mean /= static_cast<double>(n);
    double var = 0;
    for (double l : logits) {
        var += (l - mean) * (l - mean);
    }
    const double width = caliper * std::sqrt(var / static_cast<double>(n));

    // Nearest opposite-group neighbours within the caliper, ties kept.
    std::vector<std::vector<std::size_t>> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if ((treatment[j] != 0) != (treatment[i] != 0)) {
                best = std::min(best, std::abs(propensities[i] - propensities[j]));
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if ((treatment[j] != 0) == (treatment[i] != 0)) {
                continue;
            }
            if (std::abs(propensities[i] - propensities[j]) <= best + kTie &&
                std::abs(logits[i] - logits[j]) <= width + 1e-9) {
                nearest[i].push_back(j);
            }
        }
    }

    if (strategy == MatchingStrategy::Nearest) {
        out.matches = std::move(nearest);
    } else {
        DisjointSets blocks(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j : nearest[i]) {
                blocks.unite(i, j);
            }
        }
        std::vector<std::uint8_t> linked(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j : nearest[i]) {
                linked[i] = linked[j] = 1;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!linked[i]) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (linked[j] && (treatment[j] != 0) != (treatment[i] != 0) && blocks.find(i) == blocks.find(j)) {
                    out.matches[i].push_back(j);
                }
            }
        }
    }

    std::size_t retained_treated = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (out.matches[i].empty()) {
            out.discarded.push_back(i);
        } else if (treatment[i]) {
            ++retained_treated;
        }
    }
    if (retained_treated == 0) {
        out.degenerate = true;
        out.reason = "every treated unit falls outside the caliper";
    }
    return out;
}

}  // namespace faultchain::causal
