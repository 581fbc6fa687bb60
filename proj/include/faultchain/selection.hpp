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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faultchain/infotheory.hpp"
#include "faultchain/minilang.hpp"
#include "faultchain/spectrum.hpp"

namespace faultchain::selection {

struct SelectionConfig {
    double delta_fraction = 0.30;  // delta = ceil(fraction * |PS|)
    std::size_t chain_cap = 5;     // k': maximum number of chains
    info::EntropyConfig entropy = info::EntropyConfig::shannon();
    /// Overrides the fraction-derived threshold when set.
    std::optional<std::size_t> delta;
};

/// Evolving state of the dynamic-weighting loop. Statements are spectrum
/// column indices; `candidates` stays in source order.
struct SelectionState {
    std::vector<std::size_t> candidates;  // PS
    std::vector<std::size_t> selected;    // S, in selection order
    std::vector<double> weights;          // per spectrum statement
    std::vector<double> relevance;        // R(s, Out), fixed
    std::vector<int> relevance_class;     // RC(s), fixed
    std::size_t iteration = 0;            // k
    std::size_t delta = 0;
    std::size_t chain_cap = 5;
    std::size_t initial_candidates = 0;
};

inline constexpr double kWeightFloor = 1e-9;

/// Statements whose column varies across tests; all statements when none do.
std::vector<std::size_t> informative_statements(const SliceSpectrum& spectrum);

/// w(s) = 1 + prior(s). Throws InputError for negative or unknown priors and
/// for a delta fraction outside (0, 1]; PreconditionError without failing tests.
SelectionState initialize(const SliceSpectrum& spectrum, const std::map<std::string, double>& priors,
                          const SelectionConfig& cfg);

/// delta = ceil(fraction * n), robust to binary rounding of the fraction.
std::size_t threshold(double delta_fraction, std::size_t n);

/// J(s) = R(s, Out) * w(s) * RC(s) for every candidate, keyed by index.
std::map<std::size_t, double> score_candidates(const SelectionState& state);

/// Moves the argmax-J candidate from PS to S (ties: earliest in source order).
/// Throws PreconditionError when PS is empty.
std::size_t select_next(SelectionState& state, const std::map<std::size_t, double>& scores);

/// w(i) *= 1 + CR(i, newly_selected) for every i in PS u S except the new one.
void update_weights(SelectionState& state, std::size_t newly_selected, const SliceSpectrum& spectrum,
                    const info::EntropyConfig& cfg);

struct ChainLink {
    std::string from;
    std::string to;
    minilang::DepType type = minilang::DepType::Data;

    friend bool operator==(const ChainLink&, const ChainLink&) = default;
};

struct CauseEffectChain {
    std::vector<std::string> members;  // order of joining
    std::vector<ChainLink> links;      // subset of static PDG edges between members
    double aggregate_effect = 0;

    bool contains(const std::string& id) const;
};

enum class AttachOutcome { Joined, Merged, Created, Discarded };

/// Places a newly selected statement into the chain set: joins the single
/// adjacent chain, merges every adjacent chain, starts a new chain while
/// fewer than `chain_cap` exist, or is discarded.
AttachOutcome attach_to_chains(std::vector<CauseEffectChain>& chains, const std::string& statement,
                               const minilang::StaticPDG& pdg, std::size_t chain_cap);

struct IterationTrace {
    std::map<std::size_t, double> scores;   // J at this iteration
    std::vector<double> weights_before;     // weights used for J
    std::size_t chosen = 0;
    std::map<std::size_t, double> correlation;  // CR(i, chosen) applied afterwards
    AttachOutcome outcome = AttachOutcome::Created;
};

struct SelectionResult {
    std::vector<std::string> selected;
    std::vector<CauseEffectChain> chains;
    std::vector<std::string> discarded;  // selected but outside every chain
    std::map<std::string, double> final_weights;
    SelectionState state;
    std::vector<IterationTrace> trace;
};

/// Score / select / reweight / chain until |S| > delta or PS is exhausted.
SelectionResult run_selection(const SliceSpectrum& spectrum, const minilang::StaticPDG& pdg,
                              const SelectionConfig& cfg, const std::map<std::string, double>& priors = {});

}  // namespace faultchain::selection
