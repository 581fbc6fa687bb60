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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "faultchain/causal.hpp"
#include "faultchain/evaluation.hpp"
#include "faultchain/minilang.hpp"
#include "faultchain/selection.hpp"
#include "faultchain/spectrum.hpp"

namespace faultchain::driver {

struct PipelineConfig {
    SpectrumMode selection_mode = SpectrumMode::Slice;
    SpectrumMode causal_mode = SpectrumMode::Slice;
    std::string phi = "shannon";
    double delta_fraction = 0.30;
    std::size_t chain_cap = 5;
    causal::MatchingStrategy matching = causal::MatchingStrategy::Nearest;
    double ridge = 1e-4;
    double caliper = 0.2;
    std::vector<eval::Technique> techniques = eval::all_techniques();
    std::uint64_t seed = 1;
    std::optional<std::string> prior_file;
    std::size_t step_limit = minilang::kDefaultStepLimit;

    /// Throws InputError for out-of-range parameters.
    void validate() const;
    selection::SelectionConfig selection_config() const;
    causal::CausalConfig causal_config() const;
    /// Stable JSON object text embedded in every report.
    std::string to_json() const;
};

/// Statement id -> prior weight, from a JSON object file.
std::map<std::string, double> load_priors(const std::filesystem::path& path);

struct Localization {
    std::vector<std::string> statements;  // spectrum order
    selection::SelectionResult selection;
    std::map<std::string, causal::CausalEffect> effects;
    eval::RankedReport report;
};

/// Selection on one spectrum, causal effects on another (same statements and
/// tests), then report assembly.
Localization localize_inference(const SliceSpectrum& selection_spectrum, const SliceSpectrum& causal_spectrum,
                                const minilang::StaticPDG& pdg, const PipelineConfig& cfg,
                                const std::map<std::string, double>& priors = {});

/// Ranking for any technique over a traced suite; baselines use coverage.
eval::RankedReport localize_trace(eval::Technique technique, const minilang::SuiteTrace& trace,
                                  const minilang::StaticPDG& pdg, const PipelineConfig& cfg,
                                  const std::map<std::string, double>& priors = {});

std::string report_json(const eval::RankedReport& report, const PipelineConfig& cfg,
                        const Localization* details = nullptr);
std::string report_text(const eval::RankedReport& report, const Localization* details = nullptr);

// Commands return process exit codes: 0 ok, 2 input error, 3 precondition.
int cmd_trace(const std::filesystem::path& program, const std::filesystem::path& tests,
              const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

struct LocalizeOptions {
    std::filesystem::path spectrum;
    std::filesystem::path pdg;
    std::optional<std::filesystem::path> causal_spectrum;
    std::optional<std::filesystem::path> out;  // JSON report; stdout when unset
    std::optional<std::filesystem::path> text_out;
    eval::Technique technique = eval::Technique::Inference;
};

int cmd_localize(const LocalizeOptions& opts, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

struct EvaluateOptions {
    std::filesystem::path corpus;
    std::optional<std::filesystem::path> json_out;
};

int cmd_evaluate(const EvaluateOptions& opts, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_corpus_gen(const std::filesystem::path& out_dir, std::uint64_t seed, std::size_t cases, std::ostream& out,
                   std::ostream& err);

/// Full command-line entry point (subcommand parsing included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace faultchain::driver
