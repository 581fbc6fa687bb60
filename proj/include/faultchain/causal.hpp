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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "faultchain/minilang.hpp"
#include "faultchain/selection.hpp"
#include "faultchain/spectrum.hpp"

namespace faultchain::causal {

enum class MatchingStrategy { Nearest, Full };

const char* to_string(MatchingStrategy m) noexcept;
MatchingStrategy parse_matching(const std::string& text);

struct CausalConfig {
    MatchingStrategy matching = MatchingStrategy::Nearest;
    double ridge = 1e-4;
    double caliper = 0.2;  // in standard deviations of the logit propensity
};

/// Coverage of a statement's direct dependence predecessors, one row per test.
struct ConfounderVector {
    std::string statement;
    std::vector<std::string> control_parents;
    std::vector<std::string> data_parents;
    Eigen::MatrixXd values;  // tests x (control_parents + data_parents), entries 0/1

    std::size_t size() const noexcept { return control_parents.size() + data_parents.size(); }
};

/// Predecessors are the PDG out-neighbours of s (what s depends on).
/// Throws InputError when s is missing from the PDG or the spectrum.
ConfounderVector confounder_vector(const std::string& statement, const minilang::StaticPDG& pdg,
                                   const SliceSpectrum& spectrum);

/// Ridge-penalised logistic log-likelihood. The design matrix carries the
/// intercept in column 0, which is not penalised.
class LogisticObjective {
public:
    LogisticObjective(Eigen::MatrixXd design, Eigen::VectorXd response, double ridge);

    double value(const Eigen::VectorXd& beta) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& beta) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& beta) const;  // of the negated objective

    const Eigen::MatrixXd& design() const noexcept { return design_; }
    const Eigen::VectorXd& response() const noexcept { return response_; }
    double ridge() const noexcept { return ridge_; }

private:
    Eigen::MatrixXd design_;
    Eigen::VectorXd response_;
    double ridge_;
};

/// Prepends an intercept column to a confounder matrix.
Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& confounders);

struct PropensityModel {
    Eigen::VectorXd coefficients;  // intercept first
    std::size_t iterations = 0;
    double log_likelihood = 0;  // penalised, at the returned coefficients
    double ridge = 0;
    bool converged = false;

    Eigen::VectorXd linear_predictor(const Eigen::MatrixXd& confounders) const;
    /// Propensities, always strictly inside (0, 1).
    Eigen::VectorXd predict(const Eigen::MatrixXd& confounders) const;
};

inline constexpr std::size_t kMaxNewtonIterations = 100;
inline constexpr double kCoefficientTolerance = 1e-8;

/// Newton-Raphson on the penalised likelihood. Returns nullopt when every
/// unit is treated or every unit is control.
std::optional<PropensityModel> fit_propensity(std::span<const std::uint8_t> treatment,
                                              const Eigen::MatrixXd& confounders, double ridge);

struct MatchedSample {
    std::vector<std::uint8_t> treatment;            // group of each unit
    std::vector<std::vector<std::size_t>> matches;  // J_M(i); empty for discarded units
    std::vector<std::size_t> discarded;
    std::size_t m = 1;
    bool degenerate = false;
    std::string reason;

    bool retained(std::size_t unit) const { return !matches[unit].empty(); }
    std::size_t num_retained() const;
};

/// Nearest: every unit is matched to the opposite-group unit(s) closest in
/// propensity (ties kept), subject to |logit difference| <= caliper * SD of
/// the logit; units without an admissible match are discarded. Full: nearest
/// links define blocks (connected components); each unit matches every
/// opposite-group unit of its block.
MatchedSample match_executions(std::span<const std::uint8_t> treatment, std::span<const double> propensities,
                               MatchingStrategy strategy = MatchingStrategy::Nearest, double caliper = 0.2);

struct CausalEffect {
    std::string statement;
    double tau_hat = 0;
    std::vector<double> imputed_control;  // Y_i0 hat; NaN for discarded units
    std::vector<double> imputed_treated;  // Y_i1 hat; NaN for discarded units
    std::size_t retained = 0;
    std::size_t confounders = 0;
    bool degenerate = false;
    std::string reason;
};

/// Imputes each unit's missing potential outcome as the mean outcome of its
/// matches and averages Y1 - Y0 over retained units. Throws
/// PreconditionError when nothing is retained.
CausalEffect impute_and_estimate(std::span<const std::uint8_t> outcomes, const MatchedSample& matched);

/// Full estimation for one statement; degenerate cases fall back to an
/// unadjusted risk difference and are flagged rather than thrown.
CausalEffect failure_causing_effect(const std::string& statement, const minilang::StaticPDG& pdg,
                                    const SliceSpectrum& spectrum, const CausalConfig& cfg = {});

std::map<std::string, CausalEffect> estimate_effects(const std::vector<std::string>& statements,
                                                     const minilang::StaticPDG& pdg, const SliceSpectrum& spectrum,
                                                     const CausalConfig& cfg = {});

/// Aggregate = mean member tau_hat; chains sorted by aggregate, then by the
/// largest member effect, then by first member id. Members are reordered by
/// tau_hat within each chain.
std::vector<selection::CauseEffectChain> rank_chains(std::vector<selection::CauseEffectChain> chains,
                                                     const std::map<std::string, double>& effects,
                                                     const std::vector<std::string>& source_order = {});

}  // namespace faultchain::causal
