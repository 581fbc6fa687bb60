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

#include "faultchain/causal.hpp"
#include "faultchain/error.hpp"

namespace faultchain::causal {

namespace {

double log1p_exp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

constexpr double kProbFloor = 1e-15;

}  // namespace

LogisticObjective::LogisticObjective(Eigen::MatrixXd design, Eigen::VectorXd response, double ridge)
    : design_(std::move(design)), response_(std::move(response)), ridge_(ridge) {
    if (design_.rows() != response_.size()) {
        throw InputError("design matrix and response differ in length");
    }
}

double LogisticObjective::value(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd eta = design_ * beta;
    double ll = 0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        ll += response_[i] * eta[i] - log1p_exp(eta[i]);
    }
    const double penalty = beta.size() > 1 ? beta.tail(beta.size() - 1).squaredNorm() : 0.0;
    return ll - 0.5 * ridge_ * penalty;
}

Eigen::VectorXd LogisticObjective::gradient(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd eta = design_ * beta;
    Eigen::VectorXd resid(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        resid[i] = response_[i] - sigmoid(eta[i]);
    }
    Eigen::VectorXd g = design_.transpose() * resid;
    for (Eigen::Index k = 1; k < beta.size(); ++k) {
        g[k] -= ridge_ * beta[k];
    }
    return g;
}

Eigen::MatrixXd LogisticObjective::hessian(const Eigen::VectorXd& beta) const {
    const Eigen::VectorXd eta = design_ * beta;
    Eigen::VectorXd w(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double p = sigmoid(eta[i]);
        w[i] = p * (1.0 - p);
    }
    Eigen::MatrixXd h = design_.transpose() * w.asDiagonal() * design_;
    for (Eigen::Index k = 1; k < beta.size(); ++k) {
        h(k, k) += ridge_;
    }
    return h;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& confounders) {
    Eigen::MatrixXd x(confounders.rows(), confounders.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(confounders.cols()) = confounders;
    return x;
}

Eigen::VectorXd PropensityModel::linear_predictor(const Eigen::MatrixXd& confounders) const {
    return with_intercept(confounders) * coefficients;
}

Eigen::VectorXd PropensityModel::predict(const Eigen::MatrixXd& confounders) const {
    Eigen::VectorXd eta = linear_predictor(confounders);
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        eta[i] = std::clamp(sigmoid(eta[i]), kProbFloor, 1.0 - kProbFloor);
    }
    return eta;
}

std::optional<PropensityModel> fit_propensity(std::span<const std::uint8_t> treatment,
                                              const Eigen::MatrixXd& confounders, double ridge) {
    if (static_cast<Eigen::Index>(treatment.size()) != confounders.rows()) {
        throw InputError("treatment and confounder rows differ in length");
    }
    if (!(ridge > 0)) {
        throw InputError("ridge penalty must be positive");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(treatment.size()));
    std::size_t treated = 0;
    for (std::size_t i = 0; i < treatment.size(); ++i) {
        y[static_cast<Eigen::Index>(i)] = treatment[i] ? 1.0 : 0.0;
        treated += treatment[i] ? 1 : 0;
    }
    if (treated == 0 || treated == treatment.size()) {
        return std::nullopt;
    }
    const LogisticObjective objective(with_intercept(confounders), y, ridge);

    PropensityModel model;
    model.ridge = ridge;
    model.coefficients = Eigen::VectorXd::Zero(confounders.cols() + 1);
    const double base = static_cast<double>(treated) / static_cast<double>(treatment.size());
    model.coefficients[0] = std::log(base / (1.0 - base));
    double current = objective.value(model.coefficients);

    for (model.iterations = 1; model.iterations <= kMaxNewtonIterations; ++model.iterations) {
        const Eigen::VectorXd g = objective.gradient(model.coefficients);
        const Eigen::MatrixXd h = objective.hessian(model.coefficients);
        const Eigen::VectorXd step = h.ldlt().solve(g);
        // Halve the step until the penalised likelihood stops decreasing.
        double scale = 1.0;
        Eigen::VectorXd next = model.coefficients + step;
        double candidate = objective.value(next);
        while (candidate < current - 1e-12 && scale > 1e-10) {
            scale *= 0.5;
            next = model.coefficients + scale * step;
            candidate = objective.value(next);
        }
        const double change = (next - model.coefficients).cwiseAbs().maxCoeff();
        model.coefficients = next;
        current = candidate;
        if (change < kCoefficientTolerance) {
            model.converged = true;
            break;
        }
    }
    model.iterations = std::min(model.iterations, kMaxNewtonIterations);
    model.log_likelihood = current;
    return model;
}

}  // namespace faultchain::causal
