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

#include <functional>
#include <string>

#include "faultchain/bitcolumn.hpp"
#include "faultchain/spectrum.hpp"

namespace faultchain::info {

/// Entropy family H_phi(X) = -sum_x phi(p(x)). The default phi(p) = p log2 p
/// gives Shannon entropy in bits.
struct EntropyConfig {
    std::string name = "shannon";
    std::function<double(double)> phi;
    double log_base = 2.0;

    static EntropyConfig shannon(double log_base = 2.0);
    /// phi(p) = p^2 - p; H becomes the Gini impurity 1 - sum p^2.
    static EntropyConfig quadratic();
    /// "shannon" or "quadratic"; throws InputError otherwise.
    static EntropyConfig by_name(const std::string& name);
};

/// Joint cell counts of two binary variables.
struct JointCounts2 {
    double n[2][2] = {};
    double total = 0;
};

/// Joint cell counts of three binary variables, indexed [x][y][z].
struct JointCounts3 {
    double n[2][2][2] = {};
    double total = 0;
};

JointCounts2 joint_counts(const BitColumn& x, const BitColumn& y);
JointCounts3 joint_counts(const BitColumn& x, const BitColumn& y, const BitColumn& z);

// Count-level forms; the sample-level functions below build counts with the
// popcount kernels and call these.
double entropy_from_counts(double n0, double n1, const EntropyConfig& cfg);
double mutual_information(const JointCounts2& c, const EntropyConfig& cfg);
double conditional_mutual_information(const JointCounts3& c, const EntropyConfig& cfg);

/// Throws InputError on an empty column.
double entropy(const BitColumn& x, const EntropyConfig& cfg = EntropyConfig::shannon());
/// I(X;Y) = H(X) - sum_y p(y) H(X|Y=y). Throws InputError on length mismatch.
double mutual_information(const BitColumn& x, const BitColumn& y, const EntropyConfig& cfg = EntropyConfig::shannon());
/// I(X;Y|Z) = sum_z p(z) [H(X|Z=z) - sum_y p(y|z) H(X|Y=y,Z=z)].
double conditional_mutual_information(const BitColumn& x, const BitColumn& y, const BitColumn& z,
                                      const EntropyConfig& cfg = EntropyConfig::shannon());

struct Uncertainty {
    double value = 0;
    bool degenerate = false;  // H(x) + H(y) == 0
};

/// U = 2 I(x;y) / (H(x) + H(y)), clamped to [0, 1].
Uncertainty symmetric_uncertainty(const BitColumn& x, const BitColumn& y,
                                  const EntropyConfig& cfg = EntropyConfig::shannon());

/// Relevance of a statement to the failure outcome: U(column, failures).
double relevance(const SliceSpectrum& spectrum, std::size_t statement,
                 const EntropyConfig& cfg = EntropyConfig::shannon());

enum class Correlation { Redundant, Interdependent };

struct CorrelationRecord {
    std::string i;
    std::string j;
    double cmi = 0;  // I(s_i; Out | s_j)
    double mi = 0;   // I(s_i; Out)
    double cr = 0;
    Correlation kind = Correlation::Interdependent;
    bool degenerate = false;
};

/// CR(i,j) = 2 (I(s_i;Out|s_j) - I(s_i;Out)) / (H(s_i) + H(Out)).
/// Interdependent when the conditional term is at least the unconditional one.
CorrelationRecord correlation_ratio(const SliceSpectrum& spectrum, std::size_t i, std::size_t j,
                                    const EntropyConfig& cfg = EntropyConfig::shannon());
CorrelationRecord correlation_ratio(const SliceSpectrum& spectrum, const std::string& i, const std::string& j,
                                    const EntropyConfig& cfg = EntropyConfig::shannon());

/// +1 when s leans toward failing runs, -1 otherwise (ties go to -1).
int relevance_class(const StatementCounts& counts, std::size_t total_failed, std::size_t total_passed);
int relevance_class(const SpectrumStats& stats, std::size_t statement);

}  // namespace faultchain::info
