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

#include "faultchain/infotheory.hpp"

#include <algorithm>
#include <cmath>

#include "faultchain/error.hpp"
#include "faultchain/kernels.hpp"

namespace faultchain::info {

namespace {

constexpr double kTieEpsilon = 1e-12;

void require_same_length(const BitColumn& a, const BitColumn& b) {
    if (a.size() != b.size()) {
        throw InputError("paired samples differ in length (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    if (a.empty()) {
        throw InputError("empty sample");
    }
}

}  // namespace

EntropyConfig EntropyConfig::shannon(double log_base) {
    EntropyConfig cfg;
    cfg.name = "shannon";
    cfg.log_base = log_base;
    const double scale = 1.0 / std::log(log_base);
    cfg.phi = [scale](double p) { return p > 0 ? p * std::log(p) * scale : 0.0; };
    return cfg;
}

EntropyConfig EntropyConfig::quadratic() {
    EntropyConfig cfg;
    cfg.name = "quadratic";
    cfg.phi = [](double p) { return p * p - p; };
    return cfg;
}

EntropyConfig EntropyConfig::by_name(const std::string& name) {
    if (name == "shannon") {
        return shannon();
    }
    if (name == "quadratic") {
        return quadratic();
    }
    throw InputError("unknown entropy function '" + name + "' (expected shannon|quadratic)");
}

JointCounts2 joint_counts(const BitColumn& x, const BitColumn& y) {
    require_same_length(x, y);
    JointCounts2 c;
    const double nx = static_cast<double>(kernels::popcount(x.words()));
    const double ny = static_cast<double>(kernels::popcount(y.words()));
    const double nxy = static_cast<double>(kernels::and_popcount(x.words(), y.words()));
    c.total = static_cast<double>(x.size());
    c.n[1][1] = nxy;
    c.n[1][0] = nx - nxy;
    c.n[0][1] = ny - nxy;
    c.n[0][0] = c.total - nx - ny + nxy;
    return c;
}

JointCounts3 joint_counts(const BitColumn& x, const BitColumn& y, const BitColumn& z) {
    require_same_length(x, y);
    require_same_length(x, z);
    const auto pop = [](const BitColumn& a) { return static_cast<double>(kernels::popcount(a.words())); };
    const auto pop2 = [](const BitColumn& a, const BitColumn& b) {
        return static_cast<double>(kernels::and_popcount(a.words(), b.words()));
    };
    const double nx = pop(x), ny = pop(y), nz = pop(z);
    const double nxy = pop2(x, y), nxz = pop2(x, z), nyz = pop2(y, z);
    const double nxyz = static_cast<double>(kernels::and3_popcount(x.words(), y.words(), z.words()));
    JointCounts3 c;
    c.total = static_cast<double>(x.size());
    // Inclusion-exclusion from the seven intersection counts.
    c.n[1][1][1] = nxyz;
    c.n[1][1][0] = nxy - nxyz;
    c.n[1][0][1] = nxz - nxyz;
    c.n[0][1][1] = nyz - nxyz;
    c.n[1][0][0] = nx - nxy - nxz + nxyz;
    c.n[0][1][0] = ny - nxy - nyz + nxyz;
    c.n[0][0][1] = nz - nxz - nyz + nxyz;
    c.n[0][0][0] = c.total - nx - ny - nz + nxy + nxz + nyz - nxyz;
    return c;
}

double entropy_from_counts(double n0, double n1, const EntropyConfig& cfg) {
    const double n = n0 + n1;
    if (n <= 0) {
        return 0.0;
    }
    return -(cfg.phi(n0 / n) + cfg.phi(n1 / n));
}

double mutual_information(const JointCounts2& c, const EntropyConfig& cfg) {
    const double hx = entropy_from_counts(c.n[0][0] + c.n[0][1], c.n[1][0] + c.n[1][1], cfg);
    double conditional = 0;
    for (int y = 0; y < 2; ++y) {
        const double ny = c.n[0][y] + c.n[1][y];
        if (ny > 0) {
            conditional += (ny / c.total) * entropy_from_counts(c.n[0][y], c.n[1][y], cfg);
        }
    }
    return hx - conditional;
}

double conditional_mutual_information(const JointCounts3& c, const EntropyConfig& cfg) {
    double total = 0;
    for (int z = 0; z < 2; ++z) {
        const double nz = c.n[0][0][z] + c.n[0][1][z] + c.n[1][0][z] + c.n[1][1][z];
        if (nz <= 0) {
            continue;
        }
        const double hx_z = entropy_from_counts(c.n[0][0][z] + c.n[0][1][z], c.n[1][0][z] + c.n[1][1][z], cfg);
        double inner = 0;
        for (int y = 0; y < 2; ++y) {
            const double nyz = c.n[0][y][z] + c.n[1][y][z];
            if (nyz > 0) {
                inner += (nyz / nz) * entropy_from_counts(c.n[0][y][z], c.n[1][y][z], cfg);
            }
        }
        total += (nz / c.total) * (hx_z - inner);
    }
    return total;
}

double entropy(const BitColumn& x, const EntropyConfig& cfg) {
    if (x.empty()) {
        throw InputError("entropy of an empty sample");
    }
    const double n1 = static_cast<double>(x.count());
    return entropy_from_counts(static_cast<double>(x.size()) - n1, n1, cfg);
}

double mutual_information(const BitColumn& x, const BitColumn& y, const EntropyConfig& cfg) {
    return mutual_information(joint_counts(x, y), cfg);
}

double conditional_mutual_information(const BitColumn& x, const BitColumn& y, const BitColumn& z,
                                      const EntropyConfig& cfg) {
    return conditional_mutual_information(joint_counts(x, y, z), cfg);
}

Uncertainty symmetric_uncertainty(const BitColumn& x, const BitColumn& y, const EntropyConfig& cfg) {
    const double denom = entropy(x, cfg) + entropy(y, cfg);
    if (denom <= kTieEpsilon) {
        return {0.0, true};
    }
    const double u = 2.0 * mutual_information(x, y, cfg) / denom;
    return {std::clamp(u, 0.0, 1.0), false};
}

double relevance(const SliceSpectrum& spectrum, std::size_t statement, const EntropyConfig& cfg) {
    return symmetric_uncertainty(spectrum.column(statement), spectrum.failures(), cfg).value;
}

CorrelationRecord correlation_ratio(const SliceSpectrum& spectrum, std::size_t i, std::size_t j,
                                    const EntropyConfig& cfg) {
    CorrelationRecord rec;
    rec.i = spectrum.statements().at(i);
    rec.j = spectrum.statements().at(j);
    const BitColumn& si = spectrum.column(i);
    const BitColumn& sj = spectrum.column(j);
    const BitColumn& out = spectrum.failures();
    rec.cmi = conditional_mutual_information(si, out, sj, cfg);
    rec.mi = mutual_information(si, out, cfg);
    const double denom = entropy(si, cfg) + entropy(out, cfg);
    double diff = rec.cmi - rec.mi;
    if (std::abs(diff) < kTieEpsilon) {
        diff = 0;
    }
    rec.kind = diff >= 0 ? Correlation::Interdependent : Correlation::Redundant;
    if (denom <= kTieEpsilon) {
        rec.degenerate = true;
        rec.cr = 0;
        return rec;
    }
    rec.cr = std::clamp(2.0 * diff / denom, -1.0, 1.0);
    return rec;
}

CorrelationRecord correlation_ratio(const SliceSpectrum& spectrum, const std::string& i, const std::string& j,
                                    const EntropyConfig& cfg) {
    if (i == j) {
        throw InputError("correlation ratio needs two distinct statements");
    }
    return correlation_ratio(spectrum, spectrum.require_index(i), spectrum.require_index(j), cfg);
}

int relevance_class(const StatementCounts& c, std::size_t total_failed, std::size_t total_passed) {
    const double nf = static_cast<double>(total_failed);
    const double fail_side = (static_cast<double>(c.covered_failed) - static_cast<double>(c.uncovered_failed)) / nf;
    const double pass_side =
        total_passed == 0
            ? -1.0
            : (static_cast<double>(c.covered_passed) - static_cast<double>(c.uncovered_passed)) /
                  static_cast<double>(total_passed);
    return fail_side > pass_side ? 1 : -1;
}

int relevance_class(const SpectrumStats& stats, std::size_t statement) {
    return relevance_class(stats.counts.at(statement), stats.total_failed, stats.total_passed);
}

}  // namespace faultchain::info
