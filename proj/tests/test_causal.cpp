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

#include <doctest.h>

#include <cmath>
#include <random>

#include "faultchain/causal.hpp"
#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"

using namespace faultchain;
using namespace faultchain::causal;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Fixture {
    Eigen::MatrixXd x;  // confounders, no intercept
    std::vector<std::uint8_t> t;
};

Fixture random_fixture(std::mt19937_64& rng, std::size_t n, std::size_t k) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Fixture f;
    f.x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    std::vector<double> beta(k + 1);
    for (auto& b : beta) {
        b = 2.0 * u(rng) - 1.0;
    }
    f.t.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double eta = beta[0];
        for (std::size_t j = 0; j < k; ++j) {
            const double v = u(rng) < 0.5 ? 1.0 : 0.0;
            f.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            eta += beta[j + 1] * v;
        }
        f.t[i] = u(rng) < sigmoid(eta) ? 1 : 0;
    }
    f.t[0] = 1;
    f.t[1] = 0;
    return f;
}

Eigen::VectorXd as_response(const std::vector<std::uint8_t>& t) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
        y(static_cast<Eigen::Index>(i)) = t[i];
    }
    return y;
}

// Spectrum with confounder columns X1..Xk, the treated statement S and the
// failure outcome; S depends on every X in the PDG.
struct Scenario {
    SliceSpectrum spectrum;
    minilang::StaticPDG pdg;
};

Scenario scenario(const std::vector<std::vector<std::uint8_t>>& confounders, const std::vector<std::uint8_t>& s,
                  const std::vector<std::uint8_t>& y) {
    const std::size_t k = confounders.size();
    const std::size_t n = s.size();
    std::vector<std::string> ids;
    std::vector<minilang::PdgEdge> edges;
    for (std::size_t j = 0; j < k; ++j) {
        ids.push_back("X" + std::to_string(j + 1));
        edges.push_back({"S", ids.back(), j == 0 ? minilang::DepType::Control : minilang::DepType::Data});
    }
    ids.push_back("S");
    std::vector<std::string> tests;
    std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(k + 1));
    std::vector<Verdict> verdicts(n);
    for (std::size_t i = 0; i < n; ++i) {
        tests.push_back("t" + std::to_string(i + 1));
        for (std::size_t j = 0; j < k; ++j) {
            rows[i][j] = confounders[j][i];
        }
        rows[i][k] = s[i];
        verdicts[i] = y[i] ? Verdict::Fail : Verdict::Pass;
    }
    return {SliceSpectrum(ids, tests, rows, verdicts, SpectrumMode::Slice), minilang::StaticPDG(ids, edges)};
}

}  // namespace

TEST_CASE("log-likelihood gradient matches central differences") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_fixture(rng, 20 + rng() % 60, 1 + rng() % 4);
        LogisticObjective obj(with_intercept(f.x), as_response(f.t), 1e-4 + 0.1 * (trial % 3));
        Eigen::VectorXd beta(obj.design().cols());
        for (Eigen::Index j = 0; j < beta.size(); ++j) {
            beta(j) = u(rng);
        }
        const Eigen::VectorXd g = obj.gradient(beta);
        Eigen::VectorXd fd(beta.size());
        const double h = 1e-5;
        for (Eigen::Index j = 0; j < beta.size(); ++j) {
            Eigen::VectorXd up = beta, down = beta;
            up(j) += h;
            down(j) -= h;
            fd(j) = (obj.value(up) - obj.value(down)) / (2 * h);
        }
        CHECK((g - fd).norm() / std::max(fd.norm(), 1e-8) <= 1e-4);
    }
}

TEST_CASE("Newton fit reaches the grid-search optimum") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 4; ++trial) {
        auto f = random_fixture(rng, 40, 1);
        // make sure neither confounder level is separated
        f.x(0, 0) = 1;
        f.x(1, 0) = 1;
        f.x(2, 0) = 0;
        f.t[2] = 1;
        f.x(3, 0) = 0;
        f.t[3] = 0;
        const auto model = fit_propensity(f.t, f.x, 1e-4);
        REQUIRE(model.has_value());
        CHECK(model->converged);
        LogisticObjective obj(with_intercept(f.x), as_response(f.t), 1e-4);
        double best = -INFINITY;
        Eigen::Vector2d arg;
        for (double b0 = -6; b0 <= 6; b0 += 0.01) {
            for (double b1 = -6; b1 <= 6; b1 += 0.01) {
                const double v = obj.value(Eigen::Vector2d(b0, b1));
                if (v > best) {
                    best = v;
                    arg = {b0, b1};
                }
            }
        }
        CHECK(obj.value(model->coefficients) >= best - 1e-9);
        CHECK((model->coefficients - arg).cwiseAbs().maxCoeff() <= 0.02);
    }
}

TEST_CASE("fit edge cases") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 1);
    CHECK_FALSE(fit_propensity(std::vector<std::uint8_t>{1, 1, 1, 1}, x, 1e-4).has_value());
    CHECK_FALSE(fit_propensity(std::vector<std::uint8_t>{0, 0, 0, 0}, x, 1e-4).has_value());
    // perfectly separated: the ridge keeps coefficients finite
    Eigen::MatrixXd sep(4, 1);
    sep << 1, 1, 0, 0;
    const auto m = fit_propensity(std::vector<std::uint8_t>{1, 1, 0, 0}, sep, 1e-4);
    REQUIRE(m.has_value());
    CHECK(std::isfinite(m->coefficients(1)));
    const auto p = m->predict(sep);
    CHECK(p.minCoeff() > 0.0);
    CHECK(p.maxCoeff() < 1.0);
    // no confounders: the propensity is the treated share
    const auto flat = fit_propensity(std::vector<std::uint8_t>{1, 0, 0, 0}, Eigen::MatrixXd(4, 0), 1e-4);
    REQUIRE(flat.has_value());
    CHECK(flat->predict(Eigen::MatrixXd(4, 0))(0) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("eight-unit stratified fixture equals the exact stratification estimate") {
    // stratum X=1: treated outcomes 1,1,0; control outcome 0
    // stratum X=0: treated outcome 0; control outcomes 0,1,0
    const std::vector<std::uint8_t> x = {1, 1, 1, 1, 0, 0, 0, 0};
    const std::vector<std::uint8_t> s = {1, 1, 1, 0, 1, 0, 0, 0};
    const std::vector<std::uint8_t> y = {1, 1, 0, 0, 0, 0, 1, 0};
    double oracle = 0;
    for (int stratum : {0, 1}) {
        double n = 0, n1 = 0, n0 = 0, y1 = 0, y0 = 0;
        for (std::size_t i = 0; i < 8; ++i) {
            if (x[i] != stratum) {
                continue;
            }
            ++n;
            if (s[i]) {
                ++n1;
                y1 += y[i];
            } else {
                ++n0;
                y0 += y[i];
            }
        }
        oracle += n / 8.0 * (y1 / n1 - y0 / n0);
    }
    CHECK(oracle == doctest::Approx(1.0 / 6.0));

    const auto sc = scenario({x}, s, y);
    for (auto strategy : {MatchingStrategy::Nearest, MatchingStrategy::Full}) {
        CausalConfig cfg;
        cfg.matching = strategy;
        const auto eff = failure_causing_effect("S", sc.pdg, sc.spectrum, cfg);
        CHECK_FALSE(eff.degenerate);
        CHECK(eff.retained == 8);
        CHECK(eff.confounders == 1);
        CHECK(std::abs(eff.tau_hat - oracle) <= 1e-9);
    }
}

TEST_CASE("nearest matching keeps ties and honours the caliper") {
    const std::vector<std::uint8_t> t = {1, 0, 0, 1, 0};
    const std::vector<double> p = {0.5, 0.5, 0.5, 0.9, 0.1};
    const auto m = match_executions(t, p, MatchingStrategy::Nearest, 0.2);
    CHECK(m.matches[0] == std::vector<std::size_t>{1, 2});
    CHECK(m.matches[1] == std::vector<std::size_t>{0});
    // 0.9 and 0.1 are far outside 0.2 SD of the logit from everything else
    CHECK(m.matches[3].empty());
    CHECK(m.matches[4].empty());
    CHECK(m.discarded == std::vector<std::size_t>{3, 4});
    CHECK(m.num_retained() == 3);

    const auto wide = match_executions(t, p, MatchingStrategy::Nearest, 100.0);
    CHECK(wide.matches[3] == std::vector<std::size_t>{1, 2});
    CHECK(wide.num_retained() == 5);

    const auto none = match_executions(std::vector<std::uint8_t>{1, 1}, std::vector<double>{0.4, 0.6});
    CHECK(none.degenerate);
    CHECK_THROWS_AS(match_executions(t, std::vector<double>{0.5}), InputError);
}

TEST_CASE("full matching joins linked units into blocks") {
    const std::vector<std::uint8_t> t = {1, 0, 1, 0};
    const std::vector<double> p = {0.40, 0.41, 0.42, 0.70};
    const auto m = match_executions(t, p, MatchingStrategy::Full, 100.0);
    // units 0, 1, 2 link into one block; unit 3 links to 2 and joins it
    CHECK(m.matches[0] == std::vector<std::size_t>{1, 3});
    CHECK(m.matches[1] == std::vector<std::size_t>{0, 2});
}

TEST_CASE("matching reduces the propensity gap on every fixture") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_fixture(rng, 60, 1 + rng() % 3);
        const auto model = fit_propensity(f.t, f.x, 1e-4);
        REQUIRE(model.has_value());
        const Eigen::VectorXd pv = model->predict(f.x);
        const std::vector<double> p(pv.data(), pv.data() + pv.size());
        const auto m = match_executions(f.t, p);
        if (m.degenerate) {
            continue;
        }
        double before = 0, after = 0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!m.retained(i)) {
                continue;
            }
            double all = 0, cnt = 0;
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (f.t[j] != f.t[i]) {
                    all += std::abs(p[i] - p[j]);
                    ++cnt;
                }
            }
            double matched = 0;
            for (std::size_t j : m.matches[i]) {
                matched += std::abs(p[i] - p[j]);
            }
            before += all / cnt;
            after += matched / static_cast<double>(m.matches[i].size());
            ++n;
        }
        REQUIRE(n > 0);
        CHECK(after <= before);
    }
}

TEST_CASE("effects stay in [-1, 1] on random spectra") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 10 + rng() % 50;
        const std::size_t k = 1 + rng() % 3;
        std::vector<std::vector<std::uint8_t>> xs(k, std::vector<std::uint8_t>(n));
        std::vector<std::uint8_t> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& x : xs) {
                x[i] = static_cast<std::uint8_t>(rng() & 1);
            }
            s[i] = static_cast<std::uint8_t>(rng() % 3 == 0);
            y[i] = static_cast<std::uint8_t>(rng() % 4 == 0);
        }
        y[0] = 1;
        const auto sc = scenario(xs, s, y);
        for (auto strategy : {MatchingStrategy::Nearest, MatchingStrategy::Full}) {
            CausalConfig cfg;
            cfg.matching = strategy;
            for (const auto& id : sc.spectrum.statements()) {
                const auto eff = failure_causing_effect(id, sc.pdg, sc.spectrum, cfg);
                CHECK(eff.tau_hat >= -1.0);
                CHECK(eff.tau_hat <= 1.0);
            }
        }
    }
}

TEST_CASE("null-effect statements over 100 seeded 200-test fixtures") {
    // Coverage of S depends on two confounders and the failure depends on the
    // confounders alone, so S has no effect although its raw risk difference
    // is far from zero.
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int confounded = 0;
    for (int fixture = 0; fixture < 100; ++fixture) {
        const std::size_t n = 200;
        std::vector<std::vector<std::uint8_t>> xs(2, std::vector<std::uint8_t>(n));
        std::vector<std::uint8_t> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[0][i] = u(rng) < 0.5;
            xs[1][i] = u(rng) < 0.4;
            s[i] = u(rng) < sigmoid(-1.0 + 2.0 * xs[0][i] + 0.8 * xs[1][i]);
            y[i] = xs[0][i] && !xs[1][i];
        }
        const auto sc = scenario(xs, s, y);
        const auto eff = failure_causing_effect("S", sc.pdg, sc.spectrum);
        INFO("fixture " << fixture);
        CHECK_FALSE(eff.degenerate);
        CHECK(std::abs(eff.tau_hat) <= 0.1);

        double ft = 0, nt = 0, fc = 0, nc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            (s[i] ? ft : fc) += y[i];
            (s[i] ? nt : nc) += 1;
        }
        confounded += std::abs(ft / nt - fc / nc) > 0.1;
    }
    // the naive contrast is biased on most fixtures
    CHECK(confounded >= 90);
}

TEST_CASE("golden slice spectrum ranks S9 and S15 above S6") {
    const auto g = corpus::motivating_example();
    const auto p = minilang::parse(g.source);
    const auto trace = minilang::trace_suite(p, g.suite);
    const auto pdg = minilang::static_pdg(p);
    const auto effects = estimate_effects({"S6", "S9", "S15"}, pdg, trace.slice);
    CHECK(effects.at("S9").tau_hat == doctest::Approx(1.0));
    CHECK(effects.at("S15").tau_hat == doctest::Approx(2.0 / 3.0));
    CHECK(effects.at("S6").tau_hat == doctest::Approx(0.0));
    CHECK(effects.at("S6").degenerate);
    CHECK(effects.at("S9").tau_hat > effects.at("S6").tau_hat);
    CHECK(effects.at("S15").tau_hat > effects.at("S6").tau_hat);

    const auto cv = confounder_vector("S15", pdg, trace.slice);
    CHECK(cv.control_parents == std::vector<std::string>{"S14"});
    CHECK(cv.data_parents == std::vector<std::string>{"S7", "S9"});

    std::map<std::string, double> tau;
    for (const auto& [id, e] : effects) {
        tau[id] = e.tau_hat;
    }
    std::vector<selection::CauseEffectChain> chains = {{{"S6"}, {}, 0}, {{"S15", "S9"}, {}, 0}};
    const auto ranked = rank_chains(chains, tau, p.ids());
    CHECK(ranked[0].members == std::vector<std::string>{"S9", "S15"});
    CHECK(ranked[0].aggregate_effect == doctest::Approx(5.0 / 6.0));
    CHECK(ranked[1].members == std::vector<std::string>{"S6"});
}

TEST_CASE("degenerate statements fall back to the risk difference") {
    const std::vector<std::uint8_t> x = {1, 0, 1, 0};
    const auto all = scenario({x}, {1, 1, 1, 1}, {1, 0, 0, 0});
    const auto eff = failure_causing_effect("S", all.pdg, all.spectrum);
    CHECK(eff.degenerate);
    CHECK(eff.tau_hat == 0.0);
    CHECK(eff.reason == "covered by every test");
    CHECK_THROWS_AS(failure_causing_effect("Z", all.pdg, all.spectrum), InputError);
    CHECK(parse_matching("full") == MatchingStrategy::Full);
    CHECK_THROWS_AS(parse_matching("optimal"), InputError);
}

TEST_CASE("imputation rejects an empty matched sample") {
    MatchedSample m;
    m.treatment = {1, 0};
    m.matches = {{}, {}};
    CHECK_THROWS_AS(impute_and_estimate(std::vector<std::uint8_t>{1, 0}, m), PreconditionError);
}
