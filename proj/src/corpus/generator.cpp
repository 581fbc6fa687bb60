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

#include <random>
#include <sstream>

#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"

namespace faultchain::corpus {

namespace {

// Bounded draws straight from the engine so sequences match on every
// standard library (distributions are implementation-defined).
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }
    bool chance(std::size_t percent) { return below(100) < percent; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 engine_;
};

class ProgramWriter {
public:
    ProgramWriter(std::uint64_t seed, std::size_t target) : draw_(seed), target_(target) {}

    std::string run() {
        line(0, "read(a, b, c, d);");
        derived_ = {};
        inputs_ = {"a", "b", "c", "d"};
        // Seed a few derived values so later blocks have something to update.
        for (int k = 0; k < 3; ++k) {
            new_assignment(0);
        }
        const std::size_t reserve = 4;
        while (count_ + reserve < target_) {
            const std::size_t roll = draw_.below(100);
            if (roll < 35) {
                if (derived_.size() < 8 || draw_.chance(50)) {
                    new_assignment(0);
                } else {
                    update(0);
                }
            } else if (roll < 75) {
                branch(0);
            } else {
                loop();
            }
        }
        line(0, "print(" + draw_.pick(derived_) + ");");
        line(0, "print(" + draw_.pick(derived_) + " - " + draw_.pick(derived_) + ");");
        const std::string& x = derived_[derived_.size() - 1];
        const std::string& y = derived_[derived_.size() / 2];
        const std::string& z = derived_[0];
        line(0, "return " + x + " + " + y + " + " + z + ";");
        return out_.str();
    }

private:
    void line(int depth, const std::string& text) {
        out_ << std::string(static_cast<std::size_t>(depth) * 4, ' ') << text << '\n';
        ++count_;
    }
    void open(int depth, const std::string& text) {
        out_ << std::string(static_cast<std::size_t>(depth) * 4, ' ') << text << " {\n";
        ++count_;
    }
    void close(int depth, const std::string& tail = "") {
        out_ << std::string(static_cast<std::size_t>(depth) * 4, ' ') << '}' << tail << '\n';
    }
    void close_inline(int depth) { out_ << std::string(static_cast<std::size_t>(depth) * 4, ' ') << "} else {\n"; }

    std::string any_var() {
        if (derived_.empty() || draw_.chance(40)) {
            return draw_.pick(inputs_);
        }
        return draw_.pick(derived_);
    }

    std::string term() {
        if (draw_.chance(70)) {
            return any_var();
        }
        return std::to_string(draw_.range(1, 9));
    }

    std::string arith() {
        const std::size_t roll = draw_.below(10);
        return roll < 5 ? "+" : roll < 9 ? "-" : "*";
    }

    std::string expression(const std::string& extra = "") {
        std::string e = extra.empty() ? any_var() : extra;
        e += " " + arith() + " " + term();
        if (draw_.chance(30)) {
            e += " " + std::string(draw_.chance(50) ? "+" : "-") + " " + term();
        }
        return e;
    }

    std::string condition() {
        static const std::vector<std::string> rel = {"<", "<=", ">", ">=", "<", ">", "==", "!="};
        std::string op = draw_.pick(rel);
        std::string rhs = draw_.chance(60) ? std::to_string(draw_.range(-5, 5)) : any_var();
        return any_var() + " " + op + " " + rhs;
    }

    void new_assignment(int depth) {
        std::string name = "v" + std::to_string(next_var_++);
        line(depth, name + " = " + expression() + ";");
        derived_.push_back(std::move(name));
    }

    void update(int depth, const std::string& counter = "") {
        const std::string& target = draw_.pick(derived_);
        std::string extra = counter.empty() || draw_.chance(50) ? target : counter;
        line(depth, target + " = " + expression(extra) + ";");
    }

    void branch(int depth, const std::string& counter = "") {
        open(depth, "if (" + condition() + ")");
        const std::size_t n = 1 + draw_.below(3);
        for (std::size_t k = 0; k < n; ++k) {
            update(depth + 1, counter);
        }
        if (draw_.chance(55)) {
            close_inline(depth);
            const std::size_t m = 1 + draw_.below(2);
            for (std::size_t k = 0; k < m; ++k) {
                update(depth + 1, counter);
            }
        }
        close(depth);
    }

    void loop() {
        const std::string counter = "i" + std::to_string(next_counter_++);
        line(0, counter + " = 0;");
        open(0, "while (" + counter + " < " + std::to_string(draw_.range(2, 4)) + ")");
        const std::size_t n = 1 + draw_.below(2);
        for (std::size_t k = 0; k < n; ++k) {
            update(1, counter);
        }
        if (draw_.chance(35)) {
            branch(1, counter);
        }
        line(1, counter + " = " + counter + " + 1;");
        close(0);
    }

    Draw draw_;
    std::size_t target_;
    std::size_t count_ = 0;
    int next_var_ = 1;
    int next_counter_ = 1;
    std::vector<std::string> inputs_;
    std::vector<std::string> derived_;
    std::ostringstream out_;
};

}  // namespace

std::string generate_program(std::uint64_t seed, std::size_t target_statements) {
    return ProgramWriter(seed, target_statements).run();
}

std::vector<TestCase> generate_suite(const minilang::Program& base, std::uint64_t seed, std::size_t num_tests) {
    static const std::vector<std::vector<Value>> boundary = {
        {0, 0, 0, 0}, {10, 10, 10, 10}, {-10, -10, -10, -10}, {1, -1, 1, -1}, {-1, 1, -1, 1}, {10, -10, 0, 5},
    };
    Draw draw(seed);
    std::vector<TestCase> suite;
    suite.reserve(num_tests);
    for (std::size_t i = 0; i < num_tests; ++i) {
        std::vector<Value> v(4);
        if (i < boundary.size()) {
            v = boundary[i];
        } else {
            for (auto& x : v) {
                x = draw.range(-10, 10);
            }
        }
        TestCase tc;
        tc.id = "t" + std::to_string(i + 1);
        tc.inputs = {{"a", v[0]}, {"b", v[1]}, {"c", v[2]}, {"d", v[3]}};
        auto run = minilang::run_with_trace(base, tc.inputs, kGeneratedStepLimit);
        if (run.crashed()) {
            throw PreconditionError("base program crashes on generated test " + tc.id);
        }
        tc.expected = run.outputs;
        suite.push_back(std::move(tc));
    }
    return suite;
}

std::vector<FaultBundle> generate_corpus(std::uint64_t seed, const GeneratorConfig& cfg) {
    if (cfg.min_statements > cfg.max_statements || cfg.min_tests > cfg.max_tests || cfg.max_faults == 0 ||
        cfg.min_tests == 0) {
        throw InputError("corpus generator: inconsistent size ranges");
    }
    std::seed_seq mix{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::vector<std::uint64_t> case_seeds(cfg.cases * 2);
    {
        std::vector<std::uint32_t> raw(case_seeds.size() * 2);
        mix.generate(raw.begin(), raw.end());
        for (std::size_t i = 0; i < case_seeds.size(); ++i) {
            case_seeds[i] = (static_cast<std::uint64_t>(raw[2 * i]) << 32) | raw[2 * i + 1];
        }
    }

    std::vector<FaultBundle> out;
    for (std::size_t k = 0; k < cfg.cases; ++k) {
        Draw draw(case_seeds[2 * k]);
        const std::size_t faults = 1 + k % cfg.max_faults;
        std::ostringstream name;
        name << "gen" << (k + 1 < 10 ? "0" : "") << k + 1;
        bool done = false;
        for (int retry = 0; retry < 32 && !done; ++retry) {
            const std::size_t statements =
                static_cast<std::size_t>(draw.range(static_cast<long>(cfg.min_statements), static_cast<long>(cfg.max_statements)));
            const std::size_t tests =
                static_cast<std::size_t>(draw.range(static_cast<long>(cfg.min_tests), static_cast<long>(cfg.max_tests)));
            const std::uint64_t program_seed = case_seeds[2 * k + 1] + static_cast<std::uint64_t>(retry);
            std::string source = generate_program(program_seed, statements);
            minilang::Program base = minilang::parse(source);
            if (base.statements.size() < cfg.min_statements || base.statements.size() > cfg.max_statements) {
                continue;
            }
            try {
                auto suite = generate_suite(base, program_seed ^ 0x9e3779b97f4a7c15ULL, tests);
                out.push_back(seed_faults(name.str(), minilang::format(base), std::move(suite), faults,
                                          program_seed + 17));
                done = true;
            } catch (const PreconditionError&) {
                // try a fresh base program
            }
        }
        if (!done) {
            throw PreconditionError("could not seed a viable bundle for " + name.str());
        }
    }
    return out;
}

}  // namespace faultchain::corpus
