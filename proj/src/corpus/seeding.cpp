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
#include <functional>
#include <map>
#include <random>

#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"

namespace faultchain::corpus {

using minilang::Expr;
using minilang::Op;
using minilang::Program;
using minilang::StmtKind;

const char* to_string(MutationKind k) noexcept {
    switch (k) {
        case MutationKind::WrongVariable: return "wrong_variable";
        case MutationKind::WrongOperator: return "wrong_operator";
        case MutationKind::WrongConstant: return "wrong_constant";
        case MutationKind::NegatedPredicate: return "negated_predicate";
    }
    return "?";
}

MutationKind parse_mutation_kind(const std::string& text) {
    for (MutationKind k : all_mutation_kinds()) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw InputError("unknown mutation kind '" + text + "'");
}

const std::vector<MutationKind>& all_mutation_kinds() {
    static const std::vector<MutationKind> all = {MutationKind::WrongVariable, MutationKind::WrongOperator,
                                                  MutationKind::WrongConstant, MutationKind::NegatedPredicate};
    return all;
}

std::set<std::string> FaultBundle::fault_statements() const {
    std::set<std::string> out;
    for (const auto& f : faults) {
        out.insert(f.statement);
    }
    return out;
}

Program apply_faults(const Program& base, const std::vector<Fault>& faults) {
    Program p = base;
    for (const auto& f : faults) {
        auto idx = p.index_of(f.statement);
        if (!idx) {
            throw InputError("fault names unknown statement " + f.statement);
        }
        auto& stmt = p.statements[*idx];
        if (!stmt.expr || minilang::format_expr(*stmt.expr) != f.original) {
            throw InputError("fault at " + f.statement + " expects '" + f.original + "'");
        }
        stmt.expr = minilang::parse_expression(f.mutated);
    }
    return p;
}

std::string FaultBundle::variant_source(const std::set<std::string>& active) const {
    std::vector<Fault> chosen;
    for (const auto& f : faults) {
        if (active.count(f.statement)) {
            chosen.push_back(f);
        }
    }
    return minilang::format(apply_faults(minilang::parse(base_source), chosen));
}

std::string FaultBundle::combined_source() const { return variant_source(fault_statements()); }

std::map<std::string, std::string> FaultBundle::fixed_variants() const {
    std::map<std::string, std::string> out;
    const auto all = fault_statements();
    for (const auto& f : all) {
        auto rest = all;
        rest.erase(f);
        out[f] = variant_source(rest);
    }
    return out;
}

std::size_t failing_tests(const std::string& source, const std::vector<TestCase>& suite, std::size_t step_limit) {
    const Program p = minilang::parse(source);
    std::size_t failing = 0;
    for (const auto& tc : suite) {
        auto run = minilang::run_with_trace(p, tc.inputs, step_limit);
        if (run.crashed() || !tc.expected || run.outputs != *tc.expected) {
            ++failing;
        }
    }
    return failing;
}

namespace {

Op swapped(Op op) {
    switch (op) {
        case Op::Add: return Op::Sub;
        case Op::Sub: return Op::Add;
        case Op::Mul: return Op::Add;
        case Op::Div: return Op::Mul;
        case Op::Lt: return Op::Le;
        case Op::Le: return Op::Lt;
        case Op::Gt: return Op::Ge;
        case Op::Ge: return Op::Gt;
        case Op::Eq: return Op::Ne;
        case Op::Ne: return Op::Eq;
        case Op::And: return Op::Or;
        case Op::Or: return Op::And;
        default: return op;
    }
}

// Calls `visit` with a mutable reference to each node, preorder; `divisor`
// marks the right operand of a division.
void walk(Expr& e, bool divisor, const std::function<void(Expr&, bool)>& visit) {
    visit(e, divisor);
    for (std::size_t k = 0; k < e.operands.size(); ++k) {
        walk(e.operands[k], e.kind == Expr::Kind::Binary && e.op == Op::Div && k == 1, visit);
    }
}

// Applies `change` to the n-th node (preorder) of a copy of `e`.
Expr mutate_at(const Expr& e, std::size_t n, const std::function<void(Expr&)>& change) {
    Expr copy = e;
    std::size_t k = 0;
    walk(copy, false, [&](Expr& node, bool) {
        if (k++ == n) {
            change(node);
        }
    });
    return copy;
}

}  // namespace

std::vector<Fault> candidate_mutations(const Program& base) {
    std::set<std::string> loop_vars;
    for (const auto& s : base.statements) {
        if (s.kind == StmtKind::While) {
            for (const auto& v : minilang::variables_used(*s.expr)) {
                loop_vars.insert(v);
            }
        }
    }

    std::vector<Fault> out;
    std::vector<std::string> defined;
    for (const auto& s : base.statements) {
        const bool frozen = s.kind == StmtKind::While || s.kind == StmtKind::Read ||
                            (s.kind == StmtKind::Assign && loop_vars.count(s.targets.front()));
        if (!frozen && s.expr) {
            const Expr& root = *s.expr;
            const std::string original = minilang::format_expr(root);
            auto emit = [&](MutationKind kind, const Expr& m) {
                std::string text = minilang::format_expr(m);
                if (text != original) {
                    out.push_back({s.id, kind, original, std::move(text)});
                }
            };
            std::vector<std::pair<Expr*, bool>> nodes;
            Expr scratch = root;
            walk(scratch, false, [&](Expr& node, bool divisor) { nodes.emplace_back(&node, divisor); });
            for (std::size_t n = 0; n < nodes.size(); ++n) {
                const Expr& node = *nodes[n].first;
                const bool divisor = nodes[n].second;
                if (node.kind == Expr::Kind::Var) {
                    for (const auto& v : defined) {
                        if (v != node.name && !(divisor && loop_vars.count(v))) {
                            emit(MutationKind::WrongVariable, mutate_at(root, n, [&](Expr& x) { x.name = v; }));
                        }
                    }
                } else if (node.kind == Expr::Kind::Binary && swapped(node.op) != node.op) {
                    if (node.op == Op::Mul && divisor) {
                        continue;
                    }
                    emit(MutationKind::WrongOperator,
                         mutate_at(root, n, [](Expr& x) { x.op = swapped(x.op); }));
                } else if (node.kind == Expr::Kind::Int) {
                    for (Value delta : {Value{1}, Value{-1}}) {
                        if (divisor && node.value + delta == 0) {
                            continue;
                        }
                        emit(MutationKind::WrongConstant,
                             mutate_at(root, n, [delta](Expr& x) { x.value += delta; }));
                    }
                }
            }
            if (s.kind == StmtKind::If) {
                emit(MutationKind::NegatedPredicate, Expr::unary(Op::Not, root));
            }
        }
        for (const auto& t : s.targets) {
            if (std::find(defined.begin(), defined.end(), t) == defined.end()) {
                defined.push_back(t);
            }
        }
    }
    return out;
}

namespace {

class FailCache {
public:
    FailCache(const FaultBundle& bundle, std::size_t step_limit) : bundle_(bundle), limit_(step_limit) {}

    std::size_t operator()(const std::set<std::string>& active) {
        auto it = cache_.find(active);
        if (it != cache_.end()) {
            return it->second;
        }
        const std::size_t n = failing_tests(bundle_.variant_source(active), bundle_.suite, limit_);
        cache_.emplace(active, n);
        return n;
    }

private:
    const FaultBundle& bundle_;
    std::size_t limit_;
    std::map<std::set<std::string>, std::size_t> cache_;
};

bool monotone_with(FailCache& fails, const std::vector<std::string>& ids) {
    const std::size_t k = ids.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        std::set<std::string> active;
        for (std::size_t b = 0; b < k; ++b) {
            if (mask >> b & 1) {
                active.insert(ids[b]);
            }
        }
        const std::size_t here = fails(active);
        for (const auto& f : active) {
            auto fewer = active;
            fewer.erase(f);
            if (fails(fewer) >= here) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

bool is_monotone(const FaultBundle& bundle, std::size_t step_limit) {
    FailCache fails(bundle, step_limit);
    const auto ids = bundle.fault_statements();
    return monotone_with(fails, std::vector<std::string>(ids.begin(), ids.end()));
}

FaultBundle seed_faults(const std::string& name, const std::string& base_source, std::vector<TestCase> suite,
                        std::size_t num_faults, std::uint64_t seed, std::size_t attempts,
                        const std::vector<MutationKind>& kinds, double max_failing_fraction) {
    if (num_faults == 0) {
        throw InputError("seed_faults: at least one fault is required");
    }
    const Program base = minilang::parse(base_source);
    if (failing_tests(base_source, suite, kGeneratedStepLimit) != 0) {
        throw PreconditionError("seed_faults: base program of " + name + " fails its own suite");
    }
    std::vector<Fault> pool;
    for (auto& f : candidate_mutations(base)) {
        if (std::find(kinds.begin(), kinds.end(), f.kind) != kinds.end()) {
            pool.push_back(std::move(f));
        }
    }
    std::mt19937_64 engine(seed);
    for (std::size_t i = pool.size(); i > 1; --i) {
        std::swap(pool[i - 1], pool[static_cast<std::size_t>(engine() % i)]);
    }

    FaultBundle bundle;
    bundle.name = name;
    bundle.base_source = minilang::format(base);
    bundle.suite = std::move(suite);
    const std::size_t n_tests = bundle.suite.size();

    std::size_t tried = 0;
    for (const auto& cand : pool) {
        if (tried++ >= attempts) {
            break;
        }
        if (bundle.fault_statements().count(cand.statement)) {
            continue;
        }
        FaultBundle single = bundle;
        single.faults = {cand};
        const std::size_t alone = failing_tests(single.combined_source(), bundle.suite, kGeneratedStepLimit);
        if (alone == 0 || alone == n_tests ||
            static_cast<double>(alone) > max_failing_fraction * static_cast<double>(n_tests)) {
            continue;
        }
        bundle.faults.push_back(cand);
        FailCache fails(bundle, kGeneratedStepLimit);
        const auto ids = bundle.fault_statements();
        if (!monotone_with(fails, std::vector<std::string>(ids.begin(), ids.end()))) {
            bundle.faults.pop_back();
            continue;
        }
        if (bundle.faults.size() == num_faults) {
            std::sort(bundle.faults.begin(), bundle.faults.end(), [&](const Fault& a, const Fault& b) {
                return *base.index_of(a.statement) < *base.index_of(b.statement);
            });
            return bundle;
        }
    }
    throw PreconditionError("seed_faults: no viable " + std::to_string(num_faults) + "-fault bundle for " + name);
}

}  // namespace faultchain::corpus
