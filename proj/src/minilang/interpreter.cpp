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

#include <limits>
#include <map>

#include "faultchain/error.hpp"
#include "faultchain/minilang.hpp"

namespace faultchain::minilang {

const char* to_string(DepType t) noexcept { return t == DepType::Data ? "data" : "control"; }

const char* to_string(CrashKind c) noexcept {
    switch (c) {
        case CrashKind::None: return "none";
        case CrashKind::DivisionByZero: return "division-by-zero";
        case CrashKind::StepLimit: return "step-limit";
    }
    return "unknown";
}

DynamicDependenceGraph::DynamicDependenceGraph(std::shared_ptr<const std::vector<std::string>> statement_ids)
    : ids_(std::move(statement_ids)) {}

std::size_t DynamicDependenceGraph::add_node(std::size_t statement, std::size_t occurrence) {
    nodes_.push_back({statement, occurrence});
    deps_.emplace_back();
    return nodes_.size() - 1;
}

void DynamicDependenceGraph::add_edge(std::size_t from, std::size_t to, DepType type) {
    for (const auto& d : deps_[from]) {
        if (d.target == to && d.type == type) {
            return;
        }
    }
    deps_[from].push_back({to, type});
}

const std::string& DynamicDependenceGraph::statement_id(std::size_t instance) const {
    static const std::string unknown = "?";
    if (!ids_) {
        return unknown;
    }
    return (*ids_)[nodes_[instance].statement];
}

std::optional<std::size_t> DynamicDependenceGraph::find(std::size_t statement, std::size_t occurrence) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].statement == statement && nodes_[i].occurrence == occurrence) {
            return i;
        }
    }
    return std::nullopt;
}

std::set<std::string> ExecutionResult::covered_ids(const Program& program) const {
    std::set<std::string> out;
    for (std::size_t i = 0; i < covered.size(); ++i) {
        if (covered[i]) {
            out.insert(program.statements[i].id);
        }
    }
    return out;
}

namespace {

struct Crash {
    CrashKind kind;
};

struct ReturnSignal {};

// Two's-complement wrapping arithmetic keeps every run well defined.
Value wrap_add(Value a, Value b) {
    return static_cast<Value>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
Value wrap_sub(Value a, Value b) {
    return static_cast<Value>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
Value wrap_mul(Value a, Value b) {
    return static_cast<Value>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

class Tracer {
public:
    Tracer(const Program& program, const Bindings& inputs, std::size_t step_limit)
        : prog_(program), inputs_(inputs), limit_(step_limit) {
        auto ids = std::make_shared<std::vector<std::string>>(program.ids());
        result_.ddg = DynamicDependenceGraph(std::move(ids));
        result_.covered.assign(program.statements.size(), 0);
        occurrences_.assign(program.statements.size(), 0);
    }

    ExecutionResult run() {
        try {
            block(prog_.top_level, std::nullopt);
        } catch (const ReturnSignal&) {
        } catch (const Crash& c) {
            result_.crash = c.kind;
        }
        return std::move(result_);
    }

private:
    std::size_t enter(std::size_t stmt, std::optional<std::size_t> control) {
        if (result_.ddg.size() >= limit_) {
            throw Crash{CrashKind::StepLimit};
        }
        const std::size_t inst = result_.ddg.add_node(stmt, occurrences_[stmt]++);
        result_.covered[stmt] = 1;
        if (control) {
            result_.ddg.add_edge(inst, *control, DepType::Control);
        }
        return inst;
    }

    void define(const std::string& var, Value v, std::size_t inst) {
        env_[var] = v;
        last_def_[var] = inst;
    }

    Value eval(const Expr& e, std::size_t inst) {
        switch (e.kind) {
            case Expr::Kind::Int:
            case Expr::Kind::Bool:
                return e.value;
            case Expr::Kind::Var: {
                auto def = last_def_.find(e.name);
                if (def == last_def_.end()) {
                    return 0;  // defined lexically earlier, but not on this path
                }
                result_.ddg.add_edge(inst, def->second, DepType::Data);
                return env_[e.name];
            }
            case Expr::Kind::Unary: {
                const Value v = eval(e.operands[0], inst);
                return e.op == Op::Not ? Value{!v} : wrap_sub(0, v);
            }
            case Expr::Kind::Binary:
                break;
        }
        if (e.op == Op::And) {
            return eval(e.operands[0], inst) ? Value{eval(e.operands[1], inst) != 0} : 0;
        }
        if (e.op == Op::Or) {
            return eval(e.operands[0], inst) ? 1 : Value{eval(e.operands[1], inst) != 0};
        }
        const Value a = eval(e.operands[0], inst);
        const Value b = eval(e.operands[1], inst);
        switch (e.op) {
            case Op::Add: return wrap_add(a, b);
            case Op::Sub: return wrap_sub(a, b);
            case Op::Mul: return wrap_mul(a, b);
            case Op::Div:
                if (b == 0) {
                    result_.crash_instance = inst;
                    throw Crash{CrashKind::DivisionByZero};
                }
                if (a == std::numeric_limits<Value>::min() && b == -1) {
                    return a;
                }
                return a / b;  // truncates toward zero
            case Op::Lt: return a < b;
            case Op::Le: return a <= b;
            case Op::Gt: return a > b;
            case Op::Ge: return a >= b;
            case Op::Eq: return a == b;
            case Op::Ne: return a != b;
            default: return 0;
        }
    }

    void block(const std::vector<std::size_t>& stmts, std::optional<std::size_t> control) {
        for (std::size_t idx : stmts) {
            statement(idx, control);
        }
    }

    void statement(std::size_t idx, std::optional<std::size_t> control) {
        const Statement& s = prog_.statements[idx];
        switch (s.kind) {
            case StmtKind::Read: {
                const std::size_t inst = enter(idx, control);
                for (const auto& v : s.targets) {
                    auto it = inputs_.find(v);
                    if (it == inputs_.end()) {
                        throw InputError("input variable '" + v + "' read by " + s.id + " is unbound");
                    }
                    define(v, it->second, inst);
                }
                return;
            }
            case StmtKind::Assign: {
                const std::size_t inst = enter(idx, control);
                define(s.targets.front(), eval(*s.expr, inst), inst);
                return;
            }
            case StmtKind::If: {
                const std::size_t inst = enter(idx, control);
                if (eval(*s.expr, inst)) {
                    block(s.body, inst);
                } else {
                    block(s.else_body, inst);
                }
                return;
            }
            case StmtKind::While: {
                // Each re-evaluation of the predicate depends on the previous one.
                std::optional<std::size_t> governing = control;
                for (;;) {
                    const std::size_t inst = enter(idx, governing);
                    if (!eval(*s.expr, inst)) {
                        return;
                    }
                    block(s.body, inst);
                    governing = inst;
                }
            }
            case StmtKind::Print: {
                const std::size_t inst = enter(idx, control);
                emit(inst, eval(*s.expr, inst));
                return;
            }
            case StmtKind::Return: {
                const std::size_t inst = enter(idx, control);
                emit(inst, eval(*s.expr, inst));
                throw ReturnSignal{};
            }
        }
    }

    void emit(std::size_t inst, Value v) {
        result_.outputs.push_back(v);
        result_.output_events.push_back({inst, v});
    }

    const Program& prog_;
    const Bindings& inputs_;
    std::size_t limit_;
    ExecutionResult result_;
    std::vector<std::size_t> occurrences_;
    std::map<std::string, Value> env_;
    std::map<std::string, std::size_t> last_def_;
};

}  // namespace

ExecutionResult run_with_trace(const Program& program, const Bindings& inputs, std::size_t step_limit) {
    return Tracer(program, inputs, step_limit).run();
}

}  // namespace faultchain::minilang
