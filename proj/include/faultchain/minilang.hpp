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

// A tiny imperative language with a tracing interpreter. Programs are lists of
// integer-valued statements; each executed statement becomes a node of the
// run's dynamic dependence graph.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "faultchain/spectrum.hpp"

namespace faultchain::minilang {

enum class StmtKind { Read, Assign, If, While, Print, Return };

enum class Op {
    // unary
    Neg,
    Not,
    // arithmetic
    Add,
    Sub,
    Mul,
    Div,
    // comparison
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    // logical
    And,
    Or,
};

const char* op_symbol(Op op) noexcept;

struct Expr {
    enum class Kind { Int, Bool, Var, Unary, Binary };

    Kind kind = Kind::Int;
    Value value = 0;  // Int and Bool literals
    std::string name;  // Var
    Op op = Op::Add;   // Unary and Binary
    std::vector<Expr> operands;

    bool is_bool() const noexcept;

    static Expr integer(Value v);
    static Expr boolean(bool b);
    static Expr var(std::string name);
    static Expr unary(Op op, Expr operand);
    static Expr binary(Op op, Expr lhs, Expr rhs);
};

/// Variables read by an expression, in first-occurrence order.
std::vector<std::string> variables_used(const Expr& e);

struct Statement {
    std::string id;  // "S1", "S2", ... in source order
    StmtKind kind = StmtKind::Assign;
    std::vector<std::string> targets;  // Read: every variable; Assign: the lhs
    std::optional<Expr> expr;          // rhs, condition, or printed/returned value
    std::vector<std::size_t> body;       // If then-branch / While body
    std::vector<std::size_t> else_body;  // If only
    std::optional<std::size_t> parent;   // enclosing If/While
    int line = 0;
    int column = 0;

    std::vector<std::string> uses() const;
    bool is_predicate() const noexcept { return kind == StmtKind::If || kind == StmtKind::While; }
    bool is_output() const noexcept { return kind == StmtKind::Print || kind == StmtKind::Return; }
};

struct Program {
    std::vector<Statement> statements;  // source order
    std::vector<std::size_t> top_level;

    std::size_t entry() const { return top_level.front(); }
    std::vector<std::string> ids() const;
    std::optional<std::size_t> index_of(const std::string& id) const;
    bool has_output() const;
};

/// Throws InputError with line/column on syntax errors, type errors, an empty
/// program, or a variable used before any lexically earlier definition.
Program parse(const std::string& source);
/// A single expression, type-checked but not scope-checked.
Expr parse_expression(const std::string& text);

/// Canonical source text; parse(format(p)) reproduces p's structure and ids.
std::string format(const Program& program);
/// One-line rendering of a statement header (no body), e.g. "if (a > b)".
std::string format_statement(const Statement& stmt);
std::string format_expr(const Expr& e);

enum class DepType { Data, Control };
const char* to_string(DepType t) noexcept;

struct Instance {
    std::size_t statement = 0;   // index into Program::statements
    std::size_t occurrence = 0;  // 0-based count of earlier executions of that statement
};

struct Dependence {
    std::size_t target = 0;  // instance depended upon (always earlier)
    DepType type = DepType::Data;
};

/// Instance-level dependence graph of one run. Edges point from a dependent
/// instance to the instances it depends on, so node indices are a topological
/// order by construction.
class DynamicDependenceGraph {
public:
    explicit DynamicDependenceGraph(std::shared_ptr<const std::vector<std::string>> statement_ids = nullptr);

    std::size_t add_node(std::size_t statement, std::size_t occurrence);
    void add_edge(std::size_t from, std::size_t to, DepType type);

    std::size_t size() const noexcept { return nodes_.size(); }
    const Instance& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Dependence>& dependencies(std::size_t i) const { return deps_[i]; }
    const std::string& statement_id(std::size_t instance) const;

    std::optional<std::size_t> find(std::size_t statement, std::size_t occurrence) const;

private:
    std::shared_ptr<const std::vector<std::string>> ids_;
    std::vector<Instance> nodes_;
    std::vector<std::vector<Dependence>> deps_;
};

enum class CrashKind { None, DivisionByZero, StepLimit };
const char* to_string(CrashKind c) noexcept;

struct OutputEvent {
    std::size_t instance = 0;
    Value value = 0;
};

struct ExecutionResult {
    std::vector<Value> outputs;  // printed values, then the returned value
    std::vector<OutputEvent> output_events;
    CrashKind crash = CrashKind::None;
    std::optional<std::size_t> crash_instance;
    DynamicDependenceGraph ddg;
    std::vector<std::uint8_t> covered;  // per statement index

    bool crashed() const noexcept { return crash != CrashKind::None; }
    std::set<std::string> covered_ids(const Program& program) const;
};

inline constexpr std::size_t kDefaultStepLimit = 1'000'000;

/// Executes with full dependence tracing. Integer division truncates toward
/// zero; dividing by zero or exceeding `step_limit` statement instances ends
/// the run with a crash. Throws InputError if a read variable is unbound.
ExecutionResult run_with_trace(const Program& program, const Bindings& inputs,
                               std::size_t step_limit = kDefaultStepLimit);

struct BackwardDynamicSlice {
    std::size_t root = 0;
    std::vector<std::size_t> instances;  // ascending
    std::set<std::string> statements;
};

/// Everything reachable from `root` over Data and Control dependences.
/// Throws InputError if root is not a node of the graph.
BackwardDynamicSlice backward_slice(const DynamicDependenceGraph& ddg, std::size_t root);
BackwardDynamicSlice backward_slice(const DynamicDependenceGraph& ddg, std::span<const std::size_t> roots);

struct PdgEdge {
    std::string from;  // dependent statement
    std::string to;    // statement it depends on
    DepType type = DepType::Data;

    friend bool operator==(const PdgEdge&, const PdgEdge&) = default;
    friend auto operator<=>(const PdgEdge&, const PdgEdge&) = default;
};

/// Statement-level dependence graph: Data edges from reaching definitions,
/// Control edges from each body statement to its governing predicate.
class StaticPDG {
public:
    StaticPDG() = default;
    StaticPDG(std::vector<std::string> nodes, std::vector<PdgEdge> edges);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<PdgEdge>& edges() const noexcept { return edges_; }

    bool contains(const std::string& id) const;
    bool has_edge(const std::string& from, const std::string& to, std::optional<DepType> type = std::nullopt) const;
    /// Edges leaving `id`: the statements `id` depends on.
    std::vector<PdgEdge> out_edges(const std::string& id) const;
    /// Edges entering `id`: the statements depending on `id`.
    std::vector<PdgEdge> in_edges(const std::string& id) const;
    /// Edges between a and b in either direction.
    std::vector<PdgEdge> edges_between(const std::string& a, const std::string& b) const;

private:
    std::vector<std::string> nodes_;
    std::vector<PdgEdge> edges_;  // sorted, unique
};

StaticPDG static_pdg(const Program& program);

/// Result of executing a whole suite once with tracing.
struct SuiteTrace {
    std::vector<TestCase> suite;  // classified
    SliceSpectrum coverage;
    SliceSpectrum slice;
    std::vector<ExecutionResult> runs;
};

/// Runs every test, fills observed outputs/crash flags, assigns verdicts, and
/// builds both spectra. Slice rows: union of backward slices of every
/// mismatching output instance (failing tests) or of every output instance
/// (passing tests). Throws InputError if the program has no output statement.
SuiteTrace trace_suite(const Program& program, std::vector<TestCase> suite,
                       std::size_t step_limit = kDefaultStepLimit);

SliceSpectrum build_slice_spectrum(const Program& program, std::vector<TestCase>& suite, SpectrumMode mode,
                                   std::size_t step_limit = kDefaultStepLimit);

/// Output instances a failing run's slice starts from (see trace_suite).
std::vector<std::size_t> slice_roots(const ExecutionResult& run, const TestCase& tc);

/// Statements on a dependence path from an instance of any `faulty` statement
/// to a slice root, over all failing runs, together with the faulty
/// statements themselves.
std::set<std::string> infected_statements(const Program& program, const SuiteTrace& trace,
                                          const std::set<std::string>& faulty);

std::string ddg_to_json(const DynamicDependenceGraph& ddg);
std::string pdg_to_json(const StaticPDG& pdg);
StaticPDG pdg_from_json(const std::string& text);

std::vector<TestCase> suite_from_json(const std::string& text);
std::string suite_to_json(const std::vector<TestCase>& suite);

}  // namespace faultchain::minilang
