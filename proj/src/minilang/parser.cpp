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
#include <set>
#include <sstream>

#include "faultchain/error.hpp"
#include "faultchain/minilang.hpp"
#include "lexer.hpp"

namespace faultchain::minilang {

using detail::Tok;
using detail::Token;

const char* op_symbol(Op op) noexcept {
    switch (op) {
        case Op::Neg: return "-";
        case Op::Not: return "!";
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Lt: return "<";
        case Op::Le: return "<=";
        case Op::Gt: return ">";
        case Op::Ge: return ">=";
        case Op::Eq: return "==";
        case Op::Ne: return "!=";
        case Op::And: return "&&";
        case Op::Or: return "||";
    }
    return "?";
}

bool Expr::is_bool() const noexcept {
    switch (kind) {
        case Kind::Bool: return true;
        case Kind::Int:
        case Kind::Var: return false;
        case Kind::Unary: return op == Op::Not;
        case Kind::Binary: return op >= Op::Lt;
    }
    return false;
}

Expr Expr::integer(Value v) {
    Expr e;
    e.kind = Kind::Int;
    e.value = v;
    return e;
}

Expr Expr::boolean(bool b) {
    Expr e;
    e.kind = Kind::Bool;
    e.value = b ? 1 : 0;
    return e;
}

Expr Expr::var(std::string name) {
    Expr e;
    e.kind = Kind::Var;
    e.name = std::move(name);
    return e;
}

Expr Expr::unary(Op op, Expr operand) {
    Expr e;
    e.kind = Kind::Unary;
    e.op = op;
    e.operands.push_back(std::move(operand));
    return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Kind::Binary;
    e.op = op;
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    return e;
}

namespace {

void collect_vars(const Expr& e, std::vector<std::string>& out) {
    if (e.kind == Expr::Kind::Var) {
        if (std::find(out.begin(), out.end(), e.name) == out.end()) {
            out.push_back(e.name);
        }
        return;
    }
    for (const auto& o : e.operands) {
        collect_vars(o, out);
    }
}

}  // namespace

std::vector<std::string> variables_used(const Expr& e) {
    std::vector<std::string> out;
    collect_vars(e, out);
    return out;
}

std::vector<std::string> Statement::uses() const {
    if (!expr) {
        return {};
    }
    return variables_used(*expr);
}

std::vector<std::string> Program::ids() const {
    std::vector<std::string> out;
    out.reserve(statements.size());
    for (const auto& s : statements) {
        out.push_back(s.id);
    }
    return out;
}

std::optional<std::size_t> Program::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < statements.size(); ++i) {
        if (statements[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

bool Program::has_output() const {
    return std::any_of(statements.begin(), statements.end(), [](const Statement& s) { return s.is_output(); });
}

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Program run() {
        while (peek().kind != Tok::End) {
            prog_.top_level.push_back(statement(std::nullopt));
        }
        if (prog_.statements.empty()) {
            throw InputError("no statements");
        }
        check_definitions();
        return std::move(prog_);
    }

    Expr lone_expression() {
        Expr e = expression();
        expect(Tok::End);
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void error_at(const Token& t, const std::string& msg) const {
        throw InputError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": " + msg);
    }
    const Token& expect(Tok k) {
        if (peek().kind != k) {
            error_at(peek(), std::string("expected ") + detail::describe(k) + ", found " +
                                 detail::describe(peek().kind));
        }
        return take();
    }

    std::size_t new_statement(StmtKind kind, const Token& at, std::optional<std::size_t> parent) {
        Statement s;
        s.kind = kind;
        s.id = "S" + std::to_string(prog_.statements.size() + 1);
        s.parent = parent;
        s.line = at.line;
        s.column = at.column;
        prog_.statements.push_back(std::move(s));
        return prog_.statements.size() - 1;
    }

    std::vector<std::size_t> body(std::size_t owner) {
        std::vector<std::size_t> out;
        if (accept(Tok::LBrace)) {
            while (peek().kind != Tok::RBrace) {
                if (peek().kind == Tok::End) {
                    error_at(peek(), "unterminated block");
                }
                out.push_back(statement(owner));
            }
            take();
        } else {
            out.push_back(statement(owner));
        }
        return out;
    }

    Expr condition() {
        expect(Tok::LParen);
        const Token& at = peek();
        Expr e = expression();
        expect(Tok::RParen);
        if (!e.is_bool()) {
            error_at(at, "condition must be a boolean expression");
        }
        return e;
    }

    Expr int_expression() {
        const Token& at = peek();
        Expr e = expression();
        if (e.is_bool()) {
            error_at(at, "expected an integer expression");
        }
        return e;
    }

    std::size_t statement(std::optional<std::size_t> parent) {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::KwRead: {
                take();
                const std::size_t idx = new_statement(StmtKind::Read, t, parent);
                expect(Tok::LParen);
                std::vector<std::string> vars;
                do {
                    vars.push_back(expect(Tok::Ident).text);
                } while (accept(Tok::Comma));
                expect(Tok::RParen);
                accept(Tok::Semi);
                prog_.statements[idx].targets = std::move(vars);
                return idx;
            }
            case Tok::Ident: {
                take();
                const std::size_t idx = new_statement(StmtKind::Assign, t, parent);
                expect(Tok::Assign);
                Expr rhs = int_expression();
                accept(Tok::Semi);
                prog_.statements[idx].targets = {t.text};
                prog_.statements[idx].expr = std::move(rhs);
                return idx;
            }
            case Tok::KwIf: {
                take();
                const std::size_t idx = new_statement(StmtKind::If, t, parent);
                prog_.statements[idx].expr = condition();
                auto then_body = body(idx);
                prog_.statements[idx].body = std::move(then_body);
                if (accept(Tok::KwElse)) {
                    auto else_body = body(idx);
                    prog_.statements[idx].else_body = std::move(else_body);
                }
                return idx;
            }
            case Tok::KwWhile: {
                take();
                const std::size_t idx = new_statement(StmtKind::While, t, parent);
                prog_.statements[idx].expr = condition();
                auto loop_body = body(idx);
                prog_.statements[idx].body = std::move(loop_body);
                return idx;
            }
            case Tok::KwPrint: {
                take();
                const std::size_t idx = new_statement(StmtKind::Print, t, parent);
                expect(Tok::LParen);
                Expr e = int_expression();
                expect(Tok::RParen);
                accept(Tok::Semi);
                prog_.statements[idx].expr = std::move(e);
                return idx;
            }
            case Tok::KwReturn: {
                take();
                const std::size_t idx = new_statement(StmtKind::Return, t, parent);
                Expr e = int_expression();
                accept(Tok::Semi);
                prog_.statements[idx].expr = std::move(e);
                return idx;
            }
            default:
                error_at(t, std::string("expected a statement, found ") + detail::describe(t.kind));
        }
    }

    // Precedence climbing: || < && < equality < relational < additive < multiplicative < unary.
    Expr expression() { return logical_or(); }

    Expr logical_or() {
        Expr lhs = logical_and();
        while (peek().kind == Tok::OrOr) {
            const Token& at = take();
            Expr rhs = logical_and();
            lhs = logical(Op::Or, std::move(lhs), std::move(rhs), at);
        }
        return lhs;
    }

    Expr logical_and() {
        Expr lhs = equality();
        while (peek().kind == Tok::AndAnd) {
            const Token& at = take();
            Expr rhs = equality();
            lhs = logical(Op::And, std::move(lhs), std::move(rhs), at);
        }
        return lhs;
    }

    Expr logical(Op op, Expr lhs, Expr rhs, const Token& at) {
        if (!lhs.is_bool() || !rhs.is_bool()) {
            error_at(at, std::string("operands of '") + op_symbol(op) + "' must be boolean");
        }
        return Expr::binary(op, std::move(lhs), std::move(rhs));
    }

    Expr comparison(Op op, Expr lhs, Expr rhs, const Token& at) {
        if (lhs.is_bool() || rhs.is_bool()) {
            error_at(at, std::string("operands of '") + op_symbol(op) + "' must be integers");
        }
        return Expr::binary(op, std::move(lhs), std::move(rhs));
    }

    Expr equality() {
        Expr lhs = relational();
        while (peek().kind == Tok::EqEq || peek().kind == Tok::NotEq) {
            const Token& at = take();
            Expr rhs = relational();
            lhs = comparison(at.kind == Tok::EqEq ? Op::Eq : Op::Ne, std::move(lhs), std::move(rhs), at);
        }
        return lhs;
    }

    Expr relational() {
        Expr lhs = additive();
        for (;;) {
            Op op;
            switch (peek().kind) {
                case Tok::Lt: op = Op::Lt; break;
                case Tok::Le: op = Op::Le; break;
                case Tok::Gt: op = Op::Gt; break;
                case Tok::Ge: op = Op::Ge; break;
                default: return lhs;
            }
            const Token& at = take();
            Expr rhs = additive();
            lhs = comparison(op, std::move(lhs), std::move(rhs), at);
        }
    }

    Expr arithmetic(Op op, Expr lhs, Expr rhs, const Token& at) {
        if (lhs.is_bool() || rhs.is_bool()) {
            error_at(at, std::string("operands of '") + op_symbol(op) + "' must be integers");
        }
        return Expr::binary(op, std::move(lhs), std::move(rhs));
    }

    Expr additive() {
        Expr lhs = multiplicative();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const Token& at = take();
            Expr rhs = multiplicative();
            lhs = arithmetic(at.kind == Tok::Plus ? Op::Add : Op::Sub, std::move(lhs), std::move(rhs), at);
        }
        return lhs;
    }

    Expr multiplicative() {
        Expr lhs = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const Token& at = take();
            Expr rhs = unary();
            lhs = arithmetic(at.kind == Tok::Star ? Op::Mul : Op::Div, std::move(lhs), std::move(rhs), at);
        }
        return lhs;
    }

    Expr unary() {
        if (peek().kind == Tok::Minus) {
            const Token& at = take();
            Expr operand = unary();
            if (operand.is_bool()) {
                error_at(at, "operand of unary '-' must be an integer");
            }
            if (operand.kind == Expr::Kind::Int) {
                operand.value = static_cast<Value>(0ULL - static_cast<unsigned long long>(operand.value));
                return operand;
            }
            return Expr::unary(Op::Neg, std::move(operand));
        }
        if (peek().kind == Tok::Bang) {
            const Token& at = take();
            Expr operand = unary();
            if (!operand.is_bool()) {
                error_at(at, "operand of '!' must be boolean");
            }
            return Expr::unary(Op::Not, std::move(operand));
        }
        return primary();
    }

    Expr primary() {
        const Token& t = take();
        switch (t.kind) {
            case Tok::Number: return Expr::integer(std::stoll(t.text));
            case Tok::KwTrue: return Expr::boolean(true);
            case Tok::KwFalse: return Expr::boolean(false);
            case Tok::Ident: return Expr::var(t.text);
            case Tok::LParen: {
                Expr e = expression();
                expect(Tok::RParen);
                return e;
            }
            default:
                error_at(t, std::string("expected an expression, found ") + detail::describe(t.kind));
        }
    }

    // A use must follow, in source order, some read or assignment of the variable.
    void check_definitions() const {
        std::set<std::string> defined;
        for (const auto& s : prog_.statements) {
            for (const auto& v : s.uses()) {
                if (!defined.count(v)) {
                    throw InputError(std::to_string(s.line) + ":" + std::to_string(s.column) + ": variable '" + v +
                                     "' used before definition in " + s.id);
                }
            }
            for (const auto& t : s.targets) {
                defined.insert(t);
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Program prog_;
};

int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) {
        return 100;
    }
    return 0;
}

void write_expr(std::ostream& os, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Int:
            os << e.value;
            return;
        case Expr::Kind::Bool:
            os << (e.value ? "true" : "false");
            return;
        case Expr::Kind::Var:
            os << e.name;
            return;
        case Expr::Kind::Unary: {
            const Expr& o = e.operands[0];
            const bool wrap = o.kind == Expr::Kind::Binary || (o.kind == Expr::Kind::Int && o.value < 0) ||
                              o.kind == Expr::Kind::Unary;
            os << op_symbol(e.op) << (wrap ? "(" : "");
            write_expr(os, o);
            os << (wrap ? ")" : "");
            return;
        }
        case Expr::Kind::Binary: {
            for (std::size_t k = 0; k < 2; ++k) {
                const Expr& o = e.operands[k];
                const bool wrap = precedence(o) < 100;
                if (k == 1) {
                    os << ' ' << op_symbol(e.op) << ' ';
                }
                os << (wrap ? "(" : "");
                write_expr(os, o);
                os << (wrap ? ")" : "");
            }
            return;
        }
    }
}

void write_block(std::ostream& os, const Program& p, const std::vector<std::size_t>& stmts, int depth);

void write_statement(std::ostream& os, const Program& p, std::size_t idx, int depth) {
    const Statement& s = p.statements[idx];
    const std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
    os << pad << format_statement(s);
    if (!s.is_predicate()) {
        os << '\n';
        return;
    }
    os << " {\n";
    write_block(os, p, s.body, depth + 1);
    os << pad << '}';
    if (!s.else_body.empty()) {
        os << " else {\n";
        write_block(os, p, s.else_body, depth + 1);
        os << pad << '}';
    }
    os << '\n';
}

void write_block(std::ostream& os, const Program& p, const std::vector<std::size_t>& stmts, int depth) {
    for (std::size_t idx : stmts) {
        write_statement(os, p, idx, depth);
    }
}

}  // namespace

Program parse(const std::string& source) { return Parser(detail::tokenize(source)).run(); }

Expr parse_expression(const std::string& text) { return Parser(detail::tokenize(text)).lone_expression(); }

std::string format_expr(const Expr& e) {
    std::ostringstream os;
    write_expr(os, e);
    return os.str();
}

std::string format_statement(const Statement& s) {
    std::ostringstream os;
    switch (s.kind) {
        case StmtKind::Read:
            os << "read(";
            for (std::size_t i = 0; i < s.targets.size(); ++i) {
                os << (i ? ", " : "") << s.targets[i];
            }
            os << ");";
            break;
        case StmtKind::Assign:
            os << s.targets.front() << " = " << format_expr(*s.expr) << ';';
            break;
        case StmtKind::If:
            os << "if (" << format_expr(*s.expr) << ')';
            break;
        case StmtKind::While:
            os << "while (" << format_expr(*s.expr) << ')';
            break;
        case StmtKind::Print:
            os << "print(" << format_expr(*s.expr) << ");";
            break;
        case StmtKind::Return:
            os << "return " << format_expr(*s.expr) << ';';
            break;
    }
    return os.str();
}

std::string format(const Program& program) {
    std::ostringstream os;
    write_block(os, program, program.top_level, 0);
    return os.str();
}

}  // namespace faultchain::minilang
