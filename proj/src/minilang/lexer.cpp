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

#include "lexer.hpp"

#include <cctype>
#include <charconv>
#include <map>

#include "faultchain/error.hpp"

namespace faultchain::minilang::detail {

namespace {

const std::map<std::string, Tok>& keywords() {
    static const std::map<std::string, Tok> kw{
        {"read", Tok::KwRead},   {"if", Tok::KwIf},         {"else", Tok::KwElse},
        {"while", Tok::KwWhile}, {"print", Tok::KwPrint},   {"return", Tok::KwReturn},
        {"true", Tok::KwTrue},   {"false", Tok::KwFalse},
    };
    return kw;
}

[[noreturn]] void fail(int line, int column, const std::string& msg) {
    throw InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
}

}  // namespace

std::vector<Token> tokenize(const std::string& source) {
    std::vector<Token> out;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (source[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
        }
    };
    while (i < source.size()) {
        const char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
            while (i < source.size() && source[i] != '\n') {
                advance(1);
            }
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < source.size() && (std::isalnum(static_cast<unsigned char>(source[j])) || source[j] == '_')) {
                ++j;
            }
            tok.text = source.substr(i, j - i);
            auto kw = keywords().find(tok.text);
            tok.kind = kw == keywords().end() ? Tok::Ident : kw->second;
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j]))) {
                ++j;
            }
            tok.kind = Tok::Number;
            tok.text = source.substr(i, j - i);
            long long v = 0;
            auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
            if (ec != std::errc{}) {
                fail(line, column, "integer literal '" + tok.text + "' out of range");
            }
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        auto two = [&](char a, char b) { return c == a && i + 1 < source.size() && source[i + 1] == b; };
        std::size_t len = 2;
        if (two('<', '=')) {
            tok.kind = Tok::Le;
        } else if (two('>', '=')) {
            tok.kind = Tok::Ge;
        } else if (two('=', '=')) {
            tok.kind = Tok::EqEq;
        } else if (two('!', '=')) {
            tok.kind = Tok::NotEq;
        } else if (two('&', '&')) {
            tok.kind = Tok::AndAnd;
        } else if (two('|', '|')) {
            tok.kind = Tok::OrOr;
        } else {
            len = 1;
            switch (c) {
                case '(': tok.kind = Tok::LParen; break;
                case ')': tok.kind = Tok::RParen; break;
                case '{': tok.kind = Tok::LBrace; break;
                case '}': tok.kind = Tok::RBrace; break;
                case ',': tok.kind = Tok::Comma; break;
                case ';': tok.kind = Tok::Semi; break;
                case '=': tok.kind = Tok::Assign; break;
                case '+': tok.kind = Tok::Plus; break;
                case '-': tok.kind = Tok::Minus; break;
                case '*': tok.kind = Tok::Star; break;
                case '/': tok.kind = Tok::Slash; break;
                case '<': tok.kind = Tok::Lt; break;
                case '>': tok.kind = Tok::Gt; break;
                case '!': tok.kind = Tok::Bang; break;
                default:
                    fail(line, column, std::string("unexpected character '") + c + "'");
            }
        }
        tok.text = source.substr(i, len);
        advance(len);
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

const char* describe(Tok kind) noexcept {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::KwRead: return "'read'";
        case Tok::KwIf: return "'if'";
        case Tok::KwElse: return "'else'";
        case Tok::KwWhile: return "'while'";
        case Tok::KwPrint: return "'print'";
        case Tok::KwReturn: return "'return'";
        case Tok::KwTrue: return "'true'";
        case Tok::KwFalse: return "'false'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Assign: return "'='";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::EqEq: return "'=='";
        case Tok::NotEq: return "'!='";
        case Tok::AndAnd: return "'&&'";
        case Tok::OrOr: return "'||'";
        case Tok::Bang: return "'!'";
        case Tok::End: return "end of input";
    }
    return "token";
}

}  // namespace faultchain::minilang::detail
