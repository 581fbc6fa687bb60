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
#include <map>

#include "faultchain/minilang.hpp"

namespace faultchain::minilang {

StaticPDG::StaticPDG(std::vector<std::string> nodes, std::vector<PdgEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool StaticPDG::contains(const std::string& id) const {
    return std::find(nodes_.begin(), nodes_.end(), id) != nodes_.end();
}

bool StaticPDG::has_edge(const std::string& from, const std::string& to, std::optional<DepType> type) const {
    return std::any_of(edges_.begin(), edges_.end(), [&](const PdgEdge& e) {
        return e.from == from && e.to == to && (!type || e.type == *type);
    });
}

std::vector<PdgEdge> StaticPDG::out_edges(const std::string& id) const {
    std::vector<PdgEdge> out;
    std::copy_if(edges_.begin(), edges_.end(), std::back_inserter(out), [&](const PdgEdge& e) { return e.from == id; });
    return out;
}

std::vector<PdgEdge> StaticPDG::in_edges(const std::string& id) const {
    std::vector<PdgEdge> out;
    std::copy_if(edges_.begin(), edges_.end(), std::back_inserter(out), [&](const PdgEdge& e) { return e.to == id; });
    return out;
}

std::vector<PdgEdge> StaticPDG::edges_between(const std::string& a, const std::string& b) const {
    std::vector<PdgEdge> out;
    std::copy_if(edges_.begin(), edges_.end(), std::back_inserter(out), [&](const PdgEdge& e) {
        return (e.from == a && e.to == b) || (e.from == b && e.to == a);
    });
    return out;
}

namespace {

constexpr std::size_t kExit = static_cast<std::size_t>(-1);

// Statement-level control-flow graph; predicates have two successors.
class FlowGraph {
public:
    explicit FlowGraph(const Program& p) : prog_(p), succ_(p.statements.size()) {
        link(p.top_level, kExit);
    }

    const std::vector<std::size_t>& successors(std::size_t s) const { return succ_[s]; }

private:
    void add(std::size_t from, std::size_t to) {
        if (to != kExit) {
            succ_[from].push_back(to);
        }
    }

    void link(const std::vector<std::size_t>& stmts, std::size_t cont) {
        for (std::size_t k = 0; k < stmts.size(); ++k) {
            const std::size_t s = stmts[k];
            const std::size_t next = k + 1 < stmts.size() ? stmts[k + 1] : cont;
            const Statement& st = prog_.statements[s];
            switch (st.kind) {
                case StmtKind::Return:
                    break;
                case StmtKind::If:
                    add(s, st.body.empty() ? next : st.body.front());
                    add(s, st.else_body.empty() ? next : st.else_body.front());
                    link(st.body, next);
                    link(st.else_body, next);
                    break;
                case StmtKind::While:
                    add(s, st.body.empty() ? s : st.body.front());
                    add(s, next);
                    link(st.body, s);
                    break;
                default:
                    add(s, next);
                    break;
            }
        }
    }

    const Program& prog_;
    std::vector<std::vector<std::size_t>> succ_;
};

struct Definition {
    std::size_t statement;
    std::string var;
};

}  // namespace

StaticPDG static_pdg(const Program& program) {
    const std::size_t n = program.statements.size();
    const FlowGraph cfg(program);

    std::vector<Definition> defs;
    std::map<std::string, std::vector<std::size_t>> defs_of_var;
    std::vector<std::vector<std::size_t>> gen(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& v : program.statements[s].targets) {
            defs_of_var[v].push_back(defs.size());
            gen[s].push_back(defs.size());
            defs.push_back({s, v});
        }
    }

    // Iterative reaching definitions: in[s] = union of out[p] over predecessors.
    const std::size_t m = defs.size();
    std::vector<std::vector<std::uint8_t>> in(n, std::vector<std::uint8_t>(m, 0));
    std::vector<std::vector<std::uint8_t>> out(n, std::vector<std::uint8_t>(m, 0));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<std::uint8_t> next = in[s];
            for (const auto& v : program.statements[s].targets) {
                for (std::size_t d : defs_of_var[v]) {
                    next[d] = 0;
                }
            }
            for (std::size_t d : gen[s]) {
                next[d] = 1;
            }
            if (next != out[s]) {
                out[s] = std::move(next);
                changed = true;
            }
            for (std::size_t succ : cfg.successors(s)) {
                for (std::size_t d = 0; d < m; ++d) {
                    if (out[s][d] && !in[succ][d]) {
                        in[succ][d] = 1;
                        changed = true;
                    }
                }
            }
        }
    }

    std::vector<PdgEdge> edges;
    for (std::size_t s = 0; s < n; ++s) {
        const Statement& st = program.statements[s];
        for (const auto& v : st.uses()) {
            for (std::size_t d : defs_of_var[v]) {
                if (in[s][d]) {
                    edges.push_back({st.id, program.statements[defs[d].statement].id, DepType::Data});
                }
            }
        }
        if (st.parent) {
            edges.push_back({st.id, program.statements[*st.parent].id, DepType::Control});
        }
    }
    return StaticPDG(program.ids(), std::move(edges));
}

}  // namespace faultchain::minilang
