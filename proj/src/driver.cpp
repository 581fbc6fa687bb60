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

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "faultchain/corpus.hpp"
#include "faultchain/driver.hpp"
#include "faultchain/error.hpp"
#include "faultchain/infotheory.hpp"

namespace faultchain::driver {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << text;
}

ordered_json score_value(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

std::string fixed(double v, int digits = 4) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string rpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

ordered_json chains_json(const std::vector<selection::CauseEffectChain>& chains) {
    ordered_json out = ordered_json::array();
    for (const auto& c : chains) {
        ordered_json links = ordered_json::array();
        for (const auto& l : c.links) {
            links.push_back({{"from", l.from}, {"to", l.to}, {"type", minilang::to_string(l.type)}});
        }
        out.push_back({{"members", c.members}, {"links", links}, {"aggregate_effect", c.aggregate_effect}});
    }
    return out;
}

template <typename F>
int guarded(std::ostream& err, const std::string& context, F&& body) {
    try {
        return body();
    } catch (const InputError& e) {
        err << "error: " << context << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << context << e.what() << '\n';
        return 3;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << context << "malformed JSON: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace

// ---- configuration ------------------------------------------------------

void PipelineConfig::validate() const {
    if (!(delta_fraction > 0 && delta_fraction <= 1)) {
        throw InputError("--delta-fraction must lie in (0, 1]");
    }
    if (chain_cap == 0) {
        throw InputError("--chain-cap must be at least 1");
    }
    if (!(ridge > 0)) {
        throw InputError("--ridge must be positive");
    }
    if (!(caliper > 0)) {
        throw InputError("--caliper must be positive");
    }
    if (techniques.empty()) {
        throw InputError("at least one technique is required");
    }
    if (step_limit == 0) {
        throw InputError("step limit must be positive");
    }
    (void)info::EntropyConfig::by_name(phi);
}

selection::SelectionConfig PipelineConfig::selection_config() const {
    selection::SelectionConfig s;
    s.delta_fraction = delta_fraction;
    s.chain_cap = chain_cap;
    s.entropy = info::EntropyConfig::by_name(phi);
    return s;
}

causal::CausalConfig PipelineConfig::causal_config() const {
    return {matching, ridge, caliper};
}

namespace {

ordered_json config_json(const PipelineConfig& cfg) {
    std::vector<std::string> techniques;
    for (auto t : cfg.techniques) {
        techniques.emplace_back(eval::to_string(t));
    }
    return {{"selection_spectrum", to_string(cfg.selection_mode)},
            {"causal_spectrum", to_string(cfg.causal_mode)},
            {"phi", cfg.phi},
            {"delta_fraction", cfg.delta_fraction},
            {"chain_cap", cfg.chain_cap},
            {"matching", causal::to_string(cfg.matching)},
            {"ridge", cfg.ridge},
            {"caliper", cfg.caliper},
            {"techniques", techniques},
            {"seed", cfg.seed},
            {"prior_file", cfg.prior_file ? ordered_json(*cfg.prior_file) : ordered_json(nullptr)},
            {"step_limit", cfg.step_limit}};
}

}  // namespace

std::string PipelineConfig::to_json() const { return config_json(*this).dump(2); }

std::map<std::string, double> load_priors(const fs::path& path) {
    const auto doc = nlohmann::json::parse(read_file(path));
    if (!doc.is_object()) {
        throw InputError(path.string() + ": priors must be a JSON object of statement -> weight");
    }
    std::map<std::string, double> out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!it.value().is_number()) {
            throw InputError(path.string() + ": prior for " + it.key() + " is not a number");
        }
        out[it.key()] = it.value().get<double>();
    }
    return out;
}

// ---- pipeline -----------------------------------------------------------

Localization localize_inference(const SliceSpectrum& selection_spectrum, const SliceSpectrum& causal_spectrum,
                                const minilang::StaticPDG& pdg, const PipelineConfig& cfg,
                                const std::map<std::string, double>& priors) {
    if (selection_spectrum.statements() != causal_spectrum.statements() ||
        selection_spectrum.tests() != causal_spectrum.tests()) {
        throw InputError("selection and causal spectra disagree on statements or tests");
    }
    require_failing_tests(selection_spectrum);
    Localization loc;
    loc.statements = selection_spectrum.statements();
    loc.selection = selection::run_selection(selection_spectrum, pdg, cfg.selection_config(), priors);
    loc.effects = causal::estimate_effects(loc.selection.selected, pdg, causal_spectrum, cfg.causal_config());
    loc.report = eval::assemble_report(loc.selection, loc.effects, selection_spectrum);
    return loc;
}

eval::RankedReport localize_trace(eval::Technique technique, const minilang::SuiteTrace& trace,
                                  const minilang::StaticPDG& pdg, const PipelineConfig& cfg,
                                  const std::map<std::string, double>& priors) {
    if (technique == eval::Technique::Inference) {
        const auto& sel = cfg.selection_mode == SpectrumMode::Coverage ? trace.coverage : trace.slice;
        const auto& cau = cfg.causal_mode == SpectrumMode::Coverage ? trace.coverage : trace.slice;
        return localize_inference(sel, cau, pdg, cfg, priors).report;
    }
    return eval::baseline_report(technique, build_stats(trace.coverage));
}

std::string report_json(const eval::RankedReport& report, const PipelineConfig& cfg, const Localization* details) {
    ordered_json entries = ordered_json::array();
    for (std::size_t k = 0; k < report.entries.size(); ++k) {
        const auto& e = report.entries[k];
        entries.push_back({{"rank", k + 1},
                           {"statement", e.statement},
                           {"score", score_value(e.score)},
                           {"tier", e.tier},
                           {"tie_group", e.tie_group + 1}});
    }
    ordered_json doc{{"technique", report.technique},
                     {"config", config_json(cfg)},
                     {"entries", entries},
                     {"tie_groups", report.tie_groups()},
                     {"chains", chains_json(report.chains)}};
    if (details) {
        const auto& sel = details->selection;
        const auto& ids = details->statements;
        ordered_json iterations = ordered_json::array();
        for (const auto& it : sel.trace) {
            ordered_json scores = ordered_json::object();
            for (const auto& [i, j] : it.scores) {
                scores[ids[i]] = j;
            }
            ordered_json corr = ordered_json::object();
            for (const auto& [i, c] : it.correlation) {
                corr[ids[i]] = c;
            }
            static const char* outcomes[] = {"joined", "merged", "created", "discarded"};
            iterations.push_back({{"chosen", ids[it.chosen]},
                                  {"scores", scores},
                                  {"correlation", corr},
                                  {"chain", outcomes[static_cast<int>(it.outcome)]}});
        }
        ordered_json effects = ordered_json::object();
        for (const auto& id : sel.selected) {
            const auto& eff = details->effects.at(id);
            effects[id] = {{"tau_hat", eff.tau_hat},
                           {"retained", eff.retained},
                           {"confounders", eff.confounders},
                           {"degenerate", eff.degenerate},
                           {"reason", eff.reason}};
        }
        doc["selection"] = {{"order", sel.selected},
                            {"discarded", sel.discarded},
                            {"delta", sel.state.delta},
                            {"iterations", iterations}};
        doc["effects"] = effects;
    }
    return doc.dump(2) + "\n";
}

std::string report_text(const eval::RankedReport& report, const Localization* details) {
    std::ostringstream os;
    os << "technique: " << report.technique << '\n';
    os << pad("rank", 6) << pad("statement", 11) << rpad("score", 12) << rpad("tier", 6) << rpad("tie", 6) << '\n';
    for (std::size_t k = 0; k < report.entries.size(); ++k) {
        const auto& e = report.entries[k];
        os << pad(std::to_string(k + 1), 6) << pad(e.statement, 11) << rpad(fixed(e.score), 12)
           << rpad(std::to_string(e.tier), 6) << rpad(std::to_string(e.tie_group + 1), 6) << '\n';
    }
    if (!report.chains.empty()) {
        os << "chains:\n";
        for (std::size_t c = 0; c < report.chains.size(); ++c) {
            const auto& chain = report.chains[c];
            os << "  " << c + 1 << ". ";
            for (std::size_t m = 0; m < chain.members.size(); ++m) {
                os << (m ? " -> " : "") << chain.members[m];
            }
            os << "  (effect " << fixed(chain.aggregate_effect) << ")\n";
        }
    }
    if (details) {
        os << "selection order:";
        for (const auto& s : details->selection.selected) {
            os << ' ' << s;
        }
        os << '\n';
    }
    return os.str();
}

// ---- commands -----------------------------------------------------------

int cmd_trace(const fs::path& program_path, const fs::path& tests_path, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
    return guarded(err, "", [&] {
        if (!fs::exists(program_path)) {
            throw InputError("program file not found: " + program_path.string());
        }
        if (!fs::exists(tests_path)) {
            throw InputError("tests file not found: " + tests_path.string());
        }
        minilang::Program program;
        try {
            program = minilang::parse(read_file(program_path));
        } catch (const InputError& e) {
            throw InputError(program_path.string() + ":" + e.what());
        }
        auto suite = minilang::suite_from_json(read_file(tests_path));
        const auto trace = minilang::trace_suite(program, std::move(suite));
        const auto pdg = minilang::static_pdg(program);

        fs::create_directories(out_dir / "ddg");
        save_spectrum(trace.coverage, out_dir / "spectrum.coverage.json");
        save_spectrum(trace.slice, out_dir / "spectrum.slice.json");
        write_file(out_dir / "pdg.json", minilang::pdg_to_json(pdg));
        ordered_json verdicts = ordered_json::array();
        for (std::size_t t = 0; t < trace.suite.size(); ++t) {
            const auto& tc = trace.suite[t];
            verdicts.push_back({{"id", tc.id},
                                {"verdict", to_string(tc.verdict)},
                                {"crashed", tc.crashed},
                                {"crash", minilang::to_string(trace.runs[t].crash)},
                                {"observed", tc.observed ? ordered_json(*tc.observed) : ordered_json(nullptr)},
                                {"expected", tc.expected ? ordered_json(*tc.expected) : ordered_json(nullptr)}});
            write_file(out_dir / "ddg" / (tc.id + ".json"), minilang::ddg_to_json(trace.runs[t].ddg));
        }
        write_file(out_dir / "verdicts.json", verdicts.dump(2) + "\n");
        out << "statements: " << program.statements.size() << "\ntests: " << trace.suite.size()
            << " (failing " << trace.coverage.num_failing() << ", passing "
            << trace.suite.size() - trace.coverage.num_failing() << ")\nwritten to " << out_dir.string() << '\n';
        return 0;
    });
}

int cmd_localize(const LocalizeOptions& opts, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, "", [&] {
        cfg.validate();
        const SliceSpectrum spectrum = load_spectrum(opts.spectrum);
        const minilang::StaticPDG pdg = minilang::pdg_from_json(read_file(opts.pdg));
        for (const auto& s : spectrum.statements()) {
            if (!pdg.contains(s)) {
                throw InputError("PDG " + opts.pdg.string() + " lacks spectrum statement " + s);
            }
        }
        std::map<std::string, double> priors;
        if (cfg.prior_file) {
            priors = load_priors(*cfg.prior_file);
        }
        std::string json;
        std::string text;
        if (opts.technique == eval::Technique::Inference) {
            const SliceSpectrum causal_spectrum =
                opts.causal_spectrum ? load_spectrum(*opts.causal_spectrum) : spectrum;
            const Localization loc = localize_inference(spectrum, causal_spectrum, pdg, cfg, priors);
            json = report_json(loc.report, cfg, &loc);
            text = report_text(loc.report, &loc);
        } else {
            const auto report = eval::baseline_report(opts.technique, build_stats(spectrum));
            json = report_json(report, cfg);
            text = report_text(report);
        }
        if (opts.out) {
            write_file(*opts.out, json);
        } else {
            out << json;
        }
        if (opts.text_out) {
            write_file(*opts.text_out, text);
        } else if (opts.out) {
            out << text;
        }
        return 0;
    });
}

namespace {

struct TechniqueOutcome {
    std::vector<eval::ExpenseIteration> iterations;
    std::string error;
    double mean_examined_best = 0;
    double mean_examined_worst = 0;
    double mean_exam_best = 0;
    double mean_exam_worst = 0;
};

struct Expectations {
    std::size_t checked = 0;
    std::size_t matched = 0;
    std::vector<std::string> mismatches;
};

struct CaseOutcome {
    std::string name;
    std::size_t statements = 0;
    std::size_t tests = 0;
    std::size_t failing = 0;
    std::vector<std::string> faults;
    std::map<eval::Technique, TechniqueOutcome> techniques;
    std::optional<eval::PrecisionRecall> chains;
    std::vector<std::vector<std::string>> chain_members;
    std::size_t truth_size = 0;
    Expectations expectations;
};

PipelineConfig case_config(const PipelineConfig& base, const nlohmann::json& expected) {
    PipelineConfig cfg = base;
    if (expected.contains("pipeline")) {
        const auto& p = expected.at("pipeline");
        if (p.contains("selection_spectrum")) {
            cfg.selection_mode = parse_mode(p.at("selection_spectrum").get<std::string>());
        }
        if (p.contains("causal_spectrum")) {
            cfg.causal_mode = parse_mode(p.at("causal_spectrum").get<std::string>());
        }
    }
    return cfg;
}

// Recomputes a keyed quantity ("ochiai/S6", "cr/S9|S6", ...) for comparison
// with the case's embedded expectations; nullopt for unknown keys.
std::optional<double> observe(const std::string& key, const minilang::SuiteTrace& trace, const Localization& loc,
                              const SliceSpectrum& sel_spectrum, const eval::RankedReport& inference,
                              const std::set<std::string>& faulty) {
    const auto slash = key.find('/');
    if (key == "failing_tests") {
        return static_cast<double>(trace.coverage.num_failing());
    }
    if (slash == std::string::npos) {
        return std::nullopt;
    }
    const std::string kind = key.substr(0, slash);
    std::string arg = key.substr(slash + 1);
    std::string cond;
    if (auto bar = arg.find('|'); bar != std::string::npos) {
        cond = arg.substr(bar + 1);
        arg = arg.substr(0, bar);
    }
    const auto stats = build_stats(trace.coverage);
    for (auto t : {eval::Technique::Ochiai, eval::Technique::O, eval::Technique::GP19, eval::Technique::DStar}) {
        if (kind == eval::to_string(t)) {
            auto idx = trace.coverage.index_of(arg);
            if (!idx) {
                return std::nullopt;
            }
            return eval::baseline_score(t, stats, *idx);
        }
    }
    if (kind == "exam_best" && arg == "inference") {
        return eval::exam_score(inference, faulty, eval::ExamMode::Best);
    }
    auto idx = sel_spectrum.index_of(arg);
    if (!idx) {
        return std::nullopt;
    }
    const auto& state = loc.selection.state;
    const auto& tr = loc.selection.trace;
    const auto entropy = info::EntropyConfig::shannon();
    if (kind == "relevance") {
        return state.relevance[*idx];
    }
    if (kind == "rc") {
        return state.relevance_class[*idx];
    }
    if (kind == "entropy") {
        return info::entropy(sel_spectrum.column(*idx), entropy);
    }
    if (kind == "mi") {
        return info::mutual_information(sel_spectrum.column(*idx), sel_spectrum.failures(), entropy);
    }
    if (kind == "cmi" || kind == "cr") {
        auto c = sel_spectrum.index_of(cond);
        if (!c) {
            return std::nullopt;
        }
        if (kind == "cmi") {
            return info::conditional_mutual_information(sel_spectrum.column(*idx), sel_spectrum.failures(),
                                                        sel_spectrum.column(*c), entropy);
        }
        for (const auto& it : tr) {
            if (it.chosen == *c) {
                auto f = it.correlation.find(*idx);
                if (f != it.correlation.end()) {
                    return f->second;
                }
            }
        }
        return std::nullopt;
    }
    if ((kind == "j1" || kind == "j2" || kind == "j3" || kind == "w2" || kind == "w3")) {
        const std::size_t k = static_cast<std::size_t>(kind[1] - '1');
        if (k >= tr.size()) {
            return std::nullopt;
        }
        if (kind[0] == 'w') {
            return tr[k].weights_before[*idx];
        }
        auto f = tr[k].scores.find(*idx);
        return f == tr[k].scores.end() ? std::nullopt : std::optional<double>(f->second);
    }
    return std::nullopt;
}

Expectations check_expectations(const nlohmann::json& expected, const minilang::SuiteTrace& trace,
                                const Localization& loc, const SliceSpectrum& sel_spectrum,
                                const std::set<std::string>& faulty) {
    Expectations ex;
    auto mismatch = [&](const std::string& key, const std::string& want, const std::string& got) {
        ex.mismatches.push_back(key + ": expected " + want + ", observed " + got);
    };
    for (const auto& v : expected.value("values", nlohmann::json::array())) {
        const std::string key = v.at("key").get<std::string>();
        const double want = v.at("value").get<double>();
        const double tol = v.value("tolerance", 0.0);
        ++ex.checked;
        auto got = observe(key, trace, loc, sel_spectrum, loc.report, faulty);
        if (!got) {
            mismatch(key, fixed(want), "nothing");
        } else if (std::abs(*got - want) <= tol + 1e-12) {
            ++ex.matched;
        } else {
            mismatch(key, fixed(want), fixed(*got));
        }
    }
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) {
            s += (s.empty() ? "" : ",") + x;
        }
        return "[" + s + "]";
    };
    if (expected.contains("orderings")) {
        const auto& o = expected.at("orderings");
        if (o.contains("selection")) {
            ++ex.checked;
            auto want = o.at("selection").at("value").get<std::vector<std::string>>();
            if (want == loc.selection.selected) {
                ++ex.matched;
            } else {
                mismatch("selection", join(want), join(loc.selection.selected));
            }
        }
        if (o.contains("inference_top")) {
            ++ex.checked;
            auto want = o.at("inference_top").at("value").get<std::vector<std::string>>();
            std::vector<std::string> got;
            for (std::size_t k = 0; k < want.size() && k < loc.report.entries.size(); ++k) {
                got.push_back(loc.report.entries[k].statement);
            }
            if (want == got) {
                ++ex.matched;
            } else {
                mismatch("inference_top", join(want), join(got));
            }
        }
        if (o.contains("chains")) {
            ++ex.checked;
            auto want = o.at("chains").at("value").get<std::vector<std::vector<std::string>>>();
            std::vector<std::vector<std::string>> got;
            for (const auto& c : loc.report.chains) {
                got.push_back(c.members);
            }
            if (want == got) {
                ++ex.matched;
            } else {
                std::string g;
                for (const auto& c : got) {
                    g += join(c);
                }
                mismatch("chains", "(see expected.json)", g);
            }
        }
    }
    return ex;
}

CaseOutcome evaluate_case(const corpus::CorpusCase& c, const PipelineConfig& base_cfg) {
    const auto expected = nlohmann::json::parse(c.expected_json);
    const PipelineConfig cfg = case_config(base_cfg, expected);
    CaseOutcome oc;
    oc.name = c.name;
    const auto program = minilang::parse(c.program_source);
    const auto trace = minilang::trace_suite(program, c.bundle.suite, cfg.step_limit);
    require_failing_tests(trace.coverage);
    const auto pdg = minilang::static_pdg(program);
    const auto faulty = c.bundle.fault_statements();
    oc.statements = program.statements.size();
    oc.tests = trace.suite.size();
    oc.failing = trace.coverage.num_failing();
    oc.faults.assign(faulty.begin(), faulty.end());

    const bool wants_inference =
        std::find(cfg.techniques.begin(), cfg.techniques.end(), eval::Technique::Inference) != cfg.techniques.end();
    if (wants_inference) {
        const auto& sel = cfg.selection_mode == SpectrumMode::Coverage ? trace.coverage : trace.slice;
        const auto& cau = cfg.causal_mode == SpectrumMode::Coverage ? trace.coverage : trace.slice;
        const Localization loc = localize_inference(sel, cau, pdg, cfg);
        const auto truth = minilang::infected_statements(program, trace, faulty);
        oc.truth_size = truth.size();
        oc.chains = eval::chain_prf(loc.report.chains, truth);
        for (const auto& ch : loc.report.chains) {
            oc.chain_members.push_back(ch.members);
        }
        oc.expectations = check_expectations(expected, trace, loc, sel, faulty);
    }

    for (auto t : cfg.techniques) {
        TechniqueOutcome to;
        try {
            to.iterations = eval::expense_iterate(
                c.bundle,
                [&](const minilang::Program& p, const minilang::SuiteTrace& tr) {
                    return localize_trace(t, tr, minilang::static_pdg(p), cfg);
                },
                cfg.step_limit);
        } catch (const PreconditionError& e) {
            to.error = e.what();
        }
        if (!to.iterations.empty()) {
            const double n = static_cast<double>(to.iterations.size());
            for (const auto& it : to.iterations) {
                to.mean_examined_best += static_cast<double>(it.examined_best) / n;
                to.mean_examined_worst += static_cast<double>(it.examined_worst) / n;
                to.mean_exam_best += it.exam_best / n;
                to.mean_exam_worst += it.exam_worst / n;
            }
        }
        oc.techniques[t] = std::move(to);
    }
    return oc;
}

std::string evaluation_text(const std::vector<CaseOutcome>& cases, const PipelineConfig& cfg) {
    std::ostringstream os;
    std::size_t name_w = 12;
    for (const auto& c : cases) {
        name_w = std::max(name_w, c.name.size() + 2);
    }
    auto table = [&](const std::string& title, auto value) {
        os << title << '\n' << pad("technique", 12);
        for (const auto& c : cases) {
            os << rpad(c.name, name_w);
        }
        os << rpad("average", 10) << '\n';
        for (auto t : cfg.techniques) {
            os << pad(eval::to_string(t), 12);
            double sum = 0;
            std::size_t n = 0;
            for (const auto& c : cases) {
                const auto& to = c.techniques.at(t);
                if (to.iterations.empty()) {
                    os << rpad("-", name_w);
                    continue;
                }
                const double v = value(to);
                sum += v;
                ++n;
                os << rpad(fixed(v, 2), name_w);
            }
            os << rpad(n ? fixed(sum / static_cast<double>(n), 2) : "-", 10) << '\n';
        }
        os << '\n';
    };
    table("Average number of statements examined (best case)",
          [](const TechniqueOutcome& t) { return t.mean_examined_best; });
    table("Average number of statements examined (worst case)",
          [](const TechniqueOutcome& t) { return t.mean_examined_worst; });
    table("Mean EXAM score, % of statements (best case)", [](const TechniqueOutcome& t) { return t.mean_exam_best; });
    table("Mean EXAM score, % of statements (worst case)", [](const TechniqueOutcome& t) { return t.mean_exam_worst; });

    os << "Cases\n"
       << pad("case", name_w) << rpad("stmts", 7) << rpad("tests", 7) << rpad("failing", 9) << "  faults\n";
    for (const auto& c : cases) {
        os << pad(c.name, name_w) << rpad(std::to_string(c.statements), 7) << rpad(std::to_string(c.tests), 7)
           << rpad(std::to_string(c.failing), 9) << "  ";
        for (std::size_t k = 0; k < c.faults.size(); ++k) {
            os << (k ? "," : "") << c.faults[k];
        }
        os << '\n';
    }
    os << '\n';

    if (std::any_of(cases.begin(), cases.end(), [](const CaseOutcome& c) { return c.chains.has_value(); })) {
        os << "Cause-effect chains (inference)\n"
           << pad("case", name_w) << rpad("precision", 11) << rpad("recall", 9) << rpad("F", 8) << "  chains\n";
        for (const auto& c : cases) {
            if (!c.chains) {
                continue;
            }
            os << pad(c.name, name_w) << rpad(fixed(c.chains->precision, 3), 11) << rpad(fixed(c.chains->recall, 3), 9)
               << rpad(fixed(c.chains->f_measure, 3), 8) << "  ";
            for (const auto& ch : c.chain_members) {
                os << '{';
                for (std::size_t m = 0; m < ch.size(); ++m) {
                    os << (m ? "->" : "") << ch[m];
                }
                os << '}';
            }
            os << '\n';
        }
        os << '\n';
    }

    os << "One-fault-at-a-time\n"
       << pad("case", name_w) << pad("technique", 11) << rpad("iter", 5) << rpad("failing", 9) << "  "
       << pad("fixed", 7) << rpad("best", 6) << rpad("worst", 7) << '\n';
    for (const auto& c : cases) {
        for (auto t : cfg.techniques) {
            const auto& to = c.techniques.at(t);
            for (const auto& it : to.iterations) {
                os << pad(c.name, name_w) << pad(eval::to_string(t), 11) << rpad(std::to_string(it.iteration), 5)
                   << rpad(std::to_string(it.failing_tests), 9) << "  " << pad(it.located_fault, 7)
                   << rpad(std::to_string(it.examined_best), 6) << rpad(std::to_string(it.examined_worst), 7) << '\n';
            }
            if (!to.error.empty()) {
                os << pad(c.name, name_w) << pad(eval::to_string(t), 11) << "  aborted: " << to.error << '\n';
            }
        }
    }

    bool any_expectations = false;
    for (const auto& c : cases) {
        if (c.expectations.checked == 0) {
            continue;
        }
        if (!any_expectations) {
            os << "\nEmbedded expectations\n";
            any_expectations = true;
        }
        os << pad(c.name, name_w) << c.expectations.matched << "/" << c.expectations.checked << " matched\n";
        for (const auto& m : c.expectations.mismatches) {
            os << "  " << m << '\n';
        }
    }
    return os.str();
}

ordered_json evaluation_json(const std::vector<CaseOutcome>& cases, const PipelineConfig& cfg) {
    ordered_json jc = ordered_json::array();
    for (const auto& c : cases) {
        ordered_json techniques = ordered_json::object();
        for (auto t : cfg.techniques) {
            const auto& to = c.techniques.at(t);
            ordered_json its = ordered_json::array();
            for (const auto& it : to.iterations) {
                its.push_back({{"iteration", it.iteration},
                               {"failing_tests", it.failing_tests},
                               {"fixed", it.located_fault},
                               {"examined_best", it.examined_best},
                               {"examined_worst", it.examined_worst},
                               {"exam_best", it.exam_best},
                               {"exam_worst", it.exam_worst}});
            }
            techniques[eval::to_string(t)] = {{"mean_examined_best", to.mean_examined_best},
                                              {"mean_examined_worst", to.mean_examined_worst},
                                              {"mean_exam_best", to.mean_exam_best},
                                              {"mean_exam_worst", to.mean_exam_worst},
                                              {"iterations", its},
                                              {"error", to.error.empty() ? ordered_json(nullptr) : ordered_json(to.error)}};
        }
        ordered_json entry{{"case", c.name},
                           {"statements", c.statements},
                           {"tests", c.tests},
                           {"failing", c.failing},
                           {"faults", c.faults},
                           {"techniques", techniques}};
        if (c.chains) {
            entry["chains"] = {{"members", c.chain_members},
                               {"ground_truth_size", c.truth_size},
                               {"precision", c.chains->precision},
                               {"recall", c.chains->recall},
                               {"f_measure", c.chains->f_measure}};
        }
        if (c.expectations.checked) {
            entry["expectations"] = {{"checked", c.expectations.checked},
                                     {"matched", c.expectations.matched},
                                     {"mismatches", c.expectations.mismatches}};
        }
        jc.push_back(std::move(entry));
    }
    return {{"config", config_json(cfg)}, {"cases", jc}};
}

}  // namespace

int cmd_evaluate(const EvaluateOptions& opts, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, "", [&] {
        cfg.validate();
        const auto dirs = corpus::case_directories(opts.corpus);
        std::vector<CaseOutcome> cases;
        for (const auto& dir : dirs) {
            try {
                cases.push_back(evaluate_case(corpus::load_case(dir), cfg));
            } catch (const InputError& e) {
                err << "warning: skipping " << dir.filename().string() << ": " << e.what() << '\n';
            } catch (const PreconditionError& e) {
                err << "warning: skipping " << dir.filename().string() << ": " << e.what() << '\n';
            } catch (const nlohmann::json::exception& e) {
                err << "warning: skipping " << dir.filename().string() << ": malformed JSON: " << e.what() << '\n';
            }
        }
        if (cases.empty()) {
            throw InputError("no usable case under " + opts.corpus.string());
        }
        if (opts.json_out) {
            write_file(*opts.json_out, evaluation_json(cases, cfg).dump(2) + "\n");
        }
        out << evaluation_text(cases, cfg);
        return 0;
    });
}

int cmd_corpus_gen(const fs::path& out_dir, std::uint64_t seed, std::size_t cases, std::ostream& out,
                   std::ostream& err) {
    return guarded(err, "", [&] {
        corpus::GeneratorConfig gc;
        gc.cases = cases;
        corpus::write_corpus(out_dir, seed, gc);
        out << "wrote " << cases + 1 << " cases to " << out_dir.string() << '\n';
        return 0;
    });
}

// ---- command line -------------------------------------------------------

namespace {

void add_pipeline_flags(CLI::App& sub, PipelineConfig& cfg, std::string& selection_mode, std::string& causal_mode,
                        std::string& matching, std::string& prior) {
    sub.add_option("--mode", selection_mode, "spectrum used for selection: slice or coverage")
        ->capture_default_str();
    sub.add_option("--causal-mode", causal_mode, "spectrum used for causal estimation: slice or coverage")
        ->capture_default_str();
    sub.add_option("--phi", cfg.phi, "entropy family: shannon or quadratic")->capture_default_str();
    sub.add_option("--delta-fraction", cfg.delta_fraction, "selection threshold as a fraction of candidates")
        ->capture_default_str();
    sub.add_option("--chain-cap", cfg.chain_cap, "maximum number of cause-effect chains")->capture_default_str();
    sub.add_option("--prior-file", prior, "JSON object of statement -> prior weight");
    sub.add_option("--matching", matching, "nearest or full")->capture_default_str();
    sub.add_option("--ridge", cfg.ridge, "ridge penalty of the propensity model")->capture_default_str();
    sub.add_option("--caliper", cfg.caliper, "caliper in SDs of the logit propensity")->capture_default_str();
    sub.add_option("--seed", cfg.seed, "seed (only corpus generation is random)")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"faultchain: fault localization with cause-effect chains"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::string selection_mode = "slice";
    std::string causal_mode = "slice";
    std::string matching = "nearest";
    std::string prior;
    std::string technique = "inference";
    std::vector<std::string> techniques;

    std::string program;
    std::string tests;
    std::string out_dir = "trace-out";
    auto* trace = app.add_subcommand("trace", "run a suite and export spectra, PDG, DDGs and verdicts");
    trace->add_option("program", program, "program source")->required();
    trace->add_option("tests", tests, "tests JSON")->required();
    trace->add_option("-o,--out", out_dir, "output directory")->capture_default_str();

    LocalizeOptions lo;
    std::string spectrum;
    std::string pdg;
    std::string causal_spectrum;
    std::string report_out;
    std::string text_out;
    auto* localize = app.add_subcommand("localize", "rank statements and build cause-effect chains");
    localize->add_option("spectrum", spectrum, "spectrum JSON")->required();
    localize->add_option("pdg", pdg, "static PDG JSON")->required();
    localize->add_option("--causal-spectrum", causal_spectrum, "spectrum for the causal stage (default: same)");
    localize->add_option("--technique", technique, "inference, ochiai, o, gp19 or dstar")->capture_default_str();
    localize->add_option("-o,--out", report_out, "JSON report path (default: stdout)");
    localize->add_option("--text", text_out, "plain-text report path");
    add_pipeline_flags(*localize, cfg, selection_mode, causal_mode, matching, prior);

    std::string corpus_dir;
    std::string json_out;
    auto* evaluate = app.add_subcommand("evaluate", "compare techniques on a corpus");
    evaluate->add_option("corpus", corpus_dir, "corpus directory")->required();
    evaluate->add_option("--technique", techniques, "techniques to compare (default: all)");
    evaluate->add_option("--json", json_out, "also write the metrics as JSON");
    add_pipeline_flags(*evaluate, cfg, selection_mode, causal_mode, matching, prior);

    std::string gen_out;
    std::size_t cases = 10;
    auto* gen = app.add_subcommand("corpus-gen", "write the golden case and seeded-fault cases");
    gen->add_option("out", gen_out, "output directory")->required();
    gen->add_option("--seed", cfg.seed, "generator seed")->capture_default_str();
    gen->add_option("--cases", cases, "number of generated cases")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.selection_mode = parse_mode(selection_mode);
        cfg.causal_mode = parse_mode(causal_mode);
        cfg.matching = causal::parse_matching(matching);
        if (!prior.empty()) {
            cfg.prior_file = prior;
        }
        if (!techniques.empty()) {
            cfg.techniques.clear();
            for (const auto& t : techniques) {
                cfg.techniques.push_back(eval::parse_technique(t));
            }
        }
        lo.technique = eval::parse_technique(technique);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (*trace) {
        return cmd_trace(program, tests, out_dir, out, err);
    }
    if (*localize) {
        lo.spectrum = spectrum;
        lo.pdg = pdg;
        if (!causal_spectrum.empty()) {
            lo.causal_spectrum = causal_spectrum;
        }
        if (!report_out.empty()) {
            lo.out = report_out;
        }
        if (!text_out.empty()) {
            lo.text_out = text_out;
        }
        return cmd_localize(lo, cfg, out, err);
    }
    if (*evaluate) {
        EvaluateOptions eo;
        eo.corpus = corpus_dir;
        if (!json_out.empty()) {
            eo.json_out = json_out;
        }
        return cmd_evaluate(eo, cfg, out, err);
    }
    return cmd_corpus_gen(gen_out, cfg.seed, cases, out, err);
}

}  // namespace faultchain::driver
