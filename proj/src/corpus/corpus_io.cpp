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
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "faultchain/corpus.hpp"
#include "faultchain/error.hpp"

namespace faultchain::corpus {

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
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << text;
}

}  // namespace

void write_case(const fs::path& dir, const FaultBundle& bundle, const std::string& expected_json) {
    fs::create_directories(dir);
    write_file(dir / "program.src", bundle.combined_source());
    write_file(dir / "tests.json", minilang::suite_to_json(bundle.suite));
    ordered_json faults = ordered_json::array();
    for (const auto& f : bundle.faults) {
        faults.push_back(
            {{"statement", f.statement}, {"kind", to_string(f.kind)}, {"original", f.original}, {"mutated", f.mutated}});
    }
    ordered_json doc{{"case", bundle.name}, {"base_source", bundle.base_source}, {"faults", faults}};
    write_file(dir / "faults.json", doc.dump(2) + "\n");
    write_file(dir / "expected.json", expected_json);
}

CorpusCase load_case(const fs::path& dir) {
    CorpusCase c;
    c.name = dir.filename().string();
    c.program_source = read_file(dir / "program.src");
    c.bundle.suite = minilang::suite_from_json(read_file(dir / "tests.json"));
    c.expected_json = read_file(dir / "expected.json");
    try {
        const auto doc = nlohmann::json::parse(read_file(dir / "faults.json"));
        c.bundle.name = doc.value("case", c.name);
        c.bundle.base_source = doc.at("base_source").get<std::string>();
        for (const auto& f : doc.at("faults")) {
            c.bundle.faults.push_back({f.at("statement").get<std::string>(),
                                       parse_mutation_kind(f.at("kind").get<std::string>()),
                                       f.at("original").get<std::string>(), f.at("mutated").get<std::string>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(dir.string() + ": malformed case file: " + e.what());
    }
    if (!nlohmann::json::accept(c.expected_json)) {
        throw InputError(dir.string() + ": expected.json is not valid JSON");
    }
    if (c.bundle.faults.empty()) {
        throw InputError(dir.string() + ": faults.json lists no fault");
    }
    const std::string combined = c.bundle.combined_source();
    if (minilang::format(minilang::parse(c.program_source)) != combined) {
        throw InputError(dir.string() + ": program.src is not the base program with every fault applied");
    }
    return c;
}

std::vector<fs::path> case_directories(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw InputError("corpus directory " + root.string() + " does not exist");
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void write_corpus(const fs::path& root, std::uint64_t seed, const GeneratorConfig& cfg) {
    const GoldenCase golden = motivating_example();
    write_case(root / golden.name, golden.bundle, golden_expected_json(golden));
    for (const auto& bundle : generate_corpus(seed, cfg)) {
        const auto faulty = bundle.fault_statements();
        ordered_json doc{{"case", bundle.name},
                         {"faulty_statements", std::vector<std::string>(faulty.begin(), faulty.end())},
                         {"values", ordered_json::array()}};
        write_case(root / bundle.name, bundle, doc.dump(2) + "\n");
    }
}

}  // namespace faultchain::corpus
