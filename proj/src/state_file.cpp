// Copyright 2026 The amdriver Authors
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

#include "amdriver/state_file.hpp"

#include <fstream>

namespace amdriver {

nlohmann::ordered_json state_to_json(const StateVector &psi) {
    nlohmann::ordered_json doc;
    doc["n"] = psi.qubits();
    auto amps = nlohmann::ordered_json::array();
    for (const auto &a : psi.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    doc["amplitudes"] = std::move(amps);
    return doc;
}

StateVector state_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("amplitudes")) {
        throw DomainError("state file needs \"n\" and \"amplitudes\"");
    }
    if (!doc["n"].is_number_integer()) {
        throw DomainError("state file \"n\" must be an integer");
    }
    const int n = doc["n"].get<int>();
    const auto &list = doc["amplitudes"];
    if (!list.is_array()) {
        throw DomainError("state file \"amplitudes\" must be an array");
    }
    std::vector<Complex> amps;
    amps.reserve(list.size());
    for (const auto &entry : list) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number()) {
            throw DomainError("each amplitude must be a [re, im] pair");
        }
        amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return {n, std::move(amps)};
}

StateVector read_state_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot open state file " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw DomainError("malformed state file " + path.string() + ": " + e.what());
    }
    return state_from_json(doc);
}

} // namespace amdriver
