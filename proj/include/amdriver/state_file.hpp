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

// State file: {"n": int, "amplitudes": [[re, im], ...]} with 2^n entries in
// instruction-array code order. Unknown keys are ignored on read.

#pragma once

#include <filesystem>

#include <json.hpp>

#include "amdriver/quantum.hpp"

namespace amdriver {

nlohmann::ordered_json state_to_json(const StateVector &psi);

/// Throws DomainError / DimensionError on schema violations.
StateVector state_from_json(const nlohmann::json &doc);

StateVector read_state_file(const std::filesystem::path &path);

} // namespace amdriver
