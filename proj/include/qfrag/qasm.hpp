// Copyright 2026 The qfrag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qfrag/circuit.hpp"

namespace qfrag {

/// Parses the supported OpenQASM 2.0 subset: header, include, a single
/// qreg, any number of cregs, the 17 feature gates (cp and cu1 are the same
/// kind), measure and barrier. Register-wide operands broadcast for
/// single-operand statements. Throws ParseError / UnsupportedGateError.
QuantumCircuit parse_qasm(std::string_view text);

QuantumCircuit parse_qasm_file(const std::filesystem::path& path);

/// Emits a program that parse_qasm maps back to an identical circuit.
std::string emit_qasm(const QuantumCircuit& circuit);

}  // namespace qfrag
