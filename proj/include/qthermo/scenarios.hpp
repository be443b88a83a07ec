// Copyright 2026 The qthermo Authors
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

#include <qthermo/model_io.hpp>
#include <qthermo/propagation.hpp>
#include <qthermo/thermo_ledger.hpp>

#include <cstdint>

namespace qthermo {

const std::vector<std::string>& known_approaches();

struct ScenarioOptions {
    TimeGrid grid;
    std::vector<std::string> approaches;   // empty: every approach
    double tolerance = 1e-8;               // generator integrator tolerance per unit time
};

struct ScenarioResult {
    std::string structure;   // "unitary" or the generator structure
    Trajectory trajectory;
    FluxSeries series;
    std::vector<AuditEntry> audit;
    std::vector<std::string> notes;
};

// One trajectory, every selected flux definition on it, first-law audit appended.
ScenarioResult compare_approaches(const ModelFile& model, const ScenarioOptions& options);

struct ThermalOperationCheck {
    double t = 0.0;
    double commutator_norm = 0.0;
    double unitarity_defect = 0.0;
    bool pass = false;
};

struct ValidationSummary {
    std::string kind;
    double sec_device = 0.0;
    double sec_bath = 0.0;
    std::string sec_violation;                   // empty when SEC holds
    std::vector<ThermalOperationCheck> thermal_operation;
    std::vector<double> time_translation;        // one residual per random state; empty when not applicable
    double time_translation_bound = 1e-8;
    std::vector<std::string> warnings;
    bool pass = false;
};

ValidationSummary validate_model(const ModelFile& model, std::uint64_t seed);

}  // namespace qthermo
