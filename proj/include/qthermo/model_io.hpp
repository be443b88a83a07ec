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

#include <qthermo/composite_model.hpp>
#include <qthermo/generators.hpp>
#include <qthermo/jc.hpp>

#include <optional>

namespace qthermo {

// Kinetic schedule as written in a model file; channel count is bound later.
struct ScheduleSpec {
    std::string kind = "flat";   // flat | detailed_balance | exp_transient | piecewise
    double gamma = 0.1;
    double g0 = 0.1;
    double tau = 1.0;
    double dephasing = 0.0;
    std::vector<std::vector<std::pair<double, double>>> breakpoints;
};

struct ModelFile {
    std::string kind;                  // local | global | jc
    std::string scenario = "autonomous";   // autonomous | semiclassical
    std::string text;                  // raw file contents, hashed into output headers
    std::optional<LocalModel> local;
    std::optional<GlobalModel> global;
    std::optional<jc::JCModel> jc;
    double beta = std::numeric_limits<double>::infinity();
    bool has_beta = false;
    CMatrix rho_S, rho_C, rho_E;
    std::optional<ScheduleSpec> schedule;
    std::optional<double> tmax;
    std::optional<std::size_t> points;
};

// JSON model file. Syntax errors report line and column; semantic errors
// name the offending field and, for non-Hermitian matrices, the entry.
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::string& path);

// Binds a schedule spec to channel frequencies and invariant count.
KineticSchedule make_schedule(const ScheduleSpec& spec, const std::vector<double>& omegas, double beta,
                              Eigen::Index invariants);

// Named operators: sigma_x|y|z|plus|minus, a:N, adag:N, num:N, identity:N, zero:N.
CMatrix named_operator(const std::string& name);

// Line and column (both 1-based) of a byte offset.
std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset);

}  // namespace qthermo
