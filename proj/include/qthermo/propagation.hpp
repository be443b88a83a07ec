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
#include <qthermo/schedule.hpp>

namespace qthermo {

enum class Provenance { Unitary, Generator };

struct Trajectory {
    HilbertLayout layout;
    TimeGrid grid;
    std::vector<CMatrix> states;
    Provenance provenance = Provenance::Unitary;
    double tolerance = 0.0;                // integrator tolerance per unit time (generator runs)
    std::vector<double> trace_drift;       // |tr rho - 1|, recorded not corrected
    double min_eigenvalue = 0.0;
    std::vector<std::string> warnings;

    std::size_t size() const { return states.size(); }
    DensityOperator state(std::size_t k) const;
};

inline constexpr Eigen::Index kDenseCap = 2000;

// Exact evolution under a time-independent Hamiltonian.
Trajectory evolve_unitary(const Operator& H, const DensityOperator& rho0, const TimeGrid& grid);
Trajectory evolve_unitary(const CMatrix& H, const CMatrix& rho0, const HilbertLayout& layout, const TimeGrid& grid);

// RK4 with step halving on every grid interval until successive refinements
// differ by less than tol * dt.
Trajectory evolve_generator(const Generator& g, const DensityOperator& rho0, const TimeGrid& grid,
                            double tol = 1e-8, const NumericPolicy& policy = default_policy());

Trajectory reduced_trajectory(const Trajectory& traj, const std::vector<std::string>& keep);

// Composite Simpson on a possibly non-uniform grid; trapezoid for two points.
double integrate(const std::vector<double>& t, const std::vector<double>& y);
// Running integral from t[0] with the same local rule.
std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& y);

// tr_E(U (rho_D (x) rho_E) U^dag) over the assembled model, device = S (x) C.
CMatrix reduced_device_map(const AssembledModel& model, const CMatrix& rho_E, double t, const CMatrix& rho_D);
// || Lambda_t(U0 rho U0^dag) - U0 Lambda_t(rho) U0^dag ||_1 with U0 = exp(-i (H_S + H_C) t).
double time_translation_residual(const AssembledModel& model, const CMatrix& rho_E, double t, const CMatrix& rho_D);

}  // namespace qthermo
