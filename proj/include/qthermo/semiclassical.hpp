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
#include <qthermo/eigenoperators.hpp>
#include <qthermo/schedule.hpp>

namespace qthermo {

// c_j(t) = tr(C_j U_C rho_C0 U_C^dag) for the control factors of the S-C pairs.
class ControlFields {
public:
    ControlFields() = default;
    ControlFields(const CMatrix& H_C, const CMatrix& rho_C0, std::vector<CMatrix> control_ops);

    std::size_t count() const { return ops_.size(); }
    const CMatrix& op(std::size_t j) const { return ops_.at(j); }
    CMatrix control_state(double t) const;
    Complex value(std::size_t j, double t) const;
    Complex rate(std::size_t j, double t) const;
    // values[k][j] on the grid.
    std::vector<std::vector<Complex>> sample(const TimeGrid& grid) const;

private:
    RVector energies_;
    CMatrix basis_;
    CMatrix rho0_eig_;   // rho_C0 in the H_C eigenbasis
    std::vector<CMatrix> ops_;
    CMatrix h_c_;
};

ControlFields extract_fields(const LocalModel& model, const CMatrix& rho_C0);

// H_S + sum_j S_j c_j(t); the S-C pair list must sum to a Hermitian operator.
HamiltonianSchedule build_sc_hamiltonian(const LocalModel& model, const CMatrix& rho_C0);
// H_S + tr_C(U_C^dag H_SC U_C rho_C0).
HamiltonianSchedule build_sc_hamiltonian(const GlobalModel& model, const CMatrix& rho_C0);

struct FrameOptions {
    int substeps = 8;
    bool enforce_switch_on = true;
};

// X(t) = U(t,0) H_S U(t,0)^dag with parallel-transported eigenvectors and their phases.
class InvariantFrame {
public:
    InvariantFrame(HamiltonianSchedule h_sc, const CMatrix& H_S, TimeGrid grid, FrameOptions options = {},
                   const NumericPolicy& policy = default_policy());

    const EigenoperatorSet& initial() const { return eig0_; }
    const TimeGrid& grid() const { return prop_.grid(); }
    const HamiltonianSchedule& hamiltonian() const { return h_; }

    CMatrix propagator(double t) const { return prop_.at(t); }
    CMatrix X(double t) const;
    // dX/dt = -i [H_sc(t), X(t)].
    CMatrix dX(double t) const;
    CMatrix state(Eigen::Index j, double t) const;
    CMatrix jump(std::size_t alpha, double t) const;
    std::vector<CMatrix> jumps(double t) const;
    std::vector<CMatrix> traceless_invariants(double t) const;

    // chi(k, j): accumulated phase of frame state j at grid point k.
    const RMatrix& chi() const { return chi_; }
    double theta(std::size_t alpha, std::size_t k) const;
    // d theta / dt at grid points from five-point differences.
    double omega_e(std::size_t alpha, std::size_t k) const { return omega_e_(Eigen::Index(k), Eigen::Index(alpha)); }
    // Linear interpolation between grid points.
    double omega_e_at(std::size_t alpha, double t) const;

private:
    HamiltonianSchedule h_;
    EigenoperatorSet eig0_;
    TimeOrderedPropagator prop_;
    RMatrix chi_;
    RMatrix omega_e_;
};

// Derivative of samples y on a (possibly non-uniform) grid from five-point Lagrange stencils.
RVector differentiate(const std::vector<double>& t, const RVector& y);

// Sum_j tr((S_j (x) i[H_C, C_j]) chi) on states over S (x) C (x) E, chi = rho - rho_SE (x) rho_C.
std::vector<double> correlation_correction(const std::vector<CMatrix>& states, const LocalModel& model);
// i<[H_C, H_SC]> on the same states.
std::vector<double> autonomous_power(const std::vector<CMatrix>& states, const LocalModel& model);
// Sum_j <S_j> <i[H_C, C_j]>: semiclassical power from the mean fields of the exact trajectory.
std::vector<double> mean_field_power(const std::vector<CMatrix>& states, const LocalModel& model);

}  // namespace qthermo
