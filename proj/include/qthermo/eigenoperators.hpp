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

#include <qthermo/operator_core.hpp>

#include <optional>

namespace qthermo {

struct DegeneracyReport {
    bool level_degenerate = false;   // equal eigenvalues
    bool bohr_degenerate = false;    // distinct transitions with equal frequency
    double tolerance = 0.0;
    double min_level_gap = 0.0;
    double min_bohr_gap = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> coincident;  // transition index pairs (first few)

    bool any() const { return level_degenerate || bohr_degenerate; }
};

// |phi_n><phi_m| with U0^dag F U0 = exp(-i omega t) F, omega = eps_m - eps_n.
struct Transition {
    Eigen::Index n = 0, m = 0;
    double omega = 0.0;
};

struct EigenoperatorSet {
    CMatrix hamiltonian;
    RVector energies;   // ascending
    CMatrix basis;      // eigenvectors as columns, largest component real positive
    std::vector<Transition> non_invariant;
    DegeneracyReport degeneracy;

    Eigen::Index dim() const { return energies.size(); }
    CMatrix op(std::size_t alpha) const;
    // Traceless diagonal Gell-Mann operators R_1..R_{N-1} in the eigenbasis.
    std::vector<CMatrix> traceless_invariants() const;
    // traceless_invariants() followed by I / sqrt(N).
    std::vector<CMatrix> invariants() const;
    std::optional<std::size_t> reverse(std::size_t alpha) const;
    std::optional<std::size_t> find(Eigen::Index n, Eigen::Index m) const;
};

EigenoperatorSet decompose(const CMatrix& h, const NumericPolicy& policy = default_policy());

// Device eigenoperators written as system (x) control factors.
struct FactoredEigenoperator {
    CMatrix system, control;
    Eigen::Index s_n, s_m, c_n, c_m;
    double omega = 0.0;          // device Bohr frequency
    double omega_system = 0.0;
    bool system_invariant = false;   // system factor is a projector
    bool control_diagonal = false;   // control factor is a projector
};

struct FactoredSet {
    EigenoperatorSet system, control;
    std::vector<FactoredEigenoperator> entries;   // every device dyad with n != m
    double factorization_residual = 0.0;          // ||[H_D, G] + omega G|| worst case
    double separability_residual = 0.0;
};

// Requires H_D = H_S (x) 1 + 1 (x) H_C; throws otherwise.
FactoredSet product_decompose(const EigenoperatorSet& device, const HilbertLayout& layout,
                              const NumericPolicy& policy = default_policy());

// Shift eigenvalues by k*eps ladders until levels and Bohr frequencies are distinct.
CMatrix lift_degeneracy(const CMatrix& h, double eps, const NumericPolicy& policy = default_policy());

// Bohr-frequency separation tolerance used for a given Hamiltonian.
double degeneracy_tolerance(const RVector& energies, const NumericPolicy& policy = default_policy());

}  // namespace qthermo
