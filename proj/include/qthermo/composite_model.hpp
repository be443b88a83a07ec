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

namespace qthermo {

namespace ops {
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix sigma_plus();   // |e><g|, e is the +1 eigenvector of sigma_z (index 0)
CMatrix sigma_minus();
CMatrix annihilation(int n_max);  // Fock levels 0..n_max
CMatrix creation(int n_max);
CMatrix number(int n_max);
}  // namespace ops

// a (x) b with a on the first and b on the second named factor.
struct CouplingPair {
    CMatrix a;
    CMatrix b;
};

// S (x) C (x) E with couplings S-C and S-E only. Absent factors have dimension 1.
struct LocalModel {
    CMatrix H_S, H_C, H_E;
    std::vector<CouplingPair> sc;
    std::vector<CouplingPair> se;
    // Top control levels excluded from the S-C check (truncated bosonic modes).
    int control_edge_levels = 0;

    HilbertLayout layout() const;
};

// Device D = S (x) C with a general interaction; D couples to E.
struct GlobalModel {
    CMatrix H_S, H_C, H_E;
    CMatrix H_SC;                   // on S (x) C
    std::vector<CouplingPair> de;   // a on S (x) C, b on E

    HilbertLayout layout() const;
    HilbertLayout device_layout() const;
};

// Every piece embedded on the full S (x) C (x) E space.
struct AssembledModel {
    HilbertLayout layout;
    CMatrix H, HS, HC, HE, HSC, HSE;
    double sec_device = 0.0;   // local: [H_S+H_C, H_SC]; global: unused
    double sec_bath = 0.0;     // local: [H_S+H_E, H_SE]; global: [H_D+H_E, H_DE]

    Operator total() const { return Operator(layout, H, true); }
};

AssembledModel assemble_local(const LocalModel& m, const NumericPolicy& policy = default_policy());
AssembledModel assemble_global(const GlobalModel& m, const NumericPolicy& policy = default_policy());

// Same as assemble_* without throwing on SEC violation.
AssembledModel assemble_local_unchecked(const LocalModel& m, const NumericPolicy& policy = default_policy());
AssembledModel assemble_global_unchecked(const GlobalModel& m, const NumericPolicy& policy = default_policy());

// H_D^(L) = H_S + H_C + H_SC on S (x) C.
CMatrix device_hamiltonian(const LocalModel& m);
CMatrix device_hamiltonian(const GlobalModel& m);

struct ThermalOperationSpec {
    HilbertLayout layout;
    CMatrix U;
    CMatrix H_S, H_C, H_E;   // local factors, embedded on layout by the validator
};

struct ThermalOperationReport {
    double commutator_norm = 0.0;   // ||[H_S+H_C+H_E, U]|| / ||H_S+H_C+H_E||
    double unitarity_defect = 0.0;  // ||U^dag U - 1||
    bool pass = false;
};

ThermalOperationReport validate_thermal_operation(const ThermalOperationSpec& spec,
                                                  const NumericPolicy& policy = default_policy());

// exp(-beta h) / Z; beta = +inf gives the normalized ground projector.
DensityOperator thermal_state(const Operator& h, double beta);
CMatrix thermal_matrix(const CMatrix& h, double beta);

int coherent_cutoff(Complex alpha);
// Fock amplitudes c_0..c_{n_max}, normalized; throws when n_max is below the cutoff rule.
CVector coherent_amplitudes(Complex alpha, int n_max);
DensityOperator coherent_state(Complex alpha, int n_max);

}  // namespace qthermo
