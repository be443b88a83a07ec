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
#include <qthermo/semiclassical.hpp>

#include <functional>
#include <memory>

namespace qthermo {

enum class Structure { LocalDevice, LocalSystem, GlobalDevice, ScGlobal, Markovian };

std::string to_string(Structure s);

using RateCurve = std::function<double(double)>;

// Kinetic coefficients: one rate per non-invariant channel and a Hermitian
// matrix r_ij(t) over the traceless invariants. Lamb-shift coefficients multiply
// the full invariant list (traceless invariants followed by the identity).
struct KineticSchedule {
    std::string kind = "custom";
    std::vector<RateCurve> rates;
    std::function<CMatrix(double)> invariant;
    Eigen::Index invariant_dim = -1;   // -1: use whatever the structure provides
    std::function<RVector(double)> lamb;
    bool markovian = true;

    static KineticSchedule flat(std::size_t channels, double gamma);
    // Downward channels (omega > 0) at gamma, upward at gamma exp(-beta |omega|).
    static KineticSchedule detailed_balance(const std::vector<double>& omegas, double gamma, double beta);
    // g0 (1 - exp(-t / tau)) on every channel.
    static KineticSchedule exp_transient(std::size_t channels, double g0, double tau);
    // Piecewise-linear rate per channel from (t, value) breakpoints.
    static KineticSchedule piecewise(const std::vector<std::vector<std::pair<double, double>>>& breakpoints);
    // Uniform pure dephasing r_ij = gamma delta_ij.
    KineticSchedule& with_dephasing(Eigen::Index dim, double gamma);
};

struct OperatorFrame {
    std::vector<CMatrix> jumps;
    std::vector<double> omegas;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> transitions;   // (n, m) for |n><m|
    std::vector<CMatrix> invariants;                                  // traceless
    std::vector<CMatrix> lamb_basis;                                  // invariants + identity
    std::optional<std::size_t> reverse(std::size_t alpha) const;
};

// Everything a generator needs at one instant.
struct GeneratorSnapshot {
    std::shared_ptr<const OperatorFrame> frame;
    CMatrix h_bare;
    CMatrix h_lamb;
    std::vector<double> rates;
    CMatrix r;

    CMatrix hamiltonian() const { return h_bare + h_lamb; }
    CMatrix apply(const CMatrix& rho) const;
    CMatrix apply_coherent(const CMatrix& rho) const;
    CMatrix apply_dissipator(const CMatrix& rho) const;
    // Column-stacking matrix of the dissipator or the full generator.
    CMatrix superoperator(bool coherent = true) const;
};

class Generator {
public:
    using SnapshotFn = std::function<GeneratorSnapshot(double)>;

    Generator(Structure s, HilbertLayout layout, SnapshotFn fn, bool markovian, double beta = -1.0);

    Structure structure() const { return structure_; }
    const HilbertLayout& layout() const { return layout_; }
    Eigen::Index dim() const { return layout_.total(); }
    bool markovian() const { return markovian_; }
    // Inverse temperature attached by detailed-balance builders; negative when unknown.
    double beta() const { return beta_; }

    // Frozen generator at time t (validates Markovian constraints).
    GeneratorSnapshot at(double t) const;
    CMatrix apply(double t, const CMatrix& rho) const { return at(t).apply(rho); }

private:
    Structure structure_;
    HilbertLayout layout_;
    SnapshotFn fn_;
    bool markovian_;
    double beta_;
};

// Local device generator: channels F_alpha (x) |c_k><c_k| of the free device propagator.
Generator build_local_device(const LocalModel& model, const KineticSchedule& schedule,
                             const NumericPolicy& policy = default_policy());
// Channels and invariants of H_S; optional time-dependent drive added to the coherent part.
Generator build_local_system(const CMatrix& H_S, const KineticSchedule& schedule,
                             const HamiltonianSchedule* drive = nullptr,
                             const NumericPolicy& policy = default_policy());
// Dressed dyads of H_D^(G).
Generator build_global_device(const GlobalModel& model, const KineticSchedule& schedule,
                              const NumericPolicy& policy = default_policy());
// Moving-frame dyads U F_alpha(0) U^dag of the semiclassical Hamiltonian.
Generator build_sc_global(std::shared_ptr<const InvariantFrame> frame, const KineticSchedule& schedule,
                          const NumericPolicy& policy = default_policy());
// Markovian generator from an eigenoperator set; checks detailed balance when beta >= 0.
Generator build_markovian(const EigenoperatorSet& eigs, const KineticSchedule& schedule, double beta = -1.0,
                          const NumericPolicy& policy = default_policy());

// Channel layout used by build_local_device, for schedule construction.
std::vector<double> local_device_omegas(const LocalModel& model);

struct Attractor {
    CMatrix state;
    int null_dim = 0;
    bool degenerate = false;
};

// Null space of the frozen dissipator at t.
Attractor instantaneous_attractor(const Generator& g, double t);

struct ThermoSplit {
    CMatrix coherent;      // H_bar(t)
    CMatrix lamb_shift;
    GeneratorSnapshot snapshot;
};

ThermoSplit thermo_split(const Generator& g, double t);

}  // namespace qthermo
