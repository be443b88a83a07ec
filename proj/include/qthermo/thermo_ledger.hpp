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

#include <qthermo/generators.hpp>
#include <qthermo/jc.hpp>
#include <qthermo/propagation.hpp>
#include <qthermo/semiclassical.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>

namespace qthermo {

// Energy bookkeeping of one approach at one instant.
struct FluxPoint {
    double E_S_dot = 0.0;
    double P = 0.0;
    double Q_dot = 0.0;
};

// Exact composite trajectory, local model: P = i<[H_C,H_SC]>, Q = -dE_E/dt.
struct AutonomousExact : FluxPoint {
    double E_C_dot = 0.0, E_E_dot = 0.0;
};
AutonomousExact autonomous_exact_fluxes(const AssembledModel& model, const CMatrix& rho);

// Local generator (device or system level); H_S, H_C embedded on the generator space.
struct AutonomousLocal : FluxPoint {
    double Q_dot_eigen = 0.0;        // -Sum omega f <F^dag F>
    double control_isolation = 0.0;  // tr(H_C D[rho])
};
AutonomousLocal autonomous_local_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& rho,
                                        const CMatrix* H_C = nullptr);

struct AutonomousGlobal : FluxPoint {
    double Q_dot_eigen = 0.0;   // -Sum omega g <G^dag G> - Phi
    double phi = 0.0;           // tr(H_SC L[rho])
};
AutonomousGlobal autonomous_global_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& H_C,
                                          const CMatrix& H_SC, const CMatrix& rho);

// P = <dH_sc/dt>, E_S_dot = tr(H_S L[rho]), Q = E_S_dot - P.
FluxPoint semiclassical_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& dH_sc,
                               const CMatrix& rho);

struct ScGlobal : FluxPoint {
    double Q_dot_eigen = 0.0;
    double phi = 0.0;
};
// X and dX are the invariant and its derivative at the same instant.
ScGlobal sc_global_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& X, const CMatrix& dX,
                          const CMatrix& rho);

using SpectralFunction = std::function<double(double)>;
// gamma for omega > 0 and gamma exp(beta omega) for omega < 0.
SpectralFunction detailed_balance_spectrum(double gamma, double beta);

struct External {
    FluxPoint original;   // E_S_dot = d/dt tr(H_sc rho)
    FluxPoint modified;   // E_S_dot = tr(H_S L[rho])
};
// Q = -Sum omega_e G(omega_e) <F^dag F> with F the frame jumps of the snapshot.
External external_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& dH_sc,
                         const std::vector<double>& omega_e, const SpectralFunction& G, const CMatrix& rho);

struct DynamicalMapHeat {
    std::optional<double> general;   // -T tr(D[rho] ln rho_ia)
    std::optional<double> channel;   // T Sum G_a ln(G_-a / G_a) <F^dag F>
    double detailed_balance = 0.0;   // -Sum omega G <F^dag F>
    std::string note;
};
DynamicalMapHeat dynamical_map_heat(const GeneratorSnapshot& s, const CMatrix& rho, double beta,
                                    const CMatrix* attractor = nullptr,
                                    const NumericPolicy& policy = default_policy());

struct EntropySuite {
    double von_neumann = 0.0;
    double energy = 0.0;
    double coherence = 0.0;   // energy - von_neumann
};
EntropySuite entropy_suite(const CMatrix& rho, const CMatrix& H);

double von_neumann_entropy(const CMatrix& rho);
// D(rho || sigma); +inf when the support of rho is not inside that of sigma.
double relative_entropy(const CMatrix& rho, const CMatrix& sigma, double floor = 1e-30);

struct EntropyProduction {
    double sigma = 0.0;              // D(rho'_SE || rho'_S (x) rho_E)
    double mutual_information = 0.0;
    double environment_divergence = 0.0;
    std::optional<double> thermal_shortcut;   // Delta S_S + beta Delta E_E
};
// env: labels forming the environment; the rest of the layout is the system side.
EntropyProduction entropy_production(const CMatrix& rho_initial, const CMatrix& rho_final,
                                     const HilbertLayout& layout, const std::vector<std::string>& env,
                                     std::optional<double> beta = std::nullopt,
                                     const CMatrix* H_env = nullptr);

// Sdot + tr(L[rho] ln rho_ia).
double spohn_functional(const GeneratorSnapshot& s, const CMatrix& rho, const CMatrix& attractor,
                        double floor = 1e-30);
// Sdot + tr(L[rho] ln rho_th) - beta dE_C/dt.
double local_entropy_production(const GeneratorSnapshot& s, const CMatrix& rho, const CMatrix& rho_th, double beta,
                                double control_energy_rate);

// Time series per approach, on a shared grid.
struct ApproachSeries {
    std::string approach;
    std::vector<double> E_S_dot, P, Q_dot;
    std::vector<double> E_S;                 // optional measured system energy
    std::optional<double> work_exact, heat_exact;
    bool skipped = false;
    std::string reason;
};

struct FluxSeries {
    std::vector<double> t;
    std::vector<ApproachSeries> approaches;
    Provenance provenance = Provenance::Unitary;
    double tolerance = 0.0;
};

struct AuditEntry {
    std::string approach;
    double W = 0.0, Q = 0.0, dE = 0.0, residual = 0.0, bound = 0.0;
    bool pass = false;
    std::string mode;   // "exact", "simpson" or "endpoint"
};
std::vector<AuditEntry> first_law_audit(const FluxSeries& series);

struct OutputHeader {
    std::string version;
    std::string model_hash;
    std::string numeric_policy;
    std::string sign_conventions;
    std::uint64_t seed = 0;
};
OutputHeader make_header(const std::string& model_text, std::uint64_t seed);
std::string fnv1a_hex(const std::string& text);

void write_flux_csv(std::ostream& os, const FluxSeries& series, const OutputHeader& h);
// JSON ledger text: header, per-approach totals, audit verdicts, skipped approaches.
std::string ledger_json(const FluxSeries& series, const std::vector<AuditEntry>& audit, const OutputHeader& h);

// Columns alpha,t,P_autonomous,P_semiclassical,P_e.
void write_figure2_csv(std::ostream& os, const std::vector<jc::Figure2Curve>& curves, const OutputHeader& h);
std::string figure2_json(const std::vector<jc::Figure2Curve>& curves, const jc::EnvelopeFit* fit,
                         const jc::JCModel* fit_model, const OutputHeader& h);

}  // namespace qthermo
