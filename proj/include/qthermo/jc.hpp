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
#include <qthermo/schedule.hpp>

namespace qthermo::jc {

// H = omega_c (a^dag a + 1/2) + omega_s sigma_z / 2 + g (sigma_- a^dag + sigma_+ a),
// initial state (a |g> + b |e>) (x) |alpha>.
struct JCModel {
    double omega_c = 1.0;
    double omega_s = 1.0;
    double g = 0.1;
    Complex alpha = 1.0;
    int n_max = -1;   // -1: cutoff rule
    Complex a = 1.0;
    Complex b = 0.0;

    double detuning() const { return omega_s - omega_c; }
    double mean_photons() const { return std::norm(alpha); }
};

// Fills n_max, checks normalization and returns warnings (e.g. strong coupling).
std::vector<std::string> validate(JCModel& m);

struct Observables {
    double excited = 0.0;       // <|e><e|>
    Complex sigma_minus = 0.0;  // <sigma_->
    Complex a = 0.0;            // <a>
    Complex adag_sm = 0.0;      // <a^dag sigma_->
    double photons = 0.0;       // <a^dag a>
};

// Exact evolution inside the invariant blocks {|e,n>, |g,n+1>}.
class BlockEvolution {
public:
    explicit BlockEvolution(JCModel m);

    const JCModel& model() const { return m_; }
    // Amplitudes in the qubit (x) Fock ordering, qubit index 0 = |e>.
    CVector state(double t) const;
    Observables observe(double t) const;

private:
    JCModel m_;
    CVector c_;                        // coherent amplitudes
    std::vector<Eigen::Matrix2d> vec_; // block eigenvectors
    std::vector<Eigen::Vector2d> val_; // block eigenvalues
    std::vector<Eigen::Vector2cd> init_;
    void amplitudes(double t, CVector& e, CVector& g) const;
};

BlockEvolution evolve_blocks(const JCModel& m);

// Dense composite data for cross-checks: qubit S, Fock C, trivial E.
LocalModel dense_model(const JCModel& m);
CMatrix dense_initial_state(const JCModel& m);

// Exact coherent-amplitude block sum of the excited population.
double excited_population(const JCModel& m, double t);
// Two-level population under the semiclassical drive, exact closed form.
double rabi_population(const JCModel& m, double t);
// Semiclassical qubit state at t (qubit index 0 = |e>).
Eigen::Vector2cd rabi_state(const JCModel& m, double t);

double autonomous_power(const JCModel& m, const Observables& o);
double semiclassical_power(const JCModel& m, double t);
// i omega_c g (<a>^* <sigma_-> - <a> <sigma_+>): semiclassical power evaluated on exact mean fields.
double mean_field_power(const JCModel& m, const Observables& o);

// zeta = 2 (g sqrt(N))^4 / Omega_N^2.
double zeta(const JCModel& m);
double rabi_frequency(const JCModel& m);   // Omega_N

struct EnvelopeFit {
    double zeta = 0.0, amplitude = 0.0, frequency = 0.0, phase = 0.0, offset = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};
// Fit c0 + A exp(-zeta t^2 / N) cos(w t + phi) by Levenberg-Marquardt.
EnvelopeFit fit_envelope(const std::vector<double>& t, const std::vector<double>& y, double mean_photons);
// Samples excited_population on [0, 0.5 sqrt(N / zeta)] and fits.
EnvelopeFit fit_zeta(const JCModel& m, std::size_t points = 4001);

struct Figure2Curve {
    double alpha = 0.0;
    int n_max = 0;
    std::vector<double> t, P_a, P_sc, P_e;
    double sup_difference = 0.0;
    double envelope_decay = 0.0;   // relative drop of |P_a| peak from the first to the second Rabi period
    double seconds = 0.0;
};

struct Figure2Params {
    double omega_c = 1.0, omega_s = 1.0, coupling = 1.0;   // coupling = g |alpha|
    Complex a = 0.0, b = 1.0;
};

Figure2Curve figure2_curve(double alpha, const TimeGrid& grid, const Figure2Params& p = {});
std::vector<Figure2Curve> figure2_scan(const std::vector<double>& alphas, const TimeGrid& grid,
                                       const Figure2Params& p = {}, int threads = 1);

}  // namespace qthermo::jc
