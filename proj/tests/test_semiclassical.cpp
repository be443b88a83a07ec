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

#include <doctest.h>

#include "oracles.hpp"

#include <qthermo/propagation.hpp>
#include <qthermo/semiclassical.hpp>

using namespace qthermo;

namespace {

CMatrix plus_state() { return CMatrix::Constant(2, 2, 0.5); }

LocalModel qubit_pair(double w = 1.0, double g = 0.2) {
    LocalModel m;
    m.H_S = 0.5 * w * ops::sigma_z();
    m.H_C = 0.5 * w * ops::sigma_z();
    m.H_E = CMatrix::Zero(1, 1);
    m.sc = {{g * ops::sigma_minus(), ops::sigma_plus()}, {g * ops::sigma_plus(), ops::sigma_minus()}};
    return m;
}

HamiltonianSchedule ramped(double eps, double nu) {
    HamiltonianSchedule h;
    h.dim = 2;
    h.h = [=](double t) { return CMatrix(0.5 * ops::sigma_z() + eps * std::sin(nu * t) * ops::sigma_x()); };
    h.dh = [=](double t) { return CMatrix(eps * nu * std::cos(nu * t) * ops::sigma_x()); };
    return h;
}

}  // namespace

TEST_CASE("control fields of a precessing qubit") {
    const double w = 1.3;
    const ControlFields f(0.5 * w * ops::sigma_z(), plus_state(), {ops::sigma_plus()});
    for (double t : {0.0, 0.4, 2.5}) {
        const Complex want = 0.5 * std::exp(Complex(0, w * t));
        CHECK(std::abs(f.value(0, t) - want) < 1e-14);
        CHECK(std::abs(f.rate(0, t) - Complex(0, w) * want) < 1e-13);
    }
}

TEST_CASE("local semiclassical Hamiltonian from mean fields") {
    const LocalModel m = qubit_pair();
    const HamiltonianSchedule h = build_sc_hamiltonian(m, plus_state());
    for (double t : {0.0, 0.7, 3.1}) {
        const Complex c = 0.5 * std::exp(Complex(0, t));
        const CMatrix want = m.H_S + 0.2 * (c * ops::sigma_minus() + std::conj(c) * ops::sigma_plus());
        CHECK(oracle::max_abs(h.at(t) - want) < 1e-14);
        const CMatrix fd = (h.at(t + 1e-5) - h.at(t - 1e-5)) / 2e-5;
        CHECK(oracle::max_abs(h.derivative(t) - fd) < 1e-8);
    }
}

TEST_CASE("global semiclassical Hamiltonian is the partial trace against the control state") {
    GlobalModel g;
    g.H_S = 0.5 * ops::sigma_z();
    g.H_C = 0.65 * ops::sigma_z();
    g.H_SC = 0.15 * oracle::naive_kron(ops::sigma_x(), ops::sigma_y());
    g.H_E = CMatrix::Zero(1, 1);
    const HamiltonianSchedule h = build_sc_hamiltonian(g, plus_state());
    for (double t : {0.0, 1.0, 2.2})
        CHECK(oracle::max_abs(h.at(t) - (g.H_S + 0.15 * std::sin(1.3 * t) * ops::sigma_x())) < 1e-14);
}

TEST_CASE("time-ordered propagator matches fine RK4") {
    const HamiltonianSchedule h = ramped(0.4, 1.7);
    const TimeGrid grid = TimeGrid::uniform(0.0, 4.0, 21);
    const TimeOrderedPropagator u(h, grid, 8);
    CHECK(u.refinement_deviation() < 1e-6);
    const CVector psi0 = oracle::random_ket(2);
    for (std::size_t k : {5u, 13u, 20u}) {
        const CVector want = oracle::rk4_schrodinger(h.h, psi0, 0.0, grid[k], 20000);
        CHECK((u.at_index(k) * psi0 - want).norm() < 1e-8);
    }
    const CVector mid = oracle::rk4_schrodinger(h.h, psi0, 0.0, 1.33, 20000);
    CHECK((u.at(1.33) * psi0 - mid).norm() < 1e-8);
}

TEST_CASE("invariant frame without drive reproduces the bare frequencies") {
    const CMatrix hs = 0.5 * 1.2 * ops::sigma_z();
    const TimeGrid grid = TimeGrid::uniform(0.0, 3.0, 31);
    const InvariantFrame f(HamiltonianSchedule::constant(hs), hs, grid);
    for (std::size_t a = 0; a < f.initial().non_invariant.size(); ++a)
        for (std::size_t k = 0; k < grid.size(); k += 5) {
            CHECK(f.omega_e(a, k) == doctest::Approx(f.initial().non_invariant[a].omega).epsilon(1e-9));
            CHECK(f.theta(a, k) == doctest::Approx(f.initial().non_invariant[a].omega * grid[k]).epsilon(1e-9));
        }
}

TEST_CASE("driven invariant frame: moving eigenoperators") {
    const HamiltonianSchedule h = ramped(0.3, 0.9);
    const CMatrix hs = 0.5 * ops::sigma_z();
    const TimeGrid grid = TimeGrid::uniform(0.0, 5.0, 101);
    const InvariantFrame f(h, hs, grid);
    for (double t : {0.5, 2.05, 4.6}) {
        const CMatrix x = f.X(t);
        CHECK(oracle::max_abs(eigenvalues_hermitian(x).cast<Complex>() - eigenvalues_hermitian(hs).cast<Complex>()) <
              1e-10);
        for (std::size_t a = 0; a < f.initial().non_invariant.size(); ++a) {
            const CMatrix j = f.jump(a, t);
            CHECK(oracle::max_abs(commutator(x, j) + f.initial().non_invariant[a].omega * j) < 1e-10);
        }
        // dX/dt against a central difference of the exact propagated invariant.
        const CMatrix fd = (f.X(t + 1e-4) - f.X(t - 1e-4)) / 2e-4;
        CHECK(oracle::max_abs(f.dX(t) - fd) < 1e-6);
        for (const auto& r : f.traceless_invariants(t)) CHECK(oracle::max_abs(commutator(x, r)) < 1e-10);
    }
}

TEST_CASE("switch-on validation") {
    HamiltonianSchedule h;
    h.dim = 2;
    h.h = [](double) { return CMatrix(0.5 * ops::sigma_z() + 0.1 * ops::sigma_x()); };
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 11);
    CHECK_THROWS_AS(InvariantFrame(h, 0.5 * ops::sigma_z(), grid), ValidationError);
    FrameOptions o;
    o.enforce_switch_on = false;
    CHECK_NOTHROW(InvariantFrame(h, 0.5 * ops::sigma_z(), grid, o));
}

TEST_CASE("five-point differentiation is exact for quartics") {
    const std::vector<double> t{0.0, 0.2, 0.3, 0.7, 0.8, 1.1, 1.5, 1.6};
    RVector y(Eigen::Index(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) y(Eigen::Index(i)) = std::pow(t[i], 4) - 2 * t[i] + 1;
    const RVector d = differentiate(t, y);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(d(Eigen::Index(i)) == doctest::Approx(4 * std::pow(t[i], 3) - 2).epsilon(1e-9));
}

TEST_CASE("autonomous power splits into mean-field and correlation parts") {
    const LocalModel m = qubit_pair(1.0, 0.35);
    const AssembledModel am = assemble_local(m);
    const CMatrix rho0 = kron(kron(CMatrix(thermal_matrix(m.H_S, std::numeric_limits<double>::infinity())), plus_state()),
                              CMatrix(CMatrix::Ones(1, 1)));
    const Trajectory tr = evolve_unitary(am.H, rho0, am.layout, TimeGrid::uniform(0.0, 6.0, 25));
    const auto pa = autonomous_power(tr.states, m);
    const auto pm = mean_field_power(tr.states, m);
    const auto cc = correlation_correction(tr.states, m);
    for (std::size_t k = 0; k < pa.size(); ++k) {
        CHECK(std::abs(pa[k] - pm[k] - cc[k]) < 1e-12);
        // Oracle: i<[H_C, H_SC]> built from the assembled operators directly.
        const double want = trace_product(CMatrix(Complex(0, 1) * commutator(am.HC, am.HSC)), tr.states[k]).real();
        CHECK(std::abs(pa[k] - want) < 1e-12);
    }
    CHECK(std::abs(cc.front()) < 1e-14);   // product initial state
    double maxc = 0.0;
    for (double c : cc) maxc = std::max(maxc, std::abs(c));
    CHECK(maxc > 1e-3);
}
