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

#include <qthermo/jc.hpp>
#include <qthermo/propagation.hpp>
#include <qthermo/semiclassical.hpp>

using namespace qthermo;

namespace {

jc::JCModel small(double detuning = 0.0) {
    jc::JCModel m;
    m.omega_c = 1.0;
    m.omega_s = 1.0 + detuning;
    m.g = 0.3;
    m.alpha = Complex(0.8, 0.4);
    m.a = std::sqrt(0.3);
    m.b = Complex(0.0, std::sqrt(0.7));
    return m;
}

// Dense Hamiltonian built from scratch in the qubit (x) Fock ordering.
CMatrix dense_h(const jc::JCModel& m) {
    const int d = m.n_max + 1;
    CMatrix a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    CMatrix sz(2, 2), sm(2, 2);
    sz << 1, 0, 0, -1;
    sm << 0, 0, 1, 0;
    const CMatrix i2 = CMatrix::Identity(2, 2), ic = CMatrix::Identity(d, d);
    const CMatrix ad = a.adjoint();
    const CMatrix nn = ad * a;
    return m.omega_c * oracle::naive_kron(i2, CMatrix(nn + 0.5 * ic)) + 0.5 * m.omega_s * oracle::naive_kron(sz, ic) +
           m.g * (oracle::naive_kron(sm, ad) + oracle::naive_kron(CMatrix(sm.adjoint()), a));
}

}  // namespace

TEST_CASE("validate fills the cutoff and rejects bad input") {
    jc::JCModel m = small();
    jc::validate(m);
    CHECK(m.n_max == coherent_cutoff(m.alpha));
    jc::JCModel bad = small();
    bad.a = 1.0;
    CHECK_THROWS_AS(jc::validate(bad), InputError);
    jc::JCModel low = small();
    low.n_max = 3;
    CHECK_THROWS_AS(jc::validate(low), InputError);
    jc::JCModel strong = small();
    CHECK_FALSE(jc::validate(strong).empty());
}

TEST_CASE("block evolution matches dense Taylor propagation") {
    for (double det : {0.0, 0.37}) {
        jc::JCModel m = small(det);
        jc::validate(m);
        const CMatrix h = dense_h(m);
        const auto ev = jc::evolve_blocks(m);
        const CVector psi0 = ev.state(0.0);
        for (double t : {0.5, 3.0, 7.5}) {
            const CVector want = oracle::taylor_exp(CMatrix(Complex(0, -t) * h)) * psi0;
            CHECK((ev.state(t) - want).norm() < 1e-10);
        }
        // dense_model and dense_initial_state agree with the scratch construction
        const AssembledModel am = assemble_local_unchecked(jc::dense_model(m));
        CHECK(oracle::max_abs(am.H - h) < 1e-13);
        CHECK(oracle::max_abs(jc::dense_initial_state(m) - psi0 * psi0.adjoint()) < 1e-14);
    }
}

TEST_CASE("observables from block amplitudes") {
    jc::JCModel m = small(0.2);
    jc::validate(m);
    const auto ev = jc::evolve_blocks(m);
    const int d = m.n_max + 1;
    CMatrix a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    CMatrix sm(2, 2), pe(2, 2);
    sm << 0, 0, 1, 0;
    pe << 1, 0, 0, 0;
    const CMatrix ic = CMatrix::Identity(d, d), i2 = CMatrix::Identity(2, 2);
    const double t = 2.7;
    const CVector psi = ev.state(t);
    auto ex = [&](const CMatrix& o) { return Complex(psi.dot(o * psi)); };
    const jc::Observables o = ev.observe(t);
    CHECK(std::abs(o.excited - ex(oracle::naive_kron(pe, ic)).real()) < 1e-13);
    CHECK(std::abs(o.sigma_minus - ex(oracle::naive_kron(sm, ic))) < 1e-13);
    CHECK(std::abs(o.a - ex(oracle::naive_kron(i2, a))) < 1e-12);
    CHECK(std::abs(o.adag_sm - ex(oracle::naive_kron(sm, CMatrix(a.adjoint())))) < 1e-12);
    CHECK(std::abs(o.photons - ex(oracle::naive_kron(i2, CMatrix(a.adjoint() * a))).real()) < 1e-11);
    CHECK(std::abs(jc::excited_population(m, t) - o.excited) < 1e-13);
}

TEST_CASE("semiclassical qubit: closed form against RK4 on the lab-frame drive") {
    jc::JCModel m = small(0.25);
    const Complex alpha = m.alpha;
    auto h = [&](double t) {
        const Complex at = alpha * std::exp(Complex(0, -m.omega_c * t));
        CMatrix x(2, 2);
        x << 0.5 * m.omega_s, m.g * at, m.g * std::conj(at), -0.5 * m.omega_s;
        return x;
    };
    const CVector psi0 = Eigen::Vector2cd(m.b, m.a);
    for (double t : {0.7, 4.0, 9.3}) {
        const CVector want = oracle::rk4_schrodinger(h, psi0, 0.0, t, 20000);
        CHECK((jc::rabi_state(m, t) - want).norm() < 1e-10);
        CHECK(jc::rabi_population(m, t) == doctest::Approx(std::norm(want(0))).epsilon(1e-9));
    }
}

TEST_CASE("resonant Rabi population is sin^2(g|alpha| t)") {
    jc::JCModel m;
    m.g = 0.05;
    m.alpha = 3.0;
    for (double t : {1.0, 5.0, 11.0})
        CHECK(jc::rabi_population(m, t) == doctest::Approx(std::pow(std::sin(0.15 * t), 2)).epsilon(1e-13));
}

TEST_CASE("powers: block formulas against dense operator expectations") {
    jc::JCModel m = small();
    jc::validate(m);
    const LocalModel lm = jc::dense_model(m);
    const AssembledModel am = assemble_local(lm);
    const auto ev = jc::evolve_blocks(m);
    std::vector<CMatrix> states;
    for (double t : {0.0, 1.3, 4.4}) {
        const CVector psi = ev.state(t);
        states.push_back(psi * psi.adjoint());
    }
    const auto pa = autonomous_power(states, lm);
    const auto pm = mean_field_power(states, lm);
    const auto cc = correlation_correction(states, lm);
    const double ts[] = {0.0, 1.3, 4.4};
    for (std::size_t k = 0; k < states.size(); ++k) {
        const jc::Observables o = ev.observe(ts[k]);
        CHECK(std::abs(jc::autonomous_power(m, o) - pa[k]) < 1e-12);
        CHECK(std::abs(jc::mean_field_power(m, o) - pm[k]) < 1e-12);
        CHECK(std::abs(jc::autonomous_power(m, o) - jc::mean_field_power(m, o) - cc[k]) < 1e-12);
    }
    // Semiclassical power at t = 0 equals the mean-field power on the initial product state.
    CHECK(std::abs(jc::semiclassical_power(m, 0.0) - pm[0]) < 1e-12);
}

TEST_CASE("zeta and Rabi frequency") {
    jc::JCModel m;
    m.g = 0.1;
    m.alpha = 10.0;
    CHECK(jc::rabi_frequency(m) == doctest::Approx(2.0));
    CHECK(jc::zeta(m) == doctest::Approx(0.5));
}

TEST_CASE("envelope fit recovers synthetic parameters") {
    std::vector<double> t, y;
    for (int i = 0; i <= 3000; ++i) {
        const double x = 0.004 * i;
        t.push_back(x);
        y.push_back(0.5 + 0.45 * std::exp(-0.37 * x * x / 50.0) * std::cos(2.1 * x + 0.3));
    }
    const jc::EnvelopeFit f = jc::fit_envelope(t, y, 50.0);
    CHECK(f.converged);
    CHECK(f.zeta == doctest::Approx(0.37).epsilon(1e-6));
    CHECK(f.frequency == doctest::Approx(2.1).epsilon(1e-8));
    CHECK(f.rms_residual < 1e-8);
    CHECK_THROWS_AS(jc::fit_envelope({0.0, 1.0}, {1.0, 2.0}, 1.0), InputError);
}

TEST_CASE("figure curve bookkeeping") {
    const TimeGrid g = TimeGrid::uniform(0.0, 6.0, 121);
    const jc::Figure2Curve c = jc::figure2_curve(5.0, g);
    CHECK(c.n_max == coherent_cutoff(5.0));
    CHECK(c.t.size() == 121);
    CHECK(c.P_e.front() == doctest::Approx(1.0));
    CHECK(c.P_a.front() == doctest::Approx(0.0).epsilon(1e-12));
    const auto scan = jc::figure2_scan({5.0, 10.0}, g, {}, 2);
    CHECK(scan[0].sup_difference == c.sup_difference);
    CHECK(scan[1].sup_difference < scan[0].sup_difference);
}

TEST_CASE("convergence metric falls as 1/alpha^2") {
    const TimeGrid g = TimeGrid::uniform(0.0, 20.0, 2001);
    const auto scan = jc::figure2_scan({20.0, 40.0, 80.0}, g, {}, 2);
    for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
        const double ratio = scan[k].sup_difference / scan[k + 1].sup_difference;
        CHECK(ratio > 2.8);
        CHECK(ratio < 8.0);
    }
}
