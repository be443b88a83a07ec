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

#include <qthermo/composite_model.hpp>

using namespace qthermo;

namespace {

// Resonant qubit-qubit-(two qubits) model with rotating-wave couplings.
LocalModel rwa_model(double g = 0.2, double k = 0.1) {
    LocalModel m;
    m.H_S = 0.5 * ops::sigma_z();
    m.H_C = 0.5 * ops::sigma_z();
    const CMatrix i2 = CMatrix::Identity(2, 2);
    m.H_E = 0.5 * (oracle::naive_kron(ops::sigma_z(), i2) + oracle::naive_kron(i2, ops::sigma_z()));
    m.sc = {{g * ops::sigma_minus(), ops::sigma_plus()}, {g * ops::sigma_plus(), ops::sigma_minus()}};
    m.se = {{k * ops::sigma_minus(), oracle::naive_kron(ops::sigma_plus(), i2)},
            {k * ops::sigma_plus(), oracle::naive_kron(ops::sigma_minus(), i2)}};
    return m;
}

}  // namespace

TEST_CASE("qubit operators in the excited-first basis") {
    CMatrix sp(2, 2), sz(2, 2);
    sp << 0, 1, 0, 0;
    sz << 1, 0, 0, -1;
    CHECK(oracle::max_abs(ops::sigma_plus() - sp) == 0.0);
    CHECK(oracle::max_abs(ops::sigma_minus() - sp.adjoint()) == 0.0);
    CHECK(oracle::max_abs(ops::sigma_z() - sz) == 0.0);
    CHECK(oracle::max_abs(commutator(ops::sigma_x(), ops::sigma_y()) - Complex(0, 2) * sz) < 1e-15);
}

TEST_CASE("Fock ladder operators") {
    const CMatrix a = ops::annihilation(4);
    CHECK(a.rows() == 5);
    for (int n = 1; n <= 4; ++n) CHECK(a(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
    CHECK(oracle::max_abs(ops::creation(4) * a - ops::number(4)) < 1e-14);
}

TEST_CASE("local SEC model conserves the free energy") {
    const AssembledModel am = assemble_local(rwa_model());
    CHECK(am.layout == HilbertLayout({2, 2, 4}, {"S", "C", "E"}));
    CHECK(am.sec_device < 1e-12);
    CHECK(am.sec_bath < 1e-12);
    CHECK(oracle::max_abs(commutator(am.H, CMatrix(am.HS + am.HC + am.HE))) < 1e-10);
}

TEST_CASE("SEC violation names the failing commutator") {
    LocalModel m = rwa_model();
    m.sc = {{0.2 * ops::sigma_x(), ops::sigma_x()}};
    try {
        assemble_local(m);
        FAIL("expected SecViolation");
    } catch (const SecViolation& e) {
        CHECK(e.which.find("H_SC") != std::string::npos);
        CHECK(e.norm > 0.1);
    }
    CHECK_NOTHROW(assemble_local_unchecked(m));
}

TEST_CASE("global model: total Hamiltonian commutes with H_D + H_E") {
    GlobalModel g;
    g.H_S = 0.5 * ops::sigma_z();
    g.H_C = 0.65 * ops::sigma_z();
    g.H_SC = 0.15 * oracle::naive_kron(ops::sigma_x(), ops::sigma_y());
    g.H_E = CMatrix::Zero(1, 1);
    const AssembledModel am = assemble_global(g);
    CHECK(oracle::max_abs(commutator(am.H, CMatrix(am.HS + am.HC + am.HSC + am.HE))) < 1e-10);
    CHECK(oracle::max_abs(device_hamiltonian(g) - (oracle::naive_kron(g.H_S, CMatrix::Identity(2, 2)) +
                                                   oracle::naive_kron(CMatrix::Identity(2, 2), g.H_C) + g.H_SC)) <
          1e-15);
}

TEST_CASE("local SEC implies the thermal-operation commutation") {
    const LocalModel m = rwa_model();
    const AssembledModel am = assemble_local(m);
    for (double t : {0.3, 1.0, 4.0}) {
        ThermalOperationSpec s{am.layout, unitary_exp(am.H, t), m.H_S, m.H_C, m.H_E};
        const ThermalOperationReport r = validate_thermal_operation(s);
        CHECK(r.pass);
        CHECK(r.commutator_norm < 1e-10);
    }
}

TEST_CASE("thermal state matches explicit Boltzmann weights") {
    const CMatrix h = 0.5 * ops::sigma_z();
    const double beta = 0.8;
    const CMatrix rho = thermal_matrix(h, beta);
    const double pe = std::exp(-beta * 0.5) / (std::exp(-beta * 0.5) + std::exp(beta * 0.5));
    CHECK(rho(0, 0).real() == doctest::Approx(pe).epsilon(1e-14));
    CHECK(std::abs(rho(0, 1)) < 1e-15);
    const CMatrix g = thermal_matrix(h, std::numeric_limits<double>::infinity());
    CHECK(g(1, 1).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(thermal_matrix(h, -1.0), InputError);
}

TEST_CASE("coherent state amplitudes are Poissonian") {
    CHECK(coherent_cutoff(100.0) == 11010);
    CHECK(coherent_cutoff(2.0) == 34);
    const Complex alpha(1.2, -0.7);
    const int nm = coherent_cutoff(alpha);
    const CVector c = coherent_amplitudes(alpha, nm);
    const double N = std::norm(alpha);
    double logp = -N;
    for (int n = 0; n <= 12; ++n) {
        if (n > 0) logp += std::log(N) - std::log(double(n));
        CHECK(std::norm(c(n)) == doctest::Approx(std::exp(logp)).epsilon(1e-10));
    }
    // a|alpha> = alpha|alpha> away from the truncation edge.
    const CVector ac = ops::annihilation(nm) * c;
    CHECK((ac - alpha * c).head(nm - 5).norm() < 1e-12);
    CHECK_THROWS_AS(coherent_amplitudes(alpha, 3), InputError);
}

TEST_CASE("empty couplings give zero SEC norms") {
    LocalModel m;
    m.H_S = 0.5 * ops::sigma_z();
    m.H_C = 0.7 * ops::sigma_z();
    m.H_E = 0.3 * ops::sigma_z();
    const AssembledModel am = assemble_local(m);
    CHECK(am.sec_device == 0.0);
    CHECK(am.sec_bath == 0.0);
}

TEST_CASE("truncated resonant JC coupling passes with edge levels excluded") {
    LocalModel m;
    const int nm = 6;
    m.H_S = 0.5 * ops::sigma_z();
    m.H_C = ops::number(nm);
    m.H_E = CMatrix::Zero(1, 1);
    m.sc = {{0.3 * ops::sigma_minus(), ops::creation(nm)}, {0.3 * ops::sigma_plus(), ops::annihilation(nm)}};
    m.control_edge_levels = 2;
    CHECK_NOTHROW(assemble_local(m));
}
