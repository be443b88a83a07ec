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

#include <qthermo/composite_model.hpp>

#include <cmath>
#include <limits>

namespace qthermo {

namespace ops {

CMatrix sigma_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix sigma_y() {
    CMatrix m(2, 2);
    m << 0, -I, I, 0;
    return m;
}

CMatrix sigma_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

CMatrix sigma_plus() {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

CMatrix sigma_minus() { return sigma_plus().transpose(); }

CMatrix annihilation(int n_max) {
    if (n_max < 0) throw InputError("annihilation: negative cutoff");
    CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

CMatrix creation(int n_max) { return annihilation(n_max).adjoint(); }

CMatrix number(int n_max) {
    CMatrix m = CMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) m(n, n) = double(n);
    return m;
}

}  // namespace ops

namespace {

void check_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1) throw InputError(std::string(what) + ": not a square matrix");
}

void check_hermitian(const CMatrix& m, const char* what, const NumericPolicy& p) {
    check_square(m, what);
    if (!is_hermitian(m, p.hermiticity)) throw ValidationError(std::string(what) + ": not Hermitian");
}

CMatrix sum_pairs(const std::vector<CouplingPair>& pairs, Eigen::Index da, Eigen::Index db, const char* what) {
    CMatrix out = CMatrix::Zero(da * db, da * db);
    for (const auto& p : pairs) {
        if (p.a.rows() != da || p.a.cols() != da || p.b.rows() != db || p.b.cols() != db)
            throw InputError(std::string(what) + ": coupling operator dimension mismatch");
        out += kron(p.a, p.b);
    }
    return out;
}

double edge_projected(const CMatrix& comm, const HilbertLayout& layout, int edge) {
    if (edge <= 0) return inf_norm(comm);
    const int dc = layout.dim_of("C");
    CMatrix pc = CMatrix::Zero(dc, dc);
    for (int k = 0; k < std::max(dc - edge, 0); ++k) pc(k, k) = 1.0;
    const CMatrix p = embed(pc, layout, {"C"});
    return inf_norm(p * comm * p);
}

}  // namespace

HilbertLayout LocalModel::layout() const {
    return HilbertLayout({int(H_S.rows()), int(H_C.rows()), int(H_E.rows())}, {"S", "C", "E"});
}

HilbertLayout GlobalModel::layout() const {
    return HilbertLayout({int(H_S.rows()), int(H_C.rows()), int(H_E.rows())}, {"S", "C", "E"});
}

HilbertLayout GlobalModel::device_layout() const {
    return HilbertLayout({int(H_S.rows()), int(H_C.rows())}, {"S", "C"});
}

CMatrix device_hamiltonian(const LocalModel& m) {
    const HilbertLayout d({int(m.H_S.rows()), int(m.H_C.rows())}, {"S", "C"});
    return embed(m.H_S, d, {"S"}) + embed(m.H_C, d, {"C"}) + sum_pairs(m.sc, m.H_S.rows(), m.H_C.rows(), "S-C");
}

CMatrix device_hamiltonian(const GlobalModel& m) {
    const HilbertLayout d = m.device_layout();
    return embed(m.H_S, d, {"S"}) + embed(m.H_C, d, {"C"}) + m.H_SC;
}

AssembledModel assemble_local_unchecked(const LocalModel& m, const NumericPolicy& policy) {
    check_hermitian(m.H_S, "H_S", policy);
    check_hermitian(m.H_C, "H_C", policy);
    check_hermitian(m.H_E, "H_E", policy);
    AssembledModel a;
    a.layout = m.layout();
    const auto ds = m.H_S.rows(), dc = m.H_C.rows(), de = m.H_E.rows();
    a.HS = embed(m.H_S, a.layout, {"S"});
    a.HC = embed(m.H_C, a.layout, {"C"});
    a.HE = embed(m.H_E, a.layout, {"E"});
    a.HSC = embed(sum_pairs(m.sc, ds, dc, "S-C"), a.layout, {"S", "C"});
    a.HSE = embed(sum_pairs(m.se, ds, de, "S-E"), a.layout, {"S", "E"});
    if (!is_hermitian(a.HSC, policy.hermiticity)) throw ValidationError("S-C coupling sum is not Hermitian");
    if (!is_hermitian(a.HSE, policy.hermiticity)) throw ValidationError("S-E coupling sum is not Hermitian");
    a.H = symmetrized(a.HS + a.HC + a.HE + a.HSC + a.HSE);

    const CMatrix h0 = a.HS + a.HC;
    const double n_dev = inf_norm(h0) * inf_norm(a.HSC);
    a.sec_device = n_dev == 0.0 ? 0.0 : edge_projected(commutator(h0, a.HSC), a.layout, m.control_edge_levels) / n_dev;
    a.sec_bath = relative_commutator(a.HS + a.HE, a.HSE);
    return a;
}

AssembledModel assemble_local(const LocalModel& m, const NumericPolicy& policy) {
    AssembledModel a = assemble_local_unchecked(m, policy);
    if (a.sec_device > policy.sec) throw SecViolation("[H_S + H_C, H_SC]", a.sec_device);
    if (a.sec_bath > policy.sec) throw SecViolation("[H_S + H_E, H_SE]", a.sec_bath);
    return a;
}

AssembledModel assemble_global_unchecked(const GlobalModel& m, const NumericPolicy& policy) {
    check_hermitian(m.H_S, "H_S", policy);
    check_hermitian(m.H_C, "H_C", policy);
    check_hermitian(m.H_E, "H_E", policy);
    const HilbertLayout d = m.device_layout();
    if (m.H_SC.rows() != d.total() || m.H_SC.cols() != d.total())
        throw InputError("H_SC: dimension does not match S (x) C");
    check_hermitian(m.H_SC, "H_SC", policy);
    AssembledModel a;
    a.layout = m.layout();
    a.HS = embed(m.H_S, a.layout, {"S"});
    a.HC = embed(m.H_C, a.layout, {"C"});
    a.HE = embed(m.H_E, a.layout, {"E"});
    a.HSC = embed(m.H_SC, a.layout, {"S", "C"});
    a.HSE = sum_pairs(m.de, d.total(), m.H_E.rows(), "D-E");
    if (!is_hermitian(a.HSE, policy.hermiticity)) throw ValidationError("D-E coupling sum is not Hermitian");
    a.H = symmetrized(a.HS + a.HC + a.HE + a.HSC + a.HSE);
    a.sec_bath = relative_commutator(a.HS + a.HC + a.HSC + a.HE, a.HSE);
    return a;
}

AssembledModel assemble_global(const GlobalModel& m, const NumericPolicy& policy) {
    AssembledModel a = assemble_global_unchecked(m, policy);
    if (a.sec_bath > policy.sec) throw SecViolation("[H_D + H_E, H_DE]", a.sec_bath);
    return a;
}

ThermalOperationReport validate_thermal_operation(const ThermalOperationSpec& spec, const NumericPolicy& policy) {
    const auto n = spec.layout.total();
    if (spec.U.rows() != n || spec.U.cols() != n) throw InputError("thermal operation: U dimension mismatch");
    const CMatrix h0 = embed(spec.H_S, spec.layout, {"S"}) + embed(spec.H_C, spec.layout, {"C"}) +
                       embed(spec.H_E, spec.layout, {"E"});
    ThermalOperationReport r;
    const double nh = inf_norm(h0);
    r.commutator_norm = nh == 0.0 ? 0.0 : inf_norm(commutator(h0, spec.U)) / nh;
    r.unitarity_defect = inf_norm(CMatrix(spec.U.adjoint() * spec.U - CMatrix::Identity(n, n)));
    r.pass = r.commutator_norm <= policy.sec && r.unitarity_defect <= policy.sec;
    return r;
}

CMatrix thermal_matrix(const CMatrix& h, double beta) {
    if (!(beta >= 0.0)) throw InputError("thermal state: beta must be non-negative");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(h));
    const RVector& e = es.eigenvalues();
    RVector w(e.size());
    if (std::isinf(beta)) {
        const double tol = 1e-12 * std::max(1.0, e.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < e.size(); ++i) w(i) = e(i) - e(0) <= tol ? 1.0 : 0.0;
    } else {
        for (Eigen::Index i = 0; i < e.size(); ++i) w(i) = std::exp(-beta * (e(i) - e(0)));
    }
    w /= w.sum();
    return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

DensityOperator thermal_state(const Operator& h, double beta) {
    if (!is_hermitian(h.matrix(), default_policy().hermiticity))
        throw ValidationError("thermal state: Hamiltonian is not Hermitian");
    return DensityOperator(h.layout(), thermal_matrix(h.matrix(), beta));
}

int coherent_cutoff(Complex alpha) {
    const double a = std::abs(alpha);
    return int(std::ceil(a * a + 10.0 * a + 10.0));
}

CVector coherent_amplitudes(Complex alpha, int n_max) {
    const int need = coherent_cutoff(alpha);
    if (n_max < need)
        throw InputError("coherent state: n_max " + std::to_string(n_max) + " below required " + std::to_string(need));
    const double r = std::abs(alpha), phi = std::arg(alpha);
    CVector c(n_max + 1);
    if (r == 0.0) {
        c.setZero();
        c(0) = 1.0;
        return c;
    }
    const double lr = std::log(r);
    for (int n = 0; n <= n_max; ++n) {
        const double lm = -0.5 * r * r + n * lr - 0.5 * std::lgamma(n + 1.0);
        c(n) = std::polar(std::exp(lm), n * phi);
    }
    const double norm2 = c.squaredNorm();
    if (1.0 - norm2 > 1e-8) throw ValidationError("coherent state: truncation leakage above 1e-8");
    return c / std::sqrt(norm2);
}

DensityOperator coherent_state(Complex alpha, int n_max) {
    return DensityOperator::pure(HilbertLayout::single(n_max + 1, "C"), coherent_amplitudes(alpha, n_max));
}

}  // namespace qthermo
