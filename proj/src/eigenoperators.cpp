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

#include <qthermo/eigenoperators.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qthermo {

namespace {

void fix_phases(CMatrix& v) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        Eigen::Index best = 0;
        double mag = -1.0;
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
            const double a = std::abs(v(r, c));
            if (a > mag * (1.0 + 1e-12)) {
                mag = a;
                best = r;
            }
        }
        if (mag > 0.0) v.col(c) *= std::conj(v(best, c)) / mag;
    }
}

struct Eig {
    RVector w;
    CMatrix v;
};

Eig hermitian_eig(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(h));
    Eig e{es.eigenvalues(), es.eigenvectors()};
    fix_phases(e.v);
    return e;
}

}  // namespace

double degeneracy_tolerance(const RVector& e, const NumericPolicy& policy) {
    if (e.size() == 0) return 0.0;
    const double spread = e.maxCoeff() - e.minCoeff();
    const double scale = std::max(spread, 1e-6 * e.cwiseAbs().maxCoeff());
    return scale > 0.0 ? policy.degeneracy * scale : 1e-14;
}

CMatrix EigenoperatorSet::op(std::size_t alpha) const {
    const auto& t = non_invariant.at(alpha);
    return basis.col(t.n) * basis.col(t.m).adjoint();
}

std::vector<CMatrix> EigenoperatorSet::traceless_invariants() const {
    std::vector<CMatrix> out;
    const Eigen::Index n = dim();
    for (Eigen::Index j = 1; j < n; ++j) {
        CVector d = CVector::Zero(n);
        for (Eigen::Index k = 0; k < j; ++k) d(k) = 1.0;
        d(j) = -double(j);
        d *= std::sqrt(2.0 / (double(j) * double(j + 1)));
        out.push_back(basis * d.asDiagonal() * basis.adjoint());
    }
    return out;
}

std::vector<CMatrix> EigenoperatorSet::invariants() const {
    auto out = traceless_invariants();
    const Eigen::Index n = dim();
    out.push_back(CMatrix::Identity(n, n) / std::sqrt(double(n)));
    return out;
}

std::optional<std::size_t> EigenoperatorSet::find(Eigen::Index n, Eigen::Index m) const {
    for (std::size_t a = 0; a < non_invariant.size(); ++a)
        if (non_invariant[a].n == n && non_invariant[a].m == m) return a;
    return std::nullopt;
}

std::optional<std::size_t> EigenoperatorSet::reverse(std::size_t alpha) const {
    const auto& t = non_invariant.at(alpha);
    return find(t.m, t.n);
}

EigenoperatorSet decompose(const CMatrix& h, const NumericPolicy& policy) {
    if (h.rows() != h.cols() || h.rows() == 0) throw InputError("decompose: Hamiltonian must be square");
    if (!is_hermitian(h, policy.hermiticity)) throw ValidationError("decompose: Hamiltonian is not Hermitian");
    EigenoperatorSet s;
    s.hamiltonian = symmetrized(h);
    Eig e = hermitian_eig(s.hamiltonian);
    s.energies = e.w;
    s.basis = e.v;
    const Eigen::Index n = h.rows();
    const double tol = degeneracy_tolerance(s.energies, policy);
    auto& rep = s.degeneracy;
    rep.tolerance = tol;
    rep.min_level_gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 1; k < n; ++k) {
        const double gap = s.energies(k) - s.energies(k - 1);
        rep.min_level_gap = std::min(rep.min_level_gap, gap);
        if (gap < tol) rep.level_degenerate = true;
    }
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            if (a == b) continue;
            const double w = s.energies(b) - s.energies(a);
            if (std::abs(w) < tol) continue;  // coherence inside a degenerate level: invariant
            s.non_invariant.push_back({a, b, w});
        }
    std::vector<std::size_t> order(s.non_invariant.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return s.non_invariant[x].omega < s.non_invariant[y].omega; });
    rep.min_bohr_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < order.size(); ++i) {
        const double gap = s.non_invariant[order[i]].omega - s.non_invariant[order[i - 1]].omega;
        rep.min_bohr_gap = std::min(rep.min_bohr_gap, gap);
        if (gap < tol) {
            rep.bohr_degenerate = true;
            if (rep.coincident.size() < 16) rep.coincident.emplace_back(order[i - 1], order[i]);
        }
    }
    return s;
}

FactoredSet product_decompose(const EigenoperatorSet& device, const HilbertLayout& layout,
                              const NumericPolicy& policy) {
    if (layout.factors() != 2) throw InputError("product decomposition: layout must have two factors");
    const CMatrix& h = device.hamiltonian;
    if (h.rows() != layout.total()) throw InputError("product decomposition: dimension mismatch");
    const int ds = layout.dims[0], dc = layout.dims[1];
    const auto n = layout.total();
    const CMatrix hs = partial_trace(h, layout, {layout.labels[0]}) / double(dc);
    const CMatrix hc = partial_trace(h, layout, {layout.labels[1]}) / double(ds);
    const Complex c = h.trace() / double(n);
    const CMatrix sep = kron(hs, CMatrix::Identity(dc, dc)) + kron(CMatrix::Identity(ds, ds), hc) -
                        c * CMatrix::Identity(n, n);
    FactoredSet f;
    const double hn = std::max(inf_norm(h), 1e-300);
    f.separability_residual = inf_norm(CMatrix(h - sep)) / hn;
    if (f.separability_residual > 1e-10) {
        std::ostringstream os;
        os << "product decomposition: device Hamiltonian is not separable (residual " << f.separability_residual
           << ")";
        throw ValidationError(os.str());
    }
    f.system = decompose(hs, policy);
    f.control = decompose(hc, policy);
    for (int i = 0; i < ds; ++i)
        for (int k = 0; k < dc; ++k)
            for (int j = 0; j < ds; ++j)
                for (int l = 0; l < dc; ++l) {
                    if (i == j && k == l) continue;
                    FactoredEigenoperator e;
                    e.s_n = i;
                    e.s_m = j;
                    e.c_n = k;
                    e.c_m = l;
                    e.system = f.system.basis.col(i) * f.system.basis.col(j).adjoint();
                    e.control = f.control.basis.col(k) * f.control.basis.col(l).adjoint();
                    e.omega_system = f.system.energies(j) - f.system.energies(i);
                    e.omega = e.omega_system + f.control.energies(l) - f.control.energies(k);
                    e.system_invariant = (i == j);
                    e.control_diagonal = (k == l);
                    const CMatrix g = kron(e.system, e.control);
                    const double res = inf_norm(CMatrix(commutator(h, g) + e.omega * g));
                    f.factorization_residual = std::max(f.factorization_residual, res);
                    f.entries.push_back(std::move(e));
                }
    if (f.factorization_residual > 1e-9 * std::max(1.0, hn))
        throw ValidationError("product decomposition: factors do not reproduce device eigenoperators");
    return f;
}

CMatrix lift_degeneracy(const CMatrix& h, double eps, const NumericPolicy& policy) {
    if (!is_hermitian(h, policy.hermiticity)) throw ValidationError("lift_degeneracy: Hamiltonian is not Hermitian");
    Eig e = hermitian_eig(h);
    const Eigen::Index n = e.w.size();
    const double spread = n > 0 ? e.w.maxCoeff() - e.w.minCoeff() : 0.0;
    // Separation demanded after the lift, measured against the lifted spread.
    const double sep_rel = policy.degeneracy;
    const double need = 10.0 * sep_rel * std::max(spread + n * n * std::abs(eps), 1e-6);
    if (!(eps > need)) {
        std::ostringstream os;
        os << "lift_degeneracy: epsilon " << eps << " too small; minimal epsilon " << need;
        throw InputError(os.str());
    }
    const double sep = 0.5 * need;
    RVector w = e.w;
    std::vector<double> bohr;  // positive Bohr frequencies among placed levels
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int k = 0;; ++k) {
            const double cand = e.w(i) + k * eps;
            bool ok = true;
            std::vector<double> fresh;
            for (Eigen::Index j = 0; j < i && ok; ++j) {
                const double d = std::abs(cand - w(j));
                if (d < sep) ok = false;
                for (double b : bohr)
                    if (std::abs(d - b) < sep) {
                        ok = false;
                        break;
                    }
                for (double b : fresh)
                    if (std::abs(d - b) < sep) {
                        ok = false;
                        break;
                    }
                fresh.push_back(d);
            }
            if (ok) {
                w(i) = cand;
                bohr.insert(bohr.end(), fresh.begin(), fresh.end());
                break;
            }
            if (k > 4 * n * n + 8) throw ValidationError("lift_degeneracy: could not separate spectrum");
        }
    }
    return e.v * w.cast<Complex>().asDiagonal() * e.v.adjoint();
}

}  // namespace qthermo
