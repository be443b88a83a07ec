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

#include <qthermo/semiclassical.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace qthermo {

ControlFields::ControlFields(const CMatrix& H_C, const CMatrix& rho_C0, std::vector<CMatrix> control_ops)
    : ops_(std::move(control_ops)), h_c_(H_C) {
    if (rho_C0.rows() != H_C.rows()) throw InputError("control fields: state dimension mismatch");
    for (const auto& c : ops_)
        if (c.rows() != H_C.rows()) throw InputError("control fields: operator dimension mismatch");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(H_C));
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors();
    rho0_eig_ = basis_.adjoint() * rho_C0 * basis_;
}

CMatrix ControlFields::control_state(double t) const {
    const Eigen::Index n = energies_.size();
    CMatrix r = rho0_eig_;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) r(i, j) *= std::exp(Complex(0.0, -(energies_(i) - energies_(j)) * t));
    return basis_ * r * basis_.adjoint();
}

Complex ControlFields::value(std::size_t j, double t) const { return trace_product(ops_.at(j), control_state(t)); }

Complex ControlFields::rate(std::size_t j, double t) const {
    // d/dt tr(C rho) = tr(i[H_C, C] rho)
    return trace_product(CMatrix(I * commutator(h_c_, ops_.at(j))), control_state(t));
}

std::vector<std::vector<Complex>> ControlFields::sample(const TimeGrid& grid) const {
    std::vector<std::vector<Complex>> out(grid.size(), std::vector<Complex>(ops_.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const CMatrix r = control_state(grid[k]);
        for (std::size_t j = 0; j < ops_.size(); ++j) out[k][j] = trace_product(ops_[j], r);
    }
    return out;
}

ControlFields extract_fields(const LocalModel& model, const CMatrix& rho_C0) {
    std::vector<CMatrix> cs;
    for (const auto& p : model.sc) cs.push_back(p.b);
    return ControlFields(model.H_C, rho_C0, std::move(cs));
}

HamiltonianSchedule build_sc_hamiltonian(const LocalModel& model, const CMatrix& rho_C0) {
    auto fields = std::make_shared<ControlFields>(extract_fields(model, rho_C0));
    std::vector<CMatrix> s_ops;
    for (const auto& p : model.sc) s_ops.push_back(p.a);
    // The pair list must close under adjoint for a Hermitian mean field.
    {
        const Eigen::Index ds = model.H_S.rows(), dc = model.H_C.rows();
        CMatrix hsc = CMatrix::Zero(ds * dc, ds * dc);
        for (const auto& p : model.sc) hsc += kron(p.a, p.b);
        if (!is_hermitian(hsc, default_policy().hermiticity))
            throw ValidationError("semiclassical Hamiltonian: S-C pairs do not form a Hermitian coupling");
    }
    HamiltonianSchedule s;
    const CMatrix hs = model.H_S;
    s.dim = hs.rows();
    s.h = [fields, s_ops, hs](double t) {
        const CMatrix rc = fields->control_state(t);
        CMatrix h = hs;
        for (std::size_t j = 0; j < s_ops.size(); ++j) h += s_ops[j] * trace_product(fields->op(j), rc);
        return CMatrix(symmetrized(h));
    };
    s.dh = [fields, s_ops, ds = hs.rows()](double t) {
        CMatrix d = CMatrix::Zero(ds, ds);
        for (std::size_t j = 0; j < s_ops.size(); ++j) d += s_ops[j] * fields->rate(j, t);
        return CMatrix(symmetrized(d));
    };
    return s;
}

HamiltonianSchedule build_sc_hamiltonian(const GlobalModel& model, const CMatrix& rho_C0) {
    const HilbertLayout d = model.device_layout();
    if (model.H_SC.rows() != d.total()) throw InputError("semiclassical Hamiltonian: H_SC dimension mismatch");
    auto fields = std::make_shared<ControlFields>(model.H_C, rho_C0, std::vector<CMatrix>{});
    const CMatrix hs = model.H_S, hsc = model.H_SC;
    const CMatrix hc_full = embed(model.H_C, d, {"C"});
    const CMatrix rate_op = I * commutator(hc_full, hsc);   // d/dt of the Heisenberg interaction
    HamiltonianSchedule s;
    s.dim = hs.rows();
    s.h = [fields, hs, hsc, d](double t) {
        const CMatrix w = kron(CMatrix::Identity(hs.rows(), hs.rows()), fields->control_state(t));
        return CMatrix(symmetrized(CMatrix(hs + partial_trace(CMatrix(hsc * w), d, {"S"}))));
    };
    s.dh = [fields, rate_op, d, ns = hs.rows()](double t) {
        const CMatrix w = kron(CMatrix::Identity(ns, ns), fields->control_state(t));
        return CMatrix(symmetrized(partial_trace(CMatrix(rate_op * w), d, {"S"})));
    };
    return s;
}

RVector differentiate(const std::vector<double>& t, const RVector& y) {
    const Eigen::Index n = Eigen::Index(t.size());
    RVector d = RVector::Zero(n);
    if (n < 2) return d;
    const Eigen::Index w = std::min<Eigen::Index>(5, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index lo = std::max<Eigen::Index>(0, k - w / 2);
        lo = std::min(lo, n - w);
        // Derivative of the Lagrange interpolant through t[lo..lo+w) at t[k].
        double acc = 0.0;
        for (Eigen::Index i = lo; i < lo + w; ++i) {
            double li = 0.0;
            if (i == k) {
                for (Eigen::Index m = lo; m < lo + w; ++m)
                    if (m != k) li += 1.0 / (t[k] - t[m]);
            } else {
                double num = 1.0, den = t[i] - t[k];
                for (Eigen::Index m = lo; m < lo + w; ++m) {
                    if (m == i || m == k) continue;
                    num *= t[k] - t[m];
                    den *= t[i] - t[m];
                }
                li = num / den;
            }
            acc += li * y(i);
        }
        d(k) = acc;
    }
    return d;
}

InvariantFrame::InvariantFrame(HamiltonianSchedule h_sc, const CMatrix& H_S, TimeGrid grid, FrameOptions options,
                               const NumericPolicy& policy)
    : h_(std::move(h_sc)) {
    if (h_.dim != H_S.rows()) throw InputError("invariant frame: dimension mismatch");
    const double dev = inf_norm(CMatrix(h_.at(grid.front()) - H_S));
    if (options.enforce_switch_on && dev > policy.switch_on) {
        std::ostringstream os;
        os << "invariant frame: H_sc(0) differs from H_S by " << dev << "; the control term must vanish at t = 0";
        throw ValidationError(os.str());
    }
    eig0_ = decompose(H_S, policy);
    prop_ = TimeOrderedPropagator(h_, grid, options.substeps, true, policy.propagator_refine);
    const TimeGrid& g = prop_.grid();
    const Eigen::Index n = H_S.rows();
    chi_ = RMatrix::Zero(Eigen::Index(g.size()), n);
    const int sub = std::max(1, options.substeps);
    for (std::size_t k = 1; k < g.size(); ++k) {
        CMatrix psi = prop_.at_index(k - 1) * eig0_.basis;
        const double h = (g[k] - g[k - 1]) / sub;
        for (Eigen::Index j = 0; j < n; ++j) chi_(Eigen::Index(k), j) = chi_(Eigen::Index(k) - 1, j);
        RVector jump = RVector::Zero(n);
        for (int s = 0; s < sub; ++s) {
            const CMatrix next = prop_.step(g[k - 1] + s * h, g[k - 1] + (s + 1) * h, 1) * psi;
            for (Eigen::Index j = 0; j < n; ++j) {
                const Complex ov = psi.col(j).dot(next.col(j));
                if (std::abs(ov) < 1e-3) throw ValidationError("invariant frame: frame state overlap vanished; refine the grid");
                const double inc = -std::arg(ov);
                chi_(Eigen::Index(k), j) += inc;
                jump(j) += inc;
            }
            psi = next;
        }
        for (Eigen::Index j = 0; j < n; ++j)
            if (std::abs(jump(j)) > M_PI) {
                std::ostringstream os;
                os << "invariant frame: phase jump " << jump(j) << " exceeds pi between t = " << g[k - 1] << " and "
                   << g[k] << "; refine the grid";
                throw ValidationError(os.str());
            }
    }
    const auto& tr = eig0_.non_invariant;
    omega_e_ = RMatrix::Zero(Eigen::Index(g.size()), Eigen::Index(tr.size()));
    for (std::size_t a = 0; a < tr.size(); ++a) {
        RVector th(Eigen::Index(g.size()));
        for (std::size_t k = 0; k < g.size(); ++k) th(Eigen::Index(k)) = theta(a, k);
        omega_e_.col(Eigen::Index(a)) = differentiate(g.t, th);
    }
}

double InvariantFrame::theta(std::size_t alpha, std::size_t k) const {
    const auto& t = eig0_.non_invariant.at(alpha);
    return chi_(Eigen::Index(k), t.m) - chi_(Eigen::Index(k), t.n);
}

double InvariantFrame::omega_e_at(std::size_t alpha, double t) const {
    const TimeGrid& g = grid();
    if (g.size() == 1) return omega_e_(0, Eigen::Index(alpha));
    const std::size_t k = g.locate(t);
    const double f = std::clamp((t - g[k]) / (g[k + 1] - g[k]), 0.0, 1.0);
    return (1 - f) * omega_e_(Eigen::Index(k), Eigen::Index(alpha)) + f * omega_e_(Eigen::Index(k + 1), Eigen::Index(alpha));
}

CMatrix InvariantFrame::X(double t) const {
    const CMatrix u = prop_.at(t);
    return u * eig0_.hamiltonian * u.adjoint();
}

CMatrix InvariantFrame::dX(double t) const {
    return -I * commutator(h_.at(t), X(t));
}

CMatrix InvariantFrame::state(Eigen::Index j, double t) const { return prop_.at(t) * eig0_.basis.col(j); }

CMatrix InvariantFrame::jump(std::size_t alpha, double t) const {
    const CMatrix u = prop_.at(t);
    return u * eig0_.op(alpha) * u.adjoint();
}

std::vector<CMatrix> InvariantFrame::jumps(double t) const {
    const CMatrix u = prop_.at(t);
    std::vector<CMatrix> out;
    for (std::size_t a = 0; a < eig0_.non_invariant.size(); ++a) out.push_back(u * eig0_.op(a) * u.adjoint());
    return out;
}

std::vector<CMatrix> InvariantFrame::traceless_invariants(double t) const {
    const CMatrix u = prop_.at(t);
    auto out = eig0_.traceless_invariants();
    for (auto& r : out) r = u * r * u.adjoint();
    return out;
}

namespace {

struct Pieces {
    HilbertLayout layout;
    CMatrix hc_rate;   // i[H_C, H_SC] embedded
    std::vector<CMatrix> s_full, c_rate_local;
};

Pieces pieces(const LocalModel& model) {
    Pieces p;
    p.layout = model.layout();
    const AssembledModel a = assemble_local_unchecked(model);
    p.hc_rate = I * commutator(a.HC, a.HSC);
    for (const auto& c : model.sc) {
        p.s_full.push_back(embed(c.a, p.layout, {"S"}));
        p.c_rate_local.push_back(I * commutator(model.H_C, c.b));
    }
    return p;
}

}  // namespace

std::vector<double> autonomous_power(const std::vector<CMatrix>& states, const LocalModel& model) {
    const Pieces p = pieces(model);
    std::vector<double> out;
    for (const auto& r : states) out.push_back(trace_product(p.hc_rate, r).real());
    return out;
}

std::vector<double> mean_field_power(const std::vector<CMatrix>& states, const LocalModel& model) {
    const Pieces p = pieces(model);
    std::vector<double> out;
    for (const auto& r : states) {
        const CMatrix rc = partial_trace(r, p.layout, {"C"});
        Complex acc = 0.0;
        for (std::size_t j = 0; j < p.s_full.size(); ++j)
            acc += trace_product(p.s_full[j], r) * trace_product(p.c_rate_local[j], rc);
        out.push_back(acc.real());
    }
    return out;
}

std::vector<double> correlation_correction(const std::vector<CMatrix>& states, const LocalModel& model) {
    const Pieces p = pieces(model);
    const HilbertLayout se = p.layout.restricted({"S", "E"});
    const HilbertLayout sec({se.dims[0], se.dims[1], p.layout.dim_of("C")}, {"S", "E", "C"});
    std::vector<double> out;
    for (const auto& r : states) {
        const CMatrix rse = partial_trace(r, p.layout, {"S", "E"});
        const CMatrix rc = partial_trace(r, p.layout, {"C"});
        const CMatrix prod = permute_factors(kron(rse, rc), sec, p.layout);
        const CMatrix chi = r - prod;
        out.push_back(trace_product(p.hc_rate, chi).real());
    }
    return out;
}

}  // namespace qthermo
