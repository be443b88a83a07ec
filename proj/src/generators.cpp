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

#include <qthermo/generators.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qthermo {

std::string to_string(Structure s) {
    switch (s) {
        case Structure::LocalDevice: return "local-device";
        case Structure::LocalSystem: return "local-system";
        case Structure::GlobalDevice: return "global-device";
        case Structure::ScGlobal: return "sc-global";
        case Structure::Markovian: return "markovian";
    }
    return "unknown";
}

KineticSchedule KineticSchedule::flat(std::size_t channels, double gamma) {
    KineticSchedule s;
    s.kind = "flat";
    s.rates.assign(channels, [gamma](double) { return gamma; });
    return s;
}

KineticSchedule KineticSchedule::detailed_balance(const std::vector<double>& omegas, double gamma, double beta) {
    if (!(beta >= 0.0)) throw InputError("detailed balance schedule: beta must be non-negative");
    KineticSchedule s;
    s.kind = "detailed_balance";
    for (double w : omegas) {
        const double g = w > 0.0 ? gamma : gamma * std::exp(-beta * std::abs(w));
        s.rates.push_back([g](double) { return g; });
    }
    return s;
}

KineticSchedule KineticSchedule::exp_transient(std::size_t channels, double g0, double tau) {
    if (!(tau > 0.0)) throw InputError("exp_transient schedule: tau must be positive");
    KineticSchedule s;
    s.kind = "exp_transient";
    s.rates.assign(channels, [g0, tau](double t) { return g0 * (1.0 - std::exp(-t / tau)); });
    return s;
}

KineticSchedule KineticSchedule::piecewise(const std::vector<std::vector<std::pair<double, double>>>& breakpoints) {
    KineticSchedule s;
    s.kind = "piecewise";
    for (const auto& bp : breakpoints) {
        if (bp.empty()) throw InputError("piecewise schedule: empty breakpoint list");
        for (std::size_t i = 1; i < bp.size(); ++i)
            if (!(bp[i].first > bp[i - 1].first)) throw InputError("piecewise schedule: breakpoints must increase");
        s.rates.push_back([bp](double t) {
            if (t <= bp.front().first) return bp.front().second;
            if (t >= bp.back().first) return bp.back().second;
            auto it = std::upper_bound(bp.begin(), bp.end(), t,
                                       [](double x, const std::pair<double, double>& p) { return x < p.first; });
            const auto& b = *it;
            const auto& a = *(it - 1);
            const double f = (t - a.first) / (b.first - a.first);
            return (1 - f) * a.second + f * b.second;
        });
    }
    return s;
}

KineticSchedule& KineticSchedule::with_dephasing(Eigen::Index dim, double gamma) {
    invariant_dim = dim;
    invariant = [dim, gamma](double) { return CMatrix(gamma * CMatrix::Identity(dim, dim)); };
    return *this;
}

std::optional<std::size_t> OperatorFrame::reverse(std::size_t alpha) const {
    const auto [n, m] = transitions.at(alpha);
    for (std::size_t b = 0; b < transitions.size(); ++b)
        if (transitions[b].first == m && transitions[b].second == n) return b;
    return std::nullopt;
}

CMatrix GeneratorSnapshot::apply_coherent(const CMatrix& rho) const {
    const CMatrix h = hamiltonian();
    return -I * (h * rho - rho * h);
}

CMatrix GeneratorSnapshot::apply_dissipator(const CMatrix& rho) const {
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    const auto& f = *frame;
    for (std::size_t a = 0; a < f.jumps.size(); ++a) {
        if (rates[a] == 0.0) continue;
        const CMatrix& F = f.jumps[a];
        const CMatrix ff = F.adjoint() * F;
        out += rates[a] * (F * rho * F.adjoint() - 0.5 * (ff * rho + rho * ff));
    }
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            if (r(i, j) == 0.0) continue;
            const CMatrix& Ri = f.invariants[i];
            const CMatrix& Rj = f.invariants[j];
            const CMatrix rr = Rj.adjoint() * Ri;
            out += r(i, j) * (Ri * rho * Rj.adjoint() - 0.5 * (rr * rho + rho * rr));
        }
    return out;
}

CMatrix GeneratorSnapshot::apply(const CMatrix& rho) const { return apply_coherent(rho) + apply_dissipator(rho); }

namespace {

// vec(A X B) = (B^T kron A) vec(X)
CMatrix sandwich(const CMatrix& a, const CMatrix& b) { return kron(CMatrix(b.transpose()), a); }

}  // namespace

CMatrix GeneratorSnapshot::superoperator(bool coherent) const {
    const Eigen::Index n = h_bare.rows();
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix s = CMatrix::Zero(n * n, n * n);
    if (coherent) {
        const CMatrix h = hamiltonian();
        s += -I * (sandwich(h, id) - sandwich(id, h));
    }
    const auto& f = *frame;
    for (std::size_t a = 0; a < f.jumps.size(); ++a) {
        if (rates[a] == 0.0) continue;
        const CMatrix& F = f.jumps[a];
        const CMatrix ff = F.adjoint() * F;
        s += rates[a] * (sandwich(F, F.adjoint()) - 0.5 * (sandwich(ff, id) + sandwich(id, ff)));
    }
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            if (r(i, j) == 0.0) continue;
            const CMatrix& Ri = f.invariants[i];
            const CMatrix& Rj = f.invariants[j];
            const CMatrix rr = Rj.adjoint() * Ri;
            s += r(i, j) * (sandwich(Ri, Rj.adjoint()) - 0.5 * (sandwich(rr, id) + sandwich(id, rr)));
        }
    return s;
}

Generator::Generator(Structure s, HilbertLayout layout, SnapshotFn fn, bool markovian, double beta)
    : structure_(s), layout_(std::move(layout)), fn_(std::move(fn)), markovian_(markovian), beta_(beta) {}

GeneratorSnapshot Generator::at(double t) const {
    GeneratorSnapshot s = fn_(t);
    if (markovian_) {
        for (std::size_t a = 0; a < s.rates.size(); ++a)
            if (s.rates[a] < -1e-14) {
                std::ostringstream os;
                os << "generator: negative rate " << s.rates[a] << " on channel " << a << " at t = " << t
                   << " in Markovian mode";
                throw ValidationError(os.str());
            }
        if (s.r.size() > 0) {
            const double lo = min_eigenvalue(s.r);
            if (lo < -1e-12 * std::max(1.0, inf_norm(s.r))) {
                std::ostringstream os;
                os << "generator: invariant coefficient matrix not positive semidefinite at t = " << t;
                throw ValidationError(os.str());
            }
        }
    }
    return s;
}

namespace {

std::vector<CMatrix> gell_mann_diagonals(const CMatrix& basis) {
    std::vector<CMatrix> out;
    const Eigen::Index n = basis.cols();
    for (Eigen::Index j = 1; j < n; ++j) {
        CVector d = CVector::Zero(n);
        for (Eigen::Index k = 0; k < j; ++k) d(k) = 1.0;
        d(j) = -double(j);
        d *= std::sqrt(2.0 / (double(j) * double(j + 1)));
        out.push_back(basis * d.asDiagonal() * basis.adjoint());
    }
    return out;
}

void finish_frame(OperatorFrame& f, Eigen::Index n) {
    f.lamb_basis = f.invariants;
    f.lamb_basis.push_back(CMatrix::Identity(n, n) / std::sqrt(double(n)));
}

void check_schedule(const KineticSchedule& s, const OperatorFrame& f) {
    if (s.rates.size() != f.jumps.size()) {
        std::ostringstream os;
        os << "kinetic schedule: " << s.rates.size() << " rates for " << f.jumps.size() << " channels";
        throw InputError(os.str());
    }
    if (s.invariant) {
        const CMatrix r0 = s.invariant(0.0);
        if (r0.rows() != Eigen::Index(f.invariants.size()) || r0.cols() != r0.rows()) {
            std::ostringstream os;
            os << "kinetic schedule: invariant block of size " << r0.rows() << " for " << f.invariants.size()
               << " invariant operators";
            throw InputError(os.str());
        }
        if (!is_hermitian(r0, 1e-12)) throw InputError("kinetic schedule: invariant block is not Hermitian");
    }
    if (s.lamb) {
        const RVector l0 = s.lamb(0.0);
        if (l0.size() != Eigen::Index(f.lamb_basis.size())) throw InputError("kinetic schedule: Lamb-shift coefficient count mismatch");
    }
}

CMatrix lamb_matrix(const KineticSchedule& s, const OperatorFrame& f, double t, Eigen::Index n) {
    CMatrix h = CMatrix::Zero(n, n);
    if (!s.lamb) return h;
    const RVector c = s.lamb(t);
    for (Eigen::Index i = 0; i < c.size(); ++i) h += c(i) * f.lamb_basis[std::size_t(i)];
    return h;
}

void fill_rates(const KineticSchedule& s, double t, GeneratorSnapshot& snap) {
    snap.rates.resize(s.rates.size());
    for (std::size_t a = 0; a < s.rates.size(); ++a) snap.rates[a] = s.rates[a](t);
    if (s.invariant) snap.r = s.invariant(t);
}

OperatorFrame frame_from(const EigenoperatorSet& e) {
    OperatorFrame f;
    for (std::size_t a = 0; a < e.non_invariant.size(); ++a) {
        f.jumps.push_back(e.op(a));
        f.omegas.push_back(e.non_invariant[a].omega);
        f.transitions.emplace_back(e.non_invariant[a].n, e.non_invariant[a].m);
    }
    f.invariants = e.traceless_invariants();
    finish_frame(f, e.dim());
    return f;
}

Generator static_generator(Structure st, HilbertLayout layout, std::shared_ptr<const OperatorFrame> frame,
                           std::function<CMatrix(double)> bare, const KineticSchedule& schedule, double beta = -1.0) {
    check_schedule(schedule, *frame);
    const Eigen::Index n = layout.total();
    auto fn = [frame, bare, schedule, n](double t) {
        GeneratorSnapshot s;
        s.frame = frame;
        s.h_bare = bare(t);
        s.h_lamb = lamb_matrix(schedule, *frame, t, n);
        fill_rates(schedule, t, s);
        return s;
    };
    const bool markov = schedule.markovian || st == Structure::Markovian;
    return Generator(st, std::move(layout), fn, markov, beta);
}

HilbertLayout device_layout_of(const CMatrix& hs, const CMatrix& hc) {
    return HilbertLayout({int(hs.rows()), int(hc.rows())}, {"S", "C"});
}

}  // namespace

std::vector<double> local_device_omegas(const LocalModel& model) {
    const EigenoperatorSet s = decompose(model.H_S);
    std::vector<double> out;
    for (const auto& t : s.non_invariant)
        for (Eigen::Index k = 0; k < model.H_C.rows(); ++k) out.push_back(t.omega);
    return out;
}

Generator build_local_device(const LocalModel& model, const KineticSchedule& schedule, const NumericPolicy& policy) {
    assemble_local(model, policy);
    const HilbertLayout d = device_layout_of(model.H_S, model.H_C);
    const CMatrix free_dev = embed(model.H_S, d, {"S"}) + embed(model.H_C, d, {"C"});
    const FactoredSet fs = product_decompose(decompose(free_dev, policy), d, policy);
    const Eigen::Index dc = model.H_C.rows();
    auto frame = std::make_shared<OperatorFrame>();
    for (std::size_t a = 0; a < fs.system.non_invariant.size(); ++a) {
        const auto& t = fs.system.non_invariant[a];
        const CMatrix F = fs.system.op(a);
        for (Eigen::Index k = 0; k < dc; ++k) {
            const CMatrix pk = fs.control.basis.col(k) * fs.control.basis.col(k).adjoint();
            frame->jumps.push_back(kron(F, pk));
            frame->omegas.push_back(t.omega);
            frame->transitions.emplace_back(t.n * dc + k, t.m * dc + k);
        }
    }
    frame->invariants = gell_mann_diagonals(kron(fs.system.basis, fs.control.basis));
    finish_frame(*frame, d.total());
    const CMatrix hd = device_hamiltonian(model);
    return static_generator(Structure::LocalDevice, d, frame, [hd](double) { return hd; }, schedule);
}

Generator build_local_system(const CMatrix& H_S, const KineticSchedule& schedule, const HamiltonianSchedule* drive,
                             const NumericPolicy& policy) {
    const EigenoperatorSet e = decompose(H_S, policy);
    auto frame = std::make_shared<OperatorFrame>(frame_from(e));
    std::function<CMatrix(double)> bare;
    if (drive) {
        if (drive->dim != H_S.rows()) throw InputError("local system generator: drive dimension mismatch");
        bare = drive->h;
    } else {
        bare = [H_S](double) { return H_S; };
    }
    return static_generator(Structure::LocalSystem, HilbertLayout::single(int(H_S.rows()), "S"), frame, bare,
                            schedule);
}

Generator build_global_device(const GlobalModel& model, const KineticSchedule& schedule, const NumericPolicy& policy) {
    assemble_global(model, policy);
    const CMatrix hd = device_hamiltonian(model);
    const EigenoperatorSet e = decompose(hd, policy);
    if (e.degeneracy.level_degenerate)
        throw ValidationError("global device generator: degenerate device spectrum (use lift_degeneracy)");
    auto frame = std::make_shared<OperatorFrame>(frame_from(e));
    return static_generator(Structure::GlobalDevice, model.device_layout(), frame, [hd](double) { return hd; },
                            schedule);
}

Generator build_sc_global(std::shared_ptr<const InvariantFrame> fr, const KineticSchedule& schedule,
                          const NumericPolicy& policy) {
    (void)policy;
    const EigenoperatorSet& e0 = fr->initial();
    auto probe = std::make_shared<OperatorFrame>(frame_from(e0));
    check_schedule(schedule, *probe);
    const Eigen::Index n = e0.dim();
    auto fn = [fr, schedule, n, probe](double t) {
        auto f = std::make_shared<OperatorFrame>();
        const CMatrix u = fr->propagator(t);
        f->omegas = probe->omegas;
        f->transitions = probe->transitions;
        for (const auto& j : probe->jumps) f->jumps.push_back(u * j * u.adjoint());
        for (const auto& r : probe->invariants) f->invariants.push_back(u * r * u.adjoint());
        finish_frame(*f, n);
        GeneratorSnapshot s;
        s.frame = f;
        s.h_bare = fr->hamiltonian().at(t);
        s.h_lamb = lamb_matrix(schedule, *f, t, n);
        fill_rates(schedule, t, s);
        return s;
    };
    return Generator(Structure::ScGlobal, HilbertLayout::single(int(n), "S"), fn, schedule.markovian);
}

Generator build_markovian(const EigenoperatorSet& eigs, const KineticSchedule& schedule, double beta,
                          const NumericPolicy& policy) {
    (void)policy;
    auto frame = std::make_shared<OperatorFrame>(frame_from(eigs));
    check_schedule(schedule, *frame);
    if (beta >= 0.0) {
        for (double t : {0.0, 1.0}) {
            for (std::size_t a = 0; a < frame->jumps.size(); ++a) {
                if (frame->omegas[a] <= 0.0) continue;
                const auto b = frame->reverse(a);
                if (!b) continue;
                const double up = schedule.rates[*b](t), down = schedule.rates[a](t);
                const double want = down * std::exp(-beta * frame->omegas[a]);
                if (std::abs(up - want) > 1e-9 * std::max({std::abs(up), std::abs(want), 1e-300})) {
                    std::ostringstream os;
                    os << "Markovian generator: detailed balance violated on channel " << a << " (G_-a = " << up
                       << ", expected " << want << ")";
                    throw ValidationError(os.str());
                }
            }
        }
    }
    const CMatrix h = eigs.hamiltonian;
    return static_generator(Structure::Markovian, HilbertLayout::single(int(eigs.dim()), "S"), frame,
                            [h](double) { return h; }, schedule, beta);
}

Attractor instantaneous_attractor(const Generator& g, double t) {
    const GeneratorSnapshot s = g.at(t);
    const Eigen::Index n = g.dim();
    const CMatrix sup = s.superoperator(false);
    Eigen::JacobiSVD<CMatrix> svd(sup, Eigen::ComputeFullV);
    const RVector& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    Attractor a;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= 1e-9 * std::max(smax, 1e-300) || smax == 0.0) ++a.null_dim;
    a.degenerate = a.null_dim != 1;
    const CMatrix& v = svd.matrixV();
    CVector x;
    if (a.null_dim == 1) {
        x = v.col(v.cols() - 1);
    } else {
        const CMatrix nullv = v.rightCols(a.null_dim);
        const CVector mixed = vec(CMatrix(CMatrix::Identity(n, n) / double(n)));
        x = nullv * (nullv.adjoint() * mixed);
    }
    CMatrix rho = unvec(x, n);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw ValidationError("attractor: null vector has zero trace");
    rho /= tr;
    a.state = symmetrized(rho);
    return a;
}

ThermoSplit thermo_split(const Generator& g, double t) {
    ThermoSplit s;
    s.snapshot = g.at(t);
    s.coherent = s.snapshot.hamiltonian();
    s.lamb_shift = s.snapshot.h_lamb;
    return s;
}

}  // namespace qthermo
