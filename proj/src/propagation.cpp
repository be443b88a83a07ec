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

#include <qthermo/propagation.hpp>

#include <cmath>
#include <sstream>

namespace qthermo {

DensityOperator Trajectory::state(std::size_t k) const {
    NumericPolicy p;
    if (provenance == Provenance::Generator) {
        p.positivity = 1e-6;
        p.trace = 1e-6;
    }
    return DensityOperator(layout, states.at(k), p);
}

Trajectory evolve_unitary(const Operator& H, const DensityOperator& rho0, const TimeGrid& grid) {
    if (!(H.layout() == rho0.layout())) throw InputError("evolve_unitary: layout mismatch");
    return evolve_unitary(H.matrix(), rho0.matrix(), H.layout(), grid);
}

Trajectory evolve_unitary(const CMatrix& H, const CMatrix& rho0, const HilbertLayout& layout, const TimeGrid& grid) {
    const Eigen::Index n = H.rows();
    if (n > kDenseCap) {
        std::ostringstream os;
        os << "evolve_unitary: dimension " << n << " exceeds the dense cap " << kDenseCap
           << "; use the block-diagonal engine";
        throw InputError(os.str());
    }
    if (rho0.rows() != n || layout.total() != n) throw InputError("evolve_unitary: dimension mismatch");
    if (!is_hermitian(H, default_policy().hermiticity)) throw ValidationError("evolve_unitary: H is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(H));
    const RVector& w = es.eigenvalues();
    const CMatrix& v = es.eigenvectors();
    const CMatrix r0 = v.adjoint() * rho0 * v;
    Trajectory tr;
    tr.layout = layout;
    tr.grid = grid;
    tr.provenance = Provenance::Unitary;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        CVector ph(n);
        for (Eigen::Index i = 0; i < n; ++i) ph(i) = std::exp(Complex(0.0, -w(i) * t));
        const CMatrix rt = ph.asDiagonal() * r0 * ph.conjugate().asDiagonal();
        tr.states.push_back(symmetrized(CMatrix(v * rt * v.adjoint())));
        tr.trace_drift.push_back(std::abs(tr.states.back().trace().real() - 1.0));
    }
    return tr;
}

namespace {

CMatrix rk4(const Generator& g, CMatrix rho, double t0, double t1, int n) {
    const double h = (t1 - t0) / n;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + i * h;
        const GeneratorSnapshot s0 = g.at(t), sm = g.at(t + 0.5 * h), s1 = g.at(t + h);
        const CMatrix k1 = s0.apply(rho);
        const CMatrix k2 = sm.apply(CMatrix(rho + 0.5 * h * k1));
        const CMatrix k3 = sm.apply(CMatrix(rho + 0.5 * h * k2));
        const CMatrix k4 = s1.apply(CMatrix(rho + h * k3));
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

}  // namespace

Trajectory evolve_generator(const Generator& g, const DensityOperator& rho0, const TimeGrid& grid, double tol,
                            const NumericPolicy& policy) {
    if (rho0.dim() != g.dim()) throw InputError("evolve_generator: state dimension does not match generator");
    if (!(tol > 0.0)) throw InputError("evolve_generator: tolerance must be positive");
    Trajectory tr;
    tr.layout = g.layout();
    tr.grid = grid;
    tr.provenance = Provenance::Generator;
    tr.tolerance = tol;
    tr.states.push_back(rho0.matrix());
    tr.trace_drift.push_back(0.0);
    tr.min_eigenvalue = min_eigenvalue(rho0.matrix());
    int n = 1;
    std::size_t soft = 0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t0 = grid[k - 1], t1 = grid[k], dt = t1 - t0;
        const CMatrix& start = tr.states.back();
        CMatrix coarse = rk4(g, start, t0, t1, n);
        CMatrix fine;
        for (;;) {
            fine = rk4(g, start, t0, t1, 2 * n);
            const double err = inf_norm(CMatrix(fine - coarse));
            if (err < tol * dt) {
                if (err < tol * dt / 64.0 && n > 1) n /= 2;
                break;
            }
            n *= 2;
            if (n > (1 << 20)) throw ValidationError("evolve_generator: step refinement did not converge");
            coarse = fine;
        }
        fine = symmetrized(fine);
        const double lo = min_eigenvalue(fine);
        tr.min_eigenvalue = std::min(tr.min_eigenvalue, lo);
        if (lo < -policy.positivity_abort) {
            std::ostringstream os;
            os << "evolve_generator: positivity violated (eigenvalue " << lo << ") at t = " << t1;
            throw ValidationError(os.str());
        }
        if (lo < -policy.positivity) ++soft;
        tr.trace_drift.push_back(std::abs(fine.trace().real() - 1.0));
        tr.states.push_back(std::move(fine));
    }
    if (soft) tr.warnings.push_back("small negative eigenvalues at " + std::to_string(soft) + " grid points");
    return tr;
}

Trajectory reduced_trajectory(const Trajectory& traj, const std::vector<std::string>& keep) {
    Trajectory out = traj;
    out.layout = traj.layout.restricted(keep);
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        out.states[k] = partial_trace(traj.states[k], traj.layout, keep);
    return out;
}

namespace {

// Integral of the quadratic through (t0,y0),(t1,y1),(t2,y2) over [ta,tb].
double quad_piece(double t0, double t1, double t2, double y0, double y1, double y2, double ta, double tb) {
    // Lagrange basis integrals via antiderivative of (x - p)(x - q).
    auto prim = [](double x, double p, double q) { return x * x * x / 3.0 - (p + q) * x * x / 2.0 + p * q * x; };
    auto intg = [&](double p, double q) { return prim(tb, p, q) - prim(ta, p, q); };
    return y0 * intg(t1, t2) / ((t0 - t1) * (t0 - t2)) + y1 * intg(t0, t2) / ((t1 - t0) * (t1 - t2)) +
           y2 * intg(t0, t1) / ((t2 - t0) * (t2 - t1));
}

}  // namespace

double integrate(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    if (n != y.size()) throw InputError("integrate: size mismatch");
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * (t[1] - t[0]) * (y[0] + y[1]);
    double s = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) s += quad_piece(t[i], t[i + 1], t[i + 2], y[i], y[i + 1], y[i + 2], t[i], t[i + 2]);
    if (i + 1 < n)  // one interval left
        s += quad_piece(t[n - 3], t[n - 2], t[n - 1], y[n - 3], y[n - 2], y[n - 1], t[n - 2], t[n - 1]);
    return s;
}

std::vector<double> cumulative_integral(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> c(n, 0.0);
    if (n < 2) return c;
    if (n == 2) {
        c[1] = 0.5 * (t[1] - t[0]) * (y[0] + y[1]);
        return c;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t a = (i + 1 < n) ? i - 1 : n - 3;
        c[i] = c[i - 1] + quad_piece(t[a], t[a + 1], t[a + 2], y[a], y[a + 1], y[a + 2], t[i - 1], t[i]);
    }
    return c;
}

CMatrix reduced_device_map(const AssembledModel& model, const CMatrix& rho_E, double t, const CMatrix& rho_D) {
    const HilbertLayout& l = model.layout;
    const CMatrix u = unitary_exp(model.H, t);
    const CMatrix full = kron(rho_D, rho_E);
    return partial_trace(CMatrix(u * full * u.adjoint()), l, {"S", "C"});
}

double time_translation_residual(const AssembledModel& model, const CMatrix& rho_E, double t, const CMatrix& rho_D) {
    const CMatrix h0 = partial_trace(CMatrix(model.HS + model.HC), model.layout, {"S", "C"}) /
                       double(model.layout.dim_of("E"));
    const CMatrix u0 = unitary_exp(h0, t);
    const CMatrix a = reduced_device_map(model, rho_E, t, CMatrix(u0 * rho_D * u0.adjoint()));
    const CMatrix b = u0 * reduced_device_map(model, rho_E, t, rho_D) * u0.adjoint();
    return trace_norm(CMatrix(a - b));
}

}  // namespace qthermo
