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

#include <qthermo/jc.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace qthermo::jc {

std::vector<std::string> validate(JCModel& m) {
    std::vector<std::string> warn;
    if (!(m.g >= 0.0)) throw InputError("JC model: coupling must be non-negative");
    const double n2 = std::norm(m.a) + std::norm(m.b);
    if (std::abs(n2 - 1.0) > 1e-12) throw InputError("JC model: |a|^2 + |b|^2 must equal 1");
    const int need = coherent_cutoff(m.alpha);
    if (m.n_max < 0) m.n_max = need;
    if (m.n_max < need)
        throw InputError("JC model: n_max " + std::to_string(m.n_max) + " below required " + std::to_string(need));
    if (m.g * std::abs(m.alpha) > 0.1 * std::abs(m.omega_s))
        warn.push_back("g|alpha| exceeds 0.1 omega_s: outside the weak-drive regime");
    return warn;
}

BlockEvolution::BlockEvolution(JCModel m) : m_(std::move(m)) {
    validate(m_);
    c_ = coherent_amplitudes(m_.alpha, m_.n_max);
    const double d = m_.detuning();
    const int nb = m_.n_max;
    vec_.resize(nb + 1);
    val_.resize(nb + 1);
    init_.resize(nb + 1);
    for (int k = 1; k <= nb; ++k) {
        // basis (|e,k-1>, |g,k>)
        Eigen::Matrix2d h;
        const double off = m_.g * std::sqrt(double(k));
        h << m_.omega_c * k + 0.5 * d, off, off, m_.omega_c * k - 0.5 * d;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
        es.computeDirect(h);
        vec_[k] = es.eigenvectors();
        val_[k] = es.eigenvalues();
        init_[k] = Eigen::Vector2cd(m_.b * c_(k - 1), m_.a * c_(k));
    }
}

void BlockEvolution::amplitudes(double t, CVector& e, CVector& g) const {
    const int nb = m_.n_max;
    e = CVector::Zero(nb + 1);
    g = CVector::Zero(nb + 1);
    const double d = m_.detuning();
    // |g,0> and |e,n_max> are uncoupled inside the truncation.
    g(0) = m_.a * c_(0) * std::exp(Complex(0.0, -(0.5 * m_.omega_c - 0.5 * m_.omega_s - 0.0 * d) * t));
    e(nb) = m_.b * c_(nb) * std::exp(Complex(0.0, -(m_.omega_c * (nb + 0.5) + 0.5 * m_.omega_s) * t));
    for (int k = 1; k <= nb; ++k) {
        const Eigen::Matrix2d& v = vec_[k];
        const Eigen::Vector2cd proj = v.transpose().cast<Complex>() * init_[k];
        const Eigen::Vector2cd ph(proj(0) * std::exp(Complex(0.0, -val_[k](0) * t)),
                                  proj(1) * std::exp(Complex(0.0, -val_[k](1) * t)));
        const Eigen::Vector2cd out = v.cast<Complex>() * ph;
        e(k - 1) = out(0);
        g(k) = out(1);
    }
}

CVector BlockEvolution::state(double t) const {
    CVector e, g;
    amplitudes(t, e, g);
    CVector psi(2 * (m_.n_max + 1));
    psi << e, g;
    return psi;
}

Observables BlockEvolution::observe(double t) const {
    CVector e, g;
    amplitudes(t, e, g);
    Observables o;
    const int nb = m_.n_max;
    for (int n = 0; n <= nb; ++n) {
        o.excited += std::norm(e(n));
        o.sigma_minus += std::conj(g(n)) * e(n);
        o.photons += n * (std::norm(e(n)) + std::norm(g(n)));
        if (n >= 1) {
            const double s = std::sqrt(double(n));
            o.a += s * (std::conj(e(n - 1)) * e(n) + std::conj(g(n - 1)) * g(n));
        }
        if (n < nb) o.adag_sm += std::sqrt(double(n + 1)) * std::conj(g(n + 1)) * e(n);
    }
    return o;
}

BlockEvolution evolve_blocks(const JCModel& m) { return BlockEvolution(m); }

LocalModel dense_model(const JCModel& m0) {
    JCModel m = m0;
    validate(m);
    LocalModel lm;
    const int nm = m.n_max;
    lm.H_S = 0.5 * m.omega_s * ops::sigma_z();
    lm.H_C = m.omega_c * (ops::number(nm) + 0.5 * CMatrix::Identity(nm + 1, nm + 1));
    lm.H_E = CMatrix::Zero(1, 1);
    lm.sc.push_back({m.g * ops::sigma_minus(), ops::creation(nm)});
    lm.sc.push_back({m.g * ops::sigma_plus(), ops::annihilation(nm)});
    lm.control_edge_levels = 2;
    return lm;
}

CMatrix dense_initial_state(const JCModel& m0) {
    JCModel m = m0;
    validate(m);
    Eigen::Vector2cd q(m.b, m.a);   // index 0 = |e>
    const CVector c = coherent_amplitudes(m.alpha, m.n_max);
    const CVector psi = kron(CMatrix(q), CMatrix(c));
    return psi * psi.adjoint();
}

double excited_population(const JCModel& m0, double t) {
    JCModel m = m0;
    validate(m);
    const CVector c = coherent_amplitudes(m.alpha, m.n_max);
    const double d = m.detuning();
    double pe = std::norm(m.b * c(m.n_max));
    for (int k = 1; k <= m.n_max; ++k) {
        const double om = std::sqrt(d * d + 4.0 * m.g * m.g * k);
        const double co = std::cos(0.5 * om * t), si = std::sin(0.5 * om * t);
        const Complex amp = m.b * c(k - 1) * Complex(co, -d / om * si) -
                            I * m.a * c(k) * (2.0 * m.g * std::sqrt(double(k)) / om) * si;
        pe += std::norm(amp);
    }
    return pe;
}

Eigen::Vector2cd rabi_state(const JCModel& m, double t) {
    const double d = m.detuning();
    const Complex ga = m.g * m.alpha;
    const double om = std::sqrt(d * d + 4.0 * std::norm(ga));
    const double co = std::cos(0.5 * om * t), si = om > 0.0 ? std::sin(0.5 * om * t) / om : 0.5 * t;
    // rotating frame: U = cos - i sin/Omega [[d, 2 g alpha], [2 g alpha^*, -d]]
    const Complex e = (co - I * si * d) * m.b - I * si * 2.0 * ga * m.a;
    const Complex g = -I * si * 2.0 * std::conj(ga) * m.b + (co + I * si * d) * m.a;
    // back to the lab frame with exp(-i omega_c sigma_z t / 2)
    return {e * std::exp(Complex(0.0, -0.5 * m.omega_c * t)), g * std::exp(Complex(0.0, 0.5 * m.omega_c * t))};
}

double rabi_population(const JCModel& m, double t) { return std::norm(rabi_state(m, t)(0)); }

double autonomous_power(const JCModel& m, const Observables& o) { return -2.0 * m.omega_c * m.g * o.adag_sm.imag(); }

double semiclassical_power(const JCModel& m, double t) {
    const Eigen::Vector2cd q = rabi_state(m, t);
    const Complex sm = std::conj(q(1)) * q(0);
    const Complex at = m.alpha * std::exp(Complex(0.0, -m.omega_c * t));
    return -2.0 * m.omega_c * m.g * (std::conj(at) * sm).imag();
}

double mean_field_power(const JCModel& m, const Observables& o) {
    return -2.0 * m.omega_c * m.g * (std::conj(o.a) * o.sigma_minus).imag();
}

double rabi_frequency(const JCModel& m) {
    const double d = m.detuning();
    return std::sqrt(d * d + 4.0 * m.g * m.g * m.mean_photons());
}

double zeta(const JCModel& m) {
    const double x = m.g * m.g * m.mean_photons();
    const double om = rabi_frequency(m);
    return 2.0 * x * x / (om * om);
}

EnvelopeFit fit_envelope(const std::vector<double>& t, const std::vector<double>& y, double N) {
    const std::size_t n = t.size();
    if (n < 8 || y.size() != n) throw InputError("envelope fit: need at least 8 samples");
    EnvelopeFit f;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= double(n);
    // Frequency guess from zero crossings around the mean.
    int crossings = 0;
    for (std::size_t i = 1; i < n; ++i)
        if ((y[i - 1] - mean) * (y[i] - mean) < 0.0) ++crossings;
    double w = crossings > 0 ? M_PI * crossings / (t.back() - t.front()) : 1.0;
    // Linear solve for amplitude and phase at that frequency.
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd r(n);
    for (std::size_t i = 0; i < n; ++i) {
        A(Eigen::Index(i), 0) = std::cos(w * t[i]);
        A(Eigen::Index(i), 1) = std::sin(w * t[i]);
        r(Eigen::Index(i)) = y[i] - mean;
    }
    const Eigen::Vector2d ab = A.colPivHouseholderQr().solve(r);
    Eigen::VectorXd p(5);
    p << mean, std::hypot(ab(0), ab(1)), w, std::atan2(-ab(1), ab(0)), 0.0;

    auto residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& res, Eigen::MatrixXd* J) {
        res.resize(Eigen::Index(n));
        if (J) J->resize(Eigen::Index(n), 5);
        for (std::size_t i = 0; i < n; ++i) {
            const double ti = t[i];
            const double env = std::exp(-q(4) * ti * ti / N);
            const double ph = q(2) * ti + q(3);
            const double c = std::cos(ph), s = std::sin(ph);
            res(Eigen::Index(i)) = q(0) + q(1) * env * c - y[i];
            if (J) {
                const auto k = Eigen::Index(i);
                (*J)(k, 0) = 1.0;
                (*J)(k, 1) = env * c;
                (*J)(k, 2) = -q(1) * env * s * ti;
                (*J)(k, 3) = -q(1) * env * s;
                (*J)(k, 4) = -q(1) * env * c * ti * ti / N;
            }
        }
    };
    double lambda = 1e-3;
    Eigen::VectorXd res;
    Eigen::MatrixXd J;
    residuals(p, res, &J);
    double cost = res.squaredNorm();
    for (f.iterations = 0; f.iterations < 500; ++f.iterations) {
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * res;
        Eigen::MatrixXd lhs = JtJ;
        lhs.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
        const Eigen::VectorXd step = lhs.ldlt().solve(-g);
        Eigen::VectorXd trial = p + step;
        Eigen::VectorXd tres;
        residuals(trial, tres, nullptr);
        const double tcost = tres.squaredNorm();
        if (tcost < cost) {
            const double rel = (cost - tcost) / std::max(cost, 1e-300);
            p = trial;
            cost = tcost;
            residuals(p, res, &J);
            lambda = std::max(lambda / 3.0, 1e-12);
            if (rel < 1e-14 || step.norm() < 1e-13 * (1.0 + p.norm())) {
                f.converged = true;
                break;
            }
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) {
                f.converged = true;
                break;
            }
        }
    }
    f.offset = p(0);
    f.amplitude = p(1);
    f.frequency = p(2);
    f.phase = p(3);
    f.zeta = p(4);
    f.rms_residual = std::sqrt(cost / double(n));
    return f;
}

EnvelopeFit fit_zeta(const JCModel& m, std::size_t points) {
    const double N = m.mean_photons();
    const double tmax = 0.5 * std::sqrt(N / zeta(m));
    const TimeGrid g = TimeGrid::uniform(0.0, tmax, points);
    std::vector<double> y(points);
    for (std::size_t i = 0; i < points; ++i) y[i] = excited_population(m, g[i]);
    return fit_envelope(g.t, y, N);
}

Figure2Curve figure2_curve(double alpha, const TimeGrid& grid, const Figure2Params& p) {
    const auto t0 = std::chrono::steady_clock::now();
    JCModel m;
    m.omega_c = p.omega_c;
    m.omega_s = p.omega_s;
    m.alpha = alpha;
    m.g = p.coupling / alpha;
    m.a = p.a;
    m.b = p.b;
    validate(m);
    const BlockEvolution ev(m);
    Figure2Curve c;
    c.alpha = alpha;
    c.n_max = m.n_max;
    c.t = grid.t;
    for (double t : grid.t) {
        const Observables o = ev.observe(t);
        c.P_a.push_back(autonomous_power(m, o));
        c.P_sc.push_back(semiclassical_power(m, t));
        c.P_e.push_back(o.excited);
        c.sup_difference = std::max(c.sup_difference, std::abs(c.P_a.back() - c.P_sc.back()));
    }
    const double period = 2.0 * M_PI / rabi_frequency(m);
    double peak1 = 0.0, peak2 = 0.0;
    for (std::size_t i = 0; i < c.t.size(); ++i) {
        if (c.t[i] <= period) peak1 = std::max(peak1, std::abs(c.P_a[i]));
        else if (c.t[i] <= 2 * period) peak2 = std::max(peak2, std::abs(c.P_a[i]));
    }
    c.envelope_decay = peak1 > 0.0 ? (peak1 - peak2) / peak1 : 0.0;
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

std::vector<Figure2Curve> figure2_scan(const std::vector<double>& alphas, const TimeGrid& grid,
                                       const Figure2Params& p, int threads) {
    std::vector<Figure2Curve> out(alphas.size());
    threads = std::max(1, std::min<int>(threads, int(alphas.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = figure2_curve(alphas[i], grid, p);
        return out;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = std::size_t(w); i < alphas.size(); i += std::size_t(threads))
                out[i] = figure2_curve(alphas[i], grid, p);
        });
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace qthermo::jc
