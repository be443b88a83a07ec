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

#include <qthermo/thermo_ledger.hpp>
#include <qthermo/version.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace qthermo {

AutonomousExact autonomous_exact_fluxes(const AssembledModel& m, const CMatrix& rho) {
    AutonomousExact f;
    auto rate = [&](const CMatrix& a) { return trace_product(CMatrix(-I * commutator(a, m.H)), rho).real(); };
    f.E_S_dot = rate(m.HS);
    f.E_C_dot = rate(m.HC);
    f.E_E_dot = rate(m.HE);
    f.P = -f.E_C_dot;
    f.Q_dot = -f.E_E_dot;
    return f;
}

namespace {

double channel_sum(const GeneratorSnapshot& s, const CMatrix& rho, const std::vector<double>& weights) {
    const auto& f = *s.frame;
    double acc = 0.0;
    for (std::size_t a = 0; a < f.jumps.size(); ++a) {
        if (s.rates[a] == 0.0 || weights[a] == 0.0) continue;
        const CMatrix& F = f.jumps[a];
        acc += weights[a] * s.rates[a] * trace_product(CMatrix(F.adjoint() * F), rho).real();
    }
    return acc;
}

double tr_real(const CMatrix& a, const CMatrix& b) { return trace_product(a, b).real(); }

}  // namespace

AutonomousLocal autonomous_local_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& rho,
                                        const CMatrix* H_C) {
    AutonomousLocal f;
    const CMatrix lr = s.apply(rho);
    const CMatrix dr = s.apply_dissipator(rho);
    f.E_S_dot = tr_real(H_S, lr);
    f.Q_dot = tr_real(H_S, dr);
    f.P = trace_product(CMatrix(-I * commutator(H_S, s.hamiltonian())), rho).real();
    std::vector<double> w;
    for (double om : s.frame->omegas) w.push_back(-om);
    f.Q_dot_eigen = channel_sum(s, rho, w);
    if (H_C) f.control_isolation = tr_real(*H_C, dr);
    return f;
}

AutonomousGlobal autonomous_global_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& H_C,
                                          const CMatrix& H_SC, const CMatrix& rho) {
    AutonomousGlobal f;
    const CMatrix lr = s.apply(rho);
    f.E_S_dot = tr_real(H_S, lr);
    f.P = -tr_real(H_C, lr);
    f.phi = tr_real(H_SC, lr);
    f.Q_dot = tr_real(CMatrix(H_S + H_C), lr);
    std::vector<double> w;
    for (double om : s.frame->omegas) w.push_back(-om);
    f.Q_dot_eigen = channel_sum(s, rho, w) - f.phi;
    return f;
}

FluxPoint semiclassical_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& dH_sc,
                               const CMatrix& rho) {
    FluxPoint f;
    f.P = tr_real(dH_sc, rho);
    f.E_S_dot = tr_real(H_S, s.apply(rho));
    f.Q_dot = f.E_S_dot - f.P;
    return f;
}

ScGlobal sc_global_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& X, const CMatrix& dX,
                          const CMatrix& rho) {
    ScGlobal f;
    const CMatrix lr = s.apply(rho);
    const CMatrix v = s.h_bare - H_S;
    f.phi = tr_real(v, lr);
    f.E_S_dot = tr_real(H_S, lr);
    f.Q_dot = tr_real(X, lr) + tr_real(dX, rho) - f.phi;
    std::vector<double> w;
    for (double om : s.frame->omegas) w.push_back(-om);
    f.Q_dot_eigen = channel_sum(s, rho, w) - f.phi;
    f.P = f.E_S_dot - f.Q_dot;
    return f;
}

SpectralFunction detailed_balance_spectrum(double gamma, double beta) {
    return [gamma, beta](double w) { return w > 0.0 ? gamma : gamma * std::exp(beta * w); };
}

External external_fluxes(const GeneratorSnapshot& s, const CMatrix& H_S, const CMatrix& dH_sc,
                         const std::vector<double>& omega_e, const SpectralFunction& G, const CMatrix& rho) {
    const auto& f = *s.frame;
    if (omega_e.size() != f.jumps.size()) throw InputError("external fluxes: frequency count mismatch");
    double q = 0.0;
    for (std::size_t a = 0; a < f.jumps.size(); ++a) {
        const CMatrix& F = f.jumps[a];
        q -= omega_e[a] * G(omega_e[a]) * tr_real(CMatrix(F.adjoint() * F), rho);
    }
    const CMatrix lr = s.apply(rho);
    External e;
    e.original.Q_dot = e.modified.Q_dot = q;
    e.original.E_S_dot = tr_real(dH_sc, rho) + tr_real(s.h_bare, lr);
    e.modified.E_S_dot = tr_real(H_S, lr);
    e.original.P = e.original.E_S_dot - q;
    e.modified.P = e.modified.E_S_dot - q;
    return e;
}

DynamicalMapHeat dynamical_map_heat(const GeneratorSnapshot& s, const CMatrix& rho, double beta,
                                    const CMatrix* attractor, const NumericPolicy& policy) {
    DynamicalMapHeat h;
    const auto& f = *s.frame;
    std::vector<double> w;
    for (double om : f.omegas) w.push_back(-om);
    h.detailed_balance = channel_sum(s, rho, w);
    const bool zero_t = std::isinf(beta);
    if (!(beta > 0.0)) throw InputError("dynamical map heat: beta must be positive");
    if (!zero_t) {
        const double T = 1.0 / beta;
        double acc = 0.0;
        bool ok = true;
        for (std::size_t a = 0; a < f.jumps.size() && ok; ++a) {
            if (s.rates[a] == 0.0) continue;
            const auto b = f.reverse(a);
            if (!b || s.rates[*b] <= 0.0) {
                ok = false;
                break;
            }
            const CMatrix& F = f.jumps[a];
            acc += s.rates[a] * std::log(s.rates[*b] / s.rates[a]) * tr_real(CMatrix(F.adjoint() * F), rho);
        }
        if (ok)
            h.channel = T * acc;
        else
            h.note = "channel form undefined: a reverse rate vanishes";
        if (attractor) {
            const double lo = min_eigenvalue(*attractor);
            if (lo <= policy.log_floor) {
                h.note += (h.note.empty() ? "" : "; ") + std::string("attractor is singular; general form skipped");
            } else {
                const CMatrix ln = hermitian_log(*attractor, policy.log_floor);
                h.general = -T * tr_real(s.apply_dissipator(rho), ln);
            }
        }
    } else {
        h.note = "zero temperature: detailed-balance limit only";
    }
    return h;
}

double von_neumann_entropy(const CMatrix& rho) {
    const RVector w = eigenvalues_hermitian(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w(i) > 0.0) s -= w(i) * std::log(w(i));
    return s;
}

EntropySuite entropy_suite(const CMatrix& rho, const CMatrix& H) {
    if (rho.rows() != H.rows()) throw InputError("entropy suite: dimension mismatch");
    EntropySuite e;
    e.von_neumann = von_neumann_entropy(rho);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(H));
    const RVector& en = es.eigenvalues();
    const CMatrix& v = es.eigenvectors();
    const double tol = 1e-9 * std::max(1.0, en.cwiseAbs().maxCoeff());
    // Populations of energy eigenspaces (degenerate levels grouped).
    double s = 0.0;
    Eigen::Index i = 0;
    while (i < en.size()) {
        Eigen::Index j = i;
        double p = 0.0;
        while (j < en.size() && en(j) - en(i) <= tol) {
            p += v.col(j).dot(rho * v.col(j)).real();
            ++j;
        }
        if (p > 0.0) s -= p * std::log(p);
        i = j;
    }
    e.energy = s;
    e.coherence = e.energy - e.von_neumann;
    return e;
}

double relative_entropy(const CMatrix& rho, const CMatrix& sigma, double floor) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(sigma));
    const RVector& w = es.eigenvalues();
    const CMatrix& v = es.eigenvectors();
    const CMatrix r = v.adjoint() * rho * v;
    double cross = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double p = r(i, i).real();
        if (w(i) <= floor) {
            if (p > 1e-14) return std::numeric_limits<double>::infinity();
            continue;
        }
        cross += p * std::log(w(i));
    }
    return -von_neumann_entropy(rho) - cross;
}

EntropyProduction entropy_production(const CMatrix& rho_initial, const CMatrix& rho_final,
                                     const HilbertLayout& layout, const std::vector<std::string>& env,
                                     std::optional<double> beta, const CMatrix* H_env) {
    std::vector<std::string> sys;
    for (const auto& l : layout.labels)
        if (std::find(env.begin(), env.end(), l) == env.end()) sys.push_back(l);
    if (sys.empty() || env.empty()) throw InputError("entropy production: need non-empty system and environment");
    std::vector<std::string> both = sys;
    both.insert(both.end(), env.begin(), env.end());
    const HilbertLayout lse = layout.restricted(both);
    const HilbertLayout ls = layout.restricted(sys), le = layout.restricted(env);
    const CMatrix rse = partial_trace(rho_final, layout, both);
    const CMatrix rs = partial_trace(rho_final, layout, sys);
    const CMatrix re = partial_trace(rho_final, layout, env);
    const CMatrix re0 = partial_trace(rho_initial, layout, env);
    const CMatrix rs0 = partial_trace(rho_initial, layout, sys);
    const CMatrix ref = permute_factors(kron(rs, re0), concat(ls, le), lse);
    EntropyProduction ep;
    ep.sigma = relative_entropy(rse, ref);
    ep.mutual_information = von_neumann_entropy(rs) + von_neumann_entropy(re) - von_neumann_entropy(rse);
    ep.environment_divergence = relative_entropy(re, re0);
    if (beta && H_env && lse.total() == layout.total()) {
        const double dS = von_neumann_entropy(rs) - von_neumann_entropy(rs0);
        const double dE = trace_product(*H_env, CMatrix(re - re0)).real();
        ep.thermal_shortcut = dS + *beta * dE;
    }
    return ep;
}

double spohn_functional(const GeneratorSnapshot& s, const CMatrix& rho, const CMatrix& attractor, double floor) {
    const CMatrix lr = s.apply(rho);
    const double sdot = -tr_real(lr, hermitian_log(rho, floor));
    return sdot + tr_real(lr, hermitian_log(attractor, floor));
}

double local_entropy_production(const GeneratorSnapshot& s, const CMatrix& rho, const CMatrix& rho_th, double beta,
                                double control_energy_rate) {
    return spohn_functional(s, rho, rho_th) - beta * control_energy_rate;
}

std::vector<AuditEntry> first_law_audit(const FluxSeries& series) {
    std::vector<AuditEntry> out;
    const auto& t = series.t;
    const double span = t.size() > 1 ? t.back() - t.front() : 0.0;
    for (const auto& a : series.approaches) {
        if (a.skipped) continue;
        AuditEntry e;
        e.approach = a.approach;
        if (a.work_exact && a.heat_exact) {
            e.W = *a.work_exact;
            e.Q = *a.heat_exact;
            e.mode = "exact";
        } else {
            e.W = integrate(t, a.P);
            e.Q = integrate(t, a.Q_dot);
            e.mode = t.size() > 2 ? "simpson" : "endpoint";
        }
        e.dE = a.E_S.size() == t.size() && !t.empty() ? a.E_S.back() - a.E_S.front() : integrate(t, a.E_S_dot);
        e.residual = std::abs(e.dE - e.W - e.Q);
        if (series.provenance == Provenance::Unitary && e.mode == "exact")
            e.bound = 1e-9 * std::max({std::abs(e.W), std::abs(e.Q), 1.0});
        else if (series.provenance == Provenance::Generator)
            e.bound = 10.0 * series.tolerance * std::max(1.0, span);
        else
            e.bound = 1e-6 * std::max({std::abs(e.W), std::abs(e.Q), 1.0});
        e.pass = e.residual <= e.bound;
        out.push_back(e);
    }
    return out;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

OutputHeader make_header(const std::string& model_text, std::uint64_t seed) {
    OutputHeader h;
    h.version = kVersion;
    h.model_hash = fnv1a_hex(model_text);
    const NumericPolicy& p = default_policy();
    std::ostringstream os;
    os << "hermiticity=" << p.hermiticity << ";trace=" << p.trace << ";positivity=" << p.positivity
       << ";sec=" << p.sec << ";degeneracy=" << p.degeneracy << ";integrator=" << p.integrator;
    h.numeric_policy = os.str();
    h.sign_conventions = "hbar=kB=1;W=-Delta<H_C>;Q=Delta<H_S>-W;P=dW/dt;Q_dot>0 into system";
    h.seed = seed;
    return h;
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

}  // namespace

namespace {

void write_header(std::ostream& os, const OutputHeader& h) {
    os << "# version=" << h.version << "\n# model_hash=" << h.model_hash << "\n# numeric_policy=" << h.numeric_policy
       << "\n# sign_conventions=" << h.sign_conventions << "\n# seed=" << h.seed << "\n";
}

nlohmann::ordered_json header_json(const OutputHeader& h) {
    return {{"version", h.version},
            {"model_hash", h.model_hash},
            {"numeric_policy", h.numeric_policy},
            {"sign_conventions", h.sign_conventions},
            {"seed", h.seed}};
}

}  // namespace

void write_flux_csv(std::ostream& os, const FluxSeries& s, const OutputHeader& h) {
    write_header(os, h);
    os << "t,approach,E_S_dot,P,Q_dot\n";
    for (std::size_t k = 0; k < s.t.size(); ++k)
        for (const auto& a : s.approaches) {
            if (a.skipped) continue;
            os << num(s.t[k]) << ',' << a.approach << ',' << num(a.E_S_dot[k]) << ',' << num(a.P[k]) << ','
               << num(a.Q_dot[k]) << '\n';
        }
}

std::string ledger_json(const FluxSeries& s, const std::vector<AuditEntry>& audit, const OutputHeader& h) {
    nlohmann::ordered_json j;
    j["header"] = header_json(h);
    j["provenance"] = s.provenance == Provenance::Unitary ? "unitary" : "generator";
    j["integrator_tolerance"] = s.tolerance;
    j["time_span"] = s.t.empty() ? nlohmann::ordered_json::array() : nlohmann::ordered_json::array({s.t.front(), s.t.back()});
    j["points"] = s.t.size();
    auto& appr = j["approaches"] = nlohmann::ordered_json::array();
    for (const auto& a : s.approaches) {
        nlohmann::ordered_json e;
        e["approach"] = a.approach;
        if (a.skipped) {
            e["skipped"] = true;
            e["reason"] = a.reason;
        } else {
            for (const auto& au : audit)
                if (au.approach == a.approach) {
                    e["W"] = au.W;
                    e["Q"] = au.Q;
                    e["Delta_E_S"] = au.dE;
                    e["first_law_residual"] = au.residual;
                    e["bound"] = au.bound;
                    e["mode"] = au.mode;
                    e["verdict"] = au.pass ? "pass" : "fail";
                }
        }
        appr.push_back(e);
    }
    return j.dump(2);
}

void write_figure2_csv(std::ostream& os, const std::vector<jc::Figure2Curve>& curves, const OutputHeader& h) {
    write_header(os, h);
    os << "alpha,t,P_autonomous,P_semiclassical,P_e\n";
    for (const auto& c : curves)
        for (std::size_t k = 0; k < c.t.size(); ++k)
            os << num(c.alpha) << ',' << num(c.t[k]) << ',' << num(c.P_a[k]) << ',' << num(c.P_sc[k]) << ','
               << num(c.P_e[k]) << '\n';
}

std::string figure2_json(const std::vector<jc::Figure2Curve>& curves, const jc::EnvelopeFit* fit,
                         const jc::JCModel* fm, const OutputHeader& h) {
    nlohmann::ordered_json j;
    j["header"] = header_json(h);
    auto& arr = j["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : curves)
        arr.push_back({{"alpha", c.alpha},
                       {"n_max", c.n_max},
                       {"sup_abs_P_autonomous_minus_P_semiclassical", c.sup_difference},
                       {"envelope_decay_one_rabi_period", c.envelope_decay}});
    if (fit && fm) {
        const double pred = jc::zeta(*fm);
        j["zeta_fit"] = {{"alpha_abs", std::abs(fm->alpha)},
                         {"g", fm->g},
                         {"predicted", pred},
                         {"fitted", fit->zeta},
                         {"relative_error", std::abs(fit->zeta - pred) / pred},
                         {"frequency", fit->frequency},
                         {"rms_residual", fit->rms_residual},
                         {"converged", fit->converged}};
    }
    return j.dump(2);
}

}  // namespace qthermo
