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

#include <qthermo/scenarios.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace qthermo {

const std::vector<std::string>& known_approaches() {
    static const std::vector<std::string> k{"autonomous-local", "autonomous-global", "semiclassical", "sc-global",
                                            "external-original", "external-modified", "dynamical-map"};
    return k;
}

namespace {

double tr_real(const CMatrix& a, const CMatrix& b) { return trace_product(a, b).real(); }

// Collects one approach's time series.
struct Collector {
    ApproachSeries s;
    explicit Collector(std::string name) { s.approach = std::move(name); }
    void push(const FluxPoint& f, double e) {
        s.E_S_dot.push_back(f.E_S_dot);
        s.P.push_back(f.P);
        s.Q_dot.push_back(f.Q_dot);
        s.E_S.push_back(e);
    }
};

ApproachSeries skipped(const std::string& name, const std::string& reason) {
    ApproachSeries a;
    a.approach = name;
    a.skipped = true;
    a.reason = reason;
    return a;
}

bool selected(const ScenarioOptions& o, const std::string& name) {
    return o.approaches.empty() || std::find(o.approaches.begin(), o.approaches.end(), name) != o.approaches.end();
}

// Attractors are cached per distinct rate vector; dense SVD is only affordable on small spaces.
class AttractorCache {
public:
    AttractorCache(const Generator& g, bool time_dependent_frame) : g_(g), moving_(time_dependent_frame) {}

    const CMatrix* at(double t, const GeneratorSnapshot& s) {
        if (g_.dim() > 16) return nullptr;
        if (!moving_ && have_ && s.rates == rates_ && s.r.isApprox(r_)) return &state_;
        state_ = instantaneous_attractor(g_, t).state;
        rates_ = s.rates;
        r_ = s.r;
        have_ = true;
        return &state_;
    }

private:
    const Generator& g_;
    bool moving_;
    bool have_ = false;
    std::vector<double> rates_;
    CMatrix r_;
    CMatrix state_;
};

FluxPoint dynamical_map_point(const GeneratorSnapshot& s, const CMatrix& rho, double beta, const CMatrix* att,
                              const CMatrix& H_S, std::string& note) {
    const DynamicalMapHeat h = dynamical_map_heat(s, rho, beta, att);
    FluxPoint f;
    f.E_S_dot = tr_real(H_S, s.apply(rho));
    f.Q_dot = h.general ? *h.general : h.channel ? *h.channel : h.detailed_balance;
    f.P = f.E_S_dot - f.Q_dot;
    if (note.empty() && !h.note.empty()) note = h.note;
    if (note.empty() && !h.general) note = "general form unavailable on this space; channel form used";
    return f;
}

void finish(ScenarioResult& r, const ScenarioOptions& o) {
    r.series.t = o.grid.t;
    r.series.provenance = r.trajectory.provenance;
    r.series.tolerance = r.trajectory.tolerance;
    r.audit = first_law_audit(r.series);
    for (const auto& w : r.trajectory.warnings) r.notes.push_back(w);
}

ScheduleSpec schedule_or_default(const ModelFile& m) {
    if (m.schedule) return *m.schedule;
    ScheduleSpec s;
    s.kind = "flat";
    s.gamma = 0.0;
    return s;
}

std::vector<double> eigen_omegas(const EigenoperatorSet& e) {
    std::vector<double> w;
    for (const auto& t : e.non_invariant) w.push_back(t.omega);
    return w;
}

ScenarioResult local_unitary(const ModelFile& m, const ScenarioOptions& o) {
    const LocalModel& lm = *m.local;
    const AssembledModel am = assemble_local(lm);
    ScenarioResult r;
    r.structure = "unitary";
    const CMatrix rho0 = kron(kron(m.rho_S, m.rho_C), m.rho_E);
    r.trajectory = evolve_unitary(am.H, rho0, am.layout, o.grid);
    const std::string why = "needs a generator trajectory; this scenario evolves the closed composite";
    for (const auto& name : known_approaches()) {
        if (!selected(o, name)) continue;
        if (name != "autonomous-local") {
            r.series.approaches.push_back(skipped(name, name == "autonomous-global"
                                                            ? "model is local; use a global model file"
                                                            : why));
            continue;
        }
        Collector c(name);
        for (const auto& rho : r.trajectory.states) c.push(autonomous_exact_fluxes(am, rho), tr_real(am.HS, rho));
        const auto& a = r.trajectory.states.front();
        const auto& b = r.trajectory.states.back();
        c.s.work_exact = -(tr_real(am.HC, b) - tr_real(am.HC, a));
        c.s.heat_exact = -(tr_real(am.HE, b) - tr_real(am.HE, a));
        r.series.approaches.push_back(std::move(c.s));
    }
    finish(r, o);
    return r;
}

ScenarioResult local_device(const ModelFile& m, const ScenarioOptions& o) {
    const LocalModel& lm = *m.local;
    const HilbertLayout d({int(lm.H_S.rows()), int(lm.H_C.rows())}, {"S", "C"});
    const KineticSchedule ks = make_schedule(schedule_or_default(m), local_device_omegas(lm), m.beta, d.total() - 1);
    const Generator g = build_local_device(lm, ks);
    ScenarioResult r;
    r.structure = to_string(g.structure());
    r.trajectory = evolve_generator(g, DensityOperator(d, kron(m.rho_S, m.rho_C)), o.grid, o.tolerance);
    const CMatrix hs = embed(lm.H_S, d, {"S"}), hc = embed(lm.H_C, d, {"C"});
    AttractorCache cache(g, false);
    for (const auto& name : known_approaches()) {
        if (!selected(o, name)) continue;
        if (name == "autonomous-local") {
            Collector c(name);
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                c.push(autonomous_local_fluxes(g.at(o.grid[k]), hs, rho, &hc), tr_real(hs, rho));
            }
            r.series.approaches.push_back(std::move(c.s));
        } else if (name == "dynamical-map") {
            if (!m.has_beta || m.beta == 0.0) {
                r.series.approaches.push_back(skipped(name, "needs a positive beta"));
                continue;
            }
            Collector c(name);
            std::string note;
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                const GeneratorSnapshot s = g.at(o.grid[k]);
                c.push(dynamical_map_point(s, rho, m.beta, cache.at(o.grid[k], s), hs, note), tr_real(hs, rho));
            }
            if (!note.empty()) r.notes.push_back("dynamical-map: " + note);
            r.series.approaches.push_back(std::move(c.s));
        } else if (name == "autonomous-global") {
            r.series.approaches.push_back(skipped(name, "model is local; use a global model file"));
        } else {
            r.series.approaches.push_back(skipped(name, "needs the semiclassical scenario"));
        }
    }
    finish(r, o);
    return r;
}

ScenarioResult local_semiclassical(const ModelFile& m, const ScenarioOptions& o) {
    const LocalModel& lm = *m.local;
    assemble_local(lm);
    const HamiltonianSchedule hsc = build_sc_hamiltonian(lm, m.rho_C);
    const EigenoperatorSet e = decompose(lm.H_S);
    const KineticSchedule ks = make_schedule(schedule_or_default(m), eigen_omegas(e), m.beta, e.dim() - 1);
    const Generator g = build_local_system(lm.H_S, ks, &hsc);
    ScenarioResult r;
    r.structure = to_string(g.structure());
    const HilbertLayout sl = HilbertLayout::single(int(lm.H_S.rows()), "S");
    r.trajectory = evolve_generator(g, DensityOperator(sl, m.rho_S), o.grid, o.tolerance);
    AttractorCache cache(g, false);
    for (const auto& name : known_approaches()) {
        if (!selected(o, name)) continue;
        Collector c(name);
        std::string note;
        if (name == "autonomous-local") {
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                c.push(autonomous_local_fluxes(g.at(o.grid[k]), lm.H_S, rho), tr_real(lm.H_S, rho));
            }
        } else if (name == "semiclassical") {
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                c.push(semiclassical_fluxes(g.at(o.grid[k]), lm.H_S, hsc.derivative(o.grid[k]), rho),
                       tr_real(lm.H_S, rho));
            }
        } else if (name == "dynamical-map") {
            if (!m.has_beta || m.beta == 0.0) {
                r.series.approaches.push_back(skipped(name, "needs a positive beta"));
                continue;
            }
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                const GeneratorSnapshot s = g.at(o.grid[k]);
                c.push(dynamical_map_point(s, rho, m.beta, cache.at(o.grid[k], s), lm.H_S, note),
                       tr_real(lm.H_S, rho));
            }
            if (!note.empty()) r.notes.push_back("dynamical-map: " + note);
        } else if (name == "autonomous-global" || name == "sc-global" || name == "external-original" ||
                   name == "external-modified") {
            r.series.approaches.push_back(skipped(name, "needs a global model file"));
            continue;
        }
        r.series.approaches.push_back(std::move(c.s));
    }
    finish(r, o);
    return r;
}

ScenarioResult global_device(const ModelFile& m, const ScenarioOptions& o) {
    const GlobalModel& gm = *m.global;
    if (!m.schedule) throw InputError("global autonomous scenario: a kinetic schedule is required");
    const CMatrix hd = device_hamiltonian(gm);
    const EigenoperatorSet e = decompose(hd);
    const KineticSchedule ks = make_schedule(*m.schedule, eigen_omegas(e), m.beta, e.dim() - 1);
    const Generator g = build_global_device(gm, ks);
    ScenarioResult r;
    r.structure = to_string(g.structure());
    const HilbertLayout d = gm.device_layout();
    r.trajectory = evolve_generator(g, DensityOperator(d, kron(m.rho_S, m.rho_C)), o.grid, o.tolerance);
    const CMatrix hs = embed(gm.H_S, d, {"S"}), hc = embed(gm.H_C, d, {"C"});
    AttractorCache cache(g, false);
    for (const auto& name : known_approaches()) {
        if (!selected(o, name)) continue;
        Collector c(name);
        std::string note;
        if (name == "autonomous-global") {
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                c.push(autonomous_global_fluxes(g.at(o.grid[k]), hs, hc, gm.H_SC, rho), tr_real(hs, rho));
            }
        } else if (name == "dynamical-map") {
            if (!m.has_beta || m.beta == 0.0) {
                r.series.approaches.push_back(skipped(name, "needs a positive beta"));
                continue;
            }
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const CMatrix& rho = r.trajectory.states[k];
                const GeneratorSnapshot s = g.at(o.grid[k]);
                c.push(dynamical_map_point(s, rho, m.beta, cache.at(o.grid[k], s), hs, note), tr_real(hs, rho));
            }
            if (!note.empty()) r.notes.push_back("dynamical-map: " + note);
        } else if (name == "autonomous-local") {
            r.series.approaches.push_back(skipped(name, "model is global; local heat needs a local model"));
            continue;
        } else {
            r.series.approaches.push_back(skipped(name, "needs the semiclassical scenario"));
            continue;
        }
        r.series.approaches.push_back(std::move(c.s));
    }
    finish(r, o);
    return r;
}

ScenarioResult global_semiclassical(const ModelFile& m, const ScenarioOptions& o) {
    const GlobalModel& gm = *m.global;
    assemble_global(gm);
    const HamiltonianSchedule hsc = build_sc_hamiltonian(gm, m.rho_C);
    auto frame = std::make_shared<const InvariantFrame>(hsc, gm.H_S, o.grid);
    const EigenoperatorSet& e0 = frame->initial();
    const ScheduleSpec spec = schedule_or_default(m);
    const bool db = spec.kind == "detailed_balance" && m.has_beta && !std::isinf(m.beta);
    KineticSchedule ks;
    SpectralFunction G;
    if (db) {
        // Rates follow the spectral function at the instantaneous frame frequencies.
        G = detailed_balance_spectrum(spec.gamma, m.beta);
        ks.kind = "detailed_balance";
        for (std::size_t a = 0; a < e0.non_invariant.size(); ++a)
            ks.rates.push_back([frame, G, a](double t) { return G(frame->omega_e_at(a, t)); });
        if (spec.dephasing != 0.0) ks.with_dephasing(e0.dim() - 1, spec.dephasing);
    } else {
        ks = make_schedule(spec, eigen_omegas(e0), m.beta, e0.dim() - 1);
    }
    const Generator g = build_sc_global(frame, ks);
    ScenarioResult r;
    r.structure = to_string(g.structure());
    const HilbertLayout sl = HilbertLayout::single(int(gm.H_S.rows()), "S");
    r.trajectory = evolve_generator(g, DensityOperator(sl, m.rho_S), o.grid, o.tolerance);
    AttractorCache cache(g, true);
    const std::size_t nch = e0.non_invariant.size();
    for (const auto& name : known_approaches()) {
        if (!selected(o, name)) continue;
        Collector c(name);
        std::string note;
        if (name == "sc-global") {
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const double t = o.grid[k];
                const CMatrix& rho = r.trajectory.states[k];
                c.push(sc_global_fluxes(g.at(t), gm.H_S, frame->X(t), frame->dX(t), rho), tr_real(gm.H_S, rho));
            }
        } else if (name == "external-original" || name == "external-modified") {
            if (!db) {
                r.series.approaches.push_back(skipped(name, "needs a detailed_balance schedule at finite beta"));
                continue;
            }
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const double t = o.grid[k];
                const CMatrix& rho = r.trajectory.states[k];
                std::vector<double> we(nch);
                for (std::size_t a = 0; a < nch; ++a) we[a] = frame->omega_e(a, k);
                const External x = external_fluxes(g.at(t), gm.H_S, hsc.derivative(t), we, G, rho);
                if (name == "external-original")
                    c.push(x.original, tr_real(hsc.at(t), rho));
                else
                    c.push(x.modified, tr_real(gm.H_S, rho));
            }
        } else if (name == "semiclassical") {
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const double t = o.grid[k];
                const CMatrix& rho = r.trajectory.states[k];
                c.push(semiclassical_fluxes(g.at(t), gm.H_S, hsc.derivative(t), rho), tr_real(gm.H_S, rho));
            }
        } else if (name == "dynamical-map") {
            if (!m.has_beta || m.beta == 0.0) {
                r.series.approaches.push_back(skipped(name, "needs a positive beta"));
                continue;
            }
            for (std::size_t k = 0; k < o.grid.size(); ++k) {
                const double t = o.grid[k];
                const CMatrix& rho = r.trajectory.states[k];
                const GeneratorSnapshot s = g.at(t);
                c.push(dynamical_map_point(s, rho, m.beta, cache.at(t, s), gm.H_S, note), tr_real(gm.H_S, rho));
            }
            if (!note.empty()) r.notes.push_back("dynamical-map: " + note);
        } else {
            r.series.approaches.push_back(skipped(name, name == "autonomous-local"
                                                            ? "model is global; local heat needs a local model"
                                                            : "needs the autonomous scenario"));
            continue;
        }
        r.series.approaches.push_back(std::move(c.s));
    }
    finish(r, o);
    return r;
}

CMatrix random_density(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    CMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(nd(rng), nd(rng));
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

}  // namespace

ScenarioResult compare_approaches(const ModelFile& m, const ScenarioOptions& o) {
    if (o.grid.size() < 2) throw InputError("scenario: the time grid needs at least two points");
    for (const auto& a : o.approaches)
        if (std::find(known_approaches().begin(), known_approaches().end(), a) == known_approaches().end())
            throw InputError("unknown approach '" + a + "'");
    if (m.local) {
        if (m.scenario == "semiclassical") return local_semiclassical(m, o);
        if (m.local->H_E.rows() > 1 || !m.schedule) return local_unitary(m, o);
        return local_device(m, o);
    }
    if (m.scenario == "semiclassical") return global_semiclassical(m, o);
    return global_device(m, o);
}

ValidationSummary validate_model(const ModelFile& m, std::uint64_t seed) {
    ValidationSummary v;
    v.kind = m.kind;
    AssembledModel am;
    try {
        am = m.local ? assemble_local(*m.local) : assemble_global(*m.global);
    } catch (const SecViolation& e) {
        v.sec_violation = e.what();
        am = m.local ? assemble_local_unchecked(*m.local) : assemble_global_unchecked(*m.global);
    }
    v.sec_device = am.sec_device;
    v.sec_bath = am.sec_bath;
    // Free Hamiltonian whose conservation defines the thermal operation.
    CMatrix h0 = am.HS + am.HC + am.HE;
    if (m.global) h0 += am.HSC;
    const double nh = std::max(inf_norm(h0), 1e-300);
    const Eigen::Index n = am.layout.total();
    for (double t : {0.5, 1.0, 2.0}) {
        const CMatrix u = unitary_exp(am.H, t);
        ThermalOperationCheck c;
        c.t = t;
        c.commutator_norm = inf_norm(h0) == 0.0 ? 0.0 : inf_norm(commutator(h0, u)) / nh;
        c.unitarity_defect = inf_norm(CMatrix(u.adjoint() * u - CMatrix::Identity(n, n)));
        c.pass = c.commutator_norm <= default_policy().sec && c.unitarity_defect <= default_policy().sec;
        v.thermal_operation.push_back(c);
    }
    bool pass = v.sec_violation.empty();
    for (const auto& c : v.thermal_operation) pass = pass && c.pass;
    if (m.local) {
        if (inf_norm(commutator(m.local->H_E, m.rho_E)) > 1e-10)
            v.warnings.push_back("environment state does not commute with H_E");
        std::mt19937_64 rng(seed);
        const Eigen::Index nd = m.local->H_S.rows() * m.local->H_C.rows();
        if (nd * am.layout.dim_of("E") <= kDenseCap)
            for (int i = 0; i < 5; ++i) {
                const double r = time_translation_residual(am, m.rho_E, 1.0, random_density(nd, rng));
                v.time_translation.push_back(r);
                pass = pass && r <= v.time_translation_bound;
            }
    }
    v.pass = pass;
    return v;
}

}  // namespace qthermo
