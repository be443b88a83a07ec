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
#include <qthermo/version.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace qthermo;

namespace {

enum Exit { kOk = 0, kPhysics = 1, kInput = 2 };

struct Config {
    std::string model;
    double tmax = 0.0;
    std::size_t points = 0;
    std::vector<std::string> approaches;
    std::string out;
    std::uint64_t seed = 12345;
    double tolerance = 1e-8;
    std::vector<double> alphas{25.0, 100.0};
};

int threads_from_env() {
    const char* v = std::getenv("QFL_THREADS");
    if (!v) return 1;
    const int n = std::atoi(v);
    return n > 0 ? n : 1;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw InputError("cannot write " + (fs::path(dir) / name).string());
    f << body;
}

TimeGrid grid_for(const ModelFile& m, const Config& c) {
    const double tmax = c.tmax > 0.0 ? c.tmax : m.tmax.value_or(10.0);
    const std::size_t n = c.points > 0 ? c.points : m.points.value_or(201);
    if (!(tmax > 0.0)) throw InputError("--tmax must be positive");
    if (n < 2) throw InputError("--points must be at least 2");
    return TimeGrid::uniform(0.0, tmax, n);
}

int run_validate(const Config& c) {
    const ModelFile m = load_model(c.model);
    const ValidationSummary v = validate_model(m, c.seed);
    const OutputHeader h = make_header(m.text, c.seed);
    nlohmann::ordered_json j;
    j["header"] = {{"version", h.version},
                   {"model_hash", h.model_hash},
                   {"numeric_policy", h.numeric_policy},
                   {"sign_conventions", h.sign_conventions},
                   {"seed", h.seed}};
    j["kind"] = v.kind;
    j["sec"] = {{"device", v.sec_device}, {"bath", v.sec_bath}, {"tolerance", default_policy().sec}};
    if (!v.sec_violation.empty()) j["sec"]["violation"] = v.sec_violation;
    auto& to = j["thermal_operation"] = nlohmann::ordered_json::array();
    for (const auto& t : v.thermal_operation)
        to.push_back({{"t", t.t},
                      {"commutator_norm", t.commutator_norm},
                      {"unitarity_defect", t.unitarity_defect},
                      {"verdict", t.pass ? "pass" : "fail"}});
    if (v.time_translation.empty()) {
        j["time_translation"] = "not applicable";
    } else {
        j["time_translation"] = {{"t", 1.0}, {"bound", v.time_translation_bound}, {"residuals", v.time_translation}};
    }
    j["warnings"] = v.warnings;
    j["verdict"] = v.pass ? "pass" : "fail";
    const std::string body = j.dump(2) + "\n";
    std::cout << body;
    write_file(c.out, "validation.json", body);
    if (!v.sec_violation.empty()) std::cerr << "qthermo: " << v.sec_violation << "\n";
    return v.pass ? kOk : kPhysics;
}

int run_simulate(const Config& c) {
    const ModelFile m = load_model(c.model);
    ScenarioOptions o;
    o.grid = grid_for(m, c);
    o.tolerance = c.tolerance;
    o.approaches = {"autonomous-local", "autonomous-global", "sc-global", "semiclassical"};
    const ScenarioResult r = compare_approaches(m, o);
    const OutputHeader h = make_header(m.text, c.seed);
    const Trajectory& tr = r.trajectory;
    const std::vector<std::string> keep{"S"};
    std::ostringstream csv;
    csv << "# version=" << h.version << "\n# model_hash=" << h.model_hash << "\n# structure=" << r.structure << "\n";
    csv << "t,E_S,purity_S,trace_drift\n";
    CMatrix hs = m.local ? m.local->H_S : m.global->H_S;
    csv.precision(12);
    csv << std::scientific;
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const CMatrix rs = partial_trace(tr.states[k], tr.layout, keep);
        csv << tr.grid[k] << ',' << trace_product(hs, rs).real() << ',' << trace_product(rs, rs).real() << ','
            << tr.trace_drift[k] << '\n';
    }
    write_file(c.out, "trajectory.csv", csv.str());
    if (c.out.empty()) std::cout << csv.str();
    for (const auto& n : r.notes) std::cerr << "qthermo: note: " << n << "\n";
    return kOk;
}

int run_compare(const Config& c) {
    const ModelFile m = load_model(c.model);
    ScenarioOptions o;
    o.grid = grid_for(m, c);
    o.tolerance = c.tolerance;
    o.approaches = c.approaches;
    const ScenarioResult r = compare_approaches(m, o);
    const OutputHeader h = make_header(m.text, c.seed);
    std::ostringstream csv;
    write_flux_csv(csv, r.series, h);
    auto j = nlohmann::ordered_json::parse(ledger_json(r.series, r.audit, h));
    j["structure"] = r.structure;
    j["notes"] = r.notes;
    if (r.series.t.size() == 2) j["degraded_mode"] = "two grid points: endpoint trapezoid, no Simpson quadrature";
    const std::string body = j.dump(2) + "\n";
    write_file(c.out, "fluxes.csv", csv.str());
    write_file(c.out, "ledger.json", body);
    if (c.out.empty()) std::cout << body;
    bool ok = true;
    for (const auto& a : r.audit) {
        std::cerr << "qthermo: " << a.approach << ": |dE - W - Q| = " << a.residual << " (bound " << a.bound << ") "
                  << (a.pass ? "pass" : "FAIL") << "\n";
        ok = ok && a.pass;
    }
    return ok ? kOk : kPhysics;
}

int run_jc_demo(const Config& c) {
    jc::Figure2Params p;
    jc::JCModel fit_model;
    fit_model.omega_c = p.omega_c;
    fit_model.omega_s = p.omega_s;
    fit_model.alpha = 10.0;
    fit_model.g = p.coupling / 10.0;
    std::string text = "jc-demo";
    if (!c.model.empty()) {
        const ModelFile m = load_model(c.model);
        if (!m.jc) throw InputError("jc-demo: model file must have kind jc");
        p.omega_c = m.jc->omega_c;
        p.omega_s = m.jc->omega_s;
        p.coupling = m.jc->g * std::abs(m.jc->alpha);
        p.a = m.jc->a;
        p.b = m.jc->b;
        fit_model = *m.jc;
        text = m.text;
    }
    for (double a : c.alphas)
        if (!(a > 0.0)) throw InputError("--alphas must be positive");
    const double tmax = c.tmax > 0.0 ? c.tmax : 20.0;
    const std::size_t n = c.points > 0 ? c.points : 2001;
    if (n < 2) throw InputError("--points must be at least 2");
    const TimeGrid grid = TimeGrid::uniform(0.0, tmax, n);
    const auto curves = jc::figure2_scan(c.alphas, grid, p, threads_from_env());
    fit_model.n_max = -1;
    const jc::EnvelopeFit fit = jc::fit_zeta(fit_model);
    const OutputHeader h = make_header(text, c.seed);
    std::ostringstream csv;
    write_figure2_csv(csv, curves, h);
    const std::string body = figure2_json(curves, &fit, &fit_model, h) + "\n";
    write_file(c.out, "figure2.csv", csv.str());
    write_file(c.out, "figure2.json", body);
    if (c.out.empty()) std::cout << body;
    for (const auto& cv : curves)
        std::cerr << "qthermo: alpha=" << cv.alpha << " n_max=" << cv.n_max << " sup|P_a-P_sc|=" << cv.sup_difference
                  << " (" << cv.seconds << " s)\n";
    return kOk;
}

void add_common(CLI::App* s, Config& c, bool grid) {
    s->add_option("--model", c.model, "model file (JSON)");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--seed", c.seed, "seed for randomized checks");
    if (grid) {
        s->add_option("--tmax", c.tmax, "final time");
        s->add_option("--points", c.points, "grid points");
        s->add_option("--tolerance", c.tolerance, "integrator tolerance per unit time");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qthermo: first-law bookkeeping for driven open quantum systems"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Config c;
    auto* v = app.add_subcommand("validate", "SEC, thermal-operation and time-translation checks");
    add_common(v, c, false);
    v->get_option("--model")->required();
    auto* s = app.add_subcommand("simulate", "evolve the model and write the system trajectory");
    add_common(s, c, true);
    s->get_option("--model")->required();
    auto* cmp = app.add_subcommand("compare-approaches", "all flux definitions on one trajectory");
    add_common(cmp, c, true);
    cmp->get_option("--model")->required();
    cmp->add_option("--approaches", c.approaches, "comma separated approach list")->delimiter(',');
    auto* j = app.add_subcommand("jc-demo", "autonomous vs semiclassical power for the Jaynes-Cummings model");
    add_common(j, c, true);
    j->add_option("--alphas", c.alphas, "comma separated coherent amplitudes")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }
    try {
        if (v->parsed()) return run_validate(c);
        if (s->parsed()) return run_simulate(c);
        if (cmp->parsed()) return run_compare(c);
        return run_jc_demo(c);
    } catch (const InputError& e) {
        std::cerr << "qthermo: input error: " << e.what() << "\n";
        return kInput;
    } catch (const ValidationError& e) {
        std::cerr << "qthermo: validation failure: " << e.what() << "\n";
        return kPhysics;
    } catch (const std::exception& e) {
        std::cerr << "qthermo: error: " << e.what() << "\n";
        return kPhysics;
    }
}
