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

#include <qthermo/model_io.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace qthermo {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

namespace {

int parse_dim(const std::string& name, const std::string& s) {
    try {
        std::size_t used = 0;
        const int n = std::stoi(s, &used);
        if (used != s.size() || n < 1) throw std::invalid_argument(s);
        return n;
    } catch (const std::exception&) {
        throw InputError("bad dimension in operator name '" + name + "'");
    }
}

}  // namespace

CMatrix named_operator(const std::string& name) {
    if (name == "sigma_x") return ops::sigma_x();
    if (name == "sigma_y") return ops::sigma_y();
    if (name == "sigma_z") return ops::sigma_z();
    if (name == "sigma_plus") return ops::sigma_plus();
    if (name == "sigma_minus") return ops::sigma_minus();
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        const std::string head = name.substr(0, colon);
        const int n = parse_dim(name, name.substr(colon + 1));
        // a:N, adag:N, num:N act on Fock levels 0..N-1.
        if (head == "a") return ops::annihilation(n - 1);
        if (head == "adag") return ops::creation(n - 1);
        if (head == "num") return ops::number(n - 1);
        if (head == "identity") return CMatrix::Identity(n, n);
        if (head == "zero") return CMatrix::Zero(n, n);
    }
    throw InputError("unknown operator name '" + name + "'");
}

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    std::string where(const std::string& key) const {
        const auto pos = text_.find("\"" + key + "\"");
        if (pos == std::string::npos) return key;
        const auto [l, c] = line_column(text_, pos);
        std::ostringstream os;
        os << key << " (line " << l << ", column " << c << ")";
        return os.str();
    }

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        const auto root = path.substr(0, path.find_first_of(".["));
        throw InputError(where(root) + (path == root ? "" : " at " + path) + ": " + msg);
    }

    Complex coefficient(const json& j, const std::string& path) const {
        if (j.is_number()) return j.get<double>();
        if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
            return {j[0].get<double>(), j[1].get<double>()};
        fail(path, "expected a number or a [re, im] pair");
    }

    double real(const json& j, const std::string& path) const {
        if (j.is_number()) return j.get<double>();
        if (j.is_string() && (j == "inf" || j == "infinity")) return std::numeric_limits<double>::infinity();
        fail(path, "expected a number");
    }

    CMatrix matrix(const json& j, const std::string& path, int depth = 0) const {
        if (depth > 32) fail(path, "matrix definitions nest too deeply");
        if (j.is_string()) {
            const std::string name = j.get<std::string>();
            if (named_.contains(name)) return matrix(named_.at(name), "matrices." + name, depth + 1);
            try {
                return named_operator(name);
            } catch (const InputError& e) {
                fail(path, e.what());
            }
        }
        if (j.is_array()) {
            if (j.empty() || !j[0].is_array()) fail(path, "matrix must be a non-empty array of rows");
            const std::size_t rows = j.size(), cols = j[0].size();
            CMatrix m(rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                if (!j[r].is_array() || j[r].size() != cols)
                    fail(path, "row " + std::to_string(r) + " has the wrong length");
                for (std::size_t c = 0; c < cols; ++c)
                    m(Eigen::Index(r), Eigen::Index(c)) =
                        coefficient(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
            }
            return m;
        }
        if (j.is_object()) {
            if (j.contains("terms")) {
                const json& t = j["terms"];
                if (!t.is_array() || t.empty()) fail(path, "terms must be a non-empty list of [coefficient, matrix]");
                CMatrix acc;
                for (std::size_t i = 0; i < t.size(); ++i) {
                    const std::string p = path + ".terms[" + std::to_string(i) + "]";
                    if (!t[i].is_array() || t[i].size() != 2) fail(p, "expected [coefficient, matrix]");
                    const CMatrix m = coefficient(t[i][0], p) * matrix(t[i][1], p, depth + 1);
                    if (i == 0)
                        acc = m;
                    else if (m.rows() != acc.rows() || m.cols() != acc.cols())
                        fail(p, "term dimension mismatch");
                    else
                        acc += m;
                }
                return acc;
            }
            if (j.contains("kron")) {
                const json& k = j["kron"];
                if (!k.is_array() || k.empty()) fail(path, "kron must be a non-empty list");
                CMatrix acc = matrix(k[0], path + ".kron[0]", depth + 1);
                for (std::size_t i = 1; i < k.size(); ++i)
                    acc = kron(acc, matrix(k[i], path + ".kron[" + std::to_string(i) + "]", depth + 1));
                return acc;
            }
            if (j.contains("op")) {
                const Complex s = j.contains("scale") ? coefficient(j["scale"], path + ".scale") : Complex(1.0);
                return s * matrix(j["op"], path + ".op", depth + 1);
            }
        }
        fail(path, "expected a matrix: name, nested array, or object with terms/kron/op");
    }

    CMatrix hermitian(const json& j, const std::string& path) const {
        const CMatrix m = matrix(j, path);
        if (m.rows() != m.cols()) fail(path, "matrix must be square");
        const double scale = std::max(1.0, inf_norm(m));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = r; c < m.cols(); ++c)
                if (std::abs(m(r, c) - std::conj(m(c, r))) > default_policy().hermiticity * scale) {
                    std::ostringstream os;
                    os << "not Hermitian at entry (" << r << "," << c << "): " << m(r, c) << " vs conj of (" << c
                       << "," << r << ") = " << std::conj(m(c, r));
                    fail(path, os.str());
                }
        return symmetrized(m);
    }

    std::vector<CouplingPair> pairs(const json& j, const std::string& path) const {
        std::vector<CouplingPair> out;
        if (!j.is_array()) fail(path, "expected a list of [A, B] pairs");
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string p = path + "[" + std::to_string(i) + "]";
            if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected [A, B]");
            out.push_back({matrix(j[i][0], p + "[0]"), matrix(j[i][1], p + "[1]")});
        }
        return out;
    }

    CMatrix state(const json& j, const std::string& path, const CMatrix& h, double beta, bool have_beta) const {
        const Eigen::Index n = h.rows();
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
            if (s == "thermal") {
                if (!have_beta) fail(path, "thermal state needs beta");
                return thermal_matrix(h, beta);
            }
            if (s == "ground") return thermal_matrix(h, std::numeric_limits<double>::infinity());
            if (s == "excited") {
                const CVector v = es.eigenvectors().col(n - 1);
                return v * v.adjoint();
            }
            if (s == "mixed") return CMatrix::Identity(n, n) / double(n);
            if (!named_.contains(s)) fail(path, "unknown state '" + s + "'");
        }
        if (j.is_object() && j.contains("coherent")) {
            const Complex a = coefficient(j["coherent"], path + ".coherent");
            const CVector c = coherent_amplitudes(a, int(n) - 1);
            return c * c.adjoint();
        }
        if (j.is_object() && j.contains("basis")) {
            const auto k = j["basis"].get<long>();
            if (k < 0 || k >= n) fail(path, "basis index out of range");
            CMatrix r = CMatrix::Zero(n, n);
            r(k, k) = 1.0;
            return r;
        }
        if (j.is_object() && j.contains("pure")) {
            const json& a = j["pure"];
            if (!a.is_array() || Eigen::Index(a.size()) != n) fail(path, "pure state has the wrong length");
            CVector v(n);
            for (Eigen::Index i = 0; i < n; ++i) v(i) = coefficient(a[std::size_t(i)], path + ".pure");
            const double nv = v.norm();
            if (nv == 0.0) fail(path, "pure state is zero");
            v /= nv;
            return v * v.adjoint();
        }
        const CMatrix rho = hermitian(j, path);
        if (rho.rows() != n) fail(path, "state dimension does not match the Hamiltonian");
        if (std::abs(rho.trace().real() - 1.0) > default_policy().trace) fail(path, "state trace is not 1");
        if (min_eigenvalue(rho) < -default_policy().positivity) fail(path, "state is not positive");
        return rho;
    }

    ScheduleSpec schedule(const json& j) const {
        const std::string path = "schedule";
        if (!j.is_object()) fail(path, "expected an object");
        ScheduleSpec s;
        if (j.contains("kind")) s.kind = j["kind"].get<std::string>();
        if (s.kind != "flat" && s.kind != "detailed_balance" && s.kind != "exp_transient" && s.kind != "piecewise")
            fail(path + ".kind", "unknown schedule kind '" + s.kind + "'");
        if (j.contains("gamma")) s.gamma = real(j["gamma"], path + ".gamma");
        if (j.contains("g0")) s.g0 = real(j["g0"], path + ".g0");
        if (j.contains("tau")) s.tau = real(j["tau"], path + ".tau");
        if (j.contains("dephasing")) s.dephasing = real(j["dephasing"], path + ".dephasing");
        if (s.kind == "piecewise") {
            if (!j.contains("breakpoints") || !j["breakpoints"].is_array())
                fail(path, "piecewise schedule needs breakpoints");
            for (const auto& ch : j["breakpoints"]) {
                std::vector<std::pair<double, double>> bp;
                for (const auto& p : ch) {
                    if (!p.is_array() || p.size() != 2) fail(path + ".breakpoints", "expected [t, value]");
                    bp.emplace_back(p[0].get<double>(), p[1].get<double>());
                }
                s.breakpoints.push_back(std::move(bp));
            }
        }
        return s;
    }

    ModelFile parse(const json& root) {
        if (!root.is_object()) throw InputError("model file: top level must be an object");
        if (root.contains("matrices")) {
            if (!root["matrices"].is_object()) fail("matrices", "expected an object of named matrices");
            named_ = root["matrices"];
        }
        ModelFile m;
        m.text = text_;
        if (!root.contains("kind")) throw InputError("model file: missing 'kind' (local, global or jc)");
        if (!root["kind"].is_string()) fail("kind", "expected local, global or jc");
        m.kind = root["kind"].get<std::string>();
        if (m.kind != "local" && m.kind != "global" && m.kind != "jc")
            fail("kind", "unknown kind '" + m.kind + "' (expected local, global or jc)");
        if (root.contains("scenario")) m.scenario = root["scenario"].get<std::string>();
        if (m.scenario != "autonomous" && m.scenario != "semiclassical")
            fail("scenario", "expected autonomous or semiclassical");
        if (root.contains("beta")) {
            m.beta = real(root["beta"], "beta");
            m.has_beta = true;
            if (!(m.beta >= 0.0)) fail("beta", "must be non-negative");
        }
        if (root.contains("schedule")) m.schedule = schedule(root["schedule"]);
        if (root.contains("grid")) {
            const json& g = root["grid"];
            if (g.contains("tmax")) m.tmax = real(g["tmax"], "grid.tmax");
            if (g.contains("points")) m.points = g["points"].get<std::size_t>();
        }
        const json init = root.contains("initial_state") ? root["initial_state"] : json::object();
        auto init_of = [&](const char* f, const char* dflt) { return init.contains(f) ? init[f] : json(dflt); };
        const char* dflt = m.has_beta ? "thermal" : "ground";

        if (m.kind == "jc") {
            jc::JCModel j;
            if (root.contains("omega_c")) j.omega_c = real(root["omega_c"], "omega_c");
            if (root.contains("omega_s")) j.omega_s = real(root["omega_s"], "omega_s");
            if (root.contains("g")) j.g = real(root["g"], "g");
            if (root.contains("alpha")) j.alpha = coefficient(root["alpha"], "alpha");
            if (root.contains("n_max")) j.n_max = root["n_max"].get<int>();
            if (root.contains("qubit")) {
                const json& q = root["qubit"];
                if (q.contains("a")) j.a = coefficient(q["a"], "qubit.a");
                if (q.contains("b")) j.b = coefficient(q["b"], "qubit.b");
            }
            try {
                jc::validate(j);
            } catch (const InputError& e) {
                throw InputError(std::string("jc model: ") + e.what());
            }
            m.jc = j;
            m.local = jc::dense_model(j);
            Eigen::Vector2cd q(j.b, j.a);
            m.rho_S = q * q.adjoint();
            const CVector c = coherent_amplitudes(j.alpha, j.n_max);
            m.rho_C = c * c.adjoint();
            m.rho_E = CMatrix::Ones(1, 1);
            return m;
        }

        auto need = [&](const char* key) -> const json& {
            if (!root.contains(key)) throw InputError(std::string("model file: missing '") + key + "'");
            return root[key];
        };
        const CMatrix hs = hermitian(need("H_S"), "H_S");
        const CMatrix hc = root.contains("H_C") ? hermitian(root["H_C"], "H_C") : CMatrix(CMatrix::Zero(1, 1));
        const CMatrix he = root.contains("H_E") ? hermitian(root["H_E"], "H_E") : CMatrix(CMatrix::Zero(1, 1));
        const json couplings = root.contains("couplings") ? root["couplings"] : json::object();

        if (m.kind == "local") {
            LocalModel lm;
            lm.H_S = hs;
            lm.H_C = hc;
            lm.H_E = he;
            if (couplings.contains("SC")) lm.sc = pairs(couplings["SC"], "couplings.SC");
            if (couplings.contains("SE")) lm.se = pairs(couplings["SE"], "couplings.SE");
            for (std::size_t i = 0; i < lm.sc.size(); ++i)
                if (lm.sc[i].a.rows() != hs.rows() || lm.sc[i].b.rows() != hc.rows())
                    fail("couplings", "SC pair " + std::to_string(i) + " has the wrong dimensions");
            for (std::size_t i = 0; i < lm.se.size(); ++i)
                if (lm.se[i].a.rows() != hs.rows() || lm.se[i].b.rows() != he.rows())
                    fail("couplings", "SE pair " + std::to_string(i) + " has the wrong dimensions");
            if (root.contains("control_edge_levels")) lm.control_edge_levels = root["control_edge_levels"].get<int>();
            m.local = lm;
        } else if (m.kind == "global") {
            GlobalModel gm;
            gm.H_S = hs;
            gm.H_C = hc;
            gm.H_E = he;
            const Eigen::Index nd = hs.rows() * hc.rows();
            gm.H_SC = root.contains("H_SC") ? hermitian(root["H_SC"], "H_SC") : CMatrix(CMatrix::Zero(nd, nd));
            if (gm.H_SC.rows() != nd) fail("H_SC", "must act on S (x) C");
            if (couplings.contains("DE")) gm.de = pairs(couplings["DE"], "couplings.DE");
            for (std::size_t i = 0; i < gm.de.size(); ++i)
                if (gm.de[i].a.rows() != nd || gm.de[i].b.rows() != he.rows())
                    fail("couplings", "DE pair " + std::to_string(i) + " has the wrong dimensions");
            m.global = gm;
        } else {
            fail("kind", "expected local, global or jc");
        }
        m.rho_S = state(init_of("S", dflt), "initial_state.S", hs, m.beta, m.has_beta);
        m.rho_C = state(init_of("C", dflt), "initial_state.C", hc, m.beta, m.has_beta);
        m.rho_E = state(init_of("E", dflt), "initial_state.E", he, m.beta, m.has_beta);
        return m;
    }

private:
    const std::string& text_;
    json named_ = json::object();
};

}  // namespace

ModelFile parse_model(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [l, c] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream os;
        os << "model file: syntax error at line " << l << ", column " << c;
        throw InputError(os.str());
    }
    try {
        return Parser(text).parse(root);
    } catch (const json::exception& e) {
        throw InputError(std::string("model file: ") + e.what());
    }
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open model file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_model(os.str());
}

KineticSchedule make_schedule(const ScheduleSpec& spec, const std::vector<double>& omegas, double beta,
                              Eigen::Index invariants) {
    KineticSchedule s;
    if (spec.kind == "flat") {
        s = KineticSchedule::flat(omegas.size(), spec.gamma);
    } else if (spec.kind == "detailed_balance") {
        if (std::isinf(beta)) {
            s = KineticSchedule::flat(omegas.size(), 0.0);
            s.kind = "detailed_balance";
            for (std::size_t a = 0; a < omegas.size(); ++a) {
                const double g = omegas[a] > 0.0 ? spec.gamma : 0.0;
                s.rates[a] = [g](double) { return g; };
            }
        } else {
            s = KineticSchedule::detailed_balance(omegas, spec.gamma, beta);
        }
    } else if (spec.kind == "exp_transient") {
        s = KineticSchedule::exp_transient(omegas.size(), spec.g0, spec.tau);
        s.markovian = false;
    } else {
        if (spec.breakpoints.size() != omegas.size())
            throw InputError("schedule: " + std::to_string(spec.breakpoints.size()) + " breakpoint lists for " +
                             std::to_string(omegas.size()) + " channels");
        s = KineticSchedule::piecewise(spec.breakpoints);
    }
    if (spec.dephasing != 0.0) s.with_dephasing(invariants, spec.dephasing);
    return s;
}

}  // namespace qthermo
