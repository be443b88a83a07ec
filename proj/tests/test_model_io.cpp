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

#include <doctest.h>

#include "oracles.hpp"

#include <qthermo/model_io.hpp>

using namespace qthermo;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_model(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("line and column of a byte offset") {
    const std::string s = "ab\ncd\n\nx";
    CHECK(line_column(s, 0) == std::make_pair<std::size_t, std::size_t>(1, 1));
    CHECK(line_column(s, 4) == std::make_pair<std::size_t, std::size_t>(2, 2));
    CHECK(line_column(s, 7) == std::make_pair<std::size_t, std::size_t>(4, 1));
}

TEST_CASE("syntax errors carry a position") {
    const std::string e = error_of("{\n  \"kind\": \"local\",\n  \"H_S\": [1, 2,]\n}");
    CHECK(e.find("syntax error at line 3") != std::string::npos);
}

TEST_CASE("non-Hermitian matrices name the entry") {
    const std::string e = error_of(R"({"kind": "local",
 "H_S": [[1, 2], [3, 1]],
 "H_C": "sigma_z"})");
    CHECK(e.find("H_S") != std::string::npos);
    CHECK(e.find("line 2") != std::string::npos);
    CHECK(e.find("(0,1)") != std::string::npos);
}

TEST_CASE("named operators") {
    CHECK(oracle::max_abs(named_operator("sigma_x") - ops::sigma_x()) == 0.0);
    CHECK(oracle::max_abs(named_operator("num:4") - ops::number(3)) == 0.0);
    CHECK(oracle::max_abs(named_operator("adag:3") - ops::creation(2)) == 0.0);
    CHECK(named_operator("identity:5").isIdentity());
    CHECK_THROWS_AS(named_operator("a:0"), InputError);
    CHECK_THROWS_AS(named_operator("spin"), InputError);
}

TEST_CASE("matrix forms: terms, kron, scale, complex entries and user matrices") {
    const ModelFile m = parse_model(R"({
  "kind": "global",
  "matrices": {"hx": {"terms": [[0.5, "sigma_x"], [[0.25, 0], "sigma_y"]]}},
  "H_S": {"scale": 0.5, "op": "sigma_z"},
  "H_C": [[1, [0, -1]], [[0, 1], -1]],
  "H_SC": {"kron": ["hx", {"scale": 0.1, "op": "sigma_z"}]}
})");
    REQUIRE(m.global);
    CMatrix c(2, 2);
    c << 1, Complex(0, -1), Complex(0, 1), -1;
    CHECK(oracle::max_abs(m.global->H_C - c) == 0.0);
    const CMatrix hx = 0.5 * ops::sigma_x() + 0.25 * ops::sigma_y();
    CHECK(oracle::max_abs(m.global->H_SC - oracle::naive_kron(hx, CMatrix(0.1 * ops::sigma_z()))) < 1e-15);
}

TEST_CASE("jc models") {
    const ModelFile m = parse_model(R"({"kind": "jc", "g": 0.5, "alpha": 2.0, "qubit": {"a": 0, "b": 1}})");
    REQUIRE(m.jc);
    CHECK(m.jc->n_max == coherent_cutoff(2.0));
    CHECK(m.jc->g == 0.5);
    CHECK(error_of(R"({"kind": "jc", "g": 0.5, "alpha": 2.0, "qubit": {"a": 1, "b": 1}})").find("jc model") !=
          std::string::npos);
}

TEST_CASE("structural errors") {
    CHECK(error_of(R"({"kind": "ring"})").find("kind") != std::string::npos);
    CHECK(error_of(R"({"H_S": "sigma_z"})").find("missing 'kind'") != std::string::npos);
    CHECK(error_of(R"([1, 2])").find("object") != std::string::npos);
    CHECK_FALSE(error_of(R"({"kind": "local", "H_S": "sigma_z", "H_C": [[1, 0], [0]]})").empty());
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), InputError);
}

TEST_CASE("schedules bind to channel counts") {
    ScheduleSpec p;
    p.kind = "piecewise";
    p.breakpoints = {{{0.0, 0.1}, {1.0, 0.2}}};
    CHECK_THROWS_AS(make_schedule(p, {1.0, -1.0}, 1.0, 1), InputError);
    p.breakpoints.push_back({{0.0, 0.3}});
    const KineticSchedule k = make_schedule(p, {1.0, -1.0}, 1.0, 1);
    CHECK(k.rates[0](0.5) == doctest::Approx(0.15));
    ScheduleSpec d;
    d.kind = "detailed_balance";
    d.gamma = 0.2;
    const KineticSchedule z = make_schedule(d, {1.0, -1.0}, std::numeric_limits<double>::infinity(), 1);
    CHECK(z.rates[0](0.0) == doctest::Approx(0.2));
    CHECK(z.rates[1](0.0) == 0.0);
}
