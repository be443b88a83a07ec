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

#pragma once

#include <qthermo/linalg.hpp>

#include <functional>
#include <vector>

namespace qthermo {

struct TimeGrid {
    std::vector<double> t;

    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> times);
    static TimeGrid uniform(double t0, double t1, std::size_t points);

    std::size_t size() const { return t.size(); }
    double front() const { return t.front(); }
    double back() const { return t.back(); }
    double operator[](std::size_t i) const { return t[i]; }
    // Index k with t[k] <= x < t[k+1], clamped to the grid.
    std::size_t locate(double x) const;
};

// Time-dependent Hermitian operator with an optional exact derivative.
struct HamiltonianSchedule {
    std::function<CMatrix(double)> h;
    std::function<CMatrix(double)> dh;
    Eigen::Index dim = 0;

    static HamiltonianSchedule constant(const CMatrix& m);

    CMatrix at(double t) const { return h(t); }
    // Exact derivative when provided, otherwise a five-point central stencil.
    CMatrix derivative(double t) const;
};

// Piecewise exponential product with the fourth-order commutator-free Magnus step.
class TimeOrderedPropagator {
public:
    TimeOrderedPropagator() = default;
    TimeOrderedPropagator(HamiltonianSchedule h, TimeGrid grid, int substeps = 8, bool check = true,
                          double refine_tol = 1e-6);

    const TimeGrid& grid() const { return grid_; }
    // U(t_k, t_0) at grid points.
    const CMatrix& at_index(std::size_t k) const { return u_[k]; }
    // U(t, t_0) for any t inside the grid span.
    CMatrix at(double t) const;
    double refinement_deviation() const { return refine_dev_; }

    CMatrix step(double t0, double t1, int n) const;

private:
    HamiltonianSchedule h_;
    TimeGrid grid_;
    int substeps_ = 8;
    std::vector<CMatrix> u_;
    double refine_dev_ = 0.0;
};

}  // namespace qthermo
