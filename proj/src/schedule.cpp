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

#include <qthermo/schedule.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qthermo {

TimeGrid::TimeGrid(std::vector<double> times) : t(std::move(times)) {
    if (t.empty()) throw InputError("time grid: empty");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw InputError("time grid: times must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double t0, double t1, std::size_t points) {
    if (points < 1) throw InputError("time grid: need at least one point");
    if (points == 1) return TimeGrid({t0});
    if (!(t1 > t0)) throw InputError("time grid: t_max must exceed t_0");
    std::vector<double> t(points);
    for (std::size_t i = 0; i < points; ++i) t[i] = t0 + (t1 - t0) * double(i) / double(points - 1);
    t.back() = t1;
    return TimeGrid(std::move(t));
}

std::size_t TimeGrid::locate(double x) const {
    if (t.size() < 2 || x <= t.front()) return 0;
    auto it = std::upper_bound(t.begin(), t.end(), x);
    std::size_t k = std::size_t(it - t.begin()) - 1;
    return std::min(k, t.size() - 2);
}

HamiltonianSchedule HamiltonianSchedule::constant(const CMatrix& m) {
    HamiltonianSchedule s;
    s.h = [m](double) { return m; };
    s.dh = [n = m.rows()](double) { return CMatrix(CMatrix::Zero(n, n)); };
    s.dim = m.rows();
    return s;
}

CMatrix HamiltonianSchedule::derivative(double t) const {
    if (dh) return dh(t);
    const double e = 1e-3 * std::max(1.0, std::abs(t));
    return (h(t - 2 * e) - 8.0 * h(t - e) + 8.0 * h(t + e) - h(t + 2 * e)) / (12.0 * e);
}

TimeOrderedPropagator::TimeOrderedPropagator(HamiltonianSchedule h, TimeGrid grid, int substeps, bool check,
                                             double refine_tol)
    : h_(std::move(h)), grid_(std::move(grid)), substeps_(std::max(1, substeps)) {
    const Eigen::Index n = h_.dim;
    u_.reserve(grid_.size());
    u_.push_back(CMatrix::Identity(n, n));
    for (std::size_t k = 1; k < grid_.size(); ++k) u_.push_back(step(grid_[k - 1], grid_[k], substeps_) * u_.back());
    if (check && grid_.size() > 1) {
        CMatrix fine = CMatrix::Identity(n, n);
        for (std::size_t k = 1; k < grid_.size(); ++k) fine = step(grid_[k - 1], grid_[k], 2 * substeps_) * fine;
        refine_dev_ = inf_norm(CMatrix(fine - u_.back()));
        if (refine_dev_ > refine_tol) {
            std::ostringstream os;
            os << "time-ordered propagator: grid too coarse (deviation " << refine_dev_ << " from refined product)";
            throw ValidationError(os.str());
        }
    }
}

CMatrix TimeOrderedPropagator::step(double t0, double t1, int n) const {
    static const double s3 = std::sqrt(3.0);
    const double c1 = 0.5 - s3 / 6.0, c2 = 0.5 + s3 / 6.0;
    const double a1 = (3.0 - 2.0 * s3) / 12.0, a2 = (3.0 + 2.0 * s3) / 12.0;
    const double dt = (t1 - t0) / n;
    CMatrix u = CMatrix::Identity(h_.dim, h_.dim);
    for (int i = 0; i < n; ++i) {
        const double t = t0 + i * dt;
        const CMatrix h1 = h_.at(t + c1 * dt), h2 = h_.at(t + c2 * dt);
        const CMatrix first = unitary_exp(CMatrix(a2 * h1 + a1 * h2), dt);
        const CMatrix second = unitary_exp(CMatrix(a1 * h1 + a2 * h2), dt);
        u = second * first * u;
    }
    return u;
}

CMatrix TimeOrderedPropagator::at(double t) const {
    if (grid_.size() == 1 || t <= grid_.front()) return u_.front();
    const std::size_t k = grid_.locate(t);
    if (t == grid_[k]) return u_[k];
    if (t >= grid_.back()) return u_.back();
    const double frac = (t - grid_[k]) / (grid_[k + 1] - grid_[k]);
    const int n = std::max(1, int(std::ceil(frac * substeps_)));
    return step(grid_[k], t, n) * u_[k];
}

}  // namespace qthermo
