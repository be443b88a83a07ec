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

#include <string>
#include <vector>

namespace qthermo {

// Ordered tensor factors with labels, e.g. {2,3,4} / {"S","C","E"}.
struct HilbertLayout {
    std::vector<int> dims;
    std::vector<std::string> labels;

    HilbertLayout() = default;
    HilbertLayout(std::vector<int> dims, std::vector<std::string> labels);

    static HilbertLayout single(int dim, std::string label);

    Eigen::Index total() const;
    std::size_t factors() const { return dims.size(); }
    std::size_t index_of(const std::string& label) const;
    bool has(const std::string& label) const;
    int dim_of(const std::string& label) const { return dims[index_of(label)]; }

    // Layout of the listed factors, in this layout's order.
    HilbertLayout restricted(const std::vector<std::string>& keep) const;

    bool operator==(const HilbertLayout& o) const { return dims == o.dims && labels == o.labels; }
};

HilbertLayout concat(const HilbertLayout& a, const HilbertLayout& b);

class Operator {
public:
    Operator() = default;
    Operator(HilbertLayout layout, CMatrix m, bool hermitian = false,
             const NumericPolicy& policy = default_policy());

    static Operator identity(const HilbertLayout& layout);
    static Operator zero(const HilbertLayout& layout);

    const HilbertLayout& layout() const { return layout_; }
    const CMatrix& matrix() const { return m_; }
    bool hermitian() const { return hermitian_; }
    Eigen::Index dim() const { return m_.rows(); }

    Operator adjoint() const;
    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator*(const Operator& o) const;
    Operator operator*(Complex s) const;

private:
    HilbertLayout layout_;
    CMatrix m_;
    bool hermitian_ = false;
};

// Unit-trace positive Hermitian operator.
class DensityOperator {
public:
    DensityOperator() = default;
    DensityOperator(HilbertLayout layout, CMatrix m, const NumericPolicy& policy = default_policy());

    static DensityOperator pure(const HilbertLayout& layout, const CVector& psi);
    static DensityOperator maximally_mixed(const HilbertLayout& layout);

    const HilbertLayout& layout() const { return layout_; }
    const CMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }
    Operator as_operator() const { return Operator(layout_, m_, true); }

private:
    HilbertLayout layout_;
    CMatrix m_;
};

Operator tensor_product(const Operator& a, const Operator& b);
DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b);

// Trace out every factor not named in `keep`; kept factors stay in layout order.
CMatrix partial_trace(const CMatrix& m, const HilbertLayout& layout, const std::vector<std::string>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep);
Operator partial_trace(const Operator& op, const std::vector<std::string>& keep);

// Place an operator acting on the listed factors into the full layout.
// `local` must be ordered like the factors appear in `layout`.
CMatrix embed(const CMatrix& local, const HilbertLayout& layout, const std::vector<std::string>& on);
Operator embed(const Operator& local, const HilbertLayout& layout);

// Reorder tensor factors of a matrix given on `from` into the order of `to`.
CMatrix permute_factors(const CMatrix& m, const HilbertLayout& from, const HilbertLayout& to);

Operator commutator(const Operator& a, const Operator& b);

// exp(-i h t); throws for non-Hermitian h.
Operator unitary_propagator(const Operator& h, double t);

Complex expectation(const Operator& a, const DensityOperator& rho);

}  // namespace qthermo
