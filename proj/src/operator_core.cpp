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

#include <qthermo/operator_core.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qthermo {

SecViolation::SecViolation(std::string w, double n)
    : ValidationError("strict energy conservation violated for " + w + ": relative commutator norm " +
                      std::to_string(n)),
      which(std::move(w)),
      norm(n) {}

HilbertLayout::HilbertLayout(std::vector<int> d, std::vector<std::string> l)
    : dims(std::move(d)), labels(std::move(l)) {
    if (dims.size() != labels.size()) throw InputError("layout: dims and labels differ in length");
    for (int x : dims)
        if (x < 1) throw InputError("layout: factor dimension must be positive");
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j]) throw InputError("layout: duplicate label " + labels[i]);
}

HilbertLayout HilbertLayout::single(int dim, std::string label) {
    return HilbertLayout({dim}, {std::move(label)});
}

Eigen::Index HilbertLayout::total() const {
    Eigen::Index n = 1;
    for (int d : dims) n *= d;
    return n;
}

std::size_t HilbertLayout::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("layout: unknown label " + label);
    return static_cast<std::size_t>(it - labels.begin());
}

bool HilbertLayout::has(const std::string& label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

HilbertLayout HilbertLayout::restricted(const std::vector<std::string>& keep) const {
    for (const auto& k : keep) index_of(k);
    HilbertLayout out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (std::find(keep.begin(), keep.end(), labels[i]) != keep.end()) {
            out.dims.push_back(dims[i]);
            out.labels.push_back(labels[i]);
        }
    return out;
}

HilbertLayout concat(const HilbertLayout& a, const HilbertLayout& b) {
    auto d = a.dims;
    auto l = a.labels;
    d.insert(d.end(), b.dims.begin(), b.dims.end());
    l.insert(l.end(), b.labels.begin(), b.labels.end());
    return HilbertLayout(d, l);
}

Operator::Operator(HilbertLayout layout, CMatrix m, bool hermitian, const NumericPolicy& policy)
    : layout_(std::move(layout)), m_(std::move(m)), hermitian_(hermitian) {
    if (m_.rows() != m_.cols()) throw InputError("operator: matrix is not square");
    if (m_.rows() != layout_.total())
        throw InputError("operator: matrix dimension " + std::to_string(m_.rows()) +
                         " does not match layout dimension " + std::to_string(layout_.total()));
    if (hermitian_) {
        if (!is_hermitian(m_, policy.hermiticity)) {
            std::ostringstream os;
            os << "operator: flagged Hermitian but ||A - A^dag|| = " << hermitian_defect(m_);
            throw ValidationError(os.str());
        }
        m_ = symmetrized(m_);
    }
}

Operator Operator::identity(const HilbertLayout& layout) {
    return Operator(layout, CMatrix::Identity(layout.total(), layout.total()), true);
}

Operator Operator::zero(const HilbertLayout& layout) {
    return Operator(layout, CMatrix::Zero(layout.total(), layout.total()), true);
}

Operator Operator::adjoint() const { return Operator(layout_, m_.adjoint(), hermitian_); }

static void same_layout(const HilbertLayout& a, const HilbertLayout& b) {
    if (!(a == b)) throw InputError("operator: layout mismatch");
}

Operator Operator::operator+(const Operator& o) const {
    same_layout(layout_, o.layout_);
    return Operator(layout_, m_ + o.m_, hermitian_ && o.hermitian_);
}

Operator Operator::operator-(const Operator& o) const {
    same_layout(layout_, o.layout_);
    return Operator(layout_, m_ - o.m_, hermitian_ && o.hermitian_);
}

Operator Operator::operator*(const Operator& o) const {
    same_layout(layout_, o.layout_);
    return Operator(layout_, m_ * o.m_, false);
}

Operator Operator::operator*(Complex s) const {
    return Operator(layout_, m_ * s, hermitian_ && s.imag() == 0.0);
}

DensityOperator::DensityOperator(HilbertLayout layout, CMatrix m, const NumericPolicy& policy)
    : layout_(std::move(layout)), m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() != layout_.total())
        throw InputError("density operator: dimension mismatch with layout");
    if (!is_hermitian(m_, policy.hermiticity)) throw ValidationError("density operator: not Hermitian");
    m_ = symmetrized(m_);
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > policy.trace)
        throw ValidationError("density operator: trace " + std::to_string(tr) + " differs from 1");
    const double lo = min_eigenvalue(m_);
    if (lo < -policy.positivity)
        throw ValidationError("density operator: negative eigenvalue " + std::to_string(lo));
}

DensityOperator DensityOperator::pure(const HilbertLayout& layout, const CVector& psi) {
    const double n = psi.norm();
    if (n == 0.0) throw InputError("density operator: zero state vector");
    CVector v = psi / n;
    return DensityOperator(layout, v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(const HilbertLayout& layout) {
    const auto n = layout.total();
    return DensityOperator(layout, CMatrix::Identity(n, n) / double(n));
}

Operator tensor_product(const Operator& a, const Operator& b) {
    return Operator(concat(a.layout(), b.layout()), kron(a.matrix(), b.matrix()),
                    a.hermitian() && b.hermitian());
}

DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator(concat(a.layout(), b.layout()), kron(a.matrix(), b.matrix()));
}

namespace {

// Split each full index into (kept, traced) multi-index positions.
struct Split {
    std::vector<Eigen::Index> kept, traced;
    Eigen::Index nk = 1, nt = 1;
};

Split split_indices(const HilbertLayout& layout, const std::vector<bool>& keep) {
    Split s;
    const auto n = layout.total();
    s.kept.resize(n);
    s.traced.resize(n);
    for (std::size_t f = 0; f < layout.factors(); ++f) (keep[f] ? s.nk : s.nt) *= layout.dims[f];
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index rem = i, k = 0, t = 0, kstride = 1, tstride = 1;
        for (std::size_t f = layout.factors(); f-- > 0;) {
            const int d = layout.dims[f];
            const Eigen::Index digit = rem % d;
            rem /= d;
            if (keep[f]) {
                k += digit * kstride;
                kstride *= d;
            } else {
                t += digit * tstride;
                tstride *= d;
            }
        }
        s.kept[i] = k;
        s.traced[i] = t;
    }
    return s;
}

}  // namespace

CMatrix partial_trace(const CMatrix& m, const HilbertLayout& layout, const std::vector<std::string>& keep) {
    if (m.rows() != layout.total()) throw InputError("partial trace: dimension mismatch");
    for (const auto& k : keep) layout.index_of(k);
    std::vector<bool> mask(layout.factors());
    for (std::size_t f = 0; f < layout.factors(); ++f)
        mask[f] = std::find(keep.begin(), keep.end(), layout.labels[f]) != keep.end();
    const Split s = split_indices(layout, mask);
    // Group full indices by traced index.
    std::vector<std::vector<Eigen::Index>> by_t(s.nt);
    for (Eigen::Index i = 0; i < m.rows(); ++i) by_t[s.traced[i]].push_back(i);
    CMatrix out = CMatrix::Zero(s.nk, s.nk);
    for (const auto& group : by_t)
        for (Eigen::Index a : group)
            for (Eigen::Index b : group) out(s.kept[a], s.kept[b]) += m(a, b);
    return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
    return DensityOperator(rho.layout().restricted(keep), partial_trace(rho.matrix(), rho.layout(), keep));
}

Operator partial_trace(const Operator& op, const std::vector<std::string>& keep) {
    return Operator(op.layout().restricted(keep), partial_trace(op.matrix(), op.layout(), keep),
                    op.hermitian());
}

CMatrix permute_factors(const CMatrix& m, const HilbertLayout& from, const HilbertLayout& to) {
    if (from.factors() != to.factors()) throw InputError("permute: factor count mismatch");
    const std::size_t nf = from.factors();
    std::vector<std::size_t> src(nf);  // to-factor -> from-factor
    for (std::size_t f = 0; f < nf; ++f) {
        src[f] = from.index_of(to.labels[f]);
        if (from.dims[src[f]] != to.dims[f]) throw InputError("permute: dimension mismatch");
    }
    const auto n = from.total();
    std::vector<Eigen::Index> map(n);  // to-index -> from-index
    std::vector<Eigen::Index> fstride(nf);
    Eigen::Index st = 1;
    for (std::size_t f = nf; f-- > 0;) {
        fstride[f] = st;
        st *= from.dims[f];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index rem = i, j = 0;
        for (std::size_t f = nf; f-- > 0;) {
            const Eigen::Index digit = rem % to.dims[f];
            rem /= to.dims[f];
            j += digit * fstride[src[f]];
        }
        map[i] = j;
    }
    CMatrix out(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) out(r, c) = m(map[r], map[c]);
    return out;
}

CMatrix embed(const CMatrix& local, const HilbertLayout& layout, const std::vector<std::string>& on) {
    if (layout.restricted(on).factors() != on.size()) throw InputError("embed: duplicate labels");
    // Factor order of the local operator follows `on`, not the layout.
    std::vector<int> dims;
    for (const auto& l : on) dims.push_back(layout.dim_of(l));
    const HilbertLayout sub(dims, on);
    if (local.rows() != sub.total()) throw InputError("embed: local operator dimension mismatch");
    std::vector<std::string> rest;
    for (const auto& l : layout.labels)
        if (!sub.has(l)) rest.push_back(l);
    const HilbertLayout other = layout.restricted(rest);
    const CMatrix full = kron(local, CMatrix::Identity(other.total(), other.total()));
    return permute_factors(full, concat(sub, other), layout);
}

Operator embed(const Operator& local, const HilbertLayout& layout) {
    return Operator(layout, embed(local.matrix(), layout, local.layout().labels), local.hermitian());
}

Operator commutator(const Operator& a, const Operator& b) {
    same_layout(a.layout(), b.layout());
    return Operator(a.layout(), commutator(a.matrix(), b.matrix()), false);
}

Operator unitary_propagator(const Operator& h, double t) {
    if (!is_hermitian(h.matrix(), default_policy().hermiticity))
        throw ValidationError("unitary propagator: Hamiltonian is not Hermitian");
    return Operator(h.layout(), unitary_exp(h.matrix(), t), false);
}

Complex expectation(const Operator& a, const DensityOperator& rho) {
    same_layout(a.layout(), rho.layout());
    return trace_product(a.matrix(), rho.matrix());
}

}  // namespace qthermo
