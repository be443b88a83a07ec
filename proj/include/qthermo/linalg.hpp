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

#include <qthermo/types.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qthermo {

template <class A, class B>
Matrix<typename A::Scalar> kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    Matrix<typename A::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <class A, class B>
Matrix<typename A::Scalar> commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return a * b - b * a;
}

template <class A, class B>
Matrix<typename A::Scalar> anticommutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return a * b + b * a;
}

// tr(a b) without forming the product.
template <class A, class B>
typename A::Scalar trace_product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return a.cwiseProduct(b.transpose()).sum();
}

// Maximum absolute row sum.
template <class A>
double inf_norm(const Eigen::MatrixBase<A>& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

template <class A>
double hermitian_defect(const Eigen::MatrixBase<A>& a) {
    return inf_norm(a - a.adjoint());
}

template <class A>
bool is_hermitian(const Eigen::MatrixBase<A>& a, double rel_tol) {
    const double n = inf_norm(a);
    return hermitian_defect(a) <= rel_tol * std::max(n, 1e-300) || n == 0.0;
}

// ||[a,b]|| / (||a|| ||b||); zero when either operand vanishes.
template <class A, class B>
double relative_commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    const double na = inf_norm(a), nb = inf_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return inf_norm(commutator(a, b)) / (na * nb);
}

// Sum of singular values.
template <class A>
double trace_norm(const Eigen::MatrixBase<A>& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix<typename A::Scalar>> svd(a.derived());
    return svd.singularValues().sum();
}

template <class A>
Matrix<typename A::Scalar> symmetrized(const Eigen::MatrixBase<A>& a) {
    return 0.5 * (a + a.adjoint());
}

// Apply f to the spectrum of a Hermitian matrix.
template <class A, class F>
CMatrix hermitian_function(const Eigen::MatrixBase<A>& a, F&& f) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(a));
    const RVector& w = es.eigenvalues();
    CVector fw(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) fw(i) = f(w(i));
    return es.eigenvectors() * fw.asDiagonal() * es.eigenvectors().adjoint();
}

template <class A>
CMatrix hermitian_exp(const Eigen::MatrixBase<A>& a, Complex scale) {
    return hermitian_function(a, [&](double x) { return std::exp(scale * x); });
}

// exp(-i h t) for Hermitian h.
template <class A>
CMatrix unitary_exp(const Eigen::MatrixBase<A>& h, double t) {
    return hermitian_exp(h, Complex(0.0, -t));
}

// Natural log of a positive Hermitian matrix with eigenvalues floored at `floor`.
template <class A>
CMatrix hermitian_log(const Eigen::MatrixBase<A>& a, double floor) {
    return hermitian_function(a, [&](double x) { return Complex(std::log(std::max(x, floor)), 0.0); });
}

inline double min_eigenvalue(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline RVector eigenvalues_hermitian(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrized(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
inline CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, Eigen::Index n) {
    return Eigen::Map<const CMatrix>(v.data(), n, n);
}

}  // namespace qthermo
