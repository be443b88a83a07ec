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

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qthermo {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using RMatrix = Matrix<double>;
using RVector = Vector<double>;

inline constexpr Complex I{0.0, 1.0};

// Tolerances shared by every module.
struct NumericPolicy {
    double hermiticity = 1e-12;   // relative to the inf-norm
    double trace = 1e-10;
    double positivity = 1e-10;
    double sec = 1e-9;            // relative commutator norm
    double degeneracy = 1e-8;     // relative to max |omega|
    double integrator = 1e-8;     // per unit time
    double positivity_abort = 1e-6;
    double log_floor = 1e-30;
    double switch_on = 1e-9;
    double propagator_refine = 1e-6;
};

inline const NumericPolicy& default_policy() {
    static const NumericPolicy p{};
    return p;
}

// Structural problems in user supplied data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physics or numerical check failed.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SecViolation : public ValidationError {
public:
    SecViolation(std::string which, double norm);
    std::string which;
    double norm;
};

}  // namespace qthermo
