// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include "fluidkey/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace fluidkey {

// Raised when a Hermitian matrix is too far from positive definite to take a
// log-determinant. `conditioning` is min_eig / max_eig of the offending matrix.
class KgrError : public std::runtime_error {
public:
    KgrError(const std::string &what, double conditioning)
        : std::runtime_error(what), conditioning_(conditioning)
    {
    }
    double conditioning() const { return conditioning_; }

private:
    double conditioning_;
};

namespace linalg {

inline constexpr double kNegativeEigTol = 1e-8;
inline constexpr double kJitterScale = 1e-12;
inline constexpr double kMinLogDet = -690.7755278982137; // ln(1e-300)

inline CMatrix hermitize(const CMatrix &m) { return (m + m.adjoint()) * 0.5; }

struct HermitianFactor {
    double logdet = 0.0;
    CMatrix inverse;
};

namespace detail {

// Shared eigenvalue screening: returns the regularized spectrum.
inline Eigen::VectorXd screened_spectrum(Eigen::VectorXd ev, double trace, const char *name)
{
    const double lmax = ev.maxCoeff();
    const double lmin = ev.minCoeff();
    const double cond = lmax > 0.0 ? lmin / lmax : -1.0;
    if (!(lmax > 0.0) || lmin < -kNegativeEigTol * lmax)
        throw KgrError(std::string(name) + ": not positive semi-definite (min/max eigenvalue "
                           + std::to_string(cond) + ")",
                       cond);
    if (lmin <= 0.0)
        ev.array() += kJitterScale * trace;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev(i) > 0.0))
            throw KgrError(std::string(name) + ": singular after regularization (min/max eigenvalue "
                               + std::to_string(cond) + ")",
                           cond);
        acc += std::log(ev(i));
    }
    if (acc < kMinLogDet)
        throw KgrError(std::string(name) + ": determinant below 1e-300 (min/max eigenvalue "
                           + std::to_string(cond) + ")",
                       cond);
    return ev;
}

} // namespace detail

// Natural-log determinant of a Hermitian PSD matrix. A minimum eigenvalue in
// (-1e-8 lambda_max, 0] is floored with a 1e-12 trace jitter; anything more
// negative, or a regularized determinant below 1e-300, throws KgrError.
inline double logdet_hermitian(const CMatrix &m, const char *name = "matrix")
{
    const int n = static_cast<int>(m.rows());
    if (n == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitize(m), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw KgrError(std::string(name) + ": eigendecomposition failed", 0.0);
    const Eigen::VectorXd ev = detail::screened_spectrum(eig.eigenvalues(), m.trace().real(), name);
    return ev.array().log().sum();
}

// Log-determinant and inverse under the same regularization policy.
inline HermitianFactor factor_hermitian(const CMatrix &m, const char *name = "matrix")
{
    const int n = static_cast<int>(m.rows());
    if (n == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(hermitize(m));
    if (eig.info() != Eigen::Success)
        throw KgrError(std::string(name) + ": eigendecomposition failed", 0.0);
    const Eigen::VectorXd ev = detail::screened_spectrum(eig.eigenvalues(), m.trace().real(), name);
    const CMatrix &v = eig.eigenvectors();
    HermitianFactor f;
    f.logdet = ev.array().log().sum();
    f.inverse = v * ev.cwiseInverse().asDiagonal() * v.adjoint();
    return f;
}

} // namespace linalg
} // namespace fluidkey
