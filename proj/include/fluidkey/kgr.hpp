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

#include "fluidkey/channel.hpp"
#include "fluidkey/linalg.hpp"
#include "fluidkey/types.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fluidkey {

// N x S complex precoding matrix applied to the channel estimate.
struct Precoder {
    CMatrix matrix;

    int antennas() const { return static_cast<int>(matrix.rows()); }
    int pilots() const { return static_cast<int>(matrix.cols()); }
    double power() const { return matrix.squaredNorm(); }
};

// Secret key generation rate, bits per channel use.
struct KgrValue {
    double bits = 0.0;
};

// d(-R_sk)/dP packed as G = dL/dRe(P) + j dL/dIm(P), so that for any complex
// perturbation D the directional derivative is Re(sum conj(G) .* D).
struct KgrGradient {
    CMatrix matrix;
};

// Covariances of Alice's (ya) and Bob's (yb) precoded channel estimates, all S x S:
//   r_a     = P^T R P* + noise P^T P*
//   r_b     = P^T R P* + noise I_S
//   r_cross = P^T R P*
struct SecondOrderStats {
    CMatrix r_a;
    CMatrix r_b;
    CMatrix r_cross;
};

inline SecondOrderStats second_order_stats(const Precoder &p, const ChannelCovariance &r, double noise_var)
{
    const int n = p.antennas();
    const int s = p.pilots();
    if (r.matrix.rows() != r.matrix.cols())
        throw std::invalid_argument("second_order_stats: covariance must be square");
    if (r.matrix.rows() != n)
        throw std::invalid_argument("second_order_stats: precoder has " + std::to_string(n)
                                    + " rows but covariance is " + std::to_string(r.matrix.rows()) + "x"
                                    + std::to_string(r.matrix.cols()));
    SecondOrderStats out;
    const CMatrix pt = p.matrix.transpose();
    const CMatrix pc = p.matrix.conjugate();
    out.r_cross = linalg::hermitize(pt * r.matrix * pc);
    out.r_a = out.r_cross + noise_var * linalg::hermitize(pt * pc);
    out.r_b = out.r_cross + noise_var * CMatrix::Identity(s, s);
    return out;
}

inline CMatrix joint_covariance(const SecondOrderStats &st)
{
    const auto s = st.r_a.rows();
    CMatrix j(2 * s, 2 * s);
    j.topLeftCorner(s, s) = st.r_a;
    j.topRightCorner(s, s) = st.r_cross;
    j.bottomLeftCorner(s, s) = st.r_cross;
    j.bottomRightCorner(s, s) = st.r_b;
    return j;
}

namespace detail {

// Spectral pieces of R shared by value and gradient: R = V diag(r) V^H with
// r clipped at 0, Q_a = R + noise I.
struct CovarianceSpectrum {
    CMatrix vectors;
    Eigen::VectorXd values;
};

inline CovarianceSpectrum covariance_spectrum(const ChannelCovariance &r)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(linalg::hermitize(r.matrix));
    if (eig.info() != Eigen::Success)
        throw KgrError("channel covariance: eigendecomposition failed", 0.0);
    Eigen::VectorXd ev = eig.eigenvalues();
    const double lmax = ev.maxCoeff();
    const double lmin = ev.minCoeff();
    const double cond = lmax > 0.0 ? lmin / lmax : -1.0;
    if (lmin < -linalg::kNegativeEigTol * std::max(lmax, 0.0) || !std::isfinite(lmin))
        throw KgrError("channel covariance: not positive semi-definite (min/max eigenvalue " + std::to_string(cond)
                           + ")",
                       cond);
    ev = ev.cwiseMax(0.0);
    return {eig.eigenvectors(), ev};
}

inline CMatrix spectral(const CovarianceSpectrum &sp, const Eigen::VectorXd &diag)
{
    return sp.vectors * diag.asDiagonal() * sp.vectors.adjoint();
}

// Conditional covariance of Bob's estimate given Alice's,
//   r_b - r_cross r_a^+ r_cross = noise I + B (M - M Pi M) B^H,
// with B = P^T Q_a^{1/2}, M = Q_a^{-1/2} R Q_a^{-1/2} and Pi the projector onto
// the row space of B. Both this and r_b are bounded below by noise I.
inline CMatrix conditional_covariance(const Precoder &p, const CovarianceSpectrum &sp, double noise_var)
{
    const int n = p.antennas();
    const int s = p.pilots();
    const Eigen::VectorXd q = sp.values.array() + noise_var;
    const CMatrix b = p.matrix.transpose() * spectral(sp, q.cwiseSqrt());
    const CMatrix m = spectral(sp, sp.values.cwiseQuotient(q));

    Eigen::JacobiSVD<CMatrix> svd(b, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    const double tol = sv.size() > 0 ? sv(0) * 1e-12 * std::max(n, s) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol)
            ++rank;
    CMatrix inner;
    if (rank == n) {
        inner = m - m * m;
    } else {
        const CMatrix u = svd.matrixV().leftCols(rank);
        const CMatrix mu = m * u;
        inner = m - mu * mu.adjoint();
    }
    return linalg::hermitize(noise_var * CMatrix::Identity(s, s) + b * inner * b.adjoint());
}

} // namespace detail

// R_sk = log2(det(r_a) det(r_b) / det([[r_a, r_cross], [r_cross, r_b]])),
// evaluated as log2 det(r_b) - log2 det(r_b - r_cross r_a^+ r_cross). The two
// are equal whenever r_a is invertible; the second never divides by a
// vanishing determinant. Zero cross-covariance returns exactly 0.
inline KgrValue kgr(const Precoder &p, const ChannelCovariance &r, double noise_var)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("kgr: noise_var must be positive");
    const SecondOrderStats st = second_order_stats(p, r, noise_var);
    if (st.r_cross.isZero(0.0))
        return KgrValue{0.0};
    const auto sp = detail::covariance_spectrum(r);
    const double nats = linalg::logdet_hermitian(st.r_b, "r_b")
                        - linalg::logdet_hermitian(detail::conditional_covariance(p, sp, noise_var), "conditional");
    if (!std::isfinite(nats))
        throw KgrError("kgr: non-finite result", 0.0);
    // Mutual information is nonnegative; clip round-off.
    return KgrValue{std::max(0.0, nats / std::numbers::ln2)};
}

// The determinant ratio taken literally, with the jitter/error policy of
// linalg::logdet_hermitian on each factor. Loses accuracy as r_a approaches
// singularity; kept as an independent route for cross-checks.
inline KgrValue kgr_determinant_ratio(const Precoder &p, const ChannelCovariance &r, double noise_var)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("kgr: noise_var must be positive");
    const SecondOrderStats st = second_order_stats(p, r, noise_var);
    if (st.r_cross.isZero(0.0))
        return KgrValue{0.0};
    const double nats = linalg::logdet_hermitian(st.r_a, "r_a") + linalg::logdet_hermitian(st.r_b, "r_b")
                        - linalg::logdet_hermitian(joint_covariance(st), "joint");
    return KgrValue{std::max(0.0, nats / std::numbers::ln2)};
}

// Analytic gradient of the loss -R_sk with respect to P, with A = P^T.
//
// When A has full column rank (S >= N, the generic case) the conditional
// covariance is A K A^H + noise I with K = noise R (R + noise I)^-1, so
//   d ln-MI / dA* = 2 (Rb^-1 A R - Sc^-1 A K).
// Otherwise it falls back to the determinant-ratio form with Q_a = R + noise I
// and W = K12 + K21 + K22 from the blocks of the joint inverse:
//   d ln-MI / dA* = 2 (Ra^-1 A Q_a + Rb^-1 A R - K11 A Q_a - W A R).
inline KgrGradient kgr_gradient(const Precoder &p, const ChannelCovariance &r, double noise_var)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("kgr_gradient: noise_var must be positive");
    const SecondOrderStats st = second_order_stats(p, r, noise_var);
    const int n = p.antennas();
    const int s = p.pilots();
    if (st.r_cross.isZero(0.0))
        return KgrGradient{CMatrix::Zero(n, s)};

    const auto sp = detail::covariance_spectrum(r);
    const CMatrix a = p.matrix.transpose();
    const CMatrix ar = a * r.matrix;
    const auto fb = linalg::factor_hermitian(st.r_b, "r_b");

    CMatrix grad_a;
    Eigen::FullPivLU<CMatrix> lu(a);
    if (s >= n && lu.rank() == n) {
        const Eigen::VectorXd kd =
            (noise_var * sp.values.array() / (sp.values.array() + noise_var)).matrix();
        const CMatrix k = detail::spectral(sp, kd);
        const CMatrix ak = a * k;
        const auto fc = linalg::factor_hermitian(
            linalg::hermitize(ak * a.adjoint() + noise_var * CMatrix::Identity(s, s)), "conditional");
        grad_a = 2.0 * (fb.inverse * ar - fc.inverse * ak);
    } else {
        const auto fa = linalg::factor_hermitian(st.r_a, "r_a");
        const auto fj = linalg::factor_hermitian(joint_covariance(st), "joint");
        const CMatrix qa = r.matrix + noise_var * CMatrix::Identity(n, n);
        const CMatrix aqa = a * qa;
        const CMatrix k11 = fj.inverse.topLeftCorner(s, s);
        const CMatrix w = fj.inverse.topRightCorner(s, s) + fj.inverse.bottomLeftCorner(s, s)
                          + fj.inverse.bottomRightCorner(s, s);
        grad_a = 2.0 * (fa.inverse * aqa + fb.inverse * ar - k11 * aqa - w * ar);
    }
    return KgrGradient{CMatrix(-grad_a.transpose() / std::numbers::ln2)};
}

// Component of a gradient tangent to the sphere Tr(P P^H) = const at P.
inline CMatrix sphere_tangent(const CMatrix &grad, const CMatrix &p)
{
    const double pp = p.squaredNorm();
    if (pp == 0.0)
        return grad;
    const double radial = (p.conjugate().cwiseProduct(grad)).sum().real() / pp;
    return grad - radial * p;
}

} // namespace fluidkey
