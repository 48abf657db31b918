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

#include "fluidkey/parallel.hpp"
#include "fluidkey/rng.hpp"
#include "fluidkey/types.hpp"

#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace fluidkey {

// L far-field propagation paths. directions[l] = [sin(theta) cos(phi), cos(theta)],
// the in-plane projection of the 3-D arrival direction (norm <= 1, not renormalized).
struct PathSet {
    std::vector<double> elevations;
    std::vector<double> azimuths;
    std::vector<Point> directions;
    std::vector<double> gain_vars;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(elevations.size()); }

    double total_power() const
    {
        double s = 0.0;
        for (double g : gain_vars)
            s += g;
        return s;
    }

    static Point direction(double elevation, double azimuth)
    {
        return Point(std::sin(elevation) * std::cos(azimuth), std::cos(elevation));
    }

    // Builds a path set from angles, splitting total_power evenly.
    static PathSet from_angles(std::vector<double> elevations, std::vector<double> azimuths,
                               double total_power = 1.0, std::uint64_t seed = 0)
    {
        if (elevations.size() != azimuths.size() || elevations.empty())
            throw std::invalid_argument("PathSet: need the same positive number of elevations and azimuths");
        PathSet p;
        const auto n = elevations.size();
        p.elevations = std::move(elevations);
        p.azimuths = std::move(azimuths);
        p.seed = seed;
        p.directions.reserve(n);
        for (std::size_t l = 0; l < n; ++l)
            p.directions.push_back(direction(p.elevations[l], p.azimuths[l]));
        p.gain_vars.assign(n, total_power / static_cast<double>(n));
        return p;
    }
};

// Antenna positions t_n, one row per antenna.
struct Layout {
    Eigen::Matrix<double, Eigen::Dynamic, 2> positions;

    Layout() = default;
    explicit Layout(int n) : positions(Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(n, 2)) {}
    explicit Layout(Eigen::Matrix<double, Eigen::Dynamic, 2> p) : positions(std::move(p)) {}

    int size() const { return static_cast<int>(positions.rows()); }
    Point at(int n) const { return positions.row(n).transpose(); }

    bool operator==(const Layout &other) const
    {
        return positions.rows() == other.positions.rows() && positions == other.positions;
    }
};

// Channel covariance R = E{h h^H}, N x N Hermitian.
struct ChannelCovariance {
    CMatrix matrix;

    int size() const { return static_cast<int>(matrix.rows()); }
};

// Angles i.i.d. uniform on [0, pi]^2, equal power split.
inline PathSet sample_paths(const Scenario &scenario, Rng &rng, double total_power = 1.0)
{
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::vector<double> el(scenario.n_paths), az(scenario.n_paths);
    for (int l = 0; l < scenario.n_paths; ++l) {
        el[l] = angle(rng);
        az[l] = angle(rng);
    }
    return PathSet::from_angles(std::move(el), std::move(az), total_power, scenario.seed);
}

inline CVector channel_response(const Layout &layout, const PathSet &paths, std::span<const cplx> gains,
                                double wavelength)
{
    if (static_cast<int>(gains.size()) != paths.size())
        throw std::invalid_argument("channel_response: one gain per path required");
    const double k = 2.0 * kPi / wavelength;
    CVector h = CVector::Zero(layout.size());
    for (int n = 0; n < layout.size(); ++n) {
        const Point t = layout.at(n);
        cplx acc{0.0, 0.0};
        for (int l = 0; l < paths.size(); ++l)
            acc += gains[l] * std::polar(1.0, k * t.dot(paths.directions[l]));
        h(n) = acc;
    }
    return h;
}

// Closed form under uncorrelated zero-mean path gains:
// R[i,j] = sum_l E|g_l|^2 exp(j k (t_i - t_j)^T rho_l).
inline ChannelCovariance analytic_covariance(const Layout &layout, const PathSet &paths, double wavelength)
{
    const int n = layout.size();
    const double k = 2.0 * kPi / wavelength;
    const double total = paths.total_power();
    CMatrix r(n, n);
    for (int i = 0; i < n; ++i) {
        r(i, i) = cplx(total, 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Point d = layout.at(i) - layout.at(j);
            cplx acc{0.0, 0.0};
            for (int l = 0; l < paths.size(); ++l)
                acc += paths.gain_vars[l] * std::polar(1.0, k * d.dot(paths.directions[l]));
            r(i, j) = acc;
            r(j, i) = std::conj(acc);
        }
    }
    return ChannelCovariance{std::move(r)};
}

// Sample average of h h^H over explicit gain draws, Hermitized.
inline ChannelCovariance sample_covariance(const Layout &layout, const PathSet &paths,
                                           std::span<const std::vector<cplx>> gain_draws, double wavelength)
{
    if (gain_draws.empty())
        throw std::invalid_argument("sample_covariance: at least one draw required");
    const int n = layout.size();
    CMatrix acc = CMatrix::Zero(n, n);
    for (const auto &g : gain_draws) {
        const CVector h = channel_response(layout, paths, g, wavelength);
        acc.noalias() += h * h.adjoint();
    }
    acc /= static_cast<double>(gain_draws.size());
    CMatrix herm = (acc + acc.adjoint()) * 0.5;
    return ChannelCovariance{std::move(herm)};
}

namespace detail {
inline constexpr int kMcBlock = 256;
}

// Monte-Carlo estimate with gains ~ CN(0, gain_vars[l]). Samples are drawn in
// fixed blocks of 256 from per-block sub-streams, so the result does not
// depend on `workers`.
inline ChannelCovariance mc_covariance(const Layout &layout, const PathSet &paths, int samples,
                                       const RngStreams &streams, double wavelength, int workers = 1)
{
    if (samples < 1)
        throw std::invalid_argument("mc_covariance: samples must be positive");
    const int n = layout.size();
    const int n_paths = paths.size();
    const double k = 2.0 * kPi / wavelength;

    // Steering matrix A[n, l] = exp(j k t_n^T rho_l); h = A g.
    CMatrix steer(n, n_paths);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n_paths; ++l)
            steer(i, l) = std::polar(1.0, k * layout.at(i).dot(paths.directions[l]));

    const int n_blocks = (samples + detail::kMcBlock - 1) / detail::kMcBlock;
    std::vector<CMatrix> partial(n_blocks);
    detail::parallel_for(static_cast<std::size_t>(n_blocks), workers, [&](std::size_t b) {
        Rng rng = streams.stream("mc-block", b);
        std::normal_distribution<double> normal(0.0, 1.0);
        const int lo = static_cast<int>(b) * detail::kMcBlock;
        const int hi = std::min(samples, lo + detail::kMcBlock);
        CMatrix block = CMatrix::Zero(n, n);
        CVector g(n_paths);
        for (int s = lo; s < hi; ++s) {
            for (int l = 0; l < n_paths; ++l) {
                const double sd = std::sqrt(paths.gain_vars[l] / 2.0);
                const double re = normal(rng);
                const double im = normal(rng);
                g(l) = cplx(sd * re, sd * im);
            }
            const CVector h = steer * g;
            block.noalias() += h * h.adjoint();
        }
        partial[b] = std::move(block);
    });

    CMatrix acc = CMatrix::Zero(n, n);
    for (const auto &p : partial)
        acc += p;
    acc /= static_cast<double>(samples);
    CMatrix herm = (acc + acc.adjoint()) * 0.5;
    return ChannelCovariance{std::move(herm)};
}

} // namespace fluidkey
