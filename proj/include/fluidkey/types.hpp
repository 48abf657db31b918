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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fluidkey {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Point = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;

// Axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi], meters.
struct Region {
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;
    double y_hi = 1.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    bool contains(const Point &p) const
    {
        return p.x() >= x_lo && p.x() <= x_hi && p.y() >= y_lo && p.y() <= y_hi;
    }
};

// Physical and experimental constants of one simulation.
struct Scenario {
    int n_antennas = 4;
    int n_pilots = 4;
    int n_paths = 8;
    double wavelength = 0.1;
    double p_max = 1.0;
    double noise_var = 0.1;
    double d_min = 0.05;
    Region region{0.0, 2.0, 0.0, 2.0};
    int mc_samples = 1000;
    std::uint64_t seed = 1;

    // Reference setting: N = S = 4, L = 8, P_max = 1, noise 0.1, d_min = lambda/2,
    // square region of side 20 lambda anchored at the origin.
    static Scenario reference(double wavelength = 0.1)
    {
        Scenario s;
        s.wavelength = wavelength;
        s.d_min = wavelength / 2.0;
        s.region = Region{0.0, 20.0 * wavelength, 0.0, 20.0 * wavelength};
        return s;
    }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const
    {
        if (n_antennas < 1)
            throw std::invalid_argument("scenario: n_antennas must be positive");
        if (n_pilots < 1)
            throw std::invalid_argument("scenario: n_pilots must be positive");
        if (n_paths < 1)
            throw std::invalid_argument("scenario: n_paths must be positive");
        if (!(wavelength > 0.0))
            throw std::invalid_argument("scenario: wavelength must be positive");
        if (!(p_max > 0.0))
            throw std::invalid_argument("scenario: p_max must be positive");
        if (!(noise_var > 0.0))
            throw std::invalid_argument("scenario: noise_var must be positive");
        if (!(d_min > 0.0))
            throw std::invalid_argument("scenario: d_min must be positive");
        if (!(region.width() > 0.0) || !(region.height() > 0.0))
            throw std::invalid_argument("scenario: region side lengths must be positive");
        if (mc_samples < 1)
            throw std::invalid_argument("scenario: mc_samples must be positive");
        // Grid packing at pitch d_min is a sufficient witness of feasibility.
        const double cols = std::floor(region.width() / d_min) + 1.0;
        const double rows = std::floor(region.height() / d_min) + 1.0;
        if (cols * rows < static_cast<double>(n_antennas))
            throw std::invalid_argument("scenario: region cannot hold n_antennas at spacing d_min");
    }
};

} // namespace fluidkey
