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
#include "fluidkey/kgr.hpp"
#include "fluidkey/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fluidkey {

struct PenaltyConfig {
    double coefficient = 100.0; // bits per squared meter of spacing violation
    double d_min = 0.05;

    void validate() const
    {
        if (!(coefficient >= 0.0))
            throw std::invalid_argument("penalty: coefficient must be nonnegative");
        if (!(d_min > 0.0))
            throw std::invalid_argument("penalty: d_min must be positive");
    }
};

struct FitnessValue {
    double raw_kgr = 0.0;
    double penalty = 0.0;
    double fitness = 0.0;
    std::string error; // non-empty when kgr evaluation failed and fitness is -inf

    bool ok() const { return error.empty(); }
};

// Rescales P onto the sphere Tr(P P^H) = p_max.
inline Precoder project_power(const Precoder &p, double p_max)
{
    const double power = p.power();
    if (!(power > 0.0) || !std::isfinite(power))
        throw std::invalid_argument("project_power: precoder has zero or non-finite power");
    return Precoder{p.matrix * std::sqrt(p_max / power)};
}

// Sum over pairs of max(d_min - |t_i - t_j|, 0)^2.
inline double spacing_penalty(const Layout &layout, double d_min)
{
    double acc = 0.0;
    const int n = layout.size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double gap = d_min - (layout.at(i) - layout.at(j)).norm();
            if (gap > 0.0)
                acc += gap * gap;
        }
    return acc;
}

inline Layout clamp_region(const Layout &layout, const Region &region)
{
    Layout out = layout;
    for (int n = 0; n < out.size(); ++n) {
        out.positions(n, 0) = std::clamp(out.positions(n, 0), region.x_lo, region.x_hi);
        out.positions(n, 1) = std::clamp(out.positions(n, 1), region.y_lo, region.y_hi);
    }
    return out;
}

inline bool inside_region(const Layout &layout, const Region &region)
{
    for (int n = 0; n < layout.size(); ++n)
        if (!region.contains(layout.at(n)))
            return false;
    return true;
}

// fitness = kgr - coefficient * spacing_penalty. A failed kgr evaluation maps
// to -inf with the cause recorded so a swarm can continue.
inline FitnessValue penalized_fitness(const Precoder &p, const Layout &layout, const ChannelCovariance &r,
                                      double noise_var, const PenaltyConfig &cfg)
{
    FitnessValue f;
    f.penalty = spacing_penalty(layout, cfg.d_min);
    try {
        f.raw_kgr = kgr(p, r, noise_var).bits;
        f.fitness = f.raw_kgr - cfg.coefficient * f.penalty;
    } catch (const KgrError &e) {
        f.raw_kgr = -std::numeric_limits<double>::infinity();
        f.fitness = -std::numeric_limits<double>::infinity();
        f.error = e.what();
    }
    return f;
}

} // namespace fluidkey
