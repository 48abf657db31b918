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

#include <json.hpp>

#include <stdexcept>
#include <vector>

namespace fluidkey {

// {"seed": u64, "elevations": [...], "azimuths": [...], "gain_vars": [...]}.
// Directions are derived data and recomputed on load.
inline nlohmann::json pathset_to_json(const PathSet &paths)
{
    nlohmann::json j;
    j["seed"] = paths.seed;
    j["elevations"] = paths.elevations;
    j["azimuths"] = paths.azimuths;
    j["gain_vars"] = paths.gain_vars;
    return j;
}

inline PathSet pathset_from_json(const nlohmann::json &j)
{
    PathSet p = PathSet::from_angles(j.at("elevations").get<std::vector<double>>(),
                                     j.at("azimuths").get<std::vector<double>>(), 1.0,
                                     j.at("seed").get<std::uint64_t>());
    auto gains = j.at("gain_vars").get<std::vector<double>>();
    if (gains.size() != p.elevations.size())
        throw std::invalid_argument("pathset: gain_vars length does not match the angle lists");
    for (double g : gains)
        if (!(g > 0.0))
            throw std::invalid_argument("pathset: gain variances must be positive");
    p.gain_vars = std::move(gains);
    return p;
}

inline nlohmann::json precoder_to_json(const Precoder &p)
{
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (int i = 0; i < p.antennas(); ++i) {
        std::vector<double> r, m;
        for (int k = 0; k < p.pilots(); ++k) {
            r.push_back(p.matrix(i, k).real());
            m.push_back(p.matrix(i, k).imag());
        }
        re.push_back(r);
        im.push_back(m);
    }
    return nlohmann::json{{"re", re}, {"im", im}};
}

inline nlohmann::json layout_to_json(const Layout &layout)
{
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < layout.size(); ++i)
        out.push_back({layout.positions(i, 0), layout.positions(i, 1)});
    return out;
}

inline Layout layout_from_json(const nlohmann::json &j)
{
    Layout layout(static_cast<int>(j.size()));
    for (int i = 0; i < layout.size(); ++i) {
        layout.positions(i, 0) = j.at(i).at(0).get<double>();
        layout.positions(i, 1) = j.at(i).at(1).get<double>();
    }
    return layout;
}

} // namespace fluidkey
