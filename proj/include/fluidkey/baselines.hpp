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

#include "fluidkey/constraints.hpp"
#include "fluidkey/pso.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fluidkey {

enum class BaselineKind { UpaPrecoderPso, RandomStrategy };

// Fixed uniform planar array: rows x cols grid at pitch d_min, anchored d_min
// inside the region's lower-left corner, filled row-major (x varies fastest).
// Non-square N uses the most-square grid with rows * cols >= N.
inline Layout upa_layout(const Scenario &sc)
{
    const int n = sc.n_antennas;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12));
    const int rows = (n + cols - 1) / cols;
    const double x_far = sc.region.x_lo + sc.d_min * cols;
    const double y_far = sc.region.y_lo + sc.d_min * rows;
    if (x_far > sc.region.x_hi || y_far > sc.region.y_hi)
        throw std::invalid_argument("upa_layout: " + std::to_string(rows) + "x" + std::to_string(cols)
                                    + " grid at pitch d_min does not fit the region");
    Layout layout(n);
    for (int i = 0; i < n; ++i) {
        layout.positions(i, 0) = sc.region.x_lo + sc.d_min * (1 + i % cols);
        layout.positions(i, 1) = sc.region.y_lo + sc.d_min * (1 + i / cols);
    }
    return layout;
}

// Search over Re(P), Im(P) only, with the layout frozen.
class PrecoderProblem {
public:
    PrecoderProblem(const Scenario &scenario, Layout layout, ChannelCovariance cov, PenaltyConfig penalty)
        : sc_(scenario), layout_(std::move(layout)), cov_(std::move(cov)), penalty_(penalty)
    {
    }

    int dimension() const { return 2 * sc_.n_antennas * sc_.n_pilots; }
    double range(int) const { return 2.0 * std::sqrt(sc_.p_max); }

    Precoder to_precoder(const RVector &x) const
    {
        const int n = sc_.n_antennas;
        const int s = sc_.n_pilots;
        Precoder p{CMatrix(n, s)};
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < s; ++k)
                p.matrix(i, k) = cplx(x(i * s + k), x(n * s + i * s + k));
        return p;
    }

    RVector to_vector(const Precoder &p) const { return encode(p, layout_).head(dimension()); }

    void repair(RVector &x) const
    {
        Precoder p = to_precoder(x);
        if (p.power() > 0.0 && std::isfinite(p.power()))
            x = to_vector(project_power(p, sc_.p_max));
    }

    RVector sample(Rng &rng) const
    {
        return to_vector(random_precoder(sc_.n_antennas, sc_.n_pilots, sc_.p_max, rng));
    }

    FitnessValue evaluate(const RVector &x) const
    {
        return penalized_fitness(to_precoder(x), layout_, cov_, sc_.noise_var, penalty_);
    }

    const Layout &layout() const { return layout_; }

private:
    const Scenario &sc_;
    Layout layout_;
    ChannelCovariance cov_;
    PenaltyConfig penalty_;
};

// Conventional fixed-position array: PSO over the precoder on the UPA.
inline OptTrace run_upa_baseline(const Scenario &scenario, const PathSet &paths, const PsoConfig &cfg,
                                 const RngStreams &streams, const PenaltyConfig &penalty,
                                 CovarianceMode mode = CovarianceMode::Analytic, const EvaluationHook &hook = {})
{
    scenario.validate();
    penalty.validate();
    Layout upa = upa_layout(scenario);
    const auto cov = CovarianceModel::for_scenario(scenario, mode)(upa, paths, scenario.wavelength);
    const PrecoderProblem problem(scenario, upa, cov, penalty);
    SwarmResult res = run_swarm(problem, cfg, streams.child("upa-pso"), {}, hook);
    OptTrace trace;
    trace.records = std::move(res.records);
    trace.best_precoder = problem.to_precoder(res.best_position);
    trace.best_layout = std::move(upa);
    trace.best = res.best;
    return trace;
}

// Independent feasible draws of (P, T). Each record carries the running
// maximum (best_*) and the trial's own value (iter_best_kgr).
inline OptTrace run_random_baseline(const Scenario &scenario, const PathSet &paths, int n_trials,
                                    const RngStreams &streams, CovarianceMode mode = CovarianceMode::Analytic,
                                    int max_tries = 100)
{
    scenario.validate();
    if (n_trials < 1)
        throw std::invalid_argument("random baseline: n_trials must be positive");
    const auto cov_model = CovarianceModel::for_scenario(scenario, mode);
    const PenaltyConfig penalty = penalty_for(scenario);
    const auto started = std::chrono::steady_clock::now();
    OptTrace trace;
    trace.records.reserve(static_cast<std::size_t>(n_trials));
    for (int t = 0; t < n_trials; ++t) {
        Rng rng = streams.stream("random-trial", static_cast<std::uint64_t>(t));
        auto layout = feasible_layout(scenario.n_antennas, scenario.region, scenario.d_min, rng, max_tries);
        if (!layout)
            throw std::runtime_error("random baseline: no feasible layout after " + std::to_string(max_tries)
                                     + " draws");
        Precoder p = random_precoder(scenario.n_antennas, scenario.n_pilots, scenario.p_max, rng);
        const FitnessValue f = penalized_fitness(p, *layout, cov_model(*layout, paths, scenario.wavelength),
                                                 scenario.noise_var, penalty);
        if (t == 0 || f.fitness > trace.best.fitness) {
            trace.best = f;
            trace.best_precoder = std::move(p);
            trace.best_layout = std::move(*layout);
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        trace.records.push_back(
            TraceRecord{t, trace.best.fitness, trace.best.raw_kgr, trace.best.penalty, f.raw_kgr, ms});
    }
    return trace;
}

} // namespace fluidkey
