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

#include "fluidkey/baselines.hpp"
#include "fluidkey/constraints.hpp"
#include "fluidkey/kgr.hpp"
#include "fluidkey/pso.hpp"

#include <chrono>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fluidkey {

struct PgdConfig {
    int max_steps = 100;
    double step_size = 0.1;
    double backtrack = 0.5;
    int max_halvings = 20;
    double grad_tol = 1e-6;

    void validate() const
    {
        if (max_steps < 0)
            throw std::invalid_argument("pgd: max_steps must be nonnegative");
        if (!(step_size > 0.0))
            throw std::invalid_argument("pgd: step_size must be positive");
        if (!(backtrack > 0.0 && backtrack < 1.0))
            throw std::invalid_argument("pgd: backtrack factor must lie in (0, 1)");
        if (max_halvings < 0)
            throw std::invalid_argument("pgd: max_halvings must be nonnegative");
        if (!(grad_tol > 0.0))
            throw std::invalid_argument("pgd: grad_tol must be positive");
    }
};

struct PgdResult {
    Precoder precoder;
    std::vector<double> losses; // losses[0] is the start point; one entry per accepted step after
    int accepted_steps = 0;
    double tangent_norm = 0.0;  // sphere-tangent gradient norm at the returned point
};

// Projected gradient descent on L(P) = -R_sk(P) over Tr(P P^H) = p_max with
// the covariance held fixed. Each step starts at step_size and is scaled by
// `backtrack` until the loss does not increase; the run stops after
// max_steps, when the tangent gradient norm falls below grad_tol, or when no
// trial step is accepted.
inline PgdResult pgd_precoder(const ChannelCovariance &cov, const Scenario &sc, const PgdConfig &cfg,
                              Precoder start)
{
    cfg.validate();
    PgdResult out;
    out.precoder = project_power(start, sc.p_max);
    double loss = -kgr(out.precoder, cov, sc.noise_var).bits;
    out.losses.push_back(loss);
    CMatrix tangent = sphere_tangent(kgr_gradient(out.precoder, cov, sc.noise_var).matrix, out.precoder.matrix);
    out.tangent_norm = tangent.norm();

    for (int step = 0; step < cfg.max_steps && out.tangent_norm >= cfg.grad_tol; ++step) {
        const CMatrix grad = kgr_gradient(out.precoder, cov, sc.noise_var).matrix;
        double eta = cfg.step_size;
        bool accepted = false;
        for (int h = 0; h <= cfg.max_halvings; ++h, eta *= cfg.backtrack) {
            Precoder trial{out.precoder.matrix - eta * grad};
            if (!(trial.power() > 0.0))
                continue;
            trial = project_power(trial, sc.p_max);
            double trial_loss;
            try {
                trial_loss = -kgr(trial, cov, sc.noise_var).bits;
            } catch (const KgrError &) {
                continue;
            }
            if (trial_loss <= loss) {
                out.precoder = std::move(trial);
                loss = trial_loss;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
        ++out.accepted_steps;
        out.losses.push_back(loss);
        tangent = sphere_tangent(kgr_gradient(out.precoder, cov, sc.noise_var).matrix, out.precoder.matrix);
        out.tangent_norm = tangent.norm();
    }
    return out;
}

inline PgdResult pgd_precoder(const Layout &layout, const Scenario &sc, const PathSet &paths,
                              const PgdConfig &cfg, Rng &rng, std::optional<Precoder> start = std::nullopt,
                              CovarianceMode mode = CovarianceMode::Analytic)
{
    const auto cov = CovarianceModel::for_scenario(sc, mode)(layout, paths, sc.wavelength);
    Precoder p0 = start ? *start : random_precoder(sc.n_antennas, sc.n_pilots, sc.p_max, rng);
    return pgd_precoder(cov, sc, cfg, std::move(p0));
}

// Search over the flattened layout [x_1, y_1, ..., x_N, y_N] with P fixed.
class LayoutProblem {
public:
    LayoutProblem(const Scenario &scenario, const PathSet &paths, Precoder precoder, PenaltyConfig penalty,
                  CovarianceModel cov)
        : sc_(scenario), paths_(paths), p_(std::move(precoder)), penalty_(penalty), cov_(cov)
    {
    }

    int dimension() const { return 2 * sc_.n_antennas; }
    double range(int d) const { return d % 2 == 0 ? sc_.region.width() : sc_.region.height(); }

    static Layout to_layout(const RVector &x)
    {
        Layout layout(static_cast<int>(x.size() / 2));
        for (int i = 0; i < layout.size(); ++i) {
            layout.positions(i, 0) = x(2 * i);
            layout.positions(i, 1) = x(2 * i + 1);
        }
        return layout;
    }

    static RVector to_vector(const Layout &layout)
    {
        RVector x(2 * layout.size());
        for (int i = 0; i < layout.size(); ++i) {
            x(2 * i) = layout.positions(i, 0);
            x(2 * i + 1) = layout.positions(i, 1);
        }
        return x;
    }

    void repair(RVector &x) const { x = to_vector(clamp_region(to_layout(x), sc_.region)); }

    RVector sample(Rng &rng) const
    {
        auto layout = feasible_layout(sc_.n_antennas, sc_.region, sc_.d_min, rng);
        if (!layout)
            layout = uniform_layout(sc_.n_antennas, sc_.region, rng);
        return to_vector(*layout);
    }

    FitnessValue evaluate(const RVector &x) const
    {
        const Layout layout = to_layout(x);
        return penalized_fitness(p_, layout, cov_(layout, paths_, sc_.wavelength), sc_.noise_var, penalty_);
    }

private:
    const Scenario &sc_;
    const PathSet &paths_;
    Precoder p_;
    PenaltyConfig penalty_;
    CovarianceModel cov_;
};

// PSO over antenna positions with the precoder frozen. When `incumbent` is
// given, particle 0 starts there.
inline std::pair<Layout, OptTrace> pso_layout(const Precoder &p_fixed, const Scenario &scenario,
                                              const PathSet &paths, const PsoConfig &cfg,
                                              const RngStreams &streams, const PenaltyConfig &penalty,
                                              std::optional<Layout> incumbent = std::nullopt,
                                              CovarianceMode mode = CovarianceMode::Analytic,
                                              const EvaluationHook &hook = {})
{
    scenario.validate();
    penalty.validate();
    const LayoutProblem problem(scenario, paths, p_fixed, penalty, CovarianceModel::for_scenario(scenario, mode));
    std::vector<RVector> seeded;
    if (incumbent)
        seeded.push_back(LayoutProblem::to_vector(*incumbent));
    SwarmResult res = run_swarm(problem, cfg, streams, seeded, hook);
    OptTrace trace;
    trace.records = std::move(res.records);
    trace.best_layout = LayoutProblem::to_layout(res.best_position);
    trace.best_precoder = p_fixed;
    trace.best = res.best;
    return {trace.best_layout, std::move(trace)};
}

struct AoConfig {
    PgdConfig pgd;
    PsoConfig pso{30, 150};
    int n_rounds = 1;
};

struct AoRound {
    std::vector<double> pgd_losses;
    std::vector<TraceRecord> pso_records;
    double fitness = 0.0; // penalized objective at the end of the round
};

struct AoResult {
    Precoder best_precoder;
    Layout best_layout;
    double best_kgr = 0.0;
    double best_penalty = 0.0;
    double phase1_kgr = 0.0; // KGR after the first PGD phase, on the initial layout
    std::vector<AoRound> rounds;
    double wall_ms = 0.0;
};

// Alternating optimization: PGD on P from the UPA layout, then PSO on T with
// P frozen, repeated n_rounds times from the incumbent.
inline AoResult run_ao(const Scenario &scenario, const PathSet &paths, const AoConfig &cfg,
                       const RngStreams &streams, const PenaltyConfig &penalty,
                       CovarianceMode mode = CovarianceMode::Analytic)
{
    scenario.validate();
    penalty.validate();
    if (cfg.n_rounds < 1)
        throw std::invalid_argument("ao: n_rounds must be positive");
    const auto started = std::chrono::steady_clock::now();
    const auto cov_model = CovarianceModel::for_scenario(scenario, mode);

    AoResult out;
    Layout layout = upa_layout(scenario);
    Rng init = streams.stream("ao-init");
    Precoder p = random_precoder(scenario.n_antennas, scenario.n_pilots, scenario.p_max, init);

    for (int round = 0; round < cfg.n_rounds; ++round) {
        AoRound rec;
        const auto cov = cov_model(layout, paths, scenario.wavelength);
        PgdResult pgd = pgd_precoder(cov, scenario, cfg.pgd, p);
        p = std::move(pgd.precoder);
        rec.pgd_losses = std::move(pgd.losses);
        if (round == 0)
            out.phase1_kgr = -rec.pgd_losses.back();

        auto [best_layout, trace] =
            pso_layout(p, scenario, paths, cfg.pso, streams.child("ao-pso", static_cast<std::uint64_t>(round)),
                       penalty, layout, mode);
        layout = std::move(best_layout);
        rec.pso_records = std::move(trace.records);
        rec.fitness = trace.best.fitness;
        out.rounds.push_back(std::move(rec));
    }

    out.best_precoder = p;
    out.best_layout = layout;
    out.best_kgr = kgr(p, cov_model(layout, paths, scenario.wavelength), scenario.noise_var).bits;
    out.best_penalty = spacing_penalty(layout, scenario.d_min);
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return out;
}

} // namespace fluidkey
