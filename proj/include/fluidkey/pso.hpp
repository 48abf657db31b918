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
#include "fluidkey/constraints.hpp"
#include "fluidkey/kgr.hpp"
#include "fluidkey/parallel.hpp"
#include "fluidkey/rng.hpp"
#include "fluidkey/types.hpp"

#include <chrono>
#include <concepts>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fluidkey {

struct PsoConfig {
    int n_particles = 50;
    int max_iters = 200;
    double c1 = 1.5;
    double c2 = 1.5;
    double w_max = 0.9;
    double w_min = 0.4;
    // Per-dimension velocity clamp as a fraction of that dimension's range.
    std::optional<double> v_max = 0.1;
    int workers = 1;

    void validate() const
    {
        if (n_particles < 1)
            throw std::invalid_argument("pso: n_particles must be positive");
        if (max_iters < 0)
            throw std::invalid_argument("pso: max_iters must be nonnegative");
        if (c1 < 0.0 || c2 < 0.0)
            throw std::invalid_argument("pso: c1 and c2 must be nonnegative");
        if (w_max < w_min)
            throw std::invalid_argument("pso: w_max must be >= w_min");
        if (v_max && !(*v_max > 0.0))
            throw std::invalid_argument("pso: v_max must be positive when set");
    }
};

// w(t) = w_max - (w_max - w_min) t / T_max.
inline double inertia_weight(int t, const PsoConfig &cfg)
{
    if (cfg.max_iters == 0)
        return cfg.w_max;
    return cfg.w_max - ((cfg.w_max - cfg.w_min) / static_cast<double>(cfg.max_iters)) * static_cast<double>(t);
}

struct TraceRecord {
    int iteration = 0;
    double best_fitness = 0.0;
    double best_kgr = 0.0;
    double penalty = 0.0;
    double iter_best_kgr = 0.0; // best raw KGR among this iteration's evaluations
    double elapsed_ms = 0.0;
};

struct OptTrace {
    std::vector<TraceRecord> records;
    Precoder best_precoder;
    Layout best_layout;
    FitnessValue best;
};

// Particle vector layout: [Re(P) row-major | Im(P) row-major | x_1, y_1, ..., x_N, y_N].
inline RVector encode(const Precoder &p, const Layout &layout)
{
    const int n = p.antennas();
    const int s = p.pilots();
    if (layout.size() != n)
        throw std::invalid_argument("encode: precoder and layout disagree on antenna count");
    RVector v(2 * n * s + 2 * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < s; ++k) {
            v(i * s + k) = p.matrix(i, k).real();
            v(n * s + i * s + k) = p.matrix(i, k).imag();
        }
    for (int i = 0; i < n; ++i) {
        v(2 * n * s + 2 * i) = layout.positions(i, 0);
        v(2 * n * s + 2 * i + 1) = layout.positions(i, 1);
    }
    return v;
}

inline std::pair<Precoder, Layout> decode(const RVector &v, int n, int s)
{
    if (v.size() != 2 * n * s + 2 * n)
        throw std::invalid_argument("decode: expected vector of length " + std::to_string(2 * n * s + 2 * n)
                                    + ", got " + std::to_string(v.size()));
    Precoder p{CMatrix(n, s)};
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < s; ++k)
            p.matrix(i, k) = cplx(v(i * s + k), v(n * s + i * s + k));
    Layout layout(n);
    for (int i = 0; i < n; ++i) {
        layout.positions(i, 0) = v(2 * n * s + 2 * i);
        layout.positions(i, 1) = v(2 * n * s + 2 * i + 1);
    }
    return {std::move(p), std::move(layout)};
}

// A search space the swarm can optimize. evaluate() must be safe to call
// concurrently; repair() maps an arbitrary point back onto the feasible set.
template <typename P>
concept SwarmProblem = requires(const P &p, RVector &x, const RVector &cx, Rng &rng) {
    { p.dimension() } -> std::convertible_to<int>;
    { p.range(0) } -> std::convertible_to<double>;
    { p.repair(x) };
    { p.sample(rng) } -> std::convertible_to<RVector>;
    { p.evaluate(cx) } -> std::convertible_to<FitnessValue>;
};

struct Particle {
    RVector position;
    RVector velocity;
    RVector personal_best_position;
    FitnessValue personal_best;
};

struct SwarmState {
    std::vector<Particle> particles;
    RVector global_best_position;
    FitnessValue global_best;
    RVector v_limit; // empty when unclamped
    int iteration = 0;
    Rng rng;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
};

// Called once per fitness evaluation with (iteration, particle index, value).
using EvaluationHook = std::function<void(int, int, const FitnessValue &)>;

namespace detail {

inline bool improves(const FitnessValue &candidate, const FitnessValue &incumbent)
{
    return candidate.fitness > incumbent.fitness;
}

inline double elapsed_ms(const SwarmState &st)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - st.started).count();
}

inline TraceRecord make_record(const SwarmState &st, double iter_best_kgr)
{
    return TraceRecord{st.iteration, st.global_best.fitness, st.global_best.raw_kgr, st.global_best.penalty,
                       iter_best_kgr, elapsed_ms(st)};
}

template <SwarmProblem Problem>
std::vector<FitnessValue> evaluate_all(const Problem &problem, const std::vector<Particle> &particles,
                                       int workers)
{
    std::vector<FitnessValue> out(particles.size());
    parallel_for(particles.size(), workers,
                 [&](std::size_t m) { out[m] = problem.evaluate(particles[m].position); });
    return out;
}

} // namespace detail

// Draws initial positions (the first `seeded` entries are used verbatim after
// repair), uniform velocities within the clamp, and evaluates the swarm.
// Ties keep the earlier particle as global best.
template <SwarmProblem Problem>
SwarmState init_swarm(const Problem &problem, const PsoConfig &cfg, const RngStreams &streams,
                      const std::vector<RVector> &seeded = {}, const EvaluationHook &hook = {},
                      std::vector<TraceRecord> *records = nullptr)
{
    cfg.validate();
    SwarmState st;
    st.rng = streams.stream("pso-step");
    const int dim = problem.dimension();
    if (cfg.v_max) {
        st.v_limit.resize(dim);
        for (int d = 0; d < dim; ++d)
            st.v_limit(d) = *cfg.v_max * problem.range(d);
    }
    Rng init = streams.stream("pso-init");
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    st.particles.resize(cfg.n_particles);
    for (int m = 0; m < cfg.n_particles; ++m) {
        Particle &pt = st.particles[m];
        if (m < static_cast<int>(seeded.size())) {
            if (seeded[m].size() != dim)
                throw std::invalid_argument("init_swarm: seeded particle has wrong dimension");
            pt.position = seeded[m];
        } else {
            pt.position = problem.sample(init);
        }
        problem.repair(pt.position);
        pt.velocity = RVector::Zero(dim);
        if (cfg.v_max)
            for (int d = 0; d < dim; ++d)
                pt.velocity(d) = unit(init) * st.v_limit(d);
    }

    const auto values = detail::evaluate_all(problem, st.particles, cfg.workers);
    double iter_best = -std::numeric_limits<double>::infinity();
    st.global_best.fitness = -std::numeric_limits<double>::infinity();
    st.global_best.raw_kgr = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < cfg.n_particles; ++m) {
        Particle &pt = st.particles[m];
        pt.personal_best_position = pt.position;
        pt.personal_best = values[m];
        if (hook)
            hook(0, m, values[m]);
        iter_best = std::max(iter_best, values[m].raw_kgr);
        if (m == 0 || detail::improves(values[m], st.global_best)) {
            st.global_best = values[m];
            st.global_best_position = pt.position;
        }
    }
    if (records)
        records->push_back(detail::make_record(st, iter_best));
    return st;
}

// One synchronous iteration: every particle moves against the global best of
// the previous iteration, evaluations run in parallel, then personal and
// global bests are updated in particle order with strict improvement.
template <SwarmProblem Problem>
void pso_step(SwarmState &st, const Problem &problem, const PsoConfig &cfg, const EvaluationHook &hook = {},
              std::vector<TraceRecord> *records = nullptr)
{
    ++st.iteration;
    const double w = inertia_weight(st.iteration, cfg);
    const int dim = problem.dimension();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Particle &pt : st.particles) {
        for (int d = 0; d < dim; ++d) {
            const double r1 = unit(st.rng);
            const double r2 = unit(st.rng);
            double v = w * pt.velocity(d) + cfg.c1 * r1 * (pt.personal_best_position(d) - pt.position(d))
                       + cfg.c2 * r2 * (st.global_best_position(d) - pt.position(d));
            if (st.v_limit.size() == dim)
                v = std::clamp(v, -st.v_limit(d), st.v_limit(d));
            pt.velocity(d) = v;
        }
        pt.position += pt.velocity;
        problem.repair(pt.position);
    }

    const auto values = detail::evaluate_all(problem, st.particles, cfg.workers);
    double iter_best = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < st.particles.size(); ++m) {
        Particle &pt = st.particles[m];
        if (hook)
            hook(st.iteration, static_cast<int>(m), values[m]);
        iter_best = std::max(iter_best, values[m].raw_kgr);
        if (detail::improves(values[m], pt.personal_best)) {
            pt.personal_best = values[m];
            pt.personal_best_position = pt.position;
        }
        if (detail::improves(values[m], st.global_best)) {
            st.global_best = values[m];
            st.global_best_position = pt.position;
        }
    }
    if (records)
        records->push_back(detail::make_record(st, iter_best));
}

struct SwarmResult {
    std::vector<TraceRecord> records;
    RVector best_position;
    FitnessValue best;
};

template <SwarmProblem Problem>
SwarmResult run_swarm(const Problem &problem, const PsoConfig &cfg, const RngStreams &streams,
                      const std::vector<RVector> &seeded = {}, const EvaluationHook &hook = {})
{
    SwarmResult out;
    out.records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);
    SwarmState st = init_swarm(problem, cfg, streams, seeded, hook, &out.records);
    for (int t = 0; t < cfg.max_iters; ++t)
        pso_step(st, problem, cfg, hook, &out.records);
    out.best_position = st.global_best_position;
    out.best = st.global_best;
    return out;
}

// ---------------------------------------------------------------------------
// Covariance evaluation shared by all problems.

enum class CovarianceMode { Analytic, MonteCarlo };

struct CovarianceModel {
    CovarianceMode mode = CovarianceMode::Analytic;
    int mc_samples = 1000;
    std::uint64_t mc_seed = 0; // fixed per run: every evaluation reuses the same draws

    ChannelCovariance operator()(const Layout &layout, const PathSet &paths, double wavelength) const
    {
        if (mode == CovarianceMode::Analytic)
            return analytic_covariance(layout, paths, wavelength);
        return mc_covariance(layout, paths, mc_samples, RngStreams(mc_seed), wavelength, 1);
    }

    static CovarianceModel for_scenario(const Scenario &sc, CovarianceMode mode)
    {
        return CovarianceModel{mode, sc.mc_samples, RngStreams(sc.seed).child_seed("mc-eval")};
    }
};

// ---------------------------------------------------------------------------
// Sampling helpers for initial particles and random strategies.

// Entrywise standard complex Gaussian, projected onto the power sphere.
inline Precoder random_precoder(int n, int s, double p_max, Rng &rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Precoder p{CMatrix(n, s)};
    do {
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < s; ++k) {
                const double re = normal(rng);
                const double im = normal(rng);
                p.matrix(i, k) = cplx(re, im) * std::sqrt(0.5);
            }
    } while (!(p.power() > 0.0));
    return project_power(p, p_max);
}

inline Layout uniform_layout(int n, const Region &region, Rng &rng)
{
    std::uniform_real_distribution<double> ux(region.x_lo, region.x_hi);
    std::uniform_real_distribution<double> uy(region.y_lo, region.y_hi);
    Layout layout(n);
    for (int i = 0; i < n; ++i) {
        layout.positions(i, 0) = ux(rng);
        layout.positions(i, 1) = uy(rng);
    }
    return layout;
}

// Uniform layout resampled until it meets the spacing constraint. Returns
// nullopt once `max_tries` draws have all been infeasible.
inline std::optional<Layout> feasible_layout(int n, const Region &region, double d_min, Rng &rng,
                                             int max_tries = 100)
{
    for (int t = 0; t < max_tries; ++t) {
        Layout layout = uniform_layout(n, region, rng);
        if (spacing_penalty(layout, d_min) == 0.0)
            return layout;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Joint precoder + layout search (Re(P), Im(P), T concatenated).

class JointProblem {
public:
    JointProblem(const Scenario &scenario, const PathSet &paths, PenaltyConfig penalty, CovarianceModel cov)
        : sc_(scenario), paths_(paths), penalty_(penalty), cov_(cov)
    {
    }

    int dimension() const { return 2 * sc_.n_antennas * sc_.n_pilots + 2 * sc_.n_antennas; }

    double range(int d) const
    {
        const int split = 2 * sc_.n_antennas * sc_.n_pilots;
        if (d < split)
            return 2.0 * std::sqrt(sc_.p_max);
        return (d - split) % 2 == 0 ? sc_.region.width() : sc_.region.height();
    }

    void repair(RVector &x) const
    {
        auto [p, layout] = decode(x, sc_.n_antennas, sc_.n_pilots);
        if (p.power() > 0.0 && std::isfinite(p.power()))
            p = project_power(p, sc_.p_max);
        x = encode(p, clamp_region(layout, sc_.region));
    }

    RVector sample(Rng &rng) const
    {
        Precoder p = random_precoder(sc_.n_antennas, sc_.n_pilots, sc_.p_max, rng);
        auto layout = feasible_layout(sc_.n_antennas, sc_.region, sc_.d_min, rng);
        if (!layout)
            layout = uniform_layout(sc_.n_antennas, sc_.region, rng);
        return encode(p, *layout);
    }

    FitnessValue evaluate(const RVector &x) const
    {
        const auto [p, layout] = decode(x, sc_.n_antennas, sc_.n_pilots);
        return penalized_fitness(p, layout, cov_(layout, paths_, sc_.wavelength), sc_.noise_var, penalty_);
    }

private:
    const Scenario &sc_;
    const PathSet &paths_;
    PenaltyConfig penalty_;
    CovarianceModel cov_;
};

inline PenaltyConfig penalty_for(const Scenario &sc, double coefficient = 100.0)
{
    return PenaltyConfig{coefficient, sc.d_min};
}

// Joint particle-swarm optimization of (P, T).
inline OptTrace run_pso(const Scenario &scenario, const PathSet &paths, const PsoConfig &cfg,
                        const RngStreams &streams, const PenaltyConfig &penalty,
                        CovarianceMode mode = CovarianceMode::Analytic, const EvaluationHook &hook = {})
{
    scenario.validate();
    penalty.validate();
    const JointProblem problem(scenario, paths, penalty, CovarianceModel::for_scenario(scenario, mode));
    SwarmResult res = run_swarm(problem, cfg, streams.child("joint-pso"), {}, hook);
    OptTrace trace;
    trace.records = std::move(res.records);
    auto [p, layout] = decode(res.best_position, scenario.n_antennas, scenario.n_pilots);
    trace.best_precoder = std::move(p);
    trace.best_layout = std::move(layout);
    trace.best = res.best;
    return trace;
}

} // namespace fluidkey
