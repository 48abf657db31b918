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

#include "fluidkey/ao.hpp"
#include "fluidkey/baselines.hpp"
#include "fluidkey/pso.hpp"
#include "fluidkey/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluidkey {

inline constexpr const char *kMethodJointPso = "joint_pso";
inline constexpr const char *kMethodAo = "ao";
inline constexpr const char *kMethodUpa = "upa";
inline constexpr const char *kMethodRandom = "random";

struct ExperimentConfig {
    Scenario scenario = Scenario::reference();
    std::vector<std::string> methods{kMethodJointPso, kMethodAo, kMethodUpa, kMethodRandom};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<int> sweep{4, 6, 8, 10};
    std::string out_dir = "results";
    CovarianceMode covariance = CovarianceMode::Analytic;
    PsoConfig pso;
    AoConfig ao;
    double penalty_coefficient = 100.0;
    int random_trials = 0; // 0: same evaluation budget as joint PSO
    int workers = 1;

    int resolved_random_trials() const
    {
        return random_trials > 0 ? random_trials : pso.n_particles * std::max(pso.max_iters, 1);
    }

    void validate() const
    {
        scenario.validate();
        if (methods.empty())
            throw std::invalid_argument("config: experiment.methods must not be empty");
        static const std::set<std::string> known{kMethodJointPso, kMethodAo, kMethodUpa, kMethodRandom};
        for (const auto &m : methods)
            if (!known.count(m))
                throw std::invalid_argument("config: unknown method '" + m + "'");
        if (seeds.empty())
            throw std::invalid_argument("config: experiment.seeds must not be empty");
        for (int l : sweep)
            if (l < 1)
                throw std::invalid_argument("config: sweep values must be >= 1");
        if (penalty_coefficient < 0.0)
            throw std::invalid_argument("config: penalty.coefficient must be nonnegative");
        if (workers < 1)
            throw std::invalid_argument("config: experiment.workers must be positive");
        pso.validate();
        ao.pso.validate();
        ao.pgd.validate();
        if (ao.n_rounds < 1)
            throw std::invalid_argument("config: ao.n_rounds must be positive");
    }
};

// ---------------------------------------------------------------------------
// Flat key = value config with dotted section keys. '#' starts a comment.

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline double parse_double(const std::string &key, const std::string &v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument("");
        return d;
    } catch (const std::exception &) {
        throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

inline long long parse_int(const std::string &key, const std::string &v)
{
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw std::invalid_argument("config: '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

inline std::uint64_t parse_u64(const std::string &key, const std::string &v)
{
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw std::invalid_argument("config: '" + key + "' expects an unsigned integer, got '" + v + "'");
    return out;
}

inline std::vector<std::uint64_t> parse_seeds(const std::string &key, const std::string &v)
{
    std::vector<std::uint64_t> out;
    for (const auto &item : split_list(v))
        out.push_back(parse_u64(key, item));
    return out;
}

inline std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace detail

inline std::vector<std::uint64_t> parse_seed_list(const std::string &csv)
{
    return detail::parse_seeds("--seeds", csv);
}

inline ExperimentConfig parse_config(const std::string &text)
{
    ExperimentConfig cfg;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }

    auto take = [&](const std::string &key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto num = [&](const std::string &key, double &dst) {
        if (auto v = take(key))
            dst = detail::parse_double(key, *v);
    };
    auto integer = [&](const std::string &key, int &dst) {
        if (auto v = take(key))
            dst = static_cast<int>(detail::parse_int(key, *v));
    };

    Scenario &sc = cfg.scenario;
    integer("scenario.n_antennas", sc.n_antennas);
    integer("scenario.n_pilots", sc.n_pilots);
    integer("scenario.n_paths", sc.n_paths);
    num("scenario.wavelength", sc.wavelength);
    num("scenario.p_max", sc.p_max);
    num("scenario.noise_var", sc.noise_var);
    integer("scenario.mc_samples", sc.mc_samples);
    // d_min and region default to lambda/2 and [0, 20 lambda]^2 of the final wavelength.
    sc.d_min = sc.wavelength / 2.0;
    sc.region = Region{0.0, 20.0 * sc.wavelength, 0.0, 20.0 * sc.wavelength};
    num("scenario.d_min", sc.d_min);
    if (auto v = take("scenario.region")) {
        const auto parts = detail::split_list(*v);
        if (parts.size() != 4)
            throw std::invalid_argument("config: 'scenario.region' expects x_lo, x_hi, y_lo, y_hi");
        sc.region = Region{detail::parse_double("scenario.region", parts[0]),
                           detail::parse_double("scenario.region", parts[1]),
                           detail::parse_double("scenario.region", parts[2]),
                           detail::parse_double("scenario.region", parts[3])};
    }

    if (auto v = take("experiment.methods"))
        cfg.methods = detail::split_list(*v);
    if (auto v = take("experiment.seeds"))
        cfg.seeds = detail::parse_seeds("experiment.seeds", *v);
    if (auto v = take("experiment.sweep")) {
        cfg.sweep.clear();
        for (const auto &item : detail::split_list(*v))
            cfg.sweep.push_back(static_cast<int>(detail::parse_int("experiment.sweep", item)));
    }
    if (auto v = take("experiment.out_dir"))
        cfg.out_dir = *v;
    if (auto v = take("experiment.covariance")) {
        if (*v == "analytic")
            cfg.covariance = CovarianceMode::Analytic;
        else if (*v == "monte_carlo")
            cfg.covariance = CovarianceMode::MonteCarlo;
        else
            throw std::invalid_argument("config: experiment.covariance must be analytic or monte_carlo");
    }
    integer("experiment.workers", cfg.workers);

    integer("pso.n_particles", cfg.pso.n_particles);
    integer("pso.max_iters", cfg.pso.max_iters);
    num("pso.c1", cfg.pso.c1);
    num("pso.c2", cfg.pso.c2);
    num("pso.w_max", cfg.pso.w_max);
    num("pso.w_min", cfg.pso.w_min);
    if (auto v = take("pso.v_max")) {
        if (*v == "none")
            cfg.pso.v_max.reset();
        else
            cfg.pso.v_max = detail::parse_double("pso.v_max", *v);
    }

    // Phase-2 swarm of the alternating optimizer shares the PSO coefficients.
    const int ao_particles = cfg.ao.pso.n_particles;
    const int ao_iters = cfg.ao.pso.max_iters;
    cfg.ao.pso = cfg.pso;
    cfg.ao.pso.n_particles = ao_particles;
    cfg.ao.pso.max_iters = ao_iters;
    integer("ao.pso_particles", cfg.ao.pso.n_particles);
    integer("ao.pso_iters", cfg.ao.pso.max_iters);
    integer("ao.n_rounds", cfg.ao.n_rounds);
    integer("pgd.max_steps", cfg.ao.pgd.max_steps);
    num("pgd.step_size", cfg.ao.pgd.step_size);
    num("pgd.backtrack", cfg.ao.pgd.backtrack);
    integer("pgd.max_halvings", cfg.ao.pgd.max_halvings);
    num("pgd.grad_tol", cfg.ao.pgd.grad_tol);

    num("penalty.coefficient", cfg.penalty_coefficient);
    integer("random.n_trials", cfg.random_trials);

    if (!kv.empty())
        throw std::invalid_argument("config: unknown key '" + kv.begin()->first + "'");
    cfg.pso.workers = cfg.workers;
    cfg.ao.pso.workers = cfg.workers;
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline void set_workers(ExperimentConfig &cfg, int workers)
{
    cfg.workers = workers;
    cfg.pso.workers = workers;
    cfg.ao.pso.workers = workers;
}

// Canonical key = value rendering of every resolved setting. Worker count is
// omitted: it never changes results.
inline std::string render_config(const ExperimentConfig &cfg)
{
    using detail::fmt_double;
    std::ostringstream o;
    const Scenario &sc = cfg.scenario;
    auto join = [](const auto &items) {
        std::ostringstream j;
        bool first = true;
        for (const auto &x : items) {
            j << (first ? "" : ",") << x;
            first = false;
        }
        return j.str();
    };
    o << "scenario.n_antennas = " << sc.n_antennas << "\n"
      << "scenario.n_pilots = " << sc.n_pilots << "\n"
      << "scenario.n_paths = " << sc.n_paths << "\n"
      << "scenario.wavelength = " << fmt_double(sc.wavelength) << "\n"
      << "scenario.p_max = " << fmt_double(sc.p_max) << "\n"
      << "scenario.noise_var = " << fmt_double(sc.noise_var) << "\n"
      << "scenario.d_min = " << fmt_double(sc.d_min) << "\n"
      << "scenario.region = " << fmt_double(sc.region.x_lo) << "," << fmt_double(sc.region.x_hi) << ","
      << fmt_double(sc.region.y_lo) << "," << fmt_double(sc.region.y_hi) << "\n"
      << "scenario.mc_samples = " << sc.mc_samples << "\n"
      << "experiment.methods = " << join(cfg.methods) << "\n"
      << "experiment.seeds = " << join(cfg.seeds) << "\n"
      << "experiment.sweep = " << join(cfg.sweep) << "\n"
      << "experiment.covariance = " << (cfg.covariance == CovarianceMode::Analytic ? "analytic" : "monte_carlo")
      << "\n"
      << "pso.n_particles = " << cfg.pso.n_particles << "\n"
      << "pso.max_iters = " << cfg.pso.max_iters << "\n"
      << "pso.c1 = " << fmt_double(cfg.pso.c1) << "\n"
      << "pso.c2 = " << fmt_double(cfg.pso.c2) << "\n"
      << "pso.w_max = " << fmt_double(cfg.pso.w_max) << "\n"
      << "pso.w_min = " << fmt_double(cfg.pso.w_min) << "\n"
      << "pso.v_max = " << (cfg.pso.v_max ? fmt_double(*cfg.pso.v_max) : std::string("none")) << "\n"
      << "ao.pso_particles = " << cfg.ao.pso.n_particles << "\n"
      << "ao.pso_iters = " << cfg.ao.pso.max_iters << "\n"
      << "ao.n_rounds = " << cfg.ao.n_rounds << "\n"
      << "pgd.max_steps = " << cfg.ao.pgd.max_steps << "\n"
      << "pgd.step_size = " << fmt_double(cfg.ao.pgd.step_size) << "\n"
      << "pgd.backtrack = " << fmt_double(cfg.ao.pgd.backtrack) << "\n"
      << "pgd.max_halvings = " << cfg.ao.pgd.max_halvings << "\n"
      << "pgd.grad_tol = " << fmt_double(cfg.ao.pgd.grad_tol) << "\n"
      << "penalty.coefficient = " << fmt_double(cfg.penalty_coefficient) << "\n"
      << "random.n_trials = " << cfg.resolved_random_trials() << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Running methods.

struct MethodRun {
    std::string method;
    std::uint64_t seed = 0;
    double best_kgr = 0.0;
    double best_penalty = 0.0;
    Precoder precoder;
    Layout layout;
    std::vector<TraceRecord> records; // joint_pso, upa, random
    std::optional<AoResult> ao;
    double wall_ms = 0.0;
};

inline Scenario scenario_for_seed(const ExperimentConfig &cfg, std::uint64_t seed,
                                  std::optional<int> n_paths = std::nullopt)
{
    Scenario sc = cfg.scenario;
    sc.seed = seed;
    if (n_paths)
        sc.n_paths = *n_paths;
    return sc;
}

// The propagation environment of one seed; fixed across methods.
inline PathSet paths_for(const Scenario &sc)
{
    Rng rng = RngStreams(sc.seed).stream("paths", static_cast<std::uint64_t>(sc.n_paths));
    return sample_paths(sc, rng);
}

inline MethodRun run_method(const ExperimentConfig &cfg, const std::string &method, const Scenario &sc,
                            const PathSet &paths)
{
    const RngStreams streams(sc.seed);
    const PenaltyConfig penalty{cfg.penalty_coefficient, sc.d_min};
    MethodRun run;
    run.method = method;
    run.seed = sc.seed;
    const auto started = std::chrono::steady_clock::now();
    auto from_trace = [&](OptTrace trace) {
        run.best_kgr = trace.best.raw_kgr;
        run.best_penalty = trace.best.penalty;
        run.precoder = std::move(trace.best_precoder);
        run.layout = std::move(trace.best_layout);
        run.records = std::move(trace.records);
    };
    if (method == kMethodJointPso) {
        from_trace(run_pso(sc, paths, cfg.pso, streams, penalty, cfg.covariance));
    } else if (method == kMethodUpa) {
        from_trace(run_upa_baseline(sc, paths, cfg.pso, streams, penalty, cfg.covariance));
    } else if (method == kMethodRandom) {
        from_trace(run_random_baseline(sc, paths, cfg.resolved_random_trials(), streams, cfg.covariance));
    } else if (method == kMethodAo) {
        AoResult res = run_ao(sc, paths, cfg.ao, streams, penalty, cfg.covariance);
        run.best_kgr = res.best_kgr;
        run.best_penalty = res.best_penalty;
        run.precoder = res.best_precoder;
        run.layout = res.best_layout;
        run.ao = std::move(res);
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return run;
}

inline double median(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// Output files.

namespace detail {

inline std::ofstream open_output(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

inline void write_config_comment(std::ostream &o, const ExperimentConfig &cfg, std::optional<std::uint64_t> seed)
{
    std::istringstream lines(render_config(cfg));
    std::string line;
    while (std::getline(lines, line))
        o << "# " << line << "\n";
    if (seed)
        o << "# seed = " << *seed << "\n";
}

inline void ensure_dir(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
}

} // namespace detail

inline void write_trace_csv(std::ostream &o, const std::vector<TraceRecord> &records)
{
    using detail::fmt_double;
    o << "iteration,best_fitness,best_kgr,penalty,iter_best_kgr,elapsed_ms\n";
    for (const auto &r : records)
        o << r.iteration << "," << fmt_double(r.best_fitness) << "," << fmt_double(r.best_kgr) << ","
          << fmt_double(r.penalty) << "," << fmt_double(r.iter_best_kgr) << "," << fmt_double(r.elapsed_ms) << "\n";
}

// Two sections: phase=pgd rows carry KGR after each accepted step, phase=pso
// rows carry the swarm's best penalized fitness per iteration.
inline void write_ao_csv(std::ostream &o, const AoResult &res)
{
    using detail::fmt_double;
    o << "phase,round,iteration,objective\n";
    for (std::size_t r = 0; r < res.rounds.size(); ++r) {
        const auto &round = res.rounds[r];
        for (std::size_t i = 0; i < round.pgd_losses.size(); ++i)
            o << "pgd," << r << "," << i << "," << fmt_double(-round.pgd_losses[i]) << "\n";
        for (const auto &rec : round.pso_records)
            o << "pso," << r << "," << rec.iteration << "," << fmt_double(rec.best_fitness) << "\n";
    }
}

inline void write_run_files(const std::filesystem::path &dir, const ExperimentConfig &cfg, const MethodRun &run,
                            const std::string &stem)
{
    {
        auto out = detail::open_output(dir / (stem + ".csv"));
        detail::write_config_comment(out, cfg, run.seed);
        if (run.ao)
            write_ao_csv(out, *run.ao);
        else
            write_trace_csv(out, run.records);
    }
    {
        nlohmann::json j;
        j["method"] = run.method;
        j["seed"] = run.seed;
        j["config"] = render_config(cfg);
        j["best_kgr"] = run.best_kgr;
        j["best_penalty"] = run.best_penalty;
        j["precoder"] = precoder_to_json(run.precoder);
        j["layout"] = layout_to_json(run.layout);
        auto out = detail::open_output(dir / (stem + ".json"));
        out << j.dump(2) << "\n";
    }
}

struct CompareSummary {
    std::map<std::string, std::vector<double>> converged; // method -> per-seed KGR in seed order
    std::map<std::string, double> medians;
    std::map<std::string, double> median_wall_ms;
    std::optional<double> pso_gain_over_upa; // median(joint_pso) / median(upa) - 1
    std::optional<double> ao_gain_over_upa;
};

// Comparison run: every method on every seed, summary with medians
// and improvement ratios over the fixed UPA.
inline CompareSummary cmd_compare(const ExperimentConfig &cfg)
{
    cfg.validate();
    const std::filesystem::path dir(cfg.out_dir);
    detail::ensure_dir(dir);
    CompareSummary summary;
    std::vector<MethodRun> runs;
    for (const auto seed : cfg.seeds) {
        const Scenario sc = scenario_for_seed(cfg, seed);
        const PathSet paths = paths_for(sc);
        {
            auto out = detail::open_output(dir / ("paths_seed" + std::to_string(seed) + ".json"));
            out << pathset_to_json(paths).dump(2) << "\n";
        }
        for (const auto &method : cfg.methods) {
            MethodRun run = run_method(cfg, method, sc, paths);
            write_run_files(dir, cfg, run, "trace_" + method + "_seed" + std::to_string(seed));
            summary.converged[method].push_back(run.best_kgr);
            runs.push_back(std::move(run));
        }
    }
    std::map<std::string, std::vector<double>> walls;
    for (const auto &r : runs)
        walls[r.method].push_back(r.wall_ms);
    for (const auto &[m, v] : summary.converged) {
        summary.medians[m] = median(v);
        summary.median_wall_ms[m] = median(walls[m]);
    }
    if (summary.medians.count(kMethodUpa)) {
        const double upa = summary.medians[kMethodUpa];
        if (summary.medians.count(kMethodJointPso))
            summary.pso_gain_over_upa = summary.medians[kMethodJointPso] / upa - 1.0;
        if (summary.medians.count(kMethodAo))
            summary.ao_gain_over_upa = summary.medians[kMethodAo] / upa - 1.0;
    }

    using detail::fmt_double;
    {
        auto out = detail::open_output(dir / "converged.csv");
        detail::write_config_comment(out, cfg, std::nullopt);
        out << "method,seed,kgr\n";
        for (const auto &r : runs)
            out << r.method << "," << r.seed << "," << fmt_double(r.best_kgr) << "\n";
    }
    {
        auto out = detail::open_output(dir / "summary.csv");
        detail::write_config_comment(out, cfg, std::nullopt);
        out << "method,n_seeds,median_kgr,min_kgr,max_kgr,gain_over_upa\n";
        for (const auto &method : cfg.methods) {
            const auto &v = summary.converged[method];
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            std::string gain;
            if (method == kMethodJointPso && summary.pso_gain_over_upa)
                gain = fmt_double(*summary.pso_gain_over_upa);
            else if (method == kMethodAo && summary.ao_gain_over_upa)
                gain = fmt_double(*summary.ao_gain_over_upa);
            out << method << "," << v.size() << "," << fmt_double(summary.medians[method]) << ","
                << fmt_double(*lo) << "," << fmt_double(*hi) << "," << gain << "\n";
        }
    }
    return summary;
}

struct LayoutReport {
    std::uint64_t seed = 0;
    Layout upa;
    std::map<std::string, Layout> optimized;
};

// Initial (UPA) versus optimized antenna positions, one JSON per seed.
inline std::vector<LayoutReport> cmd_layout(const ExperimentConfig &cfg)
{
    cfg.validate();
    for (const auto &m : cfg.methods)
        if (m != kMethodJointPso && m != kMethodAo)
            throw std::invalid_argument("layout: methods must be a subset of {joint_pso, ao}, got '" + m + "'");
    const std::filesystem::path dir(cfg.out_dir);
    detail::ensure_dir(dir);
    std::vector<LayoutReport> reports;
    for (const auto seed : cfg.seeds) {
        const Scenario sc = scenario_for_seed(cfg, seed);
        const PathSet paths = paths_for(sc);
        LayoutReport rep;
        rep.seed = seed;
        rep.upa = upa_layout(sc);
        nlohmann::json j;
        j["seed"] = seed;
        j["config"] = render_config(cfg);
        j["upa"] = layout_to_json(rep.upa);
        for (const auto &method : cfg.methods) {
            MethodRun run = run_method(cfg, method, sc, paths);
            nlohmann::json m;
            m["positions"] = layout_to_json(run.layout);
            std::vector<double> disp;
            for (int n = 0; n < sc.n_antennas; ++n)
                disp.push_back((run.layout.at(n) - rep.upa.at(n)).norm());
            m["displacement"] = disp;
            m["best_kgr"] = run.best_kgr;
            j["methods"][method] = m;
            rep.optimized[method] = run.layout;
        }
        auto out = detail::open_output(dir / ("layout_seed" + std::to_string(seed) + ".json"));
        out << j.dump(2) << "\n";
        reports.push_back(std::move(rep));
    }
    return reports;
}

struct SweepSummary {
    std::vector<int> n_paths;
    std::vector<std::vector<double>> converged; // [sweep index][seed index]
    std::vector<double> medians;
};

// Joint PSO converged KGR as a function of the number of paths L.
inline SweepSummary cmd_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    if (cfg.sweep.empty())
        throw std::invalid_argument("sweep: experiment.sweep must list at least one L");
    const std::filesystem::path dir(cfg.out_dir);
    detail::ensure_dir(dir);
    SweepSummary summary;
    for (const int l : cfg.sweep) {
        std::vector<double> values;
        for (const auto seed : cfg.seeds) {
            const Scenario sc = scenario_for_seed(cfg, seed, l);
            const PathSet paths = paths_for(sc);
            MethodRun run = run_method(cfg, kMethodJointPso, sc, paths);
            write_run_files(dir, cfg, run, "sweep_L" + std::to_string(l) + "_seed" + std::to_string(seed));
            values.push_back(run.best_kgr);
        }
        summary.n_paths.push_back(l);
        summary.medians.push_back(median(values));
        summary.converged.push_back(std::move(values));
    }
    using detail::fmt_double;
    auto out = detail::open_output(dir / "sweep_summary.csv");
    detail::write_config_comment(out, cfg, std::nullopt);
    out << "n_paths,n_seeds,median_kgr,min_kgr,max_kgr\n";
    for (std::size_t i = 0; i < summary.n_paths.size(); ++i) {
        const auto &v = summary.converged[i];
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        out << summary.n_paths[i] << "," << v.size() << "," << fmt_double(summary.medians[i]) << ","
            << fmt_double(*lo) << "," << fmt_double(*hi) << "\n";
    }
    return summary;
}

} // namespace fluidkey
