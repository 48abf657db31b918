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


// Experiment runner: compare, layout and sweep subcommands.

#include "fluidkey/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::string seeds;
    bool monte_carlo = false;
    int workers = 0;
};

void add_common(CLI::App *cmd, CommonOptions &opts)
{
    cmd->add_option("--config", opts.config, "key = value config file");
    cmd->add_option("--out", opts.out, "output directory (overrides experiment.out_dir)");
    cmd->add_option("--seeds", opts.seeds, "comma-separated seeds (overrides experiment.seeds)");
    cmd->add_flag("--mc", opts.monte_carlo, "use the Monte-Carlo channel covariance");
    cmd->add_option("--workers", opts.workers, "threads for fitness evaluation")->check(CLI::PositiveNumber);
}

fluidkey::ExperimentConfig resolve(const CommonOptions &opts)
{
    fluidkey::ExperimentConfig cfg = opts.config.empty() ? fluidkey::ExperimentConfig{}
                                                         : fluidkey::load_config(opts.config);
    if (!opts.out.empty())
        cfg.out_dir = opts.out;
    if (!opts.seeds.empty())
        cfg.seeds = fluidkey::parse_seed_list(opts.seeds);
    if (opts.monte_carlo)
        cfg.covariance = fluidkey::CovarianceMode::MonteCarlo;
    if (opts.workers > 0)
        fluidkey::set_workers(cfg, opts.workers);
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Fluid-antenna key generation rate simulator"};
    app.require_subcommand(1);

    CommonOptions compare_opts, layout_opts, sweep_opts;
    auto *compare = app.add_subcommand("compare", "run every method on every seed and summarize");
    auto *layout = app.add_subcommand("layout", "dump UPA versus optimized antenna positions");
    auto *sweep = app.add_subcommand("sweep", "joint PSO converged KGR versus number of paths");
    add_common(compare, compare_opts);
    add_common(layout, layout_opts);
    add_common(sweep, sweep_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (compare->parsed()) {
            const auto cfg = resolve(compare_opts);
            const auto summary = fluidkey::cmd_compare(cfg);
            for (const auto &[method, med] : summary.medians)
                std::cout << method << ": median KGR " << med << " bits/s/Hz\n";
            if (summary.pso_gain_over_upa)
                std::cout << "joint_pso over upa: " << 100.0 * *summary.pso_gain_over_upa << "%\n";
            if (summary.ao_gain_over_upa)
                std::cout << "ao over upa: " << 100.0 * *summary.ao_gain_over_upa << "%\n";
        } else if (layout->parsed()) {
            auto cfg = resolve(layout_opts);
            // Baselines have no layout to report; keep the optimizers only.
            std::erase_if(cfg.methods, [](const std::string &m) {
                return m != fluidkey::kMethodJointPso && m != fluidkey::kMethodAo;
            });
            if (cfg.methods.empty())
                cfg.methods = {fluidkey::kMethodJointPso, fluidkey::kMethodAo};
            const auto reports = fluidkey::cmd_layout(cfg);
            std::cout << "wrote " << reports.size() << " layout file(s) to " << cfg.out_dir << "\n";
        } else if (sweep->parsed()) {
            const auto cfg = resolve(sweep_opts);
            const auto summary = fluidkey::cmd_sweep(cfg);
            for (std::size_t i = 0; i < summary.n_paths.size(); ++i)
                std::cout << "L=" << summary.n_paths[i] << ": median KGR " << summary.medians[i] << " bits/s/Hz\n";
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
