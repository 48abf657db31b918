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


#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace fluidkey;
using namespace fluidkey::testing;
namespace fs = std::filesystem;

namespace {

const char *kSmallConfig = R"(# quick configuration
scenario.n_antennas = 4
scenario.n_pilots = 4
scenario.n_paths = 6
pso.n_particles = 8
pso.max_iters = 10
ao.pso_particles = 6
ao.pso_iters = 8
pgd.max_steps = 20
experiment.seeds = 1,2,3
)";

fs::path fresh_dir(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / ("fluidkey_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small_config(const std::string &name)
{
    ExperimentConfig cfg = parse_config(kSmallConfig);
    cfg.out_dir = fresh_dir(name).string();
    return cfg;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path &p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string strip_elapsed(const std::string &csv)
{
    // elapsed_ms is the last column of trace rows.
    return std::regex_replace(csv, std::regex(",[^,\\n]*\\n"), ",\n");
}

} // namespace

TEST(ConfigTest, DefaultsAreTheReferenceScenario)
{
    const ExperimentConfig cfg = parse_config("");
    EXPECT_EQ(cfg.scenario.n_antennas, 4);
    EXPECT_EQ(cfg.scenario.n_pilots, 4);
    EXPECT_EQ(cfg.scenario.n_paths, 8);
    EXPECT_EQ(cfg.pso.n_particles, 50);
    EXPECT_EQ(cfg.pso.max_iters, 200);
    EXPECT_EQ(cfg.ao.pso.n_particles, 30);
    EXPECT_EQ(cfg.ao.pso.max_iters, 150);
    EXPECT_EQ(cfg.seeds.size(), 5u);
    EXPECT_EQ(cfg.sweep, (std::vector<int>{4, 6, 8, 10}));
    EXPECT_DOUBLE_EQ(cfg.scenario.d_min, cfg.scenario.wavelength / 2.0);
    EXPECT_EQ(cfg.resolved_random_trials(), 50 * 200);
}

TEST(ConfigTest, WavelengthDrivesDerivedGeometry)
{
    const ExperimentConfig cfg = parse_config("scenario.wavelength = 0.2\n");
    EXPECT_DOUBLE_EQ(cfg.scenario.d_min, 0.1);
    EXPECT_DOUBLE_EQ(cfg.scenario.region.x_hi, 4.0);
}

TEST(ConfigTest, RejectsMalformedInput)
{
    EXPECT_THROW(parse_config("scenario.n_antennas 4\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("scenario.unknown = 1\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("pso.c1 = 1\npso.c1 = 2\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("pso.c1 = abc\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("experiment.methods = joint_pso,gradient\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("scenario.n_antennas = 0\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("scenario.region = 0,1,0\n"), std::invalid_argument);
    EXPECT_THROW(parse_config("experiment.covariance = exact\n"), std::invalid_argument);
    EXPECT_THROW(load_config("/nonexistent/fluidkey.cfg"), std::runtime_error);
}

TEST(ConfigTest, RenderParseRoundTrip)
{
    ExperimentConfig cfg = parse_config(kSmallConfig);
    cfg.pso.v_max.reset();
    cfg.ao.pso.v_max.reset();
    const std::string text = render_config(cfg);
    const ExperimentConfig back = parse_config(text);
    EXPECT_EQ(render_config(back), text);
    EXPECT_FALSE(back.pso.v_max.has_value());
}

TEST(ConfigTest, SeedListParsing)
{
    EXPECT_EQ(parse_seed_list("3, 1,2"), (std::vector<std::uint64_t>{3, 1, 2}));
    EXPECT_THROW(parse_seed_list("1,x"), std::invalid_argument);
}

TEST(MedianTest, OddAndEven)
{
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(CompareTest, WritesArtifactsAndConsistentSummary)
{
    const ExperimentConfig cfg = small_config("compare");
    const CompareSummary s = cmd_compare(cfg);
    const fs::path dir(cfg.out_dir);
    for (const auto &m : cfg.methods)
        for (auto seed : cfg.seeds) {
            const std::string stem = "trace_" + m + "_seed" + std::to_string(seed);
            EXPECT_TRUE(fs::exists(dir / (stem + ".csv"))) << stem;
            EXPECT_TRUE(fs::exists(dir / (stem + ".json"))) << stem;
        }
    EXPECT_TRUE(fs::exists(dir / "paths_seed1.json"));

    const auto trace = csv_rows(dir / "trace_joint_pso_seed1.csv");
    ASSERT_FALSE(trace.empty());
    EXPECT_EQ(trace[0], (std::vector<std::string>{"iteration", "best_fitness", "best_kgr", "penalty",
                                                  "iter_best_kgr", "elapsed_ms"}));
    EXPECT_EQ(trace.size(), static_cast<std::size_t>(cfg.pso.max_iters + 2));
    EXPECT_NE(slurp(dir / "trace_joint_pso_seed1.csv").find("# scenario.n_antennas = 4"), std::string::npos);

    // Recompute medians from converged.csv.
    std::map<std::string, std::vector<double>> by_method;
    for (const auto &row : csv_rows(dir / "converged.csv"))
        if (row[0] != "method")
            by_method[row[0]].push_back(std::stod(row[2]));
    const auto summary = csv_rows(dir / "summary.csv");
    ASSERT_EQ(summary.size(), cfg.methods.size() + 1);
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const auto &row = summary[i];
        const auto &v = by_method.at(row[0]);
        EXPECT_EQ(std::stoul(row[1]), cfg.seeds.size());
        EXPECT_NEAR(std::stod(row[2]), median(v), 1e-8 * std::abs(median(v)));
        EXPECT_NEAR(std::stod(row[3]), *std::min_element(v.begin(), v.end()), 1e-8);
        EXPECT_NEAR(std::stod(row[4]), *std::max_element(v.begin(), v.end()), 1e-8);
    }
    ASSERT_TRUE(s.pso_gain_over_upa && s.ao_gain_over_upa);
    EXPECT_NEAR(*s.pso_gain_over_upa, median(by_method["joint_pso"]) / median(by_method["upa"]) - 1.0, 1e-7);
}

TEST(CompareTest, RerunIsIdenticalApartFromTiming)
{
    ExperimentConfig cfg = small_config("rerun_a");
    cfg.seeds = {4};
    cmd_compare(cfg);
    ExperimentConfig again = cfg;
    again.out_dir = fresh_dir("rerun_b").string();
    set_workers(again, 3);
    cmd_compare(again);
    for (const auto &entry : fs::directory_iterator(cfg.out_dir)) {
        const auto name = entry.path().filename();
        const std::string a = slurp(entry.path()), b = slurp(fs::path(again.out_dir) / name);
        if (name.string().rfind("trace_", 0) == 0 && name.extension() == ".csv")
            EXPECT_EQ(strip_elapsed(a), strip_elapsed(b)) << name;
        else if (name.extension() == ".csv")
            EXPECT_EQ(a, b) << name;
    }
}

TEST(CompareTest, SingleMethodGivesOneSummaryRow)
{
    ExperimentConfig cfg = small_config("random_only");
    cfg.methods = {kMethodRandom};
    cfg.random_trials = 20;
    const CompareSummary s = cmd_compare(cfg);
    EXPECT_EQ(csv_rows(fs::path(cfg.out_dir) / "summary.csv").size(), 2u);
    EXPECT_FALSE(s.pso_gain_over_upa.has_value());
}

TEST(CompareTest, UnwritableDirectoryFails)
{
    const fs::path blocker = fresh_dir("blocker");
    std::ofstream(blocker) << "file";
    ExperimentConfig cfg = small_config("unused");
    cfg.out_dir = (blocker / "sub").string();
    cfg.methods = {kMethodUpa};
    EXPECT_ANY_THROW(cmd_compare(cfg));
    fs::remove(blocker);
}

TEST(LayoutTest, ReportsUpaAndDisplacement)
{
    ExperimentConfig cfg = small_config("layout");
    cfg.methods = {kMethodJointPso, kMethodAo};
    cfg.seeds = {2};
    const auto reports = cmd_layout(cfg);
    ASSERT_EQ(reports.size(), 1u);
    const Scenario sc = scenario_for_seed(cfg, 2);
    EXPECT_EQ(reports[0].upa, upa_layout(sc));

    const auto j = nlohmann::json::parse(slurp(fs::path(cfg.out_dir) / "layout_seed2.json"));
    EXPECT_EQ(layout_from_json(j["upa"]), upa_layout(sc));
    for (const auto &m : cfg.methods) {
        const Layout t = layout_from_json(j["methods"][m]["positions"]);
        EXPECT_EQ(t, reports[0].optimized.at(m));
        EXPECT_TRUE(inside_region(t, sc.region));
        const auto disp = j["methods"][m]["displacement"].get<std::vector<double>>();
        ASSERT_EQ(disp.size(), 4u);
        for (int n = 0; n < 4; ++n)
            EXPECT_NEAR(disp[n], (t.at(n) - reports[0].upa.at(n)).norm(), 1e-12);
    }
}

TEST(LayoutTest, RejectsBaselineMethods)
{
    ExperimentConfig cfg = small_config("layout_bad");
    cfg.methods = {kMethodUpa};
    EXPECT_THROW(cmd_layout(cfg), std::invalid_argument);
}

TEST(SweepTest, SingleValueSweep)
{
    ExperimentConfig cfg = small_config("sweep");
    cfg.sweep = {5};
    cfg.seeds = {1, 2};
    const SweepSummary s = cmd_sweep(cfg);
    ASSERT_EQ(s.n_paths, std::vector<int>{5});
    ASSERT_EQ(s.converged[0].size(), 2u);
    const auto rows = csv_rows(fs::path(cfg.out_dir) / "sweep_summary.csv");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][0], "5");
    EXPECT_NEAR(std::stod(rows[1][2]), median(s.converged[0]), 1e-8);
    EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "sweep_L5_seed2.csv"));
}

TEST(PathsForTest, DependsOnSeedAndPathCount)
{
    const ExperimentConfig cfg = parse_config(kSmallConfig);
    const PathSet a = paths_for(scenario_for_seed(cfg, 1));
    EXPECT_EQ(a.elevations, paths_for(scenario_for_seed(cfg, 1)).elevations);
    EXPECT_NE(a.elevations, paths_for(scenario_for_seed(cfg, 2)).elevations);
    EXPECT_EQ(paths_for(scenario_for_seed(cfg, 1, 9)).size(), 9);
}
