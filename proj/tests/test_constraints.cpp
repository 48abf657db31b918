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

using namespace fluidkey;
using namespace fluidkey::testing;

TEST(ProjectPowerTest, HalvesEntriesWhenPowerIsFour)
{
    const Precoder p{CMatrix::Constant(2, 2, cplx(1.0, 0.0))};
    ASSERT_DOUBLE_EQ(p.power(), 4.0);
    const Precoder q = project_power(p, 1.0);
    EXPECT_TRUE(q.matrix.isApprox(CMatrix::Constant(2, 2, cplx(0.5, 0.0)), 1e-15));
}

TEST(ProjectPowerTest, UnchangedOnSphere)
{
    Rng rng(1);
    const Precoder p = random_unit_precoder(4, 4, rng);
    EXPECT_LE((project_power(p, 1.0).matrix - p.matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProjectPowerTest, IdempotentAndScaleInvariant)
{
    Rng rng(2);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int rep = 0; rep < 50; ++rep) {
        const Precoder p{random_complex(4, 3, rng)};
        const Precoder once = project_power(p, 2.5);
        EXPECT_NEAR(once.power(), 2.5, 2.5 * 1e-9);
        EXPECT_LE((project_power(once, 2.5).matrix - once.matrix).cwiseAbs().maxCoeff(), 1e-12);
        const Precoder scaled = project_power(Precoder{scale(rng) * p.matrix}, 2.5);
        EXPECT_LE((scaled.matrix - once.matrix).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(ProjectPowerTest, ZeroPrecoderThrows)
{
    EXPECT_THROW(project_power(Precoder{CMatrix::Zero(2, 2)}, 1.0), std::invalid_argument);
}

TEST(SpacingPenaltyTest, FeasibleLayoutIsZero)
{
    const Scenario sc = small_scenario();
    EXPECT_EQ(spacing_penalty(upa_layout(sc), sc.d_min), 0.0);
}

TEST(SpacingPenaltyTest, CoincidentPair)
{
    Layout layout(2);
    layout.positions << 1.0, 1.0, 1.0, 1.0;
    EXPECT_DOUBLE_EQ(spacing_penalty(layout, 0.5), 0.25);
}

TEST(SpacingPenaltyTest, ThreeCollinearAtHalfSpacing)
{
    Layout layout(3);
    layout.positions << 0.0, 0.0, 0.5, 0.0, 1.0, 0.0;
    EXPECT_DOUBLE_EQ(spacing_penalty(layout, 1.0), 0.5);
}

TEST(SpacingPenaltyTest, ZeroIffPairwiseFeasible)
{
    Rng rng(3);
    const Region region{0.0, 1.0, 0.0, 1.0};
    int feasible = 0, infeasible = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const Layout layout = random_layout(4, region, rng);
        bool ok = true;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                ok = ok && (layout.at(i) - layout.at(j)).norm() >= 0.3;
        EXPECT_EQ(spacing_penalty(layout, 0.3) == 0.0, ok);
        (ok ? feasible : infeasible)++;
    }
    EXPECT_GT(feasible, 0);
    EXPECT_GT(infeasible, 0);
}

TEST(SpacingPenaltyTest, PermutationTranslationInvariantAndContinuous)
{
    Rng rng(4);
    const Region region{0.0, 1.0, 0.0, 1.0};
    for (int rep = 0; rep < 50; ++rep) {
        const Layout layout = random_layout(5, region, rng);
        const double base = spacing_penalty(layout, 0.4);
        Layout moved = layout;
        moved.positions.col(0).array() += 7.0;
        moved.positions.col(1).array() -= 3.0;
        EXPECT_NEAR(spacing_penalty(moved, 0.4), base, 1e-12);
        Layout reversed(5);
        for (int i = 0; i < 5; ++i)
            reversed.positions.row(i) = layout.positions.row(4 - i);
        EXPECT_NEAR(spacing_penalty(reversed, 0.4), base, 1e-12);
        Layout nudged = layout;
        nudged.positions(2, 0) += 1e-9;
        EXPECT_NEAR(spacing_penalty(nudged, 0.4), base, 1e-8);
    }
}

TEST(ClampRegionTest, InsideUnchangedOutsideClampedIdempotent)
{
    const Region region{0.0, 2.0, -1.0, 1.0};
    Layout layout(3);
    layout.positions << 1.0, 0.5, 5.0, 0.0, -2.0, 3.0;
    const Layout c = clamp_region(layout, region);
    EXPECT_EQ(c.at(0), layout.at(0));
    EXPECT_EQ(c.positions(1, 0), 2.0);
    EXPECT_EQ(c.positions(2, 0), 0.0);
    EXPECT_EQ(c.positions(2, 1), 1.0);
    EXPECT_EQ(clamp_region(c, region), c);
    EXPECT_TRUE(inside_region(c, region));
}

TEST(ClampRegionTest, OutputAlwaysInsideRegion)
{
    Rng rng(5);
    const Region region{0.0, 2.0, 0.0, 2.0};
    for (int rep = 0; rep < 100; ++rep)
        EXPECT_TRUE(inside_region(clamp_region(random_layout(4, Region{-5, 7, -5, 7}, rng), region), region));
}

TEST(PenalizedFitnessTest, FeasibleOrZeroCoefficientEqualsRawKgr)
{
    const Scenario sc = small_scenario();
    const PathSet paths = paths_for_seed(sc);
    Rng rng(6);
    const Precoder p = random_unit_precoder(4, 4, rng);
    const Layout upa = upa_layout(sc);
    const auto f = penalized_fitness(p, upa, analytic_covariance(upa, paths, sc.wavelength), sc.noise_var,
                                     penalty_for(sc));
    EXPECT_TRUE(f.ok());
    EXPECT_EQ(f.penalty, 0.0);
    EXPECT_EQ(f.fitness, f.raw_kgr);

    Layout crowded(4);
    const auto g = penalized_fitness(p, crowded, analytic_covariance(crowded, paths, sc.wavelength), sc.noise_var,
                                     PenaltyConfig{0.0, sc.d_min});
    EXPECT_GT(g.penalty, 0.0);
    EXPECT_EQ(g.fitness, g.raw_kgr);
}

TEST(PenalizedFitnessTest, InfeasiblePairCostsCoefficientTimesPenalty)
{
    Rng rng(7);
    Layout pair(2);
    pair.positions << 0.3, 0.3, 0.3, 0.3;
    const ChannelCovariance r = random_covariance(2, rng);
    const Precoder p = random_unit_precoder(2, 2, rng);
    const auto f = penalized_fitness(p, pair, r, 0.1, PenaltyConfig{100.0, 0.5});
    EXPECT_DOUBLE_EQ(f.penalty, 0.25);
    EXPECT_DOUBLE_EQ(f.fitness, f.raw_kgr - 25.0);
}

TEST(PenalizedFitnessTest, KgrFailureBecomesMinusInfinity)
{
    ChannelCovariance r{CMatrix::Identity(2, 2)};
    r.matrix(0, 0) = -1.0;
    const auto f = penalized_fitness(Precoder{CMatrix::Identity(2, 2)}, Layout(2), r, 0.1, PenaltyConfig{1.0, 0.1});
    EXPECT_FALSE(f.ok());
    EXPECT_EQ(f.fitness, -std::numeric_limits<double>::infinity());
}

TEST(RngStreamsTest, ChildStreamsAreReproducibleAndDistinct)
{
    const RngStreams a(7), b(7);
    EXPECT_EQ(a.stream("x", 3)(), b.stream("x", 3)());
    EXPECT_NE(a.child_seed("x", 3), a.child_seed("x", 4));
    EXPECT_NE(a.child_seed("x", 0), a.child_seed("y", 0));
    EXPECT_NE(RngStreams(8).child_seed("x"), a.child_seed("x"));
}
