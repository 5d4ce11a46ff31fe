// Copyright 2026 The noon-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include <cmath>

#include "noon/feedforward.hpp"

using namespace noon;
using num::make_rational;

TEST(RoundHalfUp, Boundaries) {
    EXPECT_EQ(feedforward::round_half_up(make_rational(5, 2)), 3);
    EXPECT_EQ(feedforward::round_half_up(make_rational(49, 20)), 2);
    EXPECT_EQ(feedforward::round_half_up(make_rational(-1, 2)), 0);
    EXPECT_EQ(feedforward::round_half_up(num::ExactRational(7)), 7);
}

TEST(Plan, TransmissionPhaseAndExpectation) {
    auto p = feedforward::plan(70, 22, 8);
    EXPECT_EQ(p.T, make_rational(4, 11));
    EXPECT_DOUBLE_EQ(p.xi, -M_PI / 2);
    EXPECT_FALSE(p.swapped);
    EXPECT_EQ(p.expected_m9_exact, make_rational(14 * 40, 30));
    EXPECT_EQ(p.most_probable_m9, 19);
    auto q = feedforward::plan(70, 8, 22);
    EXPECT_TRUE(q.swapped);
    EXPECT_DOUBLE_EQ(q.xi, M_PI / 2);
    EXPECT_EQ(feedforward::plan(140, 40, 10).expected_m9_exact, 54);
    EXPECT_EQ(feedforward::plan(10, 5, 5).expected_m9_exact, 0);
    EXPECT_THROW(feedforward::plan(10, 0, 0), InvalidInput);
    EXPECT_THROW(feedforward::plan(10, 8, 3), InvalidInput);
    EXPECT_THROW(feedforward::plan(10, -1, 3), InvalidInput);
}

TEST(M9Distribution, ClosedFormMatchesExact) {
    for (auto [m1, m2] : {std::pair{22, 8}, {8, 22}, {6, 6}, {3, 0}}) {
        const auto T = Transmission(make_rational(19, 51));
        auto e = feedforward::exact_m9_distribution(15, 15, m1, m2, T);
        auto c = feedforward::m9_distribution_closed_form(15, 15, m1, m2, 19.0 / 51);
        ASSERT_EQ(e.probability.size(), c.size());
        for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(e.probability[k], c[k], 1e-12) << k;
        auto f = feedforward::exact_m9_distribution(15, 15, m1, m2, T, Engine::Float);
        EXPECT_NEAR(f.mean(), e.mean(), 1e-10);
    }
    EXPECT_THROW(feedforward::m9_distribution_closed_form(5, 6, 1, 1, 0.5), InvalidInput);
}

TEST(M9Distribution, ExactMeanAndT1) {
    auto d = feedforward::exact_m9_distribution(35, 35, 22, 8, Transmission(make_rational(19, 51)));
    ASSERT_TRUE(d.exact_mean());
    EXPECT_NEAR(d.exact_mean()->to_double(), d.mean(), 1e-12);
    EXPECT_NEAR(d.mean(), 18.2, 0.05);
    EXPECT_EQ(d.mode(), 18);
    // perfect transmission never routes anything to 9
    auto t1 = feedforward::exact_m9_distribution(5, 5, 2, 1, Transmission(num::ExactRational(1)));
    EXPECT_DOUBLE_EQ(t1.probability[0], 1.0);
}

TEST(MeanRelations, ExactIdentities) {
    for (auto [m1, m2] : {std::pair{22, 8}, {8, 22}, {4, 4}}) {
        auto r = feedforward::mean_relations_report(15, 15, m1, m2, make_rational(4, 11));
        EXPECT_TRUE(r.conservation_residual.is_zero());
        EXPECT_TRUE(r.m9_residual.is_zero());
    }
}

TEST(Refine, ModeFromDistribution) {
    auto p = feedforward::refine_with_distribution(feedforward::plan(30, 10, 4), 15, 15);
    EXPECT_TRUE(p.mode_from_distribution);
    auto d = feedforward::exact_m9_distribution(15, 15, 10, 4, Transmission(p.T));
    EXPECT_EQ(p.most_probable_m9, d.mode());
}
