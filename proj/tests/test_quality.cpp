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

#include <vector>

#include "noon/engines.hpp"
#include "noon/quality.hpp"

using namespace noon;

TEST(Quality, IdealNoonOutput) {
    // all weight on m7 = 0 or m7 = n
    std::vector<double> p(11, 0.0);
    p[0] = p[10] = 0.5;
    EXPECT_DOUBLE_EQ(quality::q1(p), 1.0);
    EXPECT_DOUBLE_EQ(quality::q2(p), 1.0);
    auto r = quality::report(p);
    EXPECT_EQ(r.m78, 10);
    EXPECT_DOUBLE_EQ(r.mean, 5.0);
    EXPECT_DOUBLE_EQ(r.variance, 25.0);
}

TEST(Quality, UniformAndPoint) {
    const int n = 8;
    std::vector<double> u(n + 1, 1.0);  // unnormalized input is accepted
    EXPECT_NEAR(quality::q1(u), 2.0 / (n + 1), 1e-15);
    // variance of uniform on 0..n is n(n+2)/12
    EXPECT_NEAR(quality::q2(u), 4.0 * n * (n + 2) / 12 / (n * n), 1e-14);
    std::vector<double> point(n + 1, 0.0);
    point[3] = 1;
    EXPECT_DOUBLE_EQ(quality::q1(point), 0.0);
    EXPECT_DOUBLE_EQ(quality::q2(point), 0.0);
}

TEST(Quality, RejectsBadInput) {
    EXPECT_THROW(quality::q1(std::vector<double>{}), InvalidInput);
    EXPECT_THROW(quality::q1(std::vector<double>{0.0, 0.0}), InvalidInput);
    EXPECT_THROW(quality::q1(std::vector<double>{0.5, -0.1}), InvalidInput);
    EXPECT_THROW(quality::q2(std::vector<double>{1.0}), InvalidInput);
    EXPECT_DOUBLE_EQ(quality::report(std::vector<double>{1.0}).q2, 0.0);
}

TEST(Quality, ExactQ1MatchesFloat) {
    auto c = standard_config(10, 10, 6, 2);
    c.transmission = Transmission(num::make_rational(1, 3));
    auto d = output_distribution(c, 6, 2, 3);
    EXPECT_NEAR(quality::exact_q1(d).to_double(), quality::q1(d), 1e-14);
    auto f = output_distribution(c, 6, 2, 3, Engine::Float);
    EXPECT_THROW(quality::exact_q1(f), InvalidInput);
}
