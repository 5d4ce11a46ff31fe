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

#include "noon/phase.hpp"
#include "oracles.hpp"

using namespace noon;

TEST(PeakPhase, MatchesNumericalArgmax) {
    for (auto [m1, m2] : {std::pair{22, 8}, {8, 22}, {40, 10}, {1, 0}, {3, 1}, {5, 5}, {1, 30}}) {
        const double ref = oracle::argmax([&](double p) { return phase::q12(p, m1, m2); }, 0, M_PI);
        EXPECT_NEAR(phase::peak_phase(m1, m2), ref, 1e-6) << m1 << "," << m2;
    }
    EXPECT_DOUBLE_EQ(phase::peak_phase(0, 4), M_PI);
    EXPECT_THROW(phase::peak_phase(0, 0), InvalidInput);
    EXPECT_THROW(phase::peak_phase(-1, 2), InvalidInput);
}

TEST(CorrectedPeak, RootOfCubicAndArgmax) {
    struct Case {
        int m1, m2, m9, m78;
        double T;
    };
    for (auto c : {Case{22, 8, 18, 22, 19.0 / 51}, Case{40, 10, 54, 36, 0.25}, Case{5, 5, 0, 60, 1.0},
                   Case{3, 0, 2, 10, 0.5}, Case{10, 2, 6, 12, 0.0}}) {
        const double phi = phase::corrected_peak(c.m1, c.m2, c.m9, c.m78, c.T);
        const double X = std::tan(phi / 2);
        auto f = phase::peak_cubic(c.m1, c.m2, c.m9, c.m78, c.T);
        EXPECT_NEAR(f(X), 0, 1e-9 * (std::abs(f.c3) + std::abs(f.c2) + std::abs(f.c1) + std::abs(f.c0)));
        auto prof = [&](double p) {
            return std::abs(phase::q129(p, c.m1, c.m2, c.m9) * phase::q8(p, c.m78, c.T));
        };
        if (c.m2 > 0) EXPECT_NEAR(phi, oracle::argmax(prof, 0, M_PI), 1e-6);
    }
    EXPECT_THROW(phase::corrected_peak(0, 3, 0, 4, 0.5), InvalidInput);
    EXPECT_THROW(phase::corrected_peak(1, 3, 0, 4, 1.5), InvalidInput);
}

TEST(ExactTransmission, ZeroesTheBracket) {
    for (auto [N, m1, m2, m9] : {std::tuple{70, 22, 8, 18}, {140, 40, 10, 54}, {30, 9, 5, 3}, {20, 7, 0, 0}}) {
        const auto T = phase::exact_transmission(N, m1, m2, m9);
        const int m78 = N - m1 - m2 - m9;
        EXPECT_EQ(phase::cubic_bracket_at_sqrt_t(m1, m2, m9, m78, T), 0) << N << "," << m1;
        if (m1 + m9 > 0) {
            EXPECT_NEAR(std::tan(phase::corrected_peak(m1, m2, m9, m78, num::to_double(T)) / 2),
                        std::sqrt(num::to_double(T)), 1e-12);
        }
    }
    EXPECT_EQ(phase::exact_transmission(70, 22, 8, 18), num::make_rational(19, 51));
    EXPECT_EQ(phase::exact_transmission(70, 22, 8, num::make_rational(91, 5)),
              num::ExactRational(70 - 14 - num::make_rational(91, 5)) / (70 + 14 + num::make_rational(91, 5)));
    EXPECT_THROW(phase::exact_transmission(4, 0, 9, 0), InvalidInput);
}

TEST(Profile, SamplingAndSpikes) {
    auto s = phase::sample_profile([](double p) { return phase::q12(p, 2, 1); }, 5);
    ASSERT_EQ(s.size(), 5u);
    EXPECT_DOUBLE_EQ(s.front().first, -M_PI);
    EXPECT_DOUBLE_EQ(s.back().first, M_PI);
    EXPECT_NEAR(s[2].second, 0.0, 1e-15);
    EXPECT_THROW(phase::sample_profile([](double) { return 0.0; }, 1), InvalidInput);
    auto d = phase::delta_approximation(3, 1);
    EXPECT_EQ(d.weight_minus, -1.0);
    // Q12 is odd in phi for odd m2
    EXPECT_NEAR(phase::q12(-d.phi0, 3, 1), -phase::q12(d.phi0, 3, 1), 1e-15);
}
