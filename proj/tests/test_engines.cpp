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
#include <random>

#include "noon/engines.hpp"
#include "noon/quality.hpp"
#include "oracles.hpp"

using namespace noon;

namespace {

CircuitConfig random_config(std::mt19937_64 &rng, int N, bool quarter) {
    std::uniform_real_distribution<double> ang(-M_PI, M_PI), unit(0, 1);
    CircuitConfig c;
    c.N_alpha = static_cast<int>(rng() % (N + 1));
    c.N_beta = N - c.N_alpha;
    if (quarter) {
        c.theta = M_PI / 2 * static_cast<int>(rng() % 4);
        c.xi = M_PI / 2 * static_cast<int>(rng() % 4);
        c.zeta = M_PI / 2 * static_cast<int>(rng() % 4);
        const long q = 1 + static_cast<long>(rng() % 9);
        c.transmission = Transmission(num::make_rational(static_cast<long>(rng() % (q + 1)), q));
        c.probe = ProbePhase{M_PI / 2 * static_cast<int>(rng() % 4), ProbeArm::Seven};
    } else {
        c.theta = ang(rng);
        c.xi = ang(rng);
        c.zeta = ang(rng);
        c.transmission = Transmission::from_double(unit(rng));
        c.probe = ProbePhase{ang(rng), rng() % 2 ? ProbeArm::Seven : ProbeArm::Eight};
    }
    return c;
}

const DetectorSet kSets[] = {DetectorSet::Middle, DetectorSet::Split, DetectorSet::Output, DetectorSet::Probe};

}  // namespace

TEST(Outcomes, EnumerationCount) {
    // compositions of N into k parts: C(N + k - 1, k - 1)
    EXPECT_EQ(all_outcomes(DetectorSet::Middle, 6).size(), 84u);
    EXPECT_EQ(all_outcomes(DetectorSet::Output, 4).size(), 70u);
}

TEST(Outcomes, Validation) {
    auto c = standard_config(2, 2, 1, 1);
    EXPECT_THROW(validate_outcome(c, output_outcome(1, 1, 1, 1, 1)), InvalidInput);
    EXPECT_THROW(validate_outcome(c, output_outcome(-1, 1, 2, 1, 1)), InvalidInput);
    EXPECT_THROW(validate_outcome(c, probe_outcome(1, 1, 0, 1, 1)), InvalidInput);  // no probe configured
    EXPECT_NO_THROW(validate_outcome(c, output_outcome(1, 1, 1, 1, 0)));
}

TEST(HongOuMandel, CoincidenceVanishes) {
    auto c = uncorrected_config(1, 1);
    auto d = middle_distribution(c, 0, 0);
    ASSERT_EQ(d.probability.size(), 3u);
    EXPECT_TRUE(d.exact[1].is_zero());
    EXPECT_DOUBLE_EQ(d.probability[0], 0.5);
    EXPECT_DOUBLE_EQ(d.probability[2], 0.5);
    EXPECT_EQ(statevector_oracle(c, middle_outcome(0, 0, 1, 1)), 0.0);
}

TEST(Engines, AgreeWithMultisumAndStateVector) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 24; ++trial) {
        const int N = 1 + trial % 6;
        auto c = random_config(rng, N, trial % 2 == 0);
        for (auto s : kSets) {
            for (const auto &o : all_outcomes(s, N)) {
                const double ref = oracle::multisum_probability(c, o);
                EXPECT_NEAR(statevector_oracle(c, o), ref, 1e-13);
                EXPECT_NEAR(amplitude_sum(c, o).probability(), ref, 1e-13);
                EXPECT_NEAR(std::exp(static_cast<double>(amplitude_integral<double>(c, o).log_norm())), ref, 1e-13);
            }
        }
    }
}

TEST(ExactEngine, CompleteSetsSumToOne) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 6; ++trial) {
        auto c = random_config(rng, 4 + trial, true);
        ExactCircuit circuit(c);
        for (auto s : kSets) {
            num::QuadraticRational total;
            for (const auto &o : all_outcomes(s, c.total())) total += amplitude_exact(circuit, o).probability();
            EXPECT_TRUE(total == num::QuadraticRational(num::ExactRational(1))) << set_name(s);
        }
    }
}

TEST(ExactEngine, CorrectedFixtureN70) {
    // T = 19/51, m9 = 18: all three engines, values frozen from the exact run
    auto c = standard_config(35, 35, 22, 8);
    c.transmission = Transmission(num::make_rational(19, 51));
    auto e = output_distribution(c, 22, 8, 18, Engine::Exact);
    auto f = output_distribution(c, 22, 8, 18, Engine::Float);
    auto q = output_distribution(c, 22, 8, 18, Engine::Integral);
    EXPECT_NEAR(quality::q1(e), 0.970437, 5e-7);
    EXPECT_NEAR(quality::q2(e), 0.989896, 5e-7);
    EXPECT_NEAR(e.total, 1.1576e-4, 5e-8);
    for (std::size_t k = 0; k < e.probability.size(); ++k) {
        EXPECT_NEAR(f.probability[k], e.probability[k], 1e-13);
        EXPECT_NEAR(q.probability[k], e.probability[k], 1e-12);
    }
    EXPECT_NEAR(f.total / e.total, 1.0, 1e-12);
}

TEST(FloatEngine, RelativeAccuracyAtN140) {
    auto c = standard_config(70, 70, 40, 10);
    auto e = output_distribution(c, 40, 10, 54, Engine::Exact);
    auto f = output_distribution(c, 40, 10, 54, Engine::Float);
    for (std::size_t k = 0; k < e.log_absolute.size(); ++k) {
        EXPECT_NEAR(f.log_absolute[k], e.log_absolute[k], 1e-11) << k;
    }
}

TEST(Conditional, GuardsAndErrors) {
    auto c = standard_config(3, 3, 2, 1);
    EXPECT_THROW(conditional_distribution(c, DetectorSet::Output, {{Detector::D1, 5}, {Detector::D2, 5}, {Detector::D9, 0}},
                                          Detector::D7),
                 InvalidInput);
    EXPECT_THROW(conditional_distribution(c, DetectorSet::Output, {{Detector::D1, 1}}, Detector::D7), InvalidInput);
    EXPECT_THROW(conditional_distribution(c, DetectorSet::Output, {{Detector::D5, 1}, {Detector::D2, 0}, {Detector::D9, 0}},
                                          Detector::D7),
                 InvalidInput);
    EXPECT_THROW(conditional_distribution(c, DetectorSet::Probe, {{Detector::D1, 1}, {Detector::D2, 0}, {Detector::D9, 0}},
                                          Detector::A),
                 InvalidInput);
    // T = 1 forbids any particle in 9
    auto t1 = uncorrected_config(3, 3);
    EXPECT_THROW(output_distribution(t1, 1, 1, 2), ZeroProbability);
    EXPECT_THROW(output_distribution(t1, 1, 1, 2, Engine::Float), ZeroProbability);
}

TEST(StateVector, CostGuard) {
    auto c = uncorrected_config(7, 6);
    EXPECT_THROW(statevector_oracle(c, middle_outcome(13, 0, 0, 0)), CostGuardExceeded);
}

TEST(EngineNames, RoundTrip) {
    for (auto e : {Engine::Exact, Engine::Float, Engine::Integral}) EXPECT_EQ(parse_engine(engine_name(e)), e);
    EXPECT_THROW(parse_engine("magic"), InvalidInput);
}
