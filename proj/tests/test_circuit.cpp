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

#include <complex>
#include <random>

#include "noon/circuit.hpp"

using namespace noon;
using C = std::complex<double>;

TEST(Detectors, NamesRoundTrip) {
    for (std::size_t i = 0; i < kDetectorCount; ++i) {
        auto d = static_cast<Detector>(i);
        EXPECT_EQ(parse_detector(detector_name(d)), d);
    }
    EXPECT_EQ(parse_detector("5p"), Detector::D5p);
    EXPECT_THROW(parse_detector("3"), InvalidInput);
}

TEST(Detectors, SetsAndNames) {
    EXPECT_EQ(detectors_of(DetectorSet::Middle).size(), 4u);
    EXPECT_EQ(detectors_of(DetectorSet::Output).size(), 5u);
    for (auto s : {DetectorSet::Middle, DetectorSet::Split, DetectorSet::Output, DetectorSet::Probe}) {
        EXPECT_EQ(parse_set(set_name(s)), s);
    }
    EXPECT_THROW(parse_set("78"), InvalidInput);
}

TEST(Coefficients, TableValuesAtStandardAngles) {
    CircuitConfig c;
    c.N_alpha = c.N_beta = 1;
    c.theta = M_PI / 2;
    c.xi = -M_PI / 2;
    c.zeta = M_PI / 2;
    c.transmission = Transmission(num::make_rational(1, 4));
    auto k = detector_coefficients(c);
    // a1 = (i e^{i theta}, -1)/2 = (-1, -1)/2
    EXPECT_NEAR(std::abs(k[Detector::D1].first - C(-0.5, 0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(k[Detector::D1].second - C(-0.5, 0)), 0, 1e-15);
    // a6 = (i e^{i xi}, -1)/2 = (1, -1)/2
    EXPECT_NEAR(std::abs(k[Detector::D6].first - C(0.5, 0)), 0, 1e-15);
    // u = sqrtT e^{i zeta} - 1 = -1 + i/2 ; v = -i(i/2 + 1) = 1/2 - i
    EXPECT_NEAR(std::abs(k.u - C(-1, 0.5)), 0, 1e-15);
    EXPECT_NEAR(std::abs(k.v - C(0.5, -1)), 0, 1e-15);
    // a9 = (-i sqrtR / 2)(i e^{i xi}, 1)
    const double sR = std::sqrt(0.75);
    EXPECT_NEAR(std::abs(k[Detector::D9].second - C(0, -sR / 2)), 0, 1e-15);
    EXPECT_THROW(k[Detector::A], InvalidInput);
}

// Every complete set is an isometry on the two source modes:
// sum_d conj(c_x(d)) c_y(d) = delta_xy.
TEST(Coefficients, CompleteSetsAreIsometries) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(-M_PI, M_PI), unit(0, 1);
    for (int trial = 0; trial < 40; ++trial) {
        CircuitConfig c;
        c.N_alpha = c.N_beta = 1;
        c.theta = ang(rng);
        c.xi = ang(rng);
        c.zeta = ang(rng);
        c.transmission = Transmission::from_double(unit(rng));
        c.probe = ProbePhase{ang(rng), trial % 2 ? ProbeArm::Seven : ProbeArm::Eight};
        auto k = detector_coefficients(c);
        for (auto s : {DetectorSet::Middle, DetectorSet::Split, DetectorSet::Output, DetectorSet::Probe}) {
            C aa{0, 0}, bb{0, 0}, ab{0, 0};
            for (auto d : detectors_of(s)) {
                aa += std::conj(k[d].first) * k[d].first;
                bb += std::conj(k[d].second) * k[d].second;
                ab += std::conj(k[d].first) * k[d].second;
            }
            EXPECT_NEAR(std::abs(aa - 1.0), 0, 1e-14) << set_name(s);
            EXPECT_NEAR(std::abs(bb - 1.0), 0, 1e-14) << set_name(s);
            EXPECT_NEAR(std::abs(ab), 0, 1e-14) << set_name(s);
        }
    }
}

TEST(Transmission, ExactAndFloatingForms) {
    Transmission t(num::make_rational(19, 51));
    EXPECT_TRUE(t.is_exact());
    EXPECT_NEAR(t.value(), 19.0 / 51, 1e-16);
    EXPECT_NEAR(t.reflection(), 32.0 / 51, 1e-16);
    EXPECT_EQ(t.to_string(), "19/51");
    auto f = Transmission::from_double(0.3);
    EXPECT_FALSE(f.is_exact());
    EXPECT_THROW(f.exact(), InvalidInput);
    EXPECT_THROW(Transmission(num::make_rational(3, 2)), InvalidInput);
    EXPECT_THROW(Transmission::from_double(-0.1), InvalidInput);
}

TEST(Config, ValidationAndRepresentability) {
    CircuitConfig c;
    c.N_alpha = 3;
    c.N_beta = 2;
    EXPECT_NO_THROW(c.validate());
    EXPECT_TRUE(c.exactly_representable());
    c.xi = 0.3;
    EXPECT_FALSE(c.exactly_representable());
    c.xi = -M_PI / 2;
    c.probe = ProbePhase{M_PI, ProbeArm::Seven};
    EXPECT_TRUE(c.exactly_representable());
    c.transmission = Transmission::from_double(0.5);
    EXPECT_FALSE(c.exactly_representable());
    c.N_alpha = -1;
    EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Config, QuarterTurns) {
    EXPECT_EQ(quarter_turns(0.0), 0);
    EXPECT_EQ((quarter_turns(-M_PI / 2).value() % 4 + 4) % 4, 3);
    EXPECT_FALSE(quarter_turns(0.1).has_value());
}

TEST(Feedforward, TransmissionRuleAndBranch) {
    EXPECT_EQ(feedforward_transmission(22, 8), num::make_rational(4, 11));
    EXPECT_EQ(feedforward_transmission(8, 22), num::make_rational(4, 11));
    EXPECT_EQ(feedforward_transmission(5, 5), 1);
    EXPECT_EQ(feedforward_transmission(7, 0), 0);
    EXPECT_THROW(feedforward_transmission(0, 0), InvalidInput);
    EXPECT_DOUBLE_EQ(standard_config(35, 35, 22, 8).xi, -M_PI / 2);
    EXPECT_DOUBLE_EQ(standard_config(35, 35, 8, 22).xi, M_PI / 2);
    auto u = uncorrected_config(30, 30);
    EXPECT_DOUBLE_EQ(u.xi, 0.0);
    EXPECT_EQ(u.transmission.exact(), 1);
}
