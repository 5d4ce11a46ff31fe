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
#include <complex>
#include <vector>

#include "noon/numerics.hpp"
#include "oracles.hpp"

using namespace noon;
using num::ExactRational;

TEST(Binomial, MatchesPascalTriangle) {
    for (int n : {0, 1, 7, 30, 140, 200}) {
        const auto row = oracle::pascal_row(n);
        for (int k = 0; k <= n; ++k) EXPECT_EQ(num::exact_binomial(n, k), row[k]) << n << "," << k;
    }
}

TEST(Binomial, ZeroOutsideRange) {
    EXPECT_EQ(num::exact_binomial(5, -1), 0);
    EXPECT_EQ(num::exact_binomial(5, 6), 0);
    EXPECT_THROW(num::exact_binomial(-1, 0), InvalidInput);
}

TEST(Binomial, KnownValue) { EXPECT_EQ(num::exact_binomial(140, 70).get_str(), "93820969697840041204785894580506297666600"); }

TEST(Factorial, MatchesProduct) {
    for (int n : {0, 1, 5, 20, 70, 140}) EXPECT_EQ(num::exact_factorial(n), oracle::factorial(n));
}

TEST(LnFactorial, AgreesWithExactLogarithm) {
    for (int n : {0, 1, 2, 10, 70, 140, 1000, 5000}) {
        const double ref = num::log_abs(oracle::factorial(n));
        EXPECT_NEAR(num::ln_factorial(n), ref, 1e-12 * std::max(1.0, ref)) << n;
        EXPECT_NEAR(static_cast<double>(num::ln_factorial_as<__float128>(n)), ref, 1e-12 * std::max(1.0, ref));
    }
}

TEST(LnFactorial, Value140) {
    // ln(140!) from the exact integer
    EXPECT_NEAR(num::ln_factorial(140), 555.22029414689487, 1e-9);
}

TEST(ToDouble, SurvivesHugeNumeratorAndDenominator) {
    ExactRational q(oracle::factorial(300), oracle::factorial(299));
    q.canonicalize();
    EXPECT_DOUBLE_EQ(num::to_double(q), 300.0);
    ExactRational tiny(1, oracle::factorial(150));
    EXPECT_NEAR(std::log(num::to_double(tiny)), -num::ln_factorial(150), 1e-9);
    ExactRational below(1, oracle::factorial(400));
    EXPECT_EQ(num::to_double(below), 0.0);
}

TEST(LogMagnitude, ArithmeticTracksSigns) {
    auto a = num::LogMagnitude::from_value(-3.0);
    auto b = num::LogMagnitude::from_value(2.0);
    EXPECT_NEAR((a * b).value(), -6.0, 1e-14);
    EXPECT_NEAR((a / b).value(), -1.5, 1e-14);
    EXPECT_NEAR((a + b).value(), -1.0, 1e-14);
    EXPECT_NEAR(a.pow(3).value(), -27.0, 1e-12);
    EXPECT_TRUE((a + num::LogMagnitude::from_value(3.0)).is_zero());
    EXPECT_THROW(a / num::LogMagnitude::zero(), InvalidInput);
}

TEST(LogMagnitude, HandlesMagnitudesBeyondDouble) {
    auto big = num::LogMagnitude::from_log(2000.0);
    auto r = (big * big) / big;
    EXPECT_NEAR(r.log_abs, 2000.0, 1e-9);
}

TEST(PeriodicQuadrature, ExactForTrigonometricPolynomial) {
    // f(phi) = sum_k c_k e^{i k phi}, |k| <= 10; the mean picks c_0.
    const std::size_t n = 44;
    std::vector<std::complex<double>> s(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double phi = -M_PI + 2 * M_PI * j / n;
        std::complex<double> v{0.25, -0.5};
        for (int k = 1; k <= 10; ++k) v += std::polar(1.0 / k, k * phi) + std::polar(0.3, -k * phi);
        s[j] = v;
    }
    auto m = num::integrate_periodic<double>(s);
    EXPECT_NEAR(m.real(), 0.25, 1e-14);
    EXPECT_NEAR(m.imag(), -0.5, 1e-14);
    EXPECT_EQ(num::quadrature_points(10), 44u);
    std::vector<std::complex<double>> one(1);
    EXPECT_THROW(num::integrate_periodic<double>(one), InvalidInput);
}

TEST(QuadraticRational, ArithmeticAndSign) {
    using Q = num::QuadraticRational;
    Q a{ExactRational(1), ExactRational(2), 3};  // 1 + 2 sqrt3
    Q b{ExactRational(3), ExactRational(-1), 3};  // 3 - sqrt3
    auto p = a * b;  // 3 - sqrt3 + 6 sqrt3 - 6 = -3 + 5 sqrt3
    EXPECT_EQ(p.rational, -3);
    EXPECT_EQ(p.irrational, 5);
    auto q = p / b;
    EXPECT_TRUE(q == a);
    EXPECT_EQ(b.sign(), 1);
    EXPECT_EQ((Q{ExactRational(1), ExactRational(-1), 3}).sign(), -1);
    EXPECT_NEAR(a.to_double(), 1 + 2 * std::sqrt(3.0), 1e-15);
    EXPECT_THROW(a / Q{}, InvalidInput);
}

TEST(QuadraticRational, ConjugateFormAvoidsCancellation) {
    // 1e8 - sqrt(1e16 - 1) ~ 5e-9
    using Q = num::QuadraticRational;
    Q x{ExactRational(100000000), ExactRational(-1), num::BigInt("9999999999999999")};
    EXPECT_NEAR(x.to_double(), 5.0000000000000005e-9, 1e-22);
}

TEST(QuadGaussianRing, ExpansionMatchesComplexArithmetic) {
    num::QuadGaussianRing ring(num::BigInt(3));
    const num::QuadGaussian a{{1, 2}, {0, 1}};   // (1 + 2i) + i sqrt3
    const num::QuadGaussian b{{-1, 0}, {2, 0}};  // -1 + 2 sqrt3
    const auto ca = ring.to_complex(a), cb = ring.to_complex(b);
    auto poly = num::binomial_expansion(ring, a, b, 6);
    auto lin = num::QGPoly{num::QuadGaussian::integer(1)};
    for (int i = 0; i < 6; ++i) lin = num::poly_multiply_linear(ring, lin, a, b);
    for (int k = 0; k <= 6; ++k) {
        EXPECT_TRUE(poly[k] == lin[k]);
        const auto ref = oracle::pascal_row(6)[k].get_d() * std::pow(ca, k) * std::pow(cb, 6 - k);
        EXPECT_NEAR(std::abs(ring.to_complex(poly[k]) - ref), 0.0, 1e-9 * std::abs(ref));
    }
    auto [x, y] = ring.norm(a);
    EXPECT_NEAR(num::to_double(ExactRational(x)) + num::to_double(ExactRational(y)) * std::sqrt(3.0), std::norm(ca),
                1e-12);
}
