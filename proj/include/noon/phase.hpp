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

#pragma once

// Relative-phase profiles left by the side detections and the location of
// their peaks. After m1, m2 side counts the remaining particles sit in a
// superposition of phase states weighted by
//     Q12(phi) = cos(phi/2)^m1 sin(phi/2)^m2,
// with peaks at +-2 atan(sqrt(m2/m1)). Diverting m9 particles and detecting
// m8 in the output arm reshapes this into Q129 * Q8, whose peak solves a cubic
// in X = tan(phi/2).

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "noon/numerics.hpp"

namespace noon::phase {

inline double q12(double phi, int m1, int m2) {
    return std::pow(std::cos(phi / 2), m1) * std::pow(std::sin(phi / 2), m2);
}

inline double q129(double phi, int m1, int m2, int m9) { return q12(phi, m1 + m9, m2); }

inline double q8(double phi, int m8, double T) {
    return std::pow(std::sqrt(T) * std::cos(phi / 2) + std::sin(phi / 2), m8);
}

/// The m7 factor that pairs with Q8 in the corrected amplitude.
inline double delta_factor(double phi, int m7, double T) {
    return std::pow(std::sqrt(T) * std::cos(phi / 2) - std::sin(phi / 2), m7);
}

/// Peak of Q12 on [0, pi]. m1 = 0 with m2 > 0 gives the limit pi.
inline double peak_phase(int m1, int m2) {
    if (m1 < 0 || m2 < 0) {
        throw InvalidInput("peak_phase: counts must be nonnegative");
    }
    if (m1 == 0 && m2 == 0) {
        throw InvalidInput("peak_phase: Q12 is flat when m1 = m2 = 0");
    }
    if (m1 == 0) {
        return num::rm::pi<double>();
    }
    if (m1 == m2) {
        return num::rm::pi<double>() / 2;
    }
    return 2 * std::atan(std::sqrt(static_cast<double>(m2) / m1));
}

struct Cubic {
    double c3, c2, c1, c0;
    double operator()(double x) const { return ((c3 * x + c2) * x + c1) * x + c0; }
};

/// (m1+m9) X^3 + sqrt(T)(m1+m9+m78) X^2 - (m2+m78) X - m2 sqrt(T)
inline Cubic peak_cubic(int m1, int m2, int m9, int m78, double T) {
    const double s = std::sqrt(T);
    const double a = m1 + m9;
    return {a, s * (a + m78), -static_cast<double>(m2 + m78), -m2 * s};
}

/// Peak phi_m of Q129 * Q8 on the physical branch X = tan(phi_m/2) >= 0.
/// The cubic has one sign change in its coefficients, so at most one positive
/// root; when m2 sqrt(T) = 0 the trivial root X = 0 is factored out and the
/// positive root of the remaining quadratic is taken if there is one.
inline double corrected_peak(int m1, int m2, int m9, int m78, double T) {
    if (m1 < 0 || m2 < 0 || m9 < 0 || m78 < 0) {
        throw InvalidInput("corrected_peak: counts must be nonnegative");
    }
    if (m1 + m9 <= 0) {
        throw InvalidInput("corrected_peak: requires m1 + m9 > 0");
    }
    if (!(T >= 0 && T <= 1)) {
        throw InvalidInput("corrected_peak: T must lie in [0, 1]");
    }
    Cubic f = peak_cubic(m1, m2, m9, m78, T);
    std::function<double(double)> g = f;
    if (f.c0 == 0) {
        // f = X * (c3 X^2 + c2 X + c1)
        if (f.c1 == 0) {
            return 0.0;
        }
        g = [f](double x) { return (f.c3 * x + f.c2) * x + f.c1; };
    }
    double lo = 0.0;
    double hi = 1.0;
    if (!(g(lo) < 0)) {
        throw InvalidInput("corrected_peak: no positive root");
    }
    while (g(hi) <= 0) {
        hi *= 2;
        if (hi > 1e12) {
            throw InvalidInput("corrected_peak: root not bracketed");
        }
    }
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
    return 2 * std::atan((a + b) / 2);
}

/// Exact transmission that puts the cubic's root at X = sqrt(T):
///     T = (N - (m1 - m2 + m9)) / (N + (m1 - m2 + m9)).
inline num::ExactRational exact_transmission(int N, int m1, int m2, int m9) {
    const long s = static_cast<long>(m1) - m2 + m9;
    if (N + s <= 0) {
        throw InvalidInput("exact_transmission: denominator N + m1 - m2 + m9 must be positive");
    }
    return num::make_rational(N - s, N + s);
}

/// Same rule with a (rational) mean m9 in place of m9.
inline num::ExactRational exact_transmission(int N, int m1, int m2, const num::ExactRational &m9) {
    num::ExactRational s = num::ExactRational(m1 - m2) + m9;
    num::ExactRational den = N + s;
    if (den <= 0) {
        throw InvalidInput("exact_transmission: denominator must be positive");
    }
    return (N - s) / den;
}

/// The cubic at X = sqrt(T) equals sqrt(T) * [(2(m1+m9) + m78) T - (2 m2 + m78)];
/// returns the bracket, which is exactly zero when T = exact_transmission.
inline num::ExactRational cubic_bracket_at_sqrt_t(int m1, int m2, int m9, int m78, const num::ExactRational &T) {
    return (2 * (m1 + m9) + m78) * T - (2 * m2 + m78);
}

/// Samples of a profile on a uniform grid over [-pi, pi] (both ends included).
inline std::vector<std::pair<double, double>> sample_profile(const std::function<double(double)> &f,
                                                             std::size_t points) {
    if (points < 2) {
        throw InvalidInput("sample_profile needs at least 2 points");
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(points);
    const double pi = num::rm::pi<double>();
    for (std::size_t j = 0; j < points; ++j) {
        double phi = -pi + 2 * pi * static_cast<double>(j) / static_cast<double>(points - 1);
        out.emplace_back(phi, f(phi));
    }
    return out;
}

/// Two-spike stand-in for Q12 used only to compare against the exact
/// profile: unit weight at +phi0 and weight (-1)^m2 at -phi0.
struct DeltaSpikes {
    double phi0;
    double weight_plus;
    double weight_minus;
};

inline DeltaSpikes delta_approximation(int m1, int m2) {
    double phi0 = peak_phase(m1, m2);
    return {phi0, 1.0, (m2 % 2 == 0) ? 1.0 : -1.0};
}

}  // namespace noon::phase
