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

// NOON quality of a count distribution P(m7), m7 = 0..m78:
//   q1 = 2 P(0)                  (1 for a perfect NOON)
//   q2 = 4 Var(m7) / m78^2       (1 for a perfect NOON, maximal variance)
// Distributions are renormalized by their sum before use.

#include <numeric>
#include <span>
#include <vector>

#include "noon/engines.hpp"
#include "noon/numerics.hpp"

namespace noon::quality {

struct QualityReport {
    double q1 = 0;
    double q2 = 0;
    int m78 = 0;
    double mean = 0;
    double variance = 0;
};

namespace detail {
inline double checked_sum(std::span<const double> p) {
    if (p.empty()) {
        throw InvalidInput("empty distribution");
    }
    double s = 0;
    for (double v : p) {
        if (v < 0) {
            throw InvalidInput("negative probability");
        }
        s += v;
    }
    if (!(s > 0)) {
        throw InvalidInput("distribution has zero total");
    }
    return s;
}
}  // namespace detail

/// Twice the probability at m7 = 0; reported raw, never clamped.
inline double q1(std::span<const double> p) { return 2 * p[0] / detail::checked_sum(p); }

inline double variance(std::span<const double> p) {
    const double s = detail::checked_sum(p);
    double m = 0;
    for (std::size_t k = 0; k < p.size(); ++k) m += k * p[k];
    m /= s;
    double v = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = k - m;
        v += d * d * p[k];
    }
    return v / s;
}

inline double q2(std::span<const double> p) {
    const int m78 = static_cast<int>(p.size()) - 1;
    if (m78 <= 0) {
        throw InvalidInput("q2 undefined for m78 = 0");
    }
    return 4 * variance(p) / (static_cast<double>(m78) * m78);
}

inline QualityReport report(std::span<const double> p) {
    QualityReport r;
    r.m78 = static_cast<int>(p.size()) - 1;
    r.q1 = q1(p);
    const double s = detail::checked_sum(p);
    for (std::size_t k = 0; k < p.size(); ++k) r.mean += k * p[k] / s;
    r.variance = variance(p);
    r.q2 = r.m78 > 0 ? 4 * r.variance / (static_cast<double>(r.m78) * r.m78) : 0.0;
    return r;
}

inline double q1(const OutcomeDistribution &d) { return q1(d.probability); }
inline double q2(const OutcomeDistribution &d) { return q2(d.probability); }
inline QualityReport report(const OutcomeDistribution &d) { return report(d.probability); }

/// Exact q1 from the exact engine: 2 P(0) / total as a quadratic number.
inline num::QuadraticRational exact_q1(const OutcomeDistribution &d) {
    if (d.exact.empty()) {
        throw InvalidInput("exact_q1 needs a distribution from the exact engine");
    }
    return num::QuadraticRational(num::ExactRational(2)) * (d.exact[0] / d.exact_total());
}

}  // namespace noon::quality
