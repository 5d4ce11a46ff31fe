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

// Slow, direct reference computations the library results are checked against.
// None of these share code paths with the engines they test.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "noon/circuit.hpp"
#include "noon/engines.hpp"

namespace oracle {

/// Row n of Pascal's triangle by repeated addition.
inline std::vector<mpz_class> pascal_row(int n) {
    std::vector<mpz_class> row{1};
    for (int i = 1; i <= n; ++i) {
        std::vector<mpz_class> next(i + 1);
        next[0] = next[i] = 1;
        for (int k = 1; k < i; ++k) next[k] = row[k - 1] + row[k];
        row = std::move(next);
    }
    return row;
}

inline mpz_class factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Argmax of f on [lo, hi]: dense grid, then golden-section refinement.
inline double argmax(const std::function<double(double)> &f, double lo, double hi, int grid = 20001) {
    double best = lo, fbest = f(lo);
    const double step = (hi - lo) / (grid - 1);
    for (int i = 1; i < grid; ++i) {
        const double x = lo + i * step;
        const double v = f(x);
        if (v > fbest) {
            fbest = v;
            best = x;
        }
    }
    double a = std::max(lo, best - step), b = std::min(hi, best + step);
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) > f(d)) {
            b = d;
        } else {
            a = c;
        }
    }
    return (a + b) / 2;
}

/// Probe-stage distribution of an ideal NOON state (|n,0> + |0,n>)/sqrt2:
///   P(k | chi) = C(n,k)/2^n (1 + cos(n chi + (n - 2k) pi/2)).
inline std::vector<double> noon_probe(int n, double chi) {
    std::vector<double> p(n + 1);
    const auto row = pascal_row(n);
    for (int k = 0; k <= n; ++k) {
        p[k] = row[k].get_d() / std::ldexp(1.0, n) * (1 + std::cos(n * chi + (n - 2 * k) * M_PI / 2));
    }
    return p;
}

/// |C|^2 by the literal multi-sum over how many particles of each detector
/// come from source alpha:
///   C = sqrt(Na! Nb! / prod m!) sum_{sum j = Na} prod C(m,j) ca^j cb^(m-j).
inline double multisum_probability(const noon::CircuitConfig &config, const noon::DetectionOutcome &o) {
    using C = std::complex<double>;
    const auto coeffs = noon::detector_coefficients<double>(config);
    const auto &dets = noon::detectors_of(o.set);
    std::vector<C> ca, cb;
    for (auto d : dets) {
        ca.push_back(coeffs[d].first);
        cb.push_back(coeffs[d].second);
    }
    C total{0, 0};
    std::function<void(std::size_t, int, C)> rec = [&](std::size_t i, int left, C acc) {
        if (i == dets.size()) {
            if (left == 0) total += acc;
            return;
        }
        const int m = o.counts[i];
        const auto row = pascal_row(m);
        for (int a = 0; a <= std::min(m, left); ++a) {
            rec(i + 1, left - a, acc * row[a].get_d() * std::pow(ca[i], a) * std::pow(cb[i], m - a));
        }
    };
    rec(0, config.N_alpha, C{1, 0});
    double pref = factorial(config.N_alpha).get_d() * factorial(config.N_beta).get_d();
    for (int m : o.counts) pref /= factorial(m).get_d();
    return pref * std::norm(total);
}

}  // namespace oracle
