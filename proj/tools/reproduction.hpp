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

// Fixed parameter sets of the reference tables, shared by the
// command-line tool and the acceptance runner.

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "noon/noon.hpp"

namespace noon::repro {

struct QualityRow {
    int m1 = 0;
    int m2 = 0;
    int m78 = 0;
    int m9 = 0;  // rounded expectation, used as the observed m9
    num::ExactRational T;
    double q1 = 0;
    double q2 = 0;
    double total = 0;
};

/// One row of the quality table: equal sources, feedforward T, m9 at its
/// rounded expectation.
inline QualityRow quality_row(int N, int m1, int m2, Engine engine = Engine::Float) {
    if (N % 2 != 0) throw InvalidInput("quality table needs equal sources (even N)");
    auto p = feedforward::plan(N, m1, m2);
    QualityRow r;
    r.m1 = m1;
    r.m2 = m2;
    r.m9 = p.most_probable_m9;
    r.m78 = N - m1 - m2 - r.m9;
    r.T = p.T;
    if (r.m78 < 0) throw InvalidInput("quality row: expected m9 leaves no output particles");
    auto d = output_distribution(feedforward::plan_config(p, N / 2, N / 2), m1, m2, r.m9, engine);
    auto q = quality::report(d);
    r.q1 = q.q1;
    r.q2 = q.q2;
    r.total = d.total;
    return r;
}

inline const std::vector<std::pair<int, int>> &quality_table_rows() {
    static const std::vector<std::pair<int, int>> rows{{45, 5}, {40, 10}, {35, 15}, {30, 20}, {25, 25}};
    return rows;
}

/// Corrected config with T tuned to the observed m9 (the optimal-T condition),
/// which reduces to the plan's T when m9 equals its expectation. For m2 > m1
/// the mirrored branch swaps the roles of the side counts.
inline CircuitConfig tuned_config(int N_alpha, int N_beta, int m1, int m2, int m9) {
    auto c = standard_config(N_alpha, N_beta, m1, m2);
    const int hi = std::max(m1, m2), lo = std::min(m1, m2);
    c.transmission = Transmission(phase::exact_transmission(N_alpha + N_beta, hi, lo, m9));
    c.validate();
    return c;
}

struct MinNCell {
    int N_min;
    double threshold;
    double published;
};

inline const std::vector<MinNCell> &minn_cells() {
    static const std::vector<MinNCell> cells{{35, 0.90, 0.30}, {35, 0.95, 0.0}, {30, 0.90, 2.7}, {30, 0.95, 0.2},
                                             {20, 0.90, 6.2},  {20, 0.95, 1.6}, {15, 0.90, 6.2}, {15, 0.95, 2.0}};
    return cells;
}

struct MinNResult {
    MinNCell cell;
    double computed;
};

inline std::vector<MinNResult> minn_table(int N, efficiency::ThresholdRule rule = efficiency::ThresholdRule::TwoDecimal,
                                          Engine engine = Engine::Float) {
    int lowest = N;
    for (const auto &c : minn_cells()) lowest = std::min(lowest, c.N_min);
    const auto table = efficiency::uncorrected_table(N, lowest, engine);
    std::vector<MinNResult> out;
    for (const auto &c : minn_cells()) {
        out.push_back({c, efficiency::selective_acceptance(table, c.threshold, c.N_min, rule)});
    }
    return out;
}

}  // namespace noon::repro
