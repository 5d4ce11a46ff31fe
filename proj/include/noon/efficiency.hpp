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

// How often the circuit delivers a good NOON state. Equal sources
// N_alpha = N_beta = N/2 throughout.
//
// Uncorrected: theta = pi/2, xi = 0, observe (m5, m6) after side counts
// (m1, m2); every (m1, m2) with m1 + m2 = N - m56 is a cell.
// Corrected: each cell (m1, m2) gets its own feedforward T and xi; with the
// output size m78 fixed, m9 = N - m78 - m1 - m2 is determined per cell.
// Cell weights are absolute probabilities of the full detector record.

#include <cmath>
#include <optional>
#include <vector>

#include "noon/circuit.hpp"
#include "noon/engines.hpp"
#include "noon/feedforward.hpp"
#include "noon/parallel.hpp"
#include "noon/quality.hpp"

namespace noon::efficiency {

struct CellResult {
    int m1 = 0;
    int m2 = 0;
    int m9 = 0;
    double q1 = 0;
    double q2 = 0;
    double absolute_probability = 0;
    std::vector<double> distribution;  // normalized; empty when the cell cannot occur
};

struct EfficiencyReport {
    int N = 0;
    int output_size = 0;  // m56 (uncorrected) or m78 (corrected)
    std::vector<CellResult> rows;
};

struct AveragedResult {
    std::vector<double> distribution;
    quality::QualityReport quality;
    double total_probability = 0;
    int cells = 0;
};

/// How a per-cell q1 is compared against a threshold. TwoDecimal compares
/// q1 rounded to two decimals, the resolution at which quality is quoted.
enum class ThresholdRule { TwoDecimal, Strict };

inline bool passes(double q1, double threshold, ThresholdRule rule) {
    if (rule == ThresholdRule::Strict) {
        return q1 >= threshold;
    }
    return std::llround(q1 * 100) >= std::llround(threshold * 100);
}

inline void check_even(int N) {
    if (N <= 0 || N % 2 != 0) {
        throw InvalidInput("efficiency analysis needs an even N > 0 (equal sources)");
    }
}

inline CellResult evaluate_cell(const CircuitConfig &config, DetectorSet set, const FixedCounts &fixed,
                                Detector free, Engine engine) {
    CellResult cell;
    for (const auto &[d, m] : fixed) {
        if (d == Detector::D1) cell.m1 = m;
        if (d == Detector::D2) cell.m2 = m;
        if (d == Detector::D9) cell.m9 = m;
    }
    try {
        auto dist = conditional_distribution(config, set, fixed, free, engine);
        auto rep = quality::report(dist);
        cell.q1 = rep.q1;
        cell.q2 = rep.q2;
        cell.absolute_probability = dist.total;
        cell.distribution = std::move(dist.probability);
    } catch (const ZeroProbability &) {
        cell.q1 = cell.q2 = std::nan("");
    }
    return cell;
}

inline EfficiencyReport uncorrected_sweep(int N, int m56, Engine engine = Engine::Float) {
    check_even(N);
    if (m56 <= 0 || m56 > N) {
        throw InvalidInput("uncorrected_sweep: need 0 < m56 <= N");
    }
    const auto config = uncorrected_config(N / 2, N / 2);
    const int side = N - m56;
    EfficiencyReport rep{N, m56, {}};
    rep.rows = par::parallel_map(side + 1, [&](std::size_t m1) {
        return evaluate_cell(config, DetectorSet::Middle,
                             {{Detector::D1, static_cast<int>(m1)}, {Detector::D2, side - static_cast<int>(m1)}},
                             Detector::D5, engine);
    });
    return rep;
}

inline AveragedResult average(const EfficiencyReport &rep) {
    AveragedResult out;
    out.distribution.assign(rep.output_size + 1, 0.0);
    for (const auto &cell : rep.rows) {
        if (cell.distribution.empty() || cell.absolute_probability <= 0) continue;
        out.total_probability += cell.absolute_probability;
        for (std::size_t k = 0; k < cell.distribution.size(); ++k) {
            out.distribution[k] += cell.absolute_probability * cell.distribution[k];
        }
        ++out.cells;
    }
    if (out.total_probability <= 0) {
        throw InvalidInput("no cell contributes: averaged distribution undefined");
    }
    for (double &p : out.distribution) p /= out.total_probability;
    out.quality = quality::report(out.distribution);
    return out;
}

inline AveragedResult averaged_uncorrected(int N, int m56, Engine engine = Engine::Float) {
    if (m56 <= 0) {
        throw InvalidInput("averaged_uncorrected: m56 = 0 leaves an empty distribution");
    }
    return average(uncorrected_sweep(N, m56, engine));
}

/// Rows of every uncorrected sweep with m56 >= min_output, for table building.
inline std::vector<EfficiencyReport> uncorrected_table(int N, int min_output, Engine engine = Engine::Float) {
    std::vector<EfficiencyReport> out;
    for (int m56 = std::max(1, min_output); m56 <= N; ++m56) {
        out.push_back(uncorrected_sweep(N, m56, engine));
    }
    return out;
}

/// Percentage of all records with m56 >= N_min whose cell q1 meets the threshold.
inline double selective_acceptance(const std::vector<EfficiencyReport> &table, double q1_threshold, int N_min,
                                   ThresholdRule rule = ThresholdRule::TwoDecimal) {
    double p = 0;
    for (const auto &rep : table) {
        if (rep.output_size < N_min) continue;
        for (const auto &cell : rep.rows) {
            if (cell.distribution.empty()) continue;
            if (passes(cell.q1, q1_threshold, rule)) p += cell.absolute_probability;
        }
    }
    return 100 * p;
}

inline double selective_acceptance(int N, double q1_threshold, int N_min,
                                   ThresholdRule rule = ThresholdRule::TwoDecimal, Engine engine = Engine::Float) {
    return selective_acceptance(uncorrected_table(N, N_min, engine), q1_threshold, N_min, rule);
}

struct ThresholdCount {
    int count = 0;
    std::vector<int> near_boundary_m1;  // cells within 0.005 of the threshold
};

inline ThresholdCount count_passing(const EfficiencyReport &rep, double threshold,
                                    ThresholdRule rule = ThresholdRule::TwoDecimal) {
    ThresholdCount c;
    for (const auto &cell : rep.rows) {
        if (cell.distribution.empty()) continue;
        if (passes(cell.q1, threshold, rule)) ++c.count;
        if (std::fabs(cell.q1 - threshold) < 0.005) c.near_boundary_m1.push_back(cell.m1);
    }
    return c;
}

/// Cells of the corrected circuit at fixed output size m78. The (0, 0) cell has
/// no feedforward setting and is left out; cells with T = 1 and m9 > 0 cannot
/// occur and are left out too.
inline EfficiencyReport corrected_sweep(int N, int m78, Engine engine = Engine::Float) {
    check_even(N);
    if (m78 < 0 || m78 > N) {
        throw InvalidInput("corrected_sweep: need 0 <= m78 <= N");
    }
    std::vector<std::pair<int, int>> cells;
    const int side_budget = N - m78;
    for (int m1 = 0; m1 <= side_budget; ++m1) {
        for (int m2 = 0; m1 + m2 <= side_budget; ++m2) {
            if (m1 == 0 && m2 == 0) continue;
            const int m9 = side_budget - m1 - m2;
            if (m1 == m2 && m9 > 0) continue;
            cells.emplace_back(m1, m2);
        }
    }
    EfficiencyReport rep{N, m78, {}};
    rep.rows = par::parallel_map(cells.size(), [&](std::size_t i) {
        auto [m1, m2] = cells[i];
        const int m9 = side_budget - m1 - m2;
        auto p = feedforward::plan(N, m1, m2);
        auto config = feedforward::plan_config(p, N / 2, N / 2);
        return evaluate_cell(config, DetectorSet::Output, {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}},
                             Detector::D7, engine);
    });
    return rep;
}

inline AveragedResult averaged_corrected(int N, int m78, Engine engine = Engine::Float) {
    if (m78 <= 0) {
        throw InvalidInput("averaged_corrected: m78 = 0 leaves an empty distribution");
    }
    auto rep = corrected_sweep(N, m78, engine);
    if (rep.rows.empty()) {
        throw InvalidInput("averaged_corrected: no valid cell (only m1 = m2 = m9 = 0 remains)");
    }
    return average(rep);
}

/// Cells where the observed m9 equals the most likely m9 of the plan.
inline std::vector<std::pair<int, int>> m9_match_locus(int N, int m78) {
    std::vector<std::pair<int, int>> out;
    const int side_budget = N - m78;
    for (int m1 = 0; m1 <= side_budget; ++m1) {
        for (int m2 = 0; m1 + m2 <= side_budget; ++m2) {
            if (m1 == 0 && m2 == 0) continue;
            const int m9 = side_budget - m1 - m2;
            if (feedforward::plan(N, m1, m2).most_probable_m9 == m9) {
                out.emplace_back(m1, m2);
            }
        }
    }
    return out;
}

/// Corrected cells at fixed m1 across all m2.
inline std::vector<CellResult> corrected_slice(int N, int m78, int m1, Engine engine = Engine::Float) {
    check_even(N);
    std::vector<CellResult> out;
    const int side_budget = N - m78;
    for (int m2 = 0; m1 + m2 <= side_budget; ++m2) {
        if (m1 == 0 && m2 == 0) continue;
        const int m9 = side_budget - m1 - m2;
        if (m1 == m2 && m9 > 0) continue;
        auto p = feedforward::plan(N, m1, m2);
        auto config = feedforward::plan_config(p, N / 2, N / 2);
        out.push_back(evaluate_cell(config, DetectorSet::Output,
                                    {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}}, Detector::D7,
                                    engine));
    }
    return out;
}

}  // namespace noon::efficiency
