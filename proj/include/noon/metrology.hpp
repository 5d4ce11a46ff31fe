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

// Using the output state for phase estimation. A probe phase chi on one
// output arm followed by a 50-50 splitter turns the m7/m8 state into a
// chi-dependent count distribution P(k|chi) on detectors A and B.
//
// Probe splitter: (a7, a8) -> ((a7 e^{i chi} + i a8)/sqrt2, (i a7 e^{i chi} + a8)/sqrt2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "noon/circuit.hpp"
#include "noon/engines.hpp"
#include "noon/numerics.hpp"
#include "noon/parallel.hpp"
#include "noon/quality.hpp"

namespace noon::metrology {

using Complex = std::complex<double>;
using TwoModeState = std::vector<Complex>;  // amplitude of |j, n - j>, j = 0..n
using Likelihood = std::function<std::vector<double>(double chi)>;

// ---------------------------------------------------------------------------
// Fringes of the uncorrected circuit with equal side counts: theta = pi/2,
// xi = zeta = 0, T = 1, observed in 7 and 8.

inline CircuitConfig fringe_config(int N_alpha, int N_beta) {
    CircuitConfig c;
    c.N_alpha = N_alpha;
    c.N_beta = N_beta;
    c.theta = num::rm::pi<double>() / 2;
    c.xi = 0.0;
    c.zeta = 0.0;
    c.transmission = Transmission(num::ExactRational(1));
    c.validate();
    return c;
}

/// Single alternating sum for the same distribution, normalized:
///   P(m7) ~ 1/(m7! m8!) | sum_p (-1)^p / (p! (m1-p)! (N_a-p-m8)! (m2+m8-N_a+p)!) |^2
inline std::vector<double> fringe_single_sum(int N_alpha, int N_beta, int m1, int m2) {
    const int m78 = N_alpha + N_beta - m1 - m2;
    if (m1 < 0 || m2 < 0 || m78 < 0) {
        throw InvalidInput("fringe_single_sum: invalid counts");
    }
    std::vector<num::ExactRational> w(m78 + 1);
    for (int m7 = 0; m7 <= m78; ++m7) {
        const int m8 = m78 - m7;
        num::ExactRational s(0);
        for (int p = 0; p <= m1; ++p) {
            const int a = N_alpha - p - m8;
            const int b = m2 + m8 - N_alpha + p;
            if (a < 0 || b < 0) continue;
            num::BigInt den = num::exact_factorial(p) * num::exact_factorial(m1 - p) * num::exact_factorial(a) *
                              num::exact_factorial(b);
            num::ExactRational term(num::BigInt(p % 2 == 0 ? 1 : -1), den);
            term.canonicalize();
            s += term;
        }
        num::ExactRational f(num::BigInt(1), num::exact_factorial(m7) * num::exact_factorial(m8));
        f.canonicalize();
        w[m7] = f * s * s;
    }
    num::ExactRational z(0);
    for (const auto &x : w) z += x;
    if (z == 0) {
        throw InvalidInput("fringe_single_sum: record has zero probability");
    }
    std::vector<double> out;
    for (const auto &x : w) out.push_back(num::to_double(x / z));
    return out;
}

struct FringeResult {
    OutcomeDistribution distribution;  // generic engine
    std::vector<double> single_sum;    // closed single-sum form
    double max_deviation = 0;
};

inline FringeResult fringe_distribution(int N_alpha, int N_beta, int m1, int m2, Engine engine = Engine::Exact) {
    FringeResult r;
    r.distribution = conditional_distribution(fringe_config(N_alpha, N_beta), DetectorSet::Output,
                                              {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, 0}},
                                              Detector::D7, engine);
    r.single_sum = fringe_single_sum(N_alpha, N_beta, m1, m2);
    for (std::size_t k = 0; k < r.single_sum.size(); ++k) {
        r.max_deviation = std::max(r.max_deviation, std::fabs(r.single_sum[k] - r.distribution.probability[k]));
    }
    return r;
}

/// Interior points strictly above both neighbours.
inline int count_strict_maxima(const std::vector<double> &p) {
    int n = 0;
    for (std::size_t k = 1; k + 1 < p.size(); ++k) {
        if (p[k] > p[k - 1] && p[k] > p[k + 1]) ++n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// Two-mode probe stage.

/// <k, n-k| U |j, n-j> for the probe splitter (no phase): with
/// a†_7 -> (a†_A + i a†_B)/sqrt2, a†_8 -> (i a†_A + a†_B)/sqrt2,
///   element = i^{j+k} K_k(j) sqrt(k!(n-k)! / (j!(n-j)!)) / 2^{n/2},
///   K_k(j) = sum_l (-1)^l C(j,l) C(n-j,k-l).
/// Row index k counts A, column index j counts arm 7.
inline std::vector<std::vector<Complex>> splitter_matrix(int n) {
    if (n < 0) {
        throw InvalidInput("splitter_matrix: n must be nonnegative");
    }
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<std::vector<Complex>> M(n + 1, std::vector<Complex>(n + 1));
    for (int k = 0; k <= n; ++k) {
        for (int j = 0; j <= n; ++j) {
            num::BigInt K = 0;
            for (int l = 0; l <= std::min(j, k); ++l) {
                num::BigInt t = num::exact_binomial(j, l) * num::exact_binomial(n - j, k - l);
                K += (l % 2 == 0) ? t : num::BigInt(-t);
            }
            if (K == 0) continue;
            const double lmag = num::log_abs(K) +
                                0.5 * (num::ln_factorial(k) + num::ln_factorial(n - k) - num::ln_factorial(j) -
                                       num::ln_factorial(n - j)) -
                                0.5 * n * std::log(2.0);
            M[k][j] = ipow[(j + k) % 4] * (sgn(K) * std::exp(lmag));
        }
    }
    return M;
}

inline TwoModeState noon_state(int n) {
    if (n <= 0) throw InvalidInput("noon_state: n must be positive");
    TwoModeState s(n + 1);
    s[0] = s[n] = Complex{1 / std::sqrt(2.0), 0};
    return s;
}

inline TwoModeState fock_state(int n, int j) {
    if (j < 0 || j > n) throw InvalidInput("fock_state: occupation out of range");
    TwoModeState s(n + 1);
    s[j] = 1;
    return s;
}

/// Count distribution on A after phase chi on arm 7 and the probe splitter.
inline std::vector<double> probe_distribution(const TwoModeState &state, double chi,
                                              const std::vector<std::vector<Complex>> &M) {
    const int n = static_cast<int>(state.size()) - 1;
    std::vector<double> p(n + 1);
    for (int k = 0; k <= n; ++k) {
        Complex a{0, 0};
        for (int j = 0; j <= n; ++j) {
            if (state[j] == Complex{0, 0}) continue;
            a += M[k][j] * std::polar(1.0, j * chi) * state[j];
        }
        p[k] = std::norm(a);
    }
    return p;
}

inline Likelihood state_likelihood(TwoModeState state) {
    auto M = std::make_shared<std::vector<std::vector<Complex>>>(splitter_matrix(static_cast<int>(state.size()) - 1));
    return [state = std::move(state), M](double chi) { return probe_distribution(state, chi, *M); };
}

/// Output distribution of |n/2, n/2> through the 50-50 splitter.
inline std::vector<double> dual_fock_distribution(int n) {
    if (n <= 0 || n % 2 != 0) throw InvalidInput("dual_fock_distribution: n must be even and positive");
    return probe_distribution(fock_state(n, n / 2), 0.0, splitter_matrix(n));
}

/// P(kA | chi) from the circuit itself through the probe detector set.
inline Likelihood circuit_likelihood(CircuitConfig config, int m1, int m2, int m9, ProbeArm arm = ProbeArm::Seven,
                                     Engine engine = Engine::Float) {
    return [config, m1, m2, m9, arm, engine](double chi) mutable {
        config.probe = ProbePhase{chi, arm};
        Engine e = (engine == Engine::Exact && !config.exactly_representable()) ? Engine::Float : engine;
        return conditional_distribution(config, DetectorSet::Probe,
                                        {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}}, Detector::A, e)
            .probability;
    };
}

// ---------------------------------------------------------------------------
// Fisher information.

inline double quantum_fisher(std::span<const double> p) { return 4 * quality::variance(p); }
inline double quantum_fisher(const OutcomeDistribution &d) { return quantum_fisher(d.probability); }

struct FisherEstimate {
    double value = 0;
    double coarse_value = 0;  // from step h alone
    bool degenerate = false;  // every retained derivative vanishes
    bool richardson_warning = false;
};

/// I = sum_k P_k (d ln P_k / d chi)^2 by central differences at h and h/2,
/// Richardson-combined. Outcomes with P < 1e-15 are left out.
inline FisherEstimate classical_fisher(const Likelihood &likelihood, double chi, double h = 1e-5) {
    const auto p0 = likelihood(chi);
    const auto pp = likelihood(chi + h);
    const auto pm = likelihood(chi - h);
    const auto hp = likelihood(chi + h / 2);
    const auto hm = likelihood(chi - h / 2);
    FisherEstimate f;
    bool any_slope = false;
    for (std::size_t k = 0; k < p0.size(); ++k) {
        if (p0[k] < 1e-15) continue;
        const double d1 = (pp[k] - pm[k]) / (2 * h);
        const double d2 = (hp[k] - hm[k]) / h;
        const double d = (4 * d2 - d1) / 3;
        if (std::fabs(d) > 1e-9) any_slope = true;
        f.value += d * d / p0[k];
        f.coarse_value += d1 * d1 / p0[k];
    }
    f.degenerate = !any_slope;
    const double scale = std::max(std::fabs(f.value), 1e-300);
    f.richardson_warning = !f.degenerate && std::fabs(f.value - f.coarse_value) / scale > 1e-4;
    return f;
}

// ---------------------------------------------------------------------------
// Path symmetry: C(m7, m8) = conj(C(m8, m7)) e^{i gamma} for one constant gamma.

struct PathSymmetryReport {
    double gamma = 0;
    double gamma_predicted = 0;  // pi (m2 + m9) - m78 pi/2, for the standard corrected config
    double max_residual = 0;     // on amplitudes normalized to unit total
    bool vacuous = false;
    std::vector<Complex> amplitudes;
};

inline double wrap_angle(double a) {
    const double two_pi = 2 * num::rm::pi<double>();
    a = std::fmod(a, two_pi);
    if (a <= -num::rm::pi<double>()) a += two_pi;
    if (a > num::rm::pi<double>()) a -= two_pi;
    return a;
}

inline PathSymmetryReport path_symmetry_check(const CircuitConfig &config, int m1, int m2, int m9) {
    PathSymmetryReport rep;
    const int m78 = config.total() - m1 - m2 - m9;
    if (m78 < 0) {
        throw InvalidInput("path_symmetry_check: counts exceed N");
    }
    const double pi = num::rm::pi<double>();
    rep.gamma_predicted = wrap_angle(pi * (m2 + m9) - m78 * pi / 2);
    if (m78 == 0) {
        rep.vacuous = true;
        return rep;
    }
    std::optional<ExactCircuit> exact;
    if (config.exactly_representable()) exact.emplace(config);
    std::optional<SumEngine<__float128>> floating;
    if (!exact) floating.emplace(config);
    double norm = 0;
    for (int m7 = 0; m7 <= m78; ++m7) {
        auto o = output_outcome(m1, m2, m7, m78 - m7, m9);
        Complex c = exact ? amplitude_exact(*exact, o).value() : amplitude_float(*floating, o).to_complex();
        rep.amplitudes.push_back(c);
        norm += std::norm(c);
    }
    if (norm == 0) {
        throw ZeroProbability();
    }
    for (auto &c : rep.amplitudes) c /= std::sqrt(norm);
    Complex acc{0, 0};
    for (int k = 0; k <= m78; ++k) acc += rep.amplitudes[k] * rep.amplitudes[m78 - k];
    rep.gamma = std::arg(acc);
    const Complex e = std::polar(1.0, rep.gamma);
    for (int k = 0; k <= m78; ++k) {
        rep.max_residual = std::max(rep.max_residual, std::abs(rep.amplitudes[k] - std::conj(rep.amplitudes[m78 - k]) * e));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Bayesian estimation on a chi grid.

struct EstimationRun {
    double true_chi = 0;
    double prior_lo = 0;
    double prior_hi = 0;
    int t = 1;                // detections per estimate
    int nu = 1;               // independent estimates
    std::uint64_t seed = 0;
    int grid = 2048;
};

struct EstimationResult {
    std::vector<double> grid;
    std::vector<double> estimates;        // posterior means, one per repetition
    std::vector<double> last_posterior;   // posterior of the final repetition
    double rms_single = 0;                // RMS error of one estimate
    double rms_error = 0;                 // RMS error of the mean of nu estimates: rms_single / sqrt(nu)
    double cramer_rao_bound = 0;          // 1 / sqrt(nu t I)
    double fisher = 0;
    bool underflow = false;               // posterior was rescaled to avoid underflow
};

inline std::vector<double> chi_grid(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) {
        throw InvalidInput("chi grid needs hi > lo and at least 2 points");
    }
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = lo + (i + 0.5) * (hi - lo) / points;
    return g;
}

/// ln P(k | chi_g) for every grid point (rows) and outcome (columns).
inline std::vector<std::vector<double>> log_likelihood_table(const Likelihood &likelihood,
                                                             const std::vector<double> &grid) {
    std::vector<std::vector<double>> table;
    table.reserve(grid.size());
    for (double chi : grid) {
        auto p = likelihood(chi);
        std::vector<double> row(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            row[k] = p[k] > 0 ? std::log(p[k]) : -std::numeric_limits<double>::infinity();
        }
        table.push_back(std::move(row));
    }
    return table;
}

/// Posterior over the grid from a uniform prior after the given detections,
/// applied one at a time. Returns the normalized posterior; sets *rescaled
/// when the unnormalized weights fell below 1e-300.
inline std::vector<double> posterior_from_detections(const std::vector<std::vector<double>> &log_table,
                                                     const std::vector<int> &detections, bool *rescaled = nullptr) {
    const std::size_t G = log_table.size();
    std::vector<double> logw(G, 0.0);
    for (int k : detections) {
        for (std::size_t g = 0; g < G; ++g) logw[g] += log_table[g][k];
    }
    const double lmax = *std::max_element(logw.begin(), logw.end());
    if (!(lmax > -std::numeric_limits<double>::infinity())) {
        throw InvalidInput("posterior vanishes on the whole grid");
    }
    if (rescaled) *rescaled = lmax < std::log(1e-300);
    std::vector<double> post(G);
    double z = 0;
    for (std::size_t g = 0; g < G; ++g) {
        post[g] = std::exp(logw[g] - lmax);
        z += post[g];
    }
    for (double &p : post) p /= z;
    return post;
}

inline EstimationResult bayesian_estimate(const EstimationRun &run, const Likelihood &likelihood, double fisher) {
    if (run.t < 0 || run.nu < 1) {
        throw InvalidInput("estimation needs t >= 0 and nu >= 1");
    }
    EstimationResult res;
    res.fisher = fisher;
    res.grid = chi_grid(run.prior_lo, run.prior_hi, run.grid);
    const auto table = log_likelihood_table(likelihood, res.grid);
    const auto truth = likelihood(run.true_chi);

    struct Rep {
        double estimate;
        bool rescaled;
        std::vector<double> posterior;
    };
    auto reps = par::parallel_map(static_cast<std::size_t>(run.nu), [&](std::size_t r) {
        std::seed_seq seq{static_cast<std::uint32_t>(run.seed), static_cast<std::uint32_t>(run.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        std::discrete_distribution<int> draw(truth.begin(), truth.end());
        std::vector<int> det(run.t);
        for (int i = 0; i < run.t; ++i) det[i] = draw(rng);
        Rep out{0, false, {}};
        out.posterior = posterior_from_detections(table, det, &out.rescaled);
        for (std::size_t g = 0; g < res.grid.size(); ++g) out.estimate += res.grid[g] * out.posterior[g];
        return out;
    });
    double se = 0;
    for (const auto &r : reps) {
        res.estimates.push_back(r.estimate);
        se += (r.estimate - run.true_chi) * (r.estimate - run.true_chi);
        res.underflow = res.underflow || r.rescaled;
    }
    res.last_posterior = reps.back().posterior;
    res.rms_single = std::sqrt(se / run.nu);
    res.rms_error = res.rms_single / std::sqrt(static_cast<double>(run.nu));
    res.cramer_rao_bound = (fisher > 0 && run.t > 0)
                               ? 1 / std::sqrt(static_cast<double>(run.nu) * run.t * fisher)
                               : std::numeric_limits<double>::infinity();
    return res;
}

// ---------------------------------------------------------------------------
// Resource trade-off against the dual-Fock method: using a fraction f of the
// particles in a state of quality q2 wins when 1/(f sqrt(q2)) <= sqrt(2).

struct ResourceTradeoff {
    bool satisfied = false;
    double margin = 0;  // sqrt(2) - 1/(f sqrt(q2))
    double minimal_f = 0;
};

inline ResourceTradeoff resource_tradeoff(double f, double q2) {
    if (!(f > 0) || !(q2 > 0)) {
        throw InvalidInput("resource_tradeoff needs f > 0 and q2 > 0");
    }
    ResourceTradeoff r;
    r.margin = std::sqrt(2.0) - 1 / (f * std::sqrt(q2));
    r.satisfied = r.margin >= 0;
    r.minimal_f = 1 / std::sqrt(2 * q2);
    return r;
}

}  // namespace noon::metrology
