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

// The correction rule. Once m1 and m2 are known, the D9 splitter is set to
// T = m2/m1 (roles swapped, with xi = +pi/2, when m2 > m1) and the number of
// particles it diverts is expected to be
//     <m9> = |m1 - m2| / (m1 + m2) * (N - m1 - m2).
// The exact distribution of m9 follows from the joint distribution over
// {1, 2, 5', 6, 9}.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "noon/circuit.hpp"
#include "noon/engines.hpp"
#include "noon/numerics.hpp"
#include "noon/phase.hpp"

namespace noon::feedforward {

struct FeedforwardPlan {
    int N = 0;
    int m1 = 0;
    int m2 = 0;
    num::ExactRational T;
    double xi = 0.0;
    bool swapped = false;  // m2 > m1: xi = +pi/2 branch
    num::ExactRational expected_m9_exact;
    double expected_m9 = 0.0;
    int most_probable_m9 = 0;
    bool mode_from_distribution = false;
};

/// floor(x + 1/2)
inline long round_half_up(const num::ExactRational &x) {
    num::ExactRational y = x + num::ExactRational(1, 2);
    num::BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
    return f.get_si();
}

inline num::ExactRational expected_m9_rational(int N, int m1, int m2) {
    if (m1 + m2 <= 0) {
        throw InvalidInput("expected m9 undefined for m1 = m2 = 0");
    }
    return num::make_rational(std::abs(m1 - m2), m1 + m2) * (N - m1 - m2);
}

inline FeedforwardPlan plan(int N, int m1, int m2) {
    if (m1 < 0 || m2 < 0 || N < 0) {
        throw InvalidInput("plan: counts must be nonnegative");
    }
    if (m1 + m2 > N) {
        throw InvalidInput("plan: m1 + m2 exceeds N");
    }
    if (m1 + m2 == 0) {
        throw InvalidInput("plan: m1 = m2 = 0 carries no side information; T cannot be set");
    }
    FeedforwardPlan p;
    p.N = N;
    p.m1 = m1;
    p.m2 = m2;
    p.T = feedforward_transmission(m1, m2);
    p.swapped = m2 > m1;
    p.xi = p.swapped ? num::rm::pi<double>() / 2 : -num::rm::pi<double>() / 2;
    p.expected_m9_exact = expected_m9_rational(N, m1, m2);
    p.expected_m9 = num::to_double(p.expected_m9_exact);
    p.most_probable_m9 = static_cast<int>(round_half_up(p.expected_m9_exact));
    return p;
}

inline CircuitConfig plan_config(const FeedforwardPlan &p, int N_alpha, int N_beta) {
    auto c = standard_config(N_alpha, N_beta, p.m1, p.m2);
    c.transmission = Transmission(p.T);
    return c;
}

/// Distribution of m9 given (m1, m2): the joint over {1, 2, 5', 6, 9} summed
/// over m5' and m6. Free detector reported as D9.
struct M9Distribution {
    std::vector<double> probability;           // normalized, index = m9
    std::vector<num::QuadraticRational> exact;  // unnormalized, exact engine only
    double total = 0;                          // absolute probability of (m1, m2)
    Engine engine = Engine::Exact;

    double mean() const {
        double m = 0;
        for (std::size_t k = 0; k < probability.size(); ++k) m += k * probability[k];
        return m;
    }
    int mode() const {
        std::size_t best = 0;
        for (std::size_t k = 1; k < probability.size(); ++k) {
            if (probability[k] > probability[best]) best = k;
        }
        return static_cast<int>(best);
    }
    std::optional<num::QuadraticRational> exact_mean() const {
        if (exact.empty()) return std::nullopt;
        num::QuadraticRational z;
        num::QuadraticRational s;
        for (std::size_t k = 0; k < exact.size(); ++k) {
            z += exact[k];
            s += num::ExactRational(static_cast<long>(k)) * exact[k];
        }
        return s / z;
    }
};

inline CircuitConfig m9_config(int N_alpha, int N_beta, int m1, int m2, const Transmission &T) {
    CircuitConfig c;
    c.N_alpha = N_alpha;
    c.N_beta = N_beta;
    c.xi = m1 >= m2 ? -num::rm::pi<double>() / 2 : num::rm::pi<double>() / 2;
    c.transmission = T;
    c.validate();
    return c;
}

inline M9Distribution exact_m9_distribution(int N_alpha, int N_beta, int m1, int m2, const Transmission &T,
                                            Engine engine = Engine::Exact) {
    if (m1 < 0 || m2 < 0 || m1 + m2 > N_alpha + N_beta) {
        throw InvalidInput("exact_m9_distribution: invalid side counts");
    }
    const auto config = m9_config(N_alpha, N_beta, m1, m2, T);
    const int M = config.total() - m1 - m2;
    M9Distribution out;
    out.engine = engine;
    if (engine == Engine::Exact) {
        ExactCircuit circuit(config);
        num::QuadraticRational z;
        for (int m9 = 0; m9 <= M; ++m9) {
            auto sweep = sweep_exact(circuit, DetectorSet::Split,
                                     {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}}, Detector::D5p);
            num::QuadraticRational s;
            for (const auto &p : sweep.joint) s += p;
            out.exact.push_back(s);
            z += s;
        }
        if (z.is_zero()) {
            throw InvalidInput("side record has zero probability");
        }
        out.total = z.to_double();
        for (const auto &p : out.exact) {
            out.probability.push_back(p.is_zero() ? 0.0 : (p / z).to_double());
        }
        return out;
    }
    SumEngine<__float128> sum_engine(config);
    std::vector<double> logs;
    for (int m9 = 0; m9 <= M; ++m9) {
        auto sweep = sweep_float(sum_engine, DetectorSet::Split,
                                 {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}}, Detector::D5p);
        double lmax = -std::numeric_limits<double>::infinity();
        for (double l : sweep.log_joint) lmax = std::max(lmax, l);
        if (!(lmax > -std::numeric_limits<double>::infinity())) {
            logs.push_back(lmax);
            continue;
        }
        double s = 0;
        for (double l : sweep.log_joint) s += std::exp(l - lmax);
        logs.push_back(lmax + std::log(s));
    }
    double lmax = -std::numeric_limits<double>::infinity();
    for (double l : logs) lmax = std::max(lmax, l);
    if (!(lmax > -std::numeric_limits<double>::infinity())) {
        throw InvalidInput("side record has zero probability");
    }
    double s = 0;
    for (double l : logs) s += std::exp(l - lmax);
    const double lz = lmax + std::log(s);
    out.total = std::exp(lz);
    for (double l : logs) out.probability.push_back(std::exp(l - lz));
    return out;
}

/// ln Gamma(k/2) for integer k >= 1, from factorials.
inline double ln_gamma_half(int k) {
    if (k < 1) {
        throw InvalidInput("ln_gamma_half: k must be positive");
    }
    if (k % 2 == 0) {
        return num::ln_factorial(k / 2 - 1);
    }
    const int n = (k - 1) / 2;  // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
    return num::ln_factorial(2 * n) - n * std::log(4.0) - num::ln_factorial(n) +
           0.5 * std::log(num::rm::pi<double>());
}

/// Closed form for equal sources: the phi integral reduces to a Beta function,
///   P(m9) ~ R^m9 / m9! sum_{m5'} T^{m5'} / (m5'! m6!)
///           { [1 + (-1)^{m2+m6}] Gamma((1+m1+m5'+m9)/2) Gamma((1+m2+m6)/2) }^2,
/// m6 = N - m1 - m2 - m9 - m5'. Normalized over m9.
inline std::vector<double> m9_distribution_closed_form(int N_alpha, int N_beta, int m1, int m2, double T) {
    if (N_alpha != N_beta) {
        throw InvalidInput("closed form requires equal sources");
    }
    const int N = N_alpha + N_beta;
    const int M = N - m1 - m2;
    if (M < 0) {
        throw InvalidInput("invalid side counts");
    }
    const double R = 1 - T;
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(M + 1, neg_inf);
    for (int m9 = 0; m9 <= M; ++m9) {
        if (R == 0 && m9 > 0) continue;
        std::vector<double> terms;
        for (int m5 = 0; m5 <= M - m9; ++m5) {
            const int m6 = M - m9 - m5;
            if ((m2 + m6) % 2 != 0) continue;
            if (T == 0 && m5 > 0) continue;
            double l = (m5 > 0 ? m5 * std::log(T) : 0.0) - num::ln_factorial(m5) - num::ln_factorial(m6) +
                       2 * (std::log(2.0) + ln_gamma_half(1 + m1 + m5 + m9) + ln_gamma_half(1 + m2 + m6));
            terms.push_back(l);
        }
        if (terms.empty()) continue;
        double lmax = *std::max_element(terms.begin(), terms.end());
        double s = 0;
        for (double t : terms) s += std::exp(t - lmax);
        logs[m9] = (m9 > 0 ? m9 * std::log(R) : 0.0) - num::ln_factorial(m9) + lmax + std::log(s);
    }
    double lmax = *std::max_element(logs.begin(), logs.end());
    double s = 0;
    for (double l : logs) s += std::exp(l - lmax);
    std::vector<double> p;
    for (double l : logs) p.push_back(std::exp(l - lmax) / s);
    return p;
}

/// Uses the exact m9 distribution's mode for most_probable_m9.
inline FeedforwardPlan refine_with_distribution(FeedforwardPlan p, int N_alpha, int N_beta,
                                                Engine engine = Engine::Exact) {
    auto d = exact_m9_distribution(N_alpha, N_beta, p.m1, p.m2, Transmission(p.T), engine);
    p.most_probable_m9 = d.mode();
    p.mode_from_distribution = true;
    return p;
}

/// Mean relations over {1, 2, 5', 6, 9} with m5 = m5' + m9 (all exact).
struct MeanRelationsReport {
    num::QuadraticRational mean_m5p;
    num::QuadraticRational mean_m6;
    num::QuadraticRational mean_m9;
    num::QuadraticRational mean_m5;
    num::QuadraticRational m9_residual;            // <m9> - (1-T)(N - m1 - m2 - <m6>)
    num::QuadraticRational conservation_residual;  // <m5> + <m6> - (N - m1 - m2)
    double ratio_m5_m6 = 0;                        // <m5>/<m6>
    double ratio_sides = 0;                        // m1/m2
    double ratio_sides_refined = 0;                // (m1 + 1/2)/(m2 + 1/2)
};

inline MeanRelationsReport mean_relations_report(int N_alpha, int N_beta, int m1, int m2,
                                                 const num::ExactRational &T) {
    const auto config = m9_config(N_alpha, N_beta, m1, m2, Transmission(T));
    ExactCircuit circuit(config);
    const int N = config.total();
    const int M = N - m1 - m2;
    if (M < 0) {
        throw InvalidInput("mean_relations_report: invalid side counts");
    }
    num::QuadraticRational z, s5p, s6, s9;
    for (int m9 = 0; m9 <= M; ++m9) {
        auto sweep = sweep_exact(circuit, DetectorSet::Split,
                                 {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}}, Detector::D5p);
        const int r = sweep.layout.remaining;
        for (int k = 0; k <= r; ++k) {
            const auto &p = sweep.joint[k];
            z += p;
            s5p += num::ExactRational(k) * p;
            s6 += num::ExactRational(r - k) * p;
            s9 += num::ExactRational(m9) * p;
        }
    }
    if (z.is_zero()) {
        throw InvalidInput("side record has zero probability");
    }
    MeanRelationsReport rep;
    rep.mean_m5p = s5p / z;
    rep.mean_m6 = s6 / z;
    rep.mean_m9 = s9 / z;
    rep.mean_m5 = rep.mean_m5p + rep.mean_m9;
    const num::QuadraticRational rest(num::ExactRational(N - m1 - m2));
    rep.m9_residual = rep.mean_m9 - num::QuadraticRational(1 - T) * (rest - rep.mean_m6);
    rep.conservation_residual = rep.mean_m5 + rep.mean_m6 - rest;
    rep.ratio_m5_m6 = rep.mean_m5.to_double() / rep.mean_m6.to_double();
    rep.ratio_sides = m2 > 0 ? static_cast<double>(m1) / m2 : std::numeric_limits<double>::infinity();
    rep.ratio_sides_refined = (m1 + 0.5) / (m2 + 0.5);
    return rep;
}

}  // namespace noon::feedforward
