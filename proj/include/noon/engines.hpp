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

// Joint detection amplitudes for a complete detector set.
//
//   C = sqrt(N_a! N_b! / prod m_d!) [x^{N_a}] prod_d (c_a(d) x + c_b(d))^{m_d}
//
// computed three ways: polynomial coefficient extraction (exactly over
// Q(i, sqrt T), or in floating point), the same coefficient as a periodic
// integral over phi, and a brute-force Fock-space evolution of the optical
// network for small N.

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "noon/circuit.hpp"
#include "noon/numerics.hpp"

namespace noon {

class CostGuardExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The conditioning record cannot occur, so no conditional distribution exists.
class ZeroProbability : public InvalidInput {
   public:
    ZeroProbability() : InvalidInput("conditioning has zero probability: distribution undefined") {}
};

// ---------------------------------------------------------------------------
// Outcomes

struct DetectionOutcome {
    DetectorSet set = DetectorSet::Middle;
    std::vector<int> counts;  // aligned with detectors_of(set)

    int count(Detector d) const {
        const auto &dets = detectors_of(set);
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (dets[i] == d) {
                return counts[i];
            }
        }
        throw InvalidInput("detector " + std::string(detector_name(d)) + " not in set " +
                           std::string(set_name(set)));
    }
    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
};

inline DetectionOutcome middle_outcome(int m1, int m2, int m5, int m6) {
    return {DetectorSet::Middle, {m1, m2, m5, m6}};
}
inline DetectionOutcome split_outcome(int m1, int m2, int m5p, int m6, int m9) {
    return {DetectorSet::Split, {m1, m2, m5p, m6, m9}};
}
inline DetectionOutcome output_outcome(int m1, int m2, int m7, int m8, int m9) {
    return {DetectorSet::Output, {m1, m2, m7, m8, m9}};
}
inline DetectionOutcome probe_outcome(int m1, int m2, int m9, int ka, int kb) {
    return {DetectorSet::Probe, {m1, m2, m9, ka, kb}};
}

inline void validate_outcome(const CircuitConfig &config, const DetectionOutcome &outcome) {
    config.validate();
    if (outcome.counts.size() != detectors_of(outcome.set).size()) {
        throw InvalidInput("outcome has wrong number of detector counts");
    }
    for (int m : outcome.counts) {
        if (m < 0) {
            throw InvalidInput("detector counts must be nonnegative");
        }
    }
    if (outcome.total() != config.total()) {
        throw InvalidInput("outcome does not conserve particle number: counts sum to " +
                           std::to_string(outcome.total()) + ", sources hold " + std::to_string(config.total()));
    }
    if (outcome.set == DetectorSet::Probe && !config.probe) {
        throw InvalidInput("probe detector set requires a probe phase in the config");
    }
}

/// Every conserving outcome of a detector set, in lexicographic order.
inline std::vector<DetectionOutcome> all_outcomes(DetectorSet set, int N) {
    const std::size_t k = detectors_of(set).size();
    std::vector<DetectionOutcome> out;
    std::vector<int> c(k, 0);
    auto rec = [&](auto &&self, std::size_t pos, int left) -> void {
        if (pos + 1 == k) {
            c[pos] = left;
            out.push_back({set, c});
            return;
        }
        for (int m = 0; m <= left; ++m) {
            c[pos] = m;
            self(self, pos + 1, left - m);
        }
    };
    rec(rec, 0, N);
    return out;
}

// ---------------------------------------------------------------------------
// Polynomial kernels shared by the exact and floating coefficient engines.

namespace detail {

struct ExactAlgebra {
    using Value = num::QuadGaussian;
    const num::QuadGaussianRing *ring;
    Value zero() const { return {}; }
    Value one() const { return Value::integer(1); }
    bool is_zero(const Value &v) const { return v.is_zero(); }
    void mul_add(Value &acc, const Value &a, const Value &b) const { ring->mul_add(acc, a, b); }
};

template <class Real>
struct ComplexAlgebra {
    using Value = std::complex<Real>;
    Value zero() const { return {0, 0}; }
    Value one() const { return {1, 0}; }
    bool is_zero(const Value &v) const { return v.real() == 0 && v.imag() == 0; }
    void mul_add(Value &acc, const Value &a, const Value &b) const { acc += a * b; }
};

template <class Alg>
using Poly = std::vector<typename Alg::Value>;

/// p * (a x + b)
template <class Alg>
Poly<Alg> times_linear(const Alg &alg, const Poly<Alg> &p, const typename Alg::Value &a,
                       const typename Alg::Value &b) {
    Poly<Alg> out(p.size() + 1, alg.zero());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (alg.is_zero(p[i])) {
            continue;
        }
        alg.mul_add(out[i + 1], p[i], a);
        alg.mul_add(out[i], p[i], b);
    }
    return out;
}

template <class Value>
struct LinearFactor {
    Value a;
    Value b;
    int power;
};

template <class Alg>
Poly<Alg> power_product(const Alg &alg, const std::vector<LinearFactor<typename Alg::Value>> &factors) {
    Poly<Alg> p{alg.one()};
    for (const auto &f : factors) {
        for (int k = 0; k < f.power; ++k) {
            p = times_linear(alg, p, f.a, f.b);
        }
    }
    return p;
}

/// S_k = [x^target] base * (free)^k * (partner)^{r-k} for k = 0..r.
template <class Alg>
std::vector<typename Alg::Value> pair_sweep(const Alg &alg, const Poly<Alg> &base,
                                            const LinearFactor<typename Alg::Value> &free,
                                            const LinearFactor<typename Alg::Value> &partner, int r,
                                            int target) {
    std::vector<Poly<Alg>> tails(r + 1);
    tails[0] = base;
    for (int s = 1; s <= r; ++s) {
        tails[s] = times_linear(alg, tails[s - 1], partner.a, partner.b);
    }
    std::vector<typename Alg::Value> out(r + 1, alg.zero());
    Poly<Alg> head{alg.one()};
    for (int k = 0; k <= r; ++k) {
        if (k > 0) {
            head = times_linear(alg, head, free.a, free.b);
        }
        const Poly<Alg> &tail = tails[r - k];
        for (int i = 0; i <= k && i <= target; ++i) {
            const std::size_t j = static_cast<std::size_t>(target - i);
            if (j < tail.size() && !alg.is_zero(head[i])) {
                alg.mul_add(out[k], head[i], tail[j]);
            }
        }
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Exact engine over Z[i][t], t = sqrt(p q) for T = p/q.
//
// Each row is written c_d = sqrt(w_d) (g_a, g_b) with rational w_d and g in
// the ring, so |C|^2 = (N_a! N_b! / prod m!) prod w_d^{m_d} |S|^2.

class ExactCircuit {
   public:
    struct Row {
        num::ExactRational weight;
        num::QuadGaussian ga;
        num::QuadGaussian gb;
    };

    explicit ExactCircuit(const CircuitConfig &config) : config_(config), ring_(num::BigInt(1)) {
        config.validate();
        if (!config.exactly_representable()) {
            throw InvalidInput("config is not exactly representable: phases must be multiples of pi/2 and T rational");
        }
        using num::BigInt;
        using num::QuadGaussian;
        const num::ExactRational T = config.transmission.exact();
        const num::ExactRational R = 1 - T;
        const BigInt p = T.get_num();
        const BigInt q = T.get_den();
        const BigInt D = p * q;
        QuadGaussian t;
        if (mpz_perfect_square_p(D.get_mpz_t())) {
            BigInt s;
            mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
            t = {{s, 0}, {}};
        } else {
            ring_ = num::QuadGaussianRing(D);
            t = {{}, {1, 0}};
        }
        const num::QuadGaussianRing &ring = ring_;
        auto E = [](double angle) { return QuadGaussian{num::GaussianInt::unit_power(*quarter_turns(angle)), {}}; };
        const QuadGaussian one = QuadGaussian::integer(1);
        const QuadGaussian i{{0, 1}, {}};
        auto neg = [](const QuadGaussian &x) { return QuadGaussian{-x.rational, -x.radical}; };
        auto add = [&](const QuadGaussian &x, const QuadGaussian &y) { return ring.add(x, y); };
        auto mul = [&](const QuadGaussian &x, const QuadGaussian &y) { return ring.mul(x, y); };

        const QuadGaussian e_theta = E(config.theta);
        const QuadGaussian e_xi = E(config.xi);
        const QuadGaussian e_zeta = E(config.zeta);
        const QuadGaussian qq{{q, 0}, {}};
        const num::ExactRational quarter(1, 4);

        set(Detector::D1, quarter, mul(i, e_theta), neg(one));
        set(Detector::D2, quarter, neg(e_theta), i);
        set(Detector::D5, quarter, neg(e_xi), i);
        set(Detector::D6, quarter, mul(i, e_xi), neg(one));
        set(Detector::D5p, T * quarter, neg(mul(e_zeta, mul(i, e_xi))), neg(e_zeta));
        set(Detector::D9, R * quarter, e_xi, neg(i));

        // 2 sqrt2 q c7 = ((t e_zeta - q) e_xi, -i (t e_zeta + q)); likewise for c8.
        const QuadGaussian te = mul(t, e_zeta);
        const QuadGaussian u = add(te, neg(qq));
        const QuadGaussian v = neg(mul(i, add(te, qq)));
        const num::ExactRational w78 = num::ExactRational(1) / (8 * num::ExactRational(q * q));
        set(Detector::D7, w78, mul(u, e_xi), v);
        set(Detector::D8, w78, mul(v, e_xi), neg(u));

        if (config.probe) {
            const QuadGaussian e_chi = E(config.probe->chi);
            Row r7 = rows_[index_of(Detector::D7)];
            Row r8 = rows_[index_of(Detector::D8)];
            if (config.probe->arm == ProbeArm::Seven) {
                r7.ga = mul(e_chi, r7.ga);
                r7.gb = mul(e_chi, r7.gb);
            } else {
                r8.ga = mul(e_chi, r8.ga);
                r8.gb = mul(e_chi, r8.gb);
            }
            const num::ExactRational wp = w78 / 2;
            set(Detector::A, wp, add(r7.ga, mul(i, r8.ga)), add(r7.gb, mul(i, r8.gb)));
            set(Detector::B, wp, add(mul(i, r7.ga), r8.ga), add(mul(i, r7.gb), r8.gb));
        }
    }

    const CircuitConfig &config() const { return config_; }
    const num::QuadGaussianRing &ring() const { return ring_; }
    const Row &row(Detector d) const {
        if (!present_[index_of(d)]) {
            throw InvalidInput("detector " + std::string(detector_name(d)) + " is not configured");
        }
        return rows_[index_of(d)];
    }

   private:
    void set(Detector d, num::ExactRational w, num::QuadGaussian ga, num::QuadGaussian gb) {
        rows_[index_of(d)] = {std::move(w), std::move(ga), std::move(gb)};
        present_[index_of(d)] = true;
    }

    CircuitConfig config_;
    num::QuadGaussianRing ring_;
    std::array<Row, kDetectorCount> rows_{};
    std::array<bool, kDetectorCount> present_{};
};

struct ExactAmplitude {
    num::ExactRational prefactor_sq;  // |C|^2 = prefactor_sq * |sum|^2
    num::QuadGaussian sum;
    num::BigInt radicand{1};

    num::QuadraticRational probability() const {
        num::QuadGaussianRing ring(radicand);
        auto [x, y] = ring.norm(sum);
        return {prefactor_sq * num::ExactRational(x), prefactor_sq * num::ExactRational(y), radicand};
    }
    std::complex<double> value() const {
        num::QuadGaussianRing ring(radicand);
        return std::sqrt(num::to_double(prefactor_sq)) * ring.to_complex(sum);
    }
};

namespace detail {

inline num::ExactRational exact_prefactor(const ExactCircuit &circuit, const std::vector<Detector> &dets,
                                          const std::vector<int> &counts) {
    const auto &cfg = circuit.config();
    num::ExactRational pref(num::exact_factorial(cfg.N_alpha) * num::exact_factorial(cfg.N_beta));
    for (std::size_t k = 0; k < dets.size(); ++k) {
        const auto &row = circuit.row(dets[k]);
        num::ExactRational wpow;
        mpz_pow_ui(wpow.get_num_mpz_t(), row.weight.get_num_mpz_t(), counts[k]);
        mpz_pow_ui(wpow.get_den_mpz_t(), row.weight.get_den_mpz_t(), counts[k]);
        wpow.canonicalize();
        pref *= wpow / num::ExactRational(num::exact_factorial(counts[k]));
    }
    return pref;
}

}  // namespace detail

inline ExactAmplitude amplitude_exact(const ExactCircuit &circuit, const DetectionOutcome &outcome) {
    validate_outcome(circuit.config(), outcome);
    const auto &dets = detectors_of(outcome.set);
    detail::ExactAlgebra alg{&circuit.ring()};
    std::vector<detail::LinearFactor<num::QuadGaussian>> factors;
    for (std::size_t k = 0; k < dets.size(); ++k) {
        const auto &row = circuit.row(dets[k]);
        factors.push_back({row.ga, row.gb, outcome.counts[k]});
    }
    auto poly = detail::power_product(alg, factors);
    ExactAmplitude amp;
    amp.radicand = circuit.ring().radicand();
    amp.prefactor_sq = detail::exact_prefactor(circuit, dets, outcome.counts);
    const auto target = static_cast<std::size_t>(circuit.config().N_alpha);
    amp.sum = target < poly.size() ? poly[target] : num::QuadGaussian{};
    return amp;
}

// ---------------------------------------------------------------------------
// Floating coefficient engine. Every linear factor is rescaled to unit max
// coefficient and the scale carried in log form, so only the cancellation in
// the coefficient itself costs precision; binary128 leaves ample headroom.

template <class Real>
class SumEngine {
   public:
    using Complex = std::complex<Real>;
    struct Row {
        Complex a;
        Complex b;
        Real log_scale;
        bool vanishes;
    };

    explicit SumEngine(const CircuitConfig &config) : config_(config) {
        auto coeffs = detector_coefficients<Real>(config);
        for (std::size_t k = 0; k < kDetectorCount; ++k) {
            present_[k] = coeffs.present[k];
            if (!present_[k]) {
                continue;
            }
            auto [a, b] = coeffs.rows[k];
            Real s = std::max(num::rm::sqrt(num::rm::norm(a)), num::rm::sqrt(num::rm::norm(b)));
            if (s == 0) {
                rows_[k] = {Complex{0, 0}, Complex{0, 0}, Real(0), true};
            } else {
                rows_[k] = {a / s, b / s, num::rm::log(s), false};
            }
        }
    }

    const CircuitConfig &config() const { return config_; }
    const Row &row(Detector d) const {
        if (!present_[index_of(d)]) {
            throw InvalidInput("detector " + std::string(detector_name(d)) + " is not configured");
        }
        return rows_[index_of(d)];
    }

    /// ln of the factorial prefactor and row scales for the given counts.
    Real log_prefactor(const std::vector<Detector> &dets, const std::vector<int> &counts) const {
        Real lp = num::ln_factorial_as<Real>(config_.N_alpha) + num::ln_factorial_as<Real>(config_.N_beta);
        for (std::size_t k = 0; k < dets.size(); ++k) {
            lp -= num::ln_factorial_as<Real>(counts[k]);
            lp += 2 * counts[k] * row(dets[k]).log_scale;
        }
        return lp;
    }

    bool any_vanishing(const std::vector<Detector> &dets, const std::vector<int> &counts) const {
        for (std::size_t k = 0; k < dets.size(); ++k) {
            if (counts[k] > 0 && row(dets[k]).vanishes) {
                return true;
            }
        }
        return false;
    }

   private:
    CircuitConfig config_;
    std::array<Row, kDetectorCount> rows_{};
    std::array<bool, kDetectorCount> present_{};
};

/// Amplitude as (value, ln scale): C = value * exp(log_scale).
template <class Real>
struct ScaledComplex {
    std::complex<Real> value{0, 0};
    Real log_scale = 0;

    bool is_zero() const { return value.real() == 0 && value.imag() == 0; }
    /// ln |C|^2, -inf for zero.
    Real log_norm() const {
        if (is_zero()) {
            return -num::rm::infinity<Real>();
        }
        return num::rm::log(num::rm::norm(value)) + 2 * log_scale;
    }
    std::complex<double> to_complex() const {
        if (is_zero()) {
            return {0, 0};
        }
        Real mag = num::rm::sqrt(num::rm::norm(value));
        Real arg = num::rm::arg(value);
        double lm = static_cast<double>(num::rm::log(mag) + log_scale);
        return std::polar(std::exp(lm), static_cast<double>(arg));
    }
};

template <class Real>
ScaledComplex<Real> amplitude_float(const SumEngine<Real> &engine, const DetectionOutcome &outcome) {
    validate_outcome(engine.config(), outcome);
    const auto &dets = detectors_of(outcome.set);
    if (engine.any_vanishing(dets, outcome.counts)) {
        return {};
    }
    detail::ComplexAlgebra<Real> alg;
    std::vector<detail::LinearFactor<std::complex<Real>>> factors;
    for (std::size_t k = 0; k < dets.size(); ++k) {
        const auto &row = engine.row(dets[k]);
        factors.push_back({row.a, row.b, outcome.counts[k]});
    }
    auto poly = detail::power_product(alg, factors);
    const auto target = static_cast<std::size_t>(engine.config().N_alpha);
    ScaledComplex<Real> out;
    out.value = target < poly.size() ? poly[target] : std::complex<Real>{0, 0};
    out.log_scale = engine.log_prefactor(dets, outcome.counts) / 2;
    return out;
}

// ---------------------------------------------------------------------------
// Integral engine: C = sqrt(pref) (1/2pi) int dphi e^{-i N_a phi}
//                          prod_d (c_a e^{i phi} + c_b)^{m_d}
// on a uniform grid of 4(N+1) points. Per grid point the product is kept in
// log-polar form; the largest point sets the scale of the sum.

template <class Real>
class IntegralEngine {
   public:
    explicit IntegralEngine(const CircuitConfig &config) : config_(config) {
        auto coeffs = detector_coefficients<Real>(config);
        n_ = num::quadrature_points(config.total());
        phi_.resize(n_);
        const Real two_pi = 2 * num::rm::pi<Real>();
        for (std::size_t j = 0; j < n_; ++j) {
            phi_[j] = -num::rm::pi<Real>() + two_pi * static_cast<Real>(j) / static_cast<Real>(n_);
        }
        for (std::size_t k = 0; k < kDetectorCount; ++k) {
            if (!coeffs.present[k]) {
                continue;
            }
            auto [a, b] = coeffs.rows[k];
            auto &tab = tables_[k];
            tab.present = true;
            tab.log_abs.resize(n_);
            tab.arg.resize(n_);
            for (std::size_t j = 0; j < n_; ++j) {
                std::complex<Real> z{num::rm::cos(phi_[j]), num::rm::sin(phi_[j])};
                std::complex<Real> w = a * z + b;
                Real nrm = num::rm::norm(w);
                tab.log_abs[j] = nrm > 0 ? num::rm::log(nrm) / 2 : -num::rm::infinity<Real>();
                tab.arg[j] = nrm > 0 ? num::rm::arg(w) : Real(0);
            }
        }
    }

    const CircuitConfig &config() const { return config_; }
    std::size_t grid_size() const { return n_; }

    ScaledComplex<Real> amplitude(const DetectionOutcome &outcome) const {
        validate_outcome(config_, outcome);
        const auto &dets = detectors_of(outcome.set);
        std::vector<Real> L(n_, Real(0));
        std::vector<Real> P(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            P[j] = -static_cast<Real>(config_.N_alpha) * phi_[j];
        }
        Real lp = num::ln_factorial_as<Real>(config_.N_alpha) + num::ln_factorial_as<Real>(config_.N_beta);
        for (std::size_t k = 0; k < dets.size(); ++k) {
            const int m = outcome.counts[k];
            if (m == 0) {
                continue;
            }
            lp -= num::ln_factorial_as<Real>(m);
            const auto &tab = tables_[index_of(dets[k])];
            if (!tab.present) {
                throw InvalidInput("detector " + std::string(detector_name(dets[k])) + " is not configured");
            }
            for (std::size_t j = 0; j < n_; ++j) {
                L[j] += static_cast<Real>(m) * tab.log_abs[j];
                P[j] += static_cast<Real>(m) * tab.arg[j];
            }
        }
        Real lmax = -num::rm::infinity<Real>();
        for (Real l : L) {
            lmax = std::max(lmax, l);
        }
        if (!(lmax > -num::rm::infinity<Real>())) {
            return {};
        }
        std::complex<Real> acc{0, 0};
        for (std::size_t j = 0; j < n_; ++j) {
            if (!(L[j] > -num::rm::infinity<Real>())) {
                continue;
            }
            Real mag = num::rm::exp(L[j] - lmax);
            acc += std::complex<Real>{mag * num::rm::cos(P[j]), mag * num::rm::sin(P[j])};
        }
        acc /= static_cast<Real>(n_);
        return {acc, lmax + lp / 2};
    }

   private:
    struct Table {
        bool present = false;
        std::vector<Real> log_abs;
        std::vector<Real> arg;
    };
    CircuitConfig config_;
    std::size_t n_ = 0;
    std::vector<Real> phi_;
    std::array<Table, kDetectorCount> tables_{};
};

// ---------------------------------------------------------------------------
// Public single-outcome entry points.

struct SumAmplitude {
    std::optional<ExactAmplitude> exact;
    std::complex<double> value;
    double log_probability = -std::numeric_limits<double>::infinity();

    double probability() const {
        if (exact) {
            return exact->probability().to_double();
        }
        return std::exp(log_probability);
    }
};

/// Coefficient-extraction amplitude with every prefactor retained: exact when
/// the config is representable in Q(i, sqrt T), binary128 otherwise.
inline SumAmplitude amplitude_sum(const CircuitConfig &config, const DetectionOutcome &outcome) {
    validate_outcome(config, outcome);
    SumAmplitude out;
    if (config.exactly_representable()) {
        ExactCircuit circuit(config);
        out.exact = amplitude_exact(circuit, outcome);
        out.value = out.exact->value();
        double p = out.exact->probability().to_double();
        out.log_probability = p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
        return out;
    }
    SumEngine<__float128> engine(config);
    auto amp = amplitude_float(engine, outcome);
    out.value = amp.to_complex();
    out.log_probability = static_cast<double>(amp.log_norm());
    return out;
}

template <class Real = double>
ScaledComplex<Real> amplitude_integral(const CircuitConfig &config, const DetectionOutcome &outcome) {
    IntegralEngine<Real> engine(config);
    return engine.amplitude(outcome);
}

// ---------------------------------------------------------------------------
// State-vector oracle: the optical network applied as explicit
// unitaries on a five-mode Fock space (sources alpha, beta; vacuum ports of
// the two source splitters; vacuum port of the D9 splitter).

class FockState {
   public:
    using Complex = std::complex<double>;
    using Basis = std::vector<int>;

    FockState(int modes, const Basis &occupation) : modes_(modes) { amps_[occupation] = Complex{1, 0}; }

    const std::map<Basis, Complex> &amplitudes() const { return amps_; }

    /// a_out = e^{i phi} a_in on one mode.
    void phase(int mode, double phi) {
        for (auto &[basis, amp] : amps_) {
            amp *= std::polar(1.0, phi * basis[mode]);
        }
    }

    /// (a_out, b_out)^T = U (a_in, b_in)^T on two modes. Each input creation
    /// operator becomes a†_in,k = sum_l U_lk a†_out,l.
    void mix(int a, int b, const std::array<std::array<Complex, 2>, 2> &U) {
        std::map<Basis, Complex> next;
        for (const auto &[basis, amp] : amps_) {
            const int na = basis[a];
            const int nb = basis[b];
            // coefficients of x^j y^{n-j} in (U00 x + U10 y)^na (U01 x + U11 y)^nb
            std::vector<Complex> poly{Complex{1, 0}};
            auto times = [&](Complex cx, Complex cy) {
                std::vector<Complex> out(poly.size() + 1, Complex{0, 0});
                for (std::size_t j = 0; j < poly.size(); ++j) {
                    out[j + 1] += poly[j] * cx;
                    out[j] += poly[j] * cy;
                }
                poly.swap(out);
            };
            for (int k = 0; k < na; ++k) times(U[0][0], U[1][0]);
            for (int k = 0; k < nb; ++k) times(U[0][1], U[1][1]);
            const int n = na + nb;
            const double norm_in = 0.5 * (num::ln_factorial(na) + num::ln_factorial(nb));
            for (int j = 0; j <= n; ++j) {
                if (poly[j] == Complex{0, 0}) {
                    continue;
                }
                Basis nb_basis = basis;
                nb_basis[a] = j;
                nb_basis[b] = n - j;
                double scale = std::exp(0.5 * (num::ln_factorial(j) + num::ln_factorial(n - j)) - norm_in);
                next[nb_basis] += amp * poly[j] * scale;
            }
        }
        amps_.swap(next);
    }

    /// Probability that the listed modes hold exactly the listed counts.
    double probability(const std::vector<int> &modes, const std::vector<int> &counts) const {
        double p = 0;
        for (const auto &[basis, amp] : amps_) {
            bool match = true;
            for (std::size_t k = 0; k < modes.size() && match; ++k) {
                match = basis[modes[k]] == counts[k];
            }
            if (match) {
                p += std::norm(amp);
            }
        }
        return p;
    }

    double total_norm() const {
        double p = 0;
        for (const auto &[basis, amp] : amps_) p += std::norm(amp);
        return p;
    }

   private:
    int modes_;
    std::map<Basis, Complex> amps_;
};

inline constexpr int kOracleMaxParticles = 12;

/// Evolves |N_a, N_b> through the network up to the stage the detector set
/// observes. Returns the state and the mode index of each detector.
inline std::pair<FockState, std::vector<int>> statevector_evolve(const CircuitConfig &config, DetectorSet set) {
    config.validate();
    if (config.total() > kOracleMaxParticles) {
        throw CostGuardExceeded("state-vector oracle limited to N <= " + std::to_string(kOracleMaxParticles));
    }
    using C = std::complex<double>;
    const double pi = num::rm::pi<double>();
    const double r2 = 1.0 / std::sqrt(2.0);
    const std::array<std::array<C, 2>, 2> splitter{{{C{r2, 0}, C{0, r2}}, {C{0, r2}, C{r2, 0}}}};

    // modes: 0 alpha, 1 beta, 2 vacuum(alpha), 3 vacuum(beta), 4 vacuum(D9)
    FockState st(5, {config.N_alpha, config.N_beta, 0, 0, 0});
    st.mix(0, 2, splitter);  // 0: toward D1/D2, 2: middle arm from alpha
    st.mix(1, 3, splitter);  // 1: toward D1/D2, 3: middle arm from beta
    st.phase(0, config.theta);
    st.mix(0, 1, splitter);
    st.phase(0, pi / 2);  // 0 = D1
    st.phase(1, pi / 2);  // 1 = D2
    st.phase(2, config.xi);
    st.mix(2, 3, splitter);  // 2 = arm 6, 3 = arm 5
    if (set == DetectorSet::Middle) {
        return {st, {0, 1, 3, 2}};
    }
    const double sT = std::sqrt(config.transmission.value());
    const double sR = std::sqrt(config.transmission.reflection());
    st.mix(3, 4, {{{C{sT, 0}, C{0, sR}}, {C{0, sR}, C{sT, 0}}}});
    st.phase(4, pi / 2);                // 4 = D9
    st.phase(3, config.zeta + pi / 2);  // 3 = arm 5'
    if (set == DetectorSet::Split) {
        return {st, {0, 1, 3, 2, 4}};
    }
    st.mix(3, 2, {{{C{0, r2}, C{0, r2}}, {C{r2, 0}, C{-r2, 0}}}});  // 3 = arm 7, 2 = arm 8
    if (set == DetectorSet::Output) {
        return {st, {0, 1, 3, 2, 4}};
    }
    if (!config.probe) {
        throw InvalidInput("probe detector set requires a probe phase in the config");
    }
    st.phase(config.probe->arm == ProbeArm::Seven ? 3 : 2, config.probe->chi);
    st.mix(3, 2, splitter);  // 3 = A, 2 = B
    return {st, {0, 1, 4, 3, 2}};
}

inline double statevector_oracle(const CircuitConfig &config, const DetectionOutcome &outcome) {
    if (config.total() > kOracleMaxParticles) {
        throw CostGuardExceeded("state-vector oracle limited to N <= " + std::to_string(kOracleMaxParticles));
    }
    validate_outcome(config, outcome);
    auto [st, modes] = statevector_evolve(config, outcome.set);
    return st.probability(modes, outcome.counts);
}

// ---------------------------------------------------------------------------
// Conditional distributions over one free detector (its partner takes the
// remainder), all other detectors of the set fixed.

enum class Engine { Exact, Float, Integral };

inline std::string_view engine_name(Engine e) {
    switch (e) {
        case Engine::Exact:
            return "exact";
        case Engine::Float:
            return "float";
        case Engine::Integral:
            return "integral";
    }
    return "?";
}

inline Engine parse_engine(std::string_view s) {
    if (s == "exact") return Engine::Exact;
    if (s == "float") return Engine::Float;
    if (s == "integral") return Engine::Integral;
    throw InvalidInput("unknown engine '" + std::string(s) + "'");
}

using FixedCounts = std::vector<std::pair<Detector, int>>;

struct OutcomeDistribution {
    DetectorSet set = DetectorSet::Output;
    FixedCounts fixed;
    Detector free = Detector::D7;
    Detector partner = Detector::D8;
    Engine engine = Engine::Exact;

    std::vector<double> probability;           // normalized; index = free count
    std::vector<double> log_absolute;          // ln of each joint probability
    std::vector<num::QuadraticRational> exact;  // joint probabilities, exact engine only
    double total = 0;                          // absolute probability of the conditioning
    double log_total = -std::numeric_limits<double>::infinity();
    bool underflow = false;                    // some normalized value below 1e-300 was flushed

    int remaining() const { return static_cast<int>(probability.size()) - 1; }
    num::QuadraticRational exact_total() const {
        num::QuadraticRational t;
        for (const auto &p : exact) t += p;
        return t;
    }
};

namespace detail {

struct SweepLayout {
    std::vector<Detector> fixed_dets;
    std::vector<int> fixed_counts;
    Detector free;
    Detector partner;
    int remaining;
};

inline SweepLayout layout_sweep(const CircuitConfig &config, DetectorSet set, const FixedCounts &fixed,
                                Detector free) {
    config.validate();
    if (set == DetectorSet::Probe && !config.probe) {
        throw InvalidInput("probe detector set requires a probe phase in the config");
    }
    const auto &dets = detectors_of(set);
    if (std::find(dets.begin(), dets.end(), free) == dets.end()) {
        throw InvalidInput("free detector not in set");
    }
    SweepLayout lay{{}, {}, free, free, config.total()};
    std::vector<Detector> open;
    for (Detector d : dets) {
        if (d == free) continue;
        auto it = std::find_if(fixed.begin(), fixed.end(), [&](const auto &fc) { return fc.first == d; });
        if (it == fixed.end()) {
            open.push_back(d);
            continue;
        }
        if (it->second < 0) {
            throw InvalidInput("detector counts must be nonnegative");
        }
        lay.fixed_dets.push_back(d);
        lay.fixed_counts.push_back(it->second);
        lay.remaining -= it->second;
    }
    for (const auto &fc : fixed) {
        if (std::find(dets.begin(), dets.end(), fc.first) == dets.end() || fc.first == free) {
            throw InvalidInput("fixed detector " + std::string(detector_name(fc.first)) + " not usable in set " +
                               std::string(set_name(set)));
        }
    }
    if (open.size() != 1) {
        throw InvalidInput("conditioning must fix all but two detectors of the set");
    }
    lay.partner = open.front();
    if (lay.remaining < 0) {
        throw InvalidInput("fixed counts exceed the particle number: empty support");
    }
    return lay;
}

inline void finish_from_logs(OutcomeDistribution &dist) {
    double lmax = -std::numeric_limits<double>::infinity();
    for (double l : dist.log_absolute) lmax = std::max(lmax, l);
    if (!(lmax > -std::numeric_limits<double>::infinity())) {
        throw ZeroProbability();
    }
    double s = 0;
    for (double l : dist.log_absolute) s += std::exp(l - lmax);
    dist.log_total = lmax + std::log(s);
    dist.total = std::exp(dist.log_total);
    dist.probability.resize(dist.log_absolute.size());
    for (std::size_t k = 0; k < dist.log_absolute.size(); ++k) {
        double p = std::exp(dist.log_absolute[k] - dist.log_total);
        if (p > 0 && p < 1e-300) {
            p = 0;
            dist.underflow = true;
        }
        dist.probability[k] = p;
    }
}

}  // namespace detail

/// Unnormalized joint probabilities along a sweep of the free detector; no
/// error when they all vanish.
struct ExactSweep {
    detail::SweepLayout layout;
    std::vector<num::QuadraticRational> joint;
};

inline ExactSweep sweep_exact(const ExactCircuit &circuit, DetectorSet set, const FixedCounts &fixed, Detector free) {
    const auto &config = circuit.config();
    auto lay = detail::layout_sweep(config, set, fixed, free);
    detail::ExactAlgebra alg{&circuit.ring()};
    std::vector<detail::LinearFactor<num::QuadGaussian>> base_factors;
    for (std::size_t k = 0; k < lay.fixed_dets.size(); ++k) {
        const auto &row = circuit.row(lay.fixed_dets[k]);
        base_factors.push_back({row.ga, row.gb, lay.fixed_counts[k]});
    }
    auto base = detail::power_product(alg, base_factors);
    const auto &rf = circuit.row(lay.free);
    const auto &rp = circuit.row(lay.partner);
    auto sums = detail::pair_sweep(alg, base, {rf.ga, rf.gb, 0}, {rp.ga, rp.gb, 0}, lay.remaining, config.N_alpha);

    std::vector<Detector> dets = lay.fixed_dets;
    dets.push_back(lay.free);
    dets.push_back(lay.partner);
    std::vector<int> counts = lay.fixed_counts;
    counts.push_back(0);
    counts.push_back(0);
    const num::BigInt D = circuit.ring().radicand();
    ExactSweep out{lay, {}};
    for (int k = 0; k <= lay.remaining; ++k) {
        counts[counts.size() - 2] = k;
        counts[counts.size() - 1] = lay.remaining - k;
        auto pref = detail::exact_prefactor(circuit, dets, counts);
        auto [x, y] = circuit.ring().norm(sums[k]);
        out.joint.push_back({pref * num::ExactRational(x), pref * num::ExactRational(y), D});
    }
    return out;
}

inline OutcomeDistribution distribution_exact(const ExactCircuit &circuit, DetectorSet set, const FixedCounts &fixed,
                                              Detector free) {
    auto sweep = sweep_exact(circuit, set, fixed, free);
    OutcomeDistribution dist;
    dist.set = set;
    dist.fixed = fixed;
    dist.free = sweep.layout.free;
    dist.partner = sweep.layout.partner;
    dist.engine = Engine::Exact;
    dist.exact = std::move(sweep.joint);
    num::QuadraticRational total = dist.exact_total();
    if (total.is_zero()) {
        throw ZeroProbability();
    }
    dist.total = total.to_double();
    dist.log_total = std::log(dist.total);
    for (const auto &p : dist.exact) {
        double v = p.is_zero() ? 0.0 : (p / total).to_double();
        dist.probability.push_back(v);
        dist.log_absolute.push_back(p.is_zero() ? -std::numeric_limits<double>::infinity()
                                                : std::log(p.to_double()));
    }
    return dist;
}

struct FloatSweep {
    detail::SweepLayout layout;
    std::vector<double> log_joint;  // -inf for exact zeros
};

template <class Real>
FloatSweep sweep_float(const SumEngine<Real> &engine, DetectorSet set, const FixedCounts &fixed, Detector free) {
    const auto &config = engine.config();
    auto lay = detail::layout_sweep(config, set, fixed, free);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    FloatSweep out{lay, {}};
    if (engine.any_vanishing(lay.fixed_dets, lay.fixed_counts)) {
        out.log_joint.assign(lay.remaining + 1, neg_inf);
        return out;
    }
    detail::ComplexAlgebra<Real> alg;
    std::vector<detail::LinearFactor<std::complex<Real>>> base_factors;
    for (std::size_t k = 0; k < lay.fixed_dets.size(); ++k) {
        const auto &row = engine.row(lay.fixed_dets[k]);
        base_factors.push_back({row.a, row.b, lay.fixed_counts[k]});
    }
    auto base = detail::power_product(alg, base_factors);
    const auto &rf = engine.row(lay.free);
    const auto &rp = engine.row(lay.partner);
    auto sums = detail::pair_sweep(alg, base, {rf.a, rf.b, 0}, {rp.a, rp.b, 0}, lay.remaining, config.N_alpha);
    std::vector<Detector> dets = lay.fixed_dets;
    dets.push_back(lay.free);
    dets.push_back(lay.partner);
    std::vector<int> counts = lay.fixed_counts;
    counts.push_back(0);
    counts.push_back(0);
    for (int k = 0; k <= lay.remaining; ++k) {
        counts[counts.size() - 2] = k;
        counts[counts.size() - 1] = lay.remaining - k;
        Real nrm = num::rm::norm(sums[k]);
        if (nrm == 0 || engine.any_vanishing(dets, counts)) {
            out.log_joint.push_back(neg_inf);
            continue;
        }
        Real lp = engine.log_prefactor(dets, counts) + num::rm::log(nrm);
        out.log_joint.push_back(static_cast<double>(lp));
    }
    return out;
}

template <class Real>
OutcomeDistribution distribution_float(const SumEngine<Real> &engine, DetectorSet set, const FixedCounts &fixed,
                                       Detector free) {
    auto sweep = sweep_float(engine, set, fixed, free);
    OutcomeDistribution dist;
    dist.set = set;
    dist.fixed = fixed;
    dist.free = sweep.layout.free;
    dist.partner = sweep.layout.partner;
    dist.engine = Engine::Float;
    dist.log_absolute = std::move(sweep.log_joint);
    detail::finish_from_logs(dist);
    return dist;
}

template <class Real>
OutcomeDistribution distribution_integral(const IntegralEngine<Real> &engine, DetectorSet set,
                                          const FixedCounts &fixed, Detector free) {
    const auto &config = engine.config();
    auto lay = detail::layout_sweep(config, set, fixed, free);
    OutcomeDistribution dist;
    dist.set = set;
    dist.fixed = fixed;
    dist.free = lay.free;
    dist.partner = lay.partner;
    dist.engine = Engine::Integral;
    const auto &dets = detectors_of(set);
    for (int k = 0; k <= lay.remaining; ++k) {
        DetectionOutcome o{set, std::vector<int>(dets.size(), 0)};
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (dets[i] == lay.free) {
                o.counts[i] = k;
            } else if (dets[i] == lay.partner) {
                o.counts[i] = lay.remaining - k;
            } else {
                auto it = std::find(lay.fixed_dets.begin(), lay.fixed_dets.end(), dets[i]);
                o.counts[i] = lay.fixed_counts[it - lay.fixed_dets.begin()];
            }
        }
        dist.log_absolute.push_back(static_cast<double>(engine.amplitude(o).log_norm()));
    }
    detail::finish_from_logs(dist);
    return dist;
}

/// Normalized distribution of the free detector's count given the fixed
/// counts; the partner detector takes the remainder. `total` reports the
/// absolute probability of the conditioning record.
///   Exact    : coefficient extraction over Q(i, sqrt T) (GMP)
///   Float    : coefficient extraction in binary128
///   Integral : periodic quadrature in double precision
inline OutcomeDistribution conditional_distribution(const CircuitConfig &config, DetectorSet set,
                                                    const FixedCounts &fixed, Detector free,
                                                    Engine engine = Engine::Exact) {
    switch (engine) {
        case Engine::Exact:
            return distribution_exact(ExactCircuit(config), set, fixed, free);
        case Engine::Float:
            return distribution_float(SumEngine<__float128>(config), set, fixed, free);
        case Engine::Integral:
            return distribution_integral(IntegralEngine<double>(config), set, fixed, free);
    }
    throw InvalidInput("unknown engine");
}

/// Convenience for the corrected output: fixed m1, m2, m9, free m7.
inline OutcomeDistribution output_distribution(const CircuitConfig &config, int m1, int m2, int m9,
                                               Engine engine = Engine::Exact) {
    return conditional_distribution(config, DetectorSet::Output,
                                    {{Detector::D1, m1}, {Detector::D2, m2}, {Detector::D9, m9}}, Detector::D7,
                                    engine);
}

/// Convenience for the middle arms: fixed m1, m2, free m5.
inline OutcomeDistribution middle_distribution(const CircuitConfig &config, int m1, int m2,
                                               Engine engine = Engine::Exact) {
    return conditional_distribution(config, DetectorSet::Middle, {{Detector::D1, m1}, {Detector::D2, m2}},
                                    Detector::D5, engine);
}

}  // namespace noon
