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

// The interferometer: two Fock sources alpha, beta; side detectors 1 and 2;
// a middle splitter producing arms 5 and 6; a splitter of transmission T that
// diverts part of arm 5 to detector 9 (leaving 5'); a final splitter mixing 5'
// and 6 into 7 and 8. Every detector mode is a linear combination
//     a_d = c_alpha(d) a_alpha + c_beta(d) a_beta   (+ vacuum modes).

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "noon/numerics.hpp"

namespace noon {

enum class Detector { D1, D2, D5, D5p, D6, D7, D8, D9, A, B };
inline constexpr std::size_t kDetectorCount = 10;

inline constexpr std::size_t index_of(Detector d) { return static_cast<std::size_t>(d); }

inline std::string_view detector_name(Detector d) {
    static constexpr std::array<std::string_view, kDetectorCount> names{"1", "2", "5", "5'", "6",
                                                                         "7", "8", "9", "A", "B"};
    return names[index_of(d)];
}

inline Detector parse_detector(std::string_view s) {
    for (std::size_t i = 0; i < kDetectorCount; ++i) {
        auto d = static_cast<Detector>(i);
        if (detector_name(d) == s) {
            return d;
        }
    }
    if (s == "5p") {
        return Detector::D5p;
    }
    throw InvalidInput("unknown detector '" + std::string(s) + "'");
}

/// The complete detector sets: each receives every particle exactly once.
enum class DetectorSet {
    Middle,  // {1, 2, 5, 6}
    Split,   // {1, 2, 5', 6, 9}
    Output,  // {1, 2, 7, 8, 9}
    Probe,   // {1, 2, 9, A, B}
};

inline const std::vector<Detector> &detectors_of(DetectorSet set) {
    static const std::vector<Detector> middle{Detector::D1, Detector::D2, Detector::D5, Detector::D6};
    static const std::vector<Detector> split{Detector::D1, Detector::D2, Detector::D5p, Detector::D6, Detector::D9};
    static const std::vector<Detector> output{Detector::D1, Detector::D2, Detector::D7, Detector::D8, Detector::D9};
    static const std::vector<Detector> probe{Detector::D1, Detector::D2, Detector::D9, Detector::A, Detector::B};
    switch (set) {
        case DetectorSet::Middle:
            return middle;
        case DetectorSet::Split:
            return split;
        case DetectorSet::Output:
            return output;
        case DetectorSet::Probe:
            return probe;
    }
    return middle;
}

inline std::string_view set_name(DetectorSet set) {
    switch (set) {
        case DetectorSet::Middle:
            return "56";
        case DetectorSet::Split:
            return "5p69";
        case DetectorSet::Output:
            return "789";
        case DetectorSet::Probe:
            return "probe";
    }
    return "?";
}

inline DetectorSet parse_set(std::string_view s) {
    if (s == "56") return DetectorSet::Middle;
    if (s == "5p69" || s == "5'69") return DetectorSet::Split;
    if (s == "789") return DetectorSet::Output;
    if (s == "probe") return DetectorSet::Probe;
    throw InvalidInput("unknown detector set '" + std::string(s) + "'");
}

/// Multiples of pi/2 are recognized so that phase factors stay exact.
inline std::optional<int> quarter_turns(double radians) {
    const double q = radians / (num::rm::pi<double>() / 2);
    const double k = std::round(q);
    if (std::fabs(q - k) > 1e-12) {
        return std::nullopt;
    }
    return ((static_cast<int>(k) % 4) + 4) % 4;
}

/// e^{i angle} in the requested precision; exact for quarter turns.
template <class Real>
std::complex<Real> unit_phase(double radians) {
    if (auto k = quarter_turns(radians)) {
        static constexpr int re[4] = {1, 0, -1, 0};
        static constexpr int im[4] = {0, 1, 0, -1};
        return {Real(re[*k]), Real(im[*k])};
    }
    Real a = static_cast<Real>(radians);
    return {num::rm::cos(a), num::rm::sin(a)};
}

/// Transmission of the D9 splitter. Rational values keep the circuit exactly
/// computable; R = 1 - T is always derived.
class Transmission {
   public:
    Transmission() : Transmission(num::ExactRational(1)) {}
    explicit Transmission(const num::ExactRational &t) : exact_(t), value_(num::to_double(t)) {
        if (t < 0 || t > 1) {
            throw InvalidInput("transmission must lie in [0, 1]");
        }
    }
    static Transmission from_double(double t) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw InvalidInput("transmission must lie in [0, 1]");
        }
        Transmission out;
        out.exact_.reset();
        out.value_ = t;
        return out;
    }

    bool is_exact() const { return exact_.has_value(); }
    const num::ExactRational &exact() const {
        if (!exact_) {
            throw InvalidInput("transmission has no exact value");
        }
        return *exact_;
    }
    double value() const { return value_; }
    double reflection() const { return exact_ ? num::to_double(1 - *exact_) : 1.0 - value_; }

    template <class Real>
    Real as() const {
        if (exact_ && mpz_sizeinbase(exact_->get_num_mpz_t(), 2) < 53 &&
            mpz_sizeinbase(exact_->get_den_mpz_t(), 2) < 53) {
            return static_cast<Real>(exact_->get_num().get_d()) / static_cast<Real>(exact_->get_den().get_d());
        }
        return static_cast<Real>(value_);
    }
    template <class Real>
    Real reflection_as() const {
        if (exact_) {
            num::ExactRational r = 1 - *exact_;
            if (mpz_sizeinbase(r.get_num_mpz_t(), 2) < 53 && mpz_sizeinbase(r.get_den_mpz_t(), 2) < 53) {
                return static_cast<Real>(r.get_num().get_d()) / static_cast<Real>(r.get_den().get_d());
            }
        }
        return Real(1) - static_cast<Real>(value_);
    }

    std::string to_string() const { return exact_ ? exact_->get_str() : std::to_string(value_); }

   private:
    std::optional<num::ExactRational> exact_;
    double value_ = 1.0;
};

enum class ProbeArm { Seven, Eight };

struct ProbePhase {
    double chi = 0.0;
    ProbeArm arm = ProbeArm::Seven;
};

struct CircuitConfig {
    int N_alpha = 0;
    int N_beta = 0;
    double theta = num::rm::pi<double>() / 2;
    double xi = 0.0;
    double zeta = num::rm::pi<double>() / 2;
    Transmission transmission;
    std::optional<ProbePhase> probe;

    int total() const { return N_alpha + N_beta; }

    void validate() const {
        if (N_alpha < 0 || N_beta < 0) {
            throw InvalidInput("source particle counts must be nonnegative");
        }
    }

    /// True when every coefficient lies in Q(i, sqrt T) with rational T.
    bool exactly_representable() const {
        bool ok = transmission.is_exact() && quarter_turns(theta) && quarter_turns(xi) && quarter_turns(zeta);
        if (probe) {
            ok = ok && quarter_turns(probe->chi);
        }
        return ok;
    }
};

template <class Real>
struct ModeCoefficients {
    using Complex = std::complex<Real>;
    std::array<std::pair<Complex, Complex>, kDetectorCount> rows{};
    std::array<bool, kDetectorCount> present{};
    Complex u{};
    Complex v{};

    const std::pair<Complex, Complex> &operator[](Detector d) const {
        if (!present[index_of(d)]) {
            throw InvalidInput("detector " + std::string(detector_name(d)) + " is not configured");
        }
        return rows[index_of(d)];
    }
};

/// Coefficient table of every detector operator, traced back to the sources.
/// With a probe phase, the chosen arm is multiplied by e^{i chi} and mixed
/// with the other arm on a 50-50 splitter into outputs A and B.
template <class Real = double>
ModeCoefficients<Real> detector_coefficients(const CircuitConfig &config) {
    config.validate();
    using Complex = std::complex<Real>;
    const Complex i{0, 1};
    const Real half = Real(1) / 2;
    const Real sqrtT = num::rm::sqrt(config.transmission.as<Real>());
    const Real sqrtR = num::rm::sqrt(config.transmission.reflection_as<Real>());
    const Real inv2r2 = Real(1) / (2 * num::rm::sqrt(Real(2)));

    const Complex e_theta = unit_phase<Real>(config.theta);
    const Complex e_xi = unit_phase<Real>(config.xi);
    const Complex e_zeta = unit_phase<Real>(config.zeta);

    ModeCoefficients<Real> c;
    c.u = sqrtT * e_zeta - Real(1);
    c.v = -i * (sqrtT * e_zeta + Real(1));

    auto set = [&](Detector d, Complex a, Complex b) {
        c.rows[index_of(d)] = {a, b};
        c.present[index_of(d)] = true;
    };
    set(Detector::D1, half * i * e_theta, -half);
    set(Detector::D2, -half * e_theta, half * i);
    set(Detector::D5, half * i * (i * e_xi), half * i);
    set(Detector::D5p, -half * sqrtT * e_zeta * (i * e_xi), -half * sqrtT * e_zeta);
    set(Detector::D6, half * i * e_xi, -half);
    set(Detector::D7, inv2r2 * c.u * e_xi, inv2r2 * c.v);
    set(Detector::D8, inv2r2 * c.v * e_xi, -inv2r2 * c.u);
    set(Detector::D9, -half * i * sqrtR * (i * e_xi), -half * i * sqrtR);

    if (config.probe) {
        const Complex e_chi = unit_phase<Real>(config.probe->chi);
        const Real inv_r2 = Real(1) / num::rm::sqrt(Real(2));
        auto r7 = c.rows[index_of(Detector::D7)];
        auto r8 = c.rows[index_of(Detector::D8)];
        if (config.probe->arm == ProbeArm::Seven) {
            r7 = {e_chi * r7.first, e_chi * r7.second};
        } else {
            r8 = {e_chi * r8.first, e_chi * r8.second};
        }
        set(Detector::A, inv_r2 * (r7.first + i * r8.first), inv_r2 * (r7.second + i * r8.second));
        set(Detector::B, inv_r2 * (i * r7.first + r8.first), inv_r2 * (i * r7.second + r8.second));
    }
    return c;
}

/// Transmission of the corrected circuit: the smaller side count over the
/// larger, or 1 when they are equal.
inline num::ExactRational feedforward_transmission(int m1, int m2) {
    if (m1 < 0 || m2 < 0) {
        throw InvalidInput("side counts must be nonnegative");
    }
    if (m1 == 0 && m2 == 0) {
        throw InvalidInput("m1 = m2 = 0 carries no side information; transmission undefined");
    }
    return m1 >= m2 ? num::make_rational(m2, m1) : num::make_rational(m1, m2);
}

/// theta = zeta = pi/2, xi = -pi/2 when m1 >= m2 and +pi/2 otherwise,
/// transmission from the feedforward rule.
inline CircuitConfig standard_config(int N_alpha, int N_beta, int m1, int m2) {
    CircuitConfig c;
    c.N_alpha = N_alpha;
    c.N_beta = N_beta;
    c.theta = num::rm::pi<double>() / 2;
    c.zeta = num::rm::pi<double>() / 2;
    c.xi = m1 >= m2 ? -num::rm::pi<double>() / 2 : num::rm::pi<double>() / 2;
    c.transmission = Transmission(feedforward_transmission(m1, m2));
    c.validate();
    return c;
}

/// The circuit with no correction stage in use: theta = pi/2, xi = 0.
inline CircuitConfig uncorrected_config(int N_alpha, int N_beta) {
    CircuitConfig c;
    c.N_alpha = N_alpha;
    c.N_beta = N_beta;
    c.theta = num::rm::pi<double>() / 2;
    c.xi = 0.0;
    c.zeta = num::rm::pi<double>() / 2;
    c.transmission = Transmission(num::ExactRational(1));
    c.validate();
    return c;
}

}  // namespace noon
