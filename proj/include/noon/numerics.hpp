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

// Exact and floating-point combinatorial kernels shared by every engine.
//
// Two arithmetic backends live here:
//  * exact: GMP integers/rationals, Gaussian integers extended by one real
//    quadratic irrationality t = sqrt(D), and polynomials over that ring;
//  * floating: sign/log-magnitude scalars and real-type shims so the same
//    templates run in double, long double and __float128.

#include <gmpxx.h>
#include <quadmath.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noon {

/// Raised for any precondition violation on user-supplied input.
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

namespace num {

using BigInt = mpz_class;
using ExactRational = mpq_class;

inline ExactRational make_rational(const BigInt &num, const BigInt &den) {
    if (den == 0) {
        throw InvalidInput("rational with zero denominator");
    }
    ExactRational r(num, den);
    r.canonicalize();
    return r;
}

inline ExactRational make_rational(long num, long den = 1) {
    return make_rational(BigInt(num), BigInt(den));
}

// ---------------------------------------------------------------------------
// Real-type shims. Templates call rm::exp etc. so that __float128 resolves to
// libquadmath while double/long double go through <cmath>.
namespace rm {

inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double fabs(double x) { return std::fabs(x); }

inline long double exp(long double x) { return std::exp(x); }
inline long double log(long double x) { return std::log(x); }
inline long double sqrt(long double x) { return std::sqrt(x); }
inline long double sin(long double x) { return std::sin(x); }
inline long double cos(long double x) { return std::cos(x); }
inline long double atan2(long double y, long double x) { return std::atan2(y, x); }
inline long double fabs(long double x) { return std::fabs(x); }

inline __float128 exp(__float128 x) { return expq(x); }
inline __float128 log(__float128 x) { return logq(x); }
inline __float128 sqrt(__float128 x) { return sqrtq(x); }
inline __float128 sin(__float128 x) { return sinq(x); }
inline __float128 cos(__float128 x) { return cosq(x); }
inline __float128 atan2(__float128 y, __float128 x) { return atan2q(y, x); }
inline __float128 fabs(__float128 x) { return fabsq(x); }

template <class Real>
Real pi() {
    if constexpr (std::is_same_v<Real, __float128>) {
        return M_PIq;
    } else {
        return static_cast<Real>(3.14159265358979323846264338327950288L);
    }
}

/// std::numeric_limits is not specialized for __float128.
template <class Real>
Real infinity() {
    if constexpr (std::is_same_v<Real, __float128>) {
        return __builtin_huge_valq();
    } else {
        return std::numeric_limits<Real>::infinity();
    }
}

template <class Real>
Real norm(const std::complex<Real> &z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

template <class Real>
Real arg(const std::complex<Real> &z) {
    return atan2(z.imag(), z.real());
}

}  // namespace rm

// ---------------------------------------------------------------------------
// Conversions that survive numerators/denominators far outside double range.

inline double log_abs(const BigInt &z) {
    if (z == 0) {
        return -std::numeric_limits<double>::infinity();
    }
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

inline double log_abs(const ExactRational &q) {
    return log_abs(q.get_num()) - log_abs(q.get_den());
}

inline double to_double(const ExactRational &q) {
    if (q == 0) {
        return 0.0;
    }
    long en = 0;
    long ed = 0;
    double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    long e = en - ed;
    if (e > std::numeric_limits<int>::max() / 2) {
        return mn > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    if (e < std::numeric_limits<int>::min() / 2) {
        return 0.0;
    }
    return std::ldexp(mn / md, static_cast<int>(e));
}

inline std::string to_string(const ExactRational &q) {
    return q.get_str();
}

// ---------------------------------------------------------------------------
// Factorials and binomials.

inline BigInt exact_factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// C(n, k); zero outside 0 <= k <= n.
inline BigInt exact_binomial(long n, long k) {
    if (n < 0) {
        throw InvalidInput("exact_binomial: n must be nonnegative");
    }
    if (k < 0 || k > n) {
        return 0;
    }
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

namespace detail {
inline const std::vector<double> &ln_factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(4096);
        for (std::size_t n = 0; n < t.size(); ++n) {
            t[n] = std::lgamma(static_cast<double>(n) + 1.0);
        }
        return t;
    }();
    return table;
}
}  // namespace detail

/// ln(n!). Small n are served from a table filled once, so concurrent callers
/// never touch lgamma's global sign state.
inline double ln_factorial(std::uint64_t n) {
    const auto &table = detail::ln_factorial_table();
    if (n < table.size()) {
        return table[n];
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

namespace detail {
template <class Real>
const std::vector<Real> &ln_factorial_table_as() {
    static const std::vector<Real> table = [] {
        std::vector<Real> t(4096);
        t[0] = 0;
        for (std::size_t n = 1; n < t.size(); ++n) {
            if constexpr (std::is_same_v<Real, __float128>) {
                t[n] = t[n - 1] + logq(static_cast<__float128>(n));
            } else {
                t[n] = t[n - 1] + std::log(static_cast<Real>(n));
            }
        }
        return t;
    }();
    return table;
}
}  // namespace detail

/// ln(n!) in the requested precision (running sums of logs below 4096).
template <class Real>
Real ln_factorial_as(std::uint64_t n) {
    if constexpr (std::is_same_v<Real, double>) {
        return ln_factorial(n);
    } else {
        const auto &table = detail::ln_factorial_table_as<Real>();
        if (n < table.size()) {
            return table[n];
        }
        if constexpr (std::is_same_v<Real, __float128>) {
            return lgammaq(static_cast<__float128>(n) + 1);
        } else {
            return std::lgamma(static_cast<Real>(n) + 1);
        }
    }
}

// ---------------------------------------------------------------------------
// Sign / log-magnitude scalar.

struct LogMagnitude {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();

    static LogMagnitude zero() { return {}; }
    static LogMagnitude from_log(double log_value, int s = 1) {
        if (s == 0) {
            return {};
        }
        return {s > 0 ? 1 : -1, log_value};
    }
    static LogMagnitude from_value(double v) {
        if (v == 0.0) {
            return {};
        }
        return {v > 0 ? 1 : -1, std::log(std::fabs(v))};
    }

    bool is_zero() const { return sign == 0; }
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

    friend LogMagnitude operator*(const LogMagnitude &a, const LogMagnitude &b) {
        if (a.sign == 0 || b.sign == 0) {
            return {};
        }
        return {a.sign * b.sign, a.log_abs + b.log_abs};
    }
    friend LogMagnitude operator/(const LogMagnitude &a, const LogMagnitude &b) {
        if (b.sign == 0) {
            throw InvalidInput("LogMagnitude division by zero");
        }
        if (a.sign == 0) {
            return {};
        }
        return {a.sign * b.sign, a.log_abs - b.log_abs};
    }
    friend LogMagnitude operator+(const LogMagnitude &a, const LogMagnitude &b) {
        if (a.sign == 0) {
            return b;
        }
        if (b.sign == 0) {
            return a;
        }
        const LogMagnitude &big = a.log_abs >= b.log_abs ? a : b;
        const LogMagnitude &small = a.log_abs >= b.log_abs ? b : a;
        double ratio = std::exp(small.log_abs - big.log_abs);
        double scale = big.sign == small.sign ? 1.0 + ratio : 1.0 - ratio;
        if (scale == 0.0) {
            return {};
        }
        return {big.sign, big.log_abs + std::log(scale)};
    }
    LogMagnitude pow(unsigned k) const {
        if (k == 0) {
            return from_value(1.0);
        }
        if (sign == 0) {
            return {};
        }
        int s = (sign < 0 && (k % 2 == 1)) ? -1 : 1;
        return {s, log_abs * static_cast<double>(k)};
    }
};

// ---------------------------------------------------------------------------
// Periodic quadrature.

/// (1/2pi) * integral over [-pi, pi) of f, given f on a uniform periodic grid
/// (the endpoint pi is identified with -pi and must not be repeated). Exact for
/// trigonometric polynomials whose frequencies alias onto zero only at zero.
template <class Real>
std::complex<Real> integrate_periodic(std::span<const std::complex<Real>> samples) {
    if (samples.size() < 2) {
        throw InvalidInput("integrate_periodic needs at least 2 samples");
    }
    std::complex<Real> acc{0, 0};
    for (const auto &s : samples) {
        acc += s;
    }
    return acc / static_cast<Real>(samples.size());
}

/// Grid size that makes the rectangle rule exact for the amplitude integrands
/// of an N-particle circuit.
inline std::size_t quadrature_points(int total_particles) {
    return 4 * (static_cast<std::size_t>(total_particles) + 1);
}

// ---------------------------------------------------------------------------
// Exact real quadratic numbers x + y*sqrt(radicand) with rational x, y.

struct QuadraticRational {
    ExactRational rational{0};
    ExactRational irrational{0};
    BigInt radicand{1};

    QuadraticRational() = default;
    QuadraticRational(ExactRational x, ExactRational y, BigInt d)
        : rational(std::move(x)), irrational(std::move(y)), radicand(std::move(d)) {}
    explicit QuadraticRational(const ExactRational &x) : rational(x) {}

    bool is_zero() const { return rational == 0 && irrational == 0; }
    bool is_rational() const { return irrational == 0; }

    int sign() const {
        int sx = sgn(rational);
        int sy = sgn(irrational);
        if (sy == 0) {
            return sx;
        }
        if (sx == 0 || sx == sy) {
            return sy;
        }
        ExactRational lhs = rational * rational;
        ExactRational rhs = irrational * irrational * ExactRational(radicand);
        int c = cmp(lhs, rhs);
        if (c == 0) {
            return 0;
        }
        return c > 0 ? sx : sy;
    }

    /// Rounding-safe conversion: opposite-sign parts go through the conjugate.
    double to_double() const {
        double x = num::to_double(rational);
        if (irrational == 0) {
            return x;
        }
        double root = std::sqrt(num::to_double(ExactRational(radicand)));
        double y = num::to_double(irrational) * root;
        if ((x >= 0) == (y >= 0)) {
            return x + y;
        }
        ExactRational numer = rational * rational - irrational * irrational * ExactRational(radicand);
        return num::to_double(numer) / (x - y);
    }

    friend QuadraticRational operator+(const QuadraticRational &a, const QuadraticRational &b) {
        return {a.rational + b.rational, a.irrational + b.irrational, common_radicand(a, b)};
    }
    friend QuadraticRational operator-(const QuadraticRational &a, const QuadraticRational &b) {
        return {a.rational - b.rational, a.irrational - b.irrational, common_radicand(a, b)};
    }
    friend QuadraticRational operator*(const QuadraticRational &a, const QuadraticRational &b) {
        BigInt d = common_radicand(a, b);
        return {a.rational * b.rational + a.irrational * b.irrational * ExactRational(d),
                a.rational * b.irrational + a.irrational * b.rational, d};
    }
    friend QuadraticRational operator*(const ExactRational &s, const QuadraticRational &a) {
        return {s * a.rational, s * a.irrational, a.radicand};
    }
    /// Division through the conjugate of the denominator.
    friend QuadraticRational operator/(const QuadraticRational &a, const QuadraticRational &b) {
        if (b.is_zero()) {
            throw InvalidInput("QuadraticRational division by zero");
        }
        BigInt d = common_radicand(a, b);
        if (b.irrational == 0) {
            return {a.rational / b.rational, a.irrational / b.rational, d};
        }
        ExactRational den = b.rational * b.rational - b.irrational * b.irrational * ExactRational(d);
        QuadraticRational conj{b.rational, -b.irrational, d};
        QuadraticRational n = a * conj;
        return {n.rational / den, n.irrational / den, d};
    }
    QuadraticRational &operator+=(const QuadraticRational &b) {
        radicand = common_radicand(*this, b);
        rational += b.rational;
        irrational += b.irrational;
        return *this;
    }
    friend bool operator==(const QuadraticRational &a, const QuadraticRational &b) { return (a - b).is_zero(); }

   private:
    static BigInt common_radicand(const QuadraticRational &a, const QuadraticRational &b) {
        if (a.irrational == 0) {
            return b.radicand;
        }
        if (b.irrational == 0 || a.radicand == b.radicand) {
            return a.radicand;
        }
        throw InvalidInput("QuadraticRational: mismatched radicands");
    }
};

// ---------------------------------------------------------------------------
// Gaussian integers and the ring Z[i][t], t^2 = D.

struct GaussianInt {
    BigInt re{0};
    BigInt im{0};

    static GaussianInt unit_power(int quarter_turns) {
        switch (((quarter_turns % 4) + 4) % 4) {
            case 0:
                return {1, 0};
            case 1:
                return {0, 1};
            case 2:
                return {-1, 0};
            default:
                return {0, -1};
        }
    }

    bool is_zero() const { return re == 0 && im == 0; }
    GaussianInt conj() const { return {re, -im}; }

    friend GaussianInt operator+(const GaussianInt &a, const GaussianInt &b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussianInt operator-(const GaussianInt &a, const GaussianInt &b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussianInt operator-(const GaussianInt &a) { return {-a.re, -a.im}; }
    friend GaussianInt operator*(const GaussianInt &a, const GaussianInt &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianInt operator*(const BigInt &s, const GaussianInt &a) { return {s * a.re, s * a.im}; }
    friend bool operator==(const GaussianInt &a, const GaussianInt &b) { return a.re == b.re && a.im == b.im; }
};

/// rational + radical * t, with rational, radical in Z[i] and t = sqrt(D) real.
struct QuadGaussian {
    GaussianInt rational;
    GaussianInt radical;

    static QuadGaussian integer(long v) { return {{v, 0}, {0, 0}}; }
    bool is_zero() const { return rational.is_zero() && radical.is_zero(); }
    friend bool operator==(const QuadGaussian &a, const QuadGaussian &b) {
        return a.rational == b.rational && a.radical == b.radical;
    }
};

class QuadGaussianRing {
   public:
    explicit QuadGaussianRing(BigInt radicand) : d_(std::move(radicand)) {
        if (d_ < 1) {
            throw InvalidInput("QuadGaussianRing: radicand must be positive");
        }
    }

    const BigInt &radicand() const { return d_; }

    QuadGaussian add(const QuadGaussian &a, const QuadGaussian &b) const {
        return {a.rational + b.rational, a.radical + b.radical};
    }

    QuadGaussian mul(const QuadGaussian &a, const QuadGaussian &b) const {
        bool a_plain = a.radical.is_zero();
        bool b_plain = b.radical.is_zero();
        if (a_plain && b_plain) {
            return {a.rational * b.rational, {}};
        }
        if (a_plain) {
            return {a.rational * b.rational, a.rational * b.radical};
        }
        if (b_plain) {
            return {a.rational * b.rational, a.radical * b.rational};
        }
        return {a.rational * b.rational + d_ * (a.radical * b.radical),
                a.rational * b.radical + a.radical * b.rational};
    }

    /// acc += a * b
    void mul_add(QuadGaussian &acc, const QuadGaussian &a, const QuadGaussian &b) const {
        QuadGaussian p = mul(a, b);
        acc.rational = acc.rational + p.rational;
        acc.radical = acc.radical + p.radical;
    }

    QuadGaussian scale(const BigInt &s, const QuadGaussian &a) const { return {s * a.rational, s * a.radical}; }

    /// |a|^2 = x + y t  (t is real, so conjugation acts on i only).
    std::pair<BigInt, BigInt> norm(const QuadGaussian &a) const {
        const auto &r = a.rational;
        const auto &s = a.radical;
        BigInt x = r.re * r.re + r.im * r.im + d_ * (s.re * s.re + s.im * s.im);
        BigInt y = 2 * (r.re * s.re + r.im * s.im);
        return {x, y};
    }

    QuadGaussian power(const QuadGaussian &a, unsigned k) const {
        QuadGaussian result = QuadGaussian::integer(1);
        for (unsigned i = 0; i < k; ++i) {
            result = mul(result, a);
        }
        return result;
    }

    std::complex<double> to_complex(const QuadGaussian &a) const {
        double t = std::sqrt(to_double(ExactRational(d_)));
        return {to_double(ExactRational(a.rational.re)) + t * to_double(ExactRational(a.radical.re)),
                to_double(ExactRational(a.rational.im)) + t * to_double(ExactRational(a.radical.im))};
    }

   private:
    BigInt d_;
};

using QGPoly = std::vector<QuadGaussian>;

/// Coefficients of (alpha x + beta)^m in powers of x.
inline QGPoly binomial_expansion(const QuadGaussianRing &ring, const QuadGaussian &alpha, const QuadGaussian &beta,
                                 unsigned m) {
    std::vector<QuadGaussian> alpha_pow(m + 1);
    std::vector<QuadGaussian> beta_pow(m + 1);
    alpha_pow[0] = QuadGaussian::integer(1);
    beta_pow[0] = QuadGaussian::integer(1);
    for (unsigned k = 1; k <= m; ++k) {
        alpha_pow[k] = ring.mul(alpha_pow[k - 1], alpha);
        beta_pow[k] = ring.mul(beta_pow[k - 1], beta);
    }
    QGPoly out(m + 1);
    for (unsigned k = 0; k <= m; ++k) {
        out[k] = ring.scale(exact_binomial(m, k), ring.mul(alpha_pow[k], beta_pow[m - k]));
    }
    return out;
}

inline QGPoly poly_multiply(const QuadGaussianRing &ring, const QGPoly &p, const QGPoly &q) {
    if (p.empty() || q.empty()) {
        return {};
    }
    QGPoly out(p.size() + q.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (q[j].is_zero()) {
                continue;
            }
            ring.mul_add(out[i + j], p[i], q[j]);
        }
    }
    return out;
}

/// p * (alpha x + beta)
inline QGPoly poly_multiply_linear(const QuadGaussianRing &ring, const QGPoly &p, const QuadGaussian &alpha,
                                   const QuadGaussian &beta) {
    QGPoly out(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) {
            continue;
        }
        ring.mul_add(out[i + 1], p[i], alpha);
        ring.mul_add(out[i], p[i], beta);
    }
    return out;
}

}  // namespace num
}  // namespace noon
