#pragma once

#include <cmath>

#include "ruledlab/errors.hpp"

namespace ruledlab {

namespace detail {

// Divisors below this magnitude are treated as zero. Evaluation must fail
// loudly instead of propagating Inf/NaN.
inline constexpr double kDivGuard = 1e-14;

inline double checked_den(double d) {
    if (std::fabs(d) < kDivGuard)
        throw EvalError("division by zero");
    return d;
}

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

} // namespace detail

/// Truncated Taylor jet in one variable: value and derivatives up to order 3.
/// Arithmetic follows the Leibniz and Faa di Bruno rules, so building an
/// expression out of jets yields its exact derivatives.
struct Jet3 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
    static Jet3 variable(double u) { return {u, 1.0, 0.0, 0.0}; }

    bool is_constant() const { return d1 == 0.0 && d2 == 0.0 && d3 == 0.0; }
};

/// Reinterprets the derivative channels of a jet as a jet of the derivative:
/// shift(f) carries (f', f'', f''', ?). The top channel is unknown and set to
/// zero, so results of arithmetic on shifted jets are valid to depth 2 only.
inline Jet3 jet_shift(const Jet3& f) { return {f.d1, f.d2, f.d3, 0.0}; }

inline Jet3 operator-(const Jet3& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
inline Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
inline Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}
inline Jet3 operator/(const Jet3& a, const Jet3& b) {
    const double den = detail::checked_den(b.v);
    Jet3 q;
    q.v = a.v / den;
    q.d1 = (a.d1 - q.v * b.d1) / den;
    q.d2 = (a.d2 - 2.0 * q.d1 * b.d1 - q.v * b.d2) / den;
    q.d3 = (a.d3 - 3.0 * q.d2 * b.d1 - 3.0 * q.d1 * b.d2 - q.v * b.d3) / den;
    return q;
}

inline Jet3 operator+(const Jet3& a, double c) { return {a.v + c, a.d1, a.d2, a.d3}; }
inline Jet3 operator+(double c, const Jet3& a) { return a + c; }
inline Jet3 operator-(const Jet3& a, double c) { return {a.v - c, a.d1, a.d2, a.d3}; }
inline Jet3 operator-(double c, const Jet3& a) { return (-a) + c; }
inline Jet3 operator*(const Jet3& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c, a.d3 * c}; }
inline Jet3 operator*(double c, const Jet3& a) { return a * c; }
inline Jet3 operator/(const Jet3& a, double c) { return a * (1.0 / detail::checked_den(c)); }
inline Jet3 operator/(double c, const Jet3& a) { return Jet3::constant(c) / a; }

namespace detail {

// Chain rule through a scalar function with derivatives p1..p3 at f.v.
inline Jet3 compose(const Jet3& f, double p0, double p1, double p2, double p3) {
    return {p0,
            p1 * f.d1,
            p2 * f.d1 * f.d1 + p1 * f.d2,
            p3 * f.d1 * f.d1 * f.d1 + 3.0 * p2 * f.d1 * f.d2 + p1 * f.d3};
}

} // namespace detail

inline Jet3 sin(const Jet3& f) {
    const double s = std::sin(f.v), c = std::cos(f.v);
    return detail::compose(f, s, c, -s, -c);
}
inline Jet3 cos(const Jet3& f) {
    const double s = std::sin(f.v), c = std::cos(f.v);
    return detail::compose(f, c, -s, -c, s);
}
inline Jet3 tan(const Jet3& f) {
    const double t = std::tan(f.v), u = 1.0 + t * t;
    return detail::compose(f, t, u, 2.0 * t * u, u * (2.0 + 6.0 * t * t));
}
inline Jet3 exp(const Jet3& f) {
    const double e = std::exp(f.v);
    return detail::compose(f, e, e, e, e);
}
inline Jet3 log(const Jet3& f) {
    if (f.v <= 0.0)
        throw EvalError("log of non-positive value");
    const double r = 1.0 / f.v;
    return detail::compose(f, std::log(f.v), r, -r * r, 2.0 * r * r * r);
}
inline Jet3 sqrt(const Jet3& f) {
    if (f.v < 0.0)
        throw EvalError("sqrt of negative value");
    if (f.is_constant())
        return Jet3::constant(std::sqrt(f.v));
    const double s = std::sqrt(f.v);
    const double p1 = 0.5 / detail::checked_den(s);
    return detail::compose(f, s, p1, -0.5 * p1 / f.v, 0.75 * p1 / (f.v * f.v));
}
inline Jet3 abs(const Jet3& f) {
    const double s = detail::sgn(f.v);
    return detail::compose(f, std::fabs(f.v), s, 0.0, 0.0);
}
inline Jet3 sign(const Jet3& f) { return Jet3::constant(detail::sgn(f.v)); }

/// Bivariate jet: value and all partials in (u, v) up to total order 2.
struct BiJet2 {
    double v = 0.0;
    double du = 0.0;
    double dv = 0.0;
    double duu = 0.0;
    double duv = 0.0;
    double dvv = 0.0;

    static BiJet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static BiJet2 var_u(double u) { return {u, 1, 0, 0, 0, 0}; }
    static BiJet2 var_v(double v) { return {v, 0, 1, 0, 0, 0}; }
    /// Lifts a u-jet (value, d1, d2) into a bivariate jet with no v-dependence.
    static BiJet2 from_u_jet(const Jet3& j) { return {j.v, j.d1, 0, j.d2, 0, 0}; }

    bool is_constant() const {
        return du == 0.0 && dv == 0.0 && duu == 0.0 && duv == 0.0 && dvv == 0.0;
    }
};

inline BiJet2 operator-(const BiJet2& a) { return {-a.v, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }

inline BiJet2 operator+(const BiJet2& a, const BiJet2& b) {
    return {a.v + b.v, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}
inline BiJet2 operator-(const BiJet2& a, const BiJet2& b) {
    return {a.v - b.v, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}
inline BiJet2 operator*(const BiJet2& a, const BiJet2& b) {
    return {a.v * b.v,
            a.du * b.v + a.v * b.du,
            a.dv * b.v + a.v * b.dv,
            a.duu * b.v + 2.0 * a.du * b.du + a.v * b.duu,
            a.duv * b.v + a.du * b.dv + a.dv * b.du + a.v * b.duv,
            a.dvv * b.v + 2.0 * a.dv * b.dv + a.v * b.dvv};
}
inline BiJet2 operator/(const BiJet2& a, const BiJet2& b) {
    const double den = detail::checked_den(b.v);
    BiJet2 q;
    q.v = a.v / den;
    q.du = (a.du - q.v * b.du) / den;
    q.dv = (a.dv - q.v * b.dv) / den;
    q.duu = (a.duu - 2.0 * q.du * b.du - q.v * b.duu) / den;
    q.duv = (a.duv - q.du * b.dv - q.dv * b.du - q.v * b.duv) / den;
    q.dvv = (a.dvv - 2.0 * q.dv * b.dv - q.v * b.dvv) / den;
    return q;
}

inline BiJet2 operator+(const BiJet2& a, double c) { BiJet2 r = a; r.v += c; return r; }
inline BiJet2 operator+(double c, const BiJet2& a) { return a + c; }
inline BiJet2 operator-(const BiJet2& a, double c) { BiJet2 r = a; r.v -= c; return r; }
inline BiJet2 operator-(double c, const BiJet2& a) { return (-a) + c; }
inline BiJet2 operator*(const BiJet2& a, double c) {
    return {a.v * c, a.du * c, a.dv * c, a.duu * c, a.duv * c, a.dvv * c};
}
inline BiJet2 operator*(double c, const BiJet2& a) { return a * c; }
inline BiJet2 operator/(const BiJet2& a, double c) { return a * (1.0 / detail::checked_den(c)); }
inline BiJet2 operator/(double c, const BiJet2& a) { return BiJet2::constant(c) / a; }

namespace detail {

inline BiJet2 compose2(const BiJet2& f, double p0, double p1, double p2) {
    return {p0,
            p1 * f.du,
            p1 * f.dv,
            p2 * f.du * f.du + p1 * f.duu,
            p2 * f.du * f.dv + p1 * f.duv,
            p2 * f.dv * f.dv + p1 * f.dvv};
}

} // namespace detail

inline BiJet2 sin(const BiJet2& f) {
    return detail::compose2(f, std::sin(f.v), std::cos(f.v), -std::sin(f.v));
}
inline BiJet2 cos(const BiJet2& f) {
    return detail::compose2(f, std::cos(f.v), -std::sin(f.v), -std::cos(f.v));
}
inline BiJet2 tan(const BiJet2& f) {
    const double t = std::tan(f.v), u = 1.0 + t * t;
    return detail::compose2(f, t, u, 2.0 * t * u);
}
inline BiJet2 exp(const BiJet2& f) {
    const double e = std::exp(f.v);
    return detail::compose2(f, e, e, e);
}
inline BiJet2 log(const BiJet2& f) {
    if (f.v <= 0.0)
        throw EvalError("log of non-positive value");
    const double r = 1.0 / f.v;
    return detail::compose2(f, std::log(f.v), r, -r * r);
}
inline BiJet2 sqrt(const BiJet2& f) {
    if (f.v < 0.0)
        throw EvalError("sqrt of negative value");
    if (f.is_constant())
        return BiJet2::constant(std::sqrt(f.v));
    const double s = std::sqrt(f.v);
    const double p1 = 0.5 / detail::checked_den(s);
    return detail::compose2(f, s, p1, -0.5 * p1 / f.v);
}
inline BiJet2 abs(const BiJet2& f) {
    return detail::compose2(f, std::fabs(f.v), detail::sgn(f.v), 0.0);
}
inline BiJet2 sign(const BiJet2& f) { return BiJet2::constant(detail::sgn(f.v)); }

/// Zeroth-order jet: a plain value with the same checked arithmetic as the
/// derivative-carrying jets, so the scalar evaluation path never produces a
/// silent NaN either.
struct Jet0 {
    double v = 0.0;

    static Jet0 constant(double c) { return {c}; }
    bool is_constant() const { return true; }
};

inline Jet0 operator-(const Jet0& a) { return {-a.v}; }
inline Jet0 operator+(const Jet0& a, const Jet0& b) { return {a.v + b.v}; }
inline Jet0 operator-(const Jet0& a, const Jet0& b) { return {a.v - b.v}; }
inline Jet0 operator*(const Jet0& a, const Jet0& b) { return {a.v * b.v}; }
inline Jet0 operator/(const Jet0& a, const Jet0& b) { return {a.v / detail::checked_den(b.v)}; }

inline Jet0 sin(const Jet0& f) { return {std::sin(f.v)}; }
inline Jet0 cos(const Jet0& f) { return {std::cos(f.v)}; }
inline Jet0 tan(const Jet0& f) { return {std::tan(f.v)}; }
inline Jet0 exp(const Jet0& f) { return {std::exp(f.v)}; }
inline Jet0 log(const Jet0& f) {
    if (f.v <= 0.0)
        throw EvalError("log of non-positive value");
    return {std::log(f.v)};
}
inline Jet0 sqrt(const Jet0& f) {
    if (f.v < 0.0)
        throw EvalError("sqrt of negative value");
    return {std::sqrt(f.v)};
}
inline Jet0 abs(const Jet0& f) { return {std::fabs(f.v)}; }
inline Jet0 sign(const Jet0& f) { return {detail::sgn(f.v)}; }

namespace detail {

template <typename J>
J ipow(J base, long long n) {
    if (n < 0)
        return J::constant(1.0) / ipow(base, -n);
    J result = J::constant(1.0);
    while (n > 0) {
        if (n & 1)
            result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

template <typename J>
double jet_value(const J& j) { return j.v; }

} // namespace detail

/// Exponentiation. A constant integer exponent is expanded by repeated
/// multiplication, which keeps jets exact even at base 0; any other exponent
/// requires a positive base and goes through exp/log.
template <typename J>
J pow(const J& base, const J& expo) {
    const double ev = detail::jet_value(expo);
    if (expo.is_constant() && std::nearbyint(ev) == ev && std::fabs(ev) <= 64.0)
        return detail::ipow(base, static_cast<long long>(ev));
    if (detail::jet_value(base) <= 0.0)
        throw EvalError("power with non-integer exponent requires positive base");
    return exp(expo * log(base));
}

} // namespace ruledlab
