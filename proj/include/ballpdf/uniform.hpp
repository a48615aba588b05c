#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "density.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "special.hpp"

namespace ballpdf {

enum class Representation {
    Integral,
    RegIncBeta,
    IncBeta,
    OddSeries,
    EvenSeries,
    InfiniteSeries,
    GeneratingI,
    GeneratingII,
    Hypergeometric,
};

inline constexpr std::array<Representation, 9> all_representations = {
    Representation::Integral,       Representation::RegIncBeta,  Representation::IncBeta,
    Representation::OddSeries,      Representation::EvenSeries,  Representation::InfiniteSeries,
    Representation::GeneratingI,    Representation::GeneratingII, Representation::Hypergeometric,
};

inline const char* to_string(Representation r)
{
    switch (r) {
    case Representation::Integral: return "integral";
    case Representation::RegIncBeta: return "reg-inc-beta";
    case Representation::IncBeta: return "inc-beta";
    case Representation::OddSeries: return "odd-series";
    case Representation::EvenSeries: return "even-series";
    case Representation::InfiniteSeries: return "infinite-series";
    case Representation::GeneratingI: return "generating-1";
    case Representation::GeneratingII: return "generating-2";
    case Representation::Hypergeometric: return "hypergeometric";
    }
    return "unknown";
}

inline Representation parse_representation(std::string_view name)
{
    for (auto r : all_representations)
        if (name == to_string(r)) return r;
    fail(ErrorKind::invalid_input, "unknown representation '" + std::string(name) + "'");
}

inline bool representation_valid(int n, Representation r)
{
    if (r == Representation::OddSeries) return n % 2 == 1;
    if (r == Representation::EvenSeries) return n % 2 == 0;
    return true;
}

namespace detail {

inline void check_separation(const BallGeometry& g, double s)
{
    g.validate();
    if (!(s >= 0.0 && s <= 2.0 * g.radius)) fail(ErrorKind::domain, "s must lie in [0, 2R]");
}

// B((n+1)/2, 1/2)
inline double uniform_beta(int n)
{
    return beta(0.5 * (n + 1), 0.5);
}

// int_y^1 (1-t^2)^k dt with k = (n-1)/2, summed from the binomial expansion
inline double segment_infinite_series(int n, double y)
{
    const double k = 0.5 * (n - 1);
    const double y2 = y * y;
    if (n % 2 == 1) {
        const int kk = (n - 1) / 2;
        double coef = 1.0, ypow = y, sum = 0.0;
        for (int i = 0; i <= kk; ++i) {
            sum += coef / (2 * i + 1) * (1.0 - ypow);
            ypow *= y2;
            coef *= -static_cast<double>(kk - i) / (i + 1);
        }
        return sum;
    }
    constexpr int head = 400;
    double coef = 1.0, ypow = y, sum = 0.0;
    for (int i = 0; i < head; ++i) {
        sum += coef / (2 * i + 1) * (1.0 - ypow);
        ypow *= y2;
        coef *= -(k - i) / (i + 1);
    }
    // tail by Euler-Maclaurin on (-1)^t C(k,t) = Gamma(t-k) / (Gamma(-k) Gamma(t+1))
    const auto g0 = lgamma_signed(-k);
    const double ly = y > 0.0 ? std::log(y) : -INFINITY;
    auto f = [&](double t) {
        const double a = g0.second * std::exp(lgamma_positive(t - k) - lgamma_positive(t + 1.0) - g0.first) / (2.0 * t + 1.0);
        const double yp = y > 0.0 ? std::exp((2.0 * t + 1.0) * ly) : 0.0;
        return a * (1.0 - yp);
    };
    const double t0 = head;
    auto integrand = [&](double v) {
        if (v <= 0.0) return 0.0;
        return f(t0 / (v * v)) * 2.0 * t0 / (v * v * v);
    };
    const double integral = integrate(integrand, 0.0, 1.0, 1e-17, 1e-14).value;
    const double d1 = (f(t0 + 1.0) - f(t0 - 1.0)) / 2.0;
    const double d3 = (f(t0 + 2.0) - 2.0 * f(t0 + 1.0) + 2.0 * f(t0 - 1.0) - f(t0 - 2.0)) / 2.0;
    return sum + integral + 0.5 * f(t0) - d1 / 12.0 + d3 / 720.0;
}

} // namespace detail

// C(2R; 0, n) = (1/2n) B((n+1)/2, 1/2) R^{2n}
inline double normalization_constant(const BallGeometry& g)
{
    g.validate();
    const int n = g.dimension;
    return std::exp(log_beta(0.5 * (n + 1), 0.5) + 2.0 * n * std::log(g.radius)) / (2.0 * n);
}

inline double pdf_uniform(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    const int n = g.dimension;
    const double R = g.radius;
    const double y = s / (2.0 * R);
    const double x = (1.0 - y) * (1.0 + y);
    if (x < 1e-12) return 0.0;
    return n * std::pow(s / R, n - 1) / R * reg_inc_beta(x, 0.5 * (n + 1), 0.5);
}

struct OverlapKernels {
    double Q = 0.0;
    double T = 0.0;
};

inline OverlapKernels overlap_kernels(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    const int n = g.dimension;
    const double R = g.radius;
    const double y = s / (2.0 * R);
    const double x = (1.0 - y) * (1.0 + y);
    OverlapKernels k;
    k.Q = 0.5 * std::pow(R, n) * inc_beta(x, 0.5 * (n + 1), 0.5);
    k.T = std::pow(s, n - 1) * k.Q;
    return k;
}

// C(a; m, n) = int_0^a s^m T_n(s) ds
inline double cumulative_C(const BallGeometry& g, double a, int m)
{
    g.validate();
    const int n = g.dimension;
    const double R = g.radius;
    if (m + n <= 0) fail(ErrorKind::divergent_moment, "cumulative C needs m + n > 0");
    if (!(a >= 0.0 && a <= 2.0 * R)) fail(ErrorKind::domain, "a must lie in [0, 2R]");
    if (a == 0.0) return 0.0;
    const double M = m + n;
    const double t = std::min(1.0, (a / (2.0 * R)) * (a / (2.0 * R)));
    const double first = std::pow(2.0, M - 1.0) * std::pow(R, n + M) * inc_beta(t, 0.5 * (M + 1), 0.5 * (n + 1));
    const double second = std::pow(a, M) * 0.5 * std::pow(R, n) * inc_beta(1.0 - t, 0.5 * (n + 1), 0.5);
    return (first + second) / M;
}

enum class GeneratingKind { F, F1, F2 };

// Taylor coefficients c_0..c_N in h of F(h,x), F1(h,s) or F2(h,s)
inline std::vector<double> generating_series(GeneratingKind kind, int order, double arg, const BallGeometry& g)
{
    g.validate();
    if (order < 0) fail(ErrorKind::domain, "series order must be >= 0");
    if (order > 60) fail(ErrorKind::precision, "series order above 60 is numerically unstable");
    const double R = g.radius;
    double lambda = 1.0, y = 0.0, scale = 1.0;
    if (kind == GeneratingKind::F) {
        if (!(arg >= 0.0 && arg <= 1.0)) fail(ErrorKind::domain, "F needs 0 <= x <= 1");
        y = std::sqrt(1.0 - arg);
        scale = 2.0;
    } else {
        if (!(arg >= 0.0 && arg <= 2.0 * R)) fail(ErrorKind::domain, "s must lie in [0, 2R]");
        y = arg / (2.0 * R);
        lambda = kind == GeneratingKind::F1 ? R : R * arg;
    }
    if (kind == GeneratingKind::F2 && arg == 0.0) {
        std::vector<double> c(order + 1, 0.0);
        c[0] = INFINITY;
        if (order >= 1) c[1] = R;
        return c;
    }
    const double c = std::sqrt((1.0 - y) * (1.0 + y));
    using S = TruncatedSeries<double>;
    const S one(order, 1.0);
    const S lh = S::variable(order, lambda);
    S u = (lh - S(order, c)) * (one - c * lh).reciprocal();
    if (y == 0.0) u = S(order, -1.0);
    const S arc = series_asin(lh, 0.0, 1.0) - series_asin(u, -std::acos(y), y * y);
    const S G = (one - lh * lh).pow(-0.5) * arc;
    std::vector<double> out(G.coefficients());
    const double f = kind == GeneratingKind::F2 ? 1.0 / arg : scale;
    for (auto& v : out) v *= f;
    return out;
}

inline double pdf_uniform_repr(const BallGeometry& g, double s, Representation repr)
{
    detail::check_separation(g, s);
    const int n = g.dimension;
    if (!representation_valid(n, repr))
        fail(ErrorKind::invalid_representation, std::string(to_string(repr)) + " is not valid for n = " + std::to_string(n));
    const double R = g.radius;
    const double y = s / (2.0 * R);
    const double x = (1.0 - y) * (1.0 + y);
    const double p = 0.5 * (n + 1);
    const double lead = n * std::pow(s / R, n - 1) / R;
    switch (repr) {
    case Representation::RegIncBeta: return pdf_uniform(g, s);
    case Representation::IncBeta: return lead * inc_beta(x, p, 0.5) / detail::uniform_beta(n);
    case Representation::Integral: {
        // Q / R^n = int_{asin y}^{pi/2} cos^n u du
        auto f = [n](double u) { return std::pow(std::cos(u), n); };
        const double q = integrate(f, std::asin(y), 0.5 * detail::pi, 1e-11 * 1e-3, 1e-14).value;
        return 2.0 * lead * q / detail::uniform_beta(n);
    }
    case Representation::OddSeries: {
        const int k = (n - 1) / 2;
        double coef = 1.0, ypow = y, sum = 0.0;
        for (int i = 0; i <= k; ++i) {
            sum += coef / (2 * i + 1) * (1.0 - ypow);
            ypow *= y * y;
            coef *= -static_cast<double>(k - i) / (i + 1);
        }
        return lead * double_factorial_ratio(n, n - 1) * sum;
    }
    case Representation::EvenSeries: {
        const double w = R * R - 0.25 * s * s;
        double sum = 0.0;
        for (int i = 1; i <= n / 2; ++i)
            sum += double_factorial_ratio(n - 2 * i, n - 2 * i + 1) * std::pow(w, 0.5 * (n - 2 * i + 1))
                * std::pow(R, 2 * i - 2 - n);
        return lead * (2.0 / detail::pi * std::acos(y) - s / detail::pi * sum);
    }
    case Representation::InfiniteSeries:
        return 2.0 * lead * detail::segment_infinite_series(n, y) / detail::uniform_beta(n);
    case Representation::GeneratingI: {
        if (s == 0.0) return n == 1 ? 1.0 / R : 0.0;
        const auto c = generating_series(GeneratingKind::F2, n, s, g);
        return c[n] / normalization_constant(g);
    }
    case Representation::GeneratingII: {
        const auto c = generating_series(GeneratingKind::F1, n, s, g);
        return std::pow(s, n - 1) * c[n] / normalization_constant(g);
    }
    case Representation::Hypergeometric: {
        const double f1 = hyp2f1_halfint(n, 1.0);
        const double fy = hyp2f1_halfint(n, y * y);
        return 2.0 * n / detail::uniform_beta(n) * std::pow(s, n - 1) / std::pow(R, n + 1) * (R * f1 - 0.5 * s * fy);
    }
    }
    fail(ErrorKind::invalid_representation, "unknown representation");
}

struct EndpointProperties {
    double p_at_0 = 0.0;
    double p_at_2R = 0.0;
    double dp_at_0 = 0.0;
    double dp_at_2R = 0.0;
};

inline EndpointProperties endpoint_properties(const BallGeometry& g)
{
    g.validate();
    const int n = g.dimension;
    const double R = g.radius;
    EndpointProperties e;
    e.p_at_0 = n == 1 ? 1.0 / R : 0.0;
    e.p_at_2R = 0.0;
    if (n == 1) e.dp_at_0 = -1.0 / (2.0 * R * R);
    else if (n == 2) e.dp_at_0 = 2.0 / (R * R);
    e.dp_at_2R = n == 1 ? -1.0 / (2.0 * R * R) : 0.0;
    return e;
}

struct UniformDerivatives {
    double p = 0.0;
    double dp = 0.0;
    double d2p = 0.0;
};

// P, P', P'' in closed form by differentiating the incomplete-beta representation
inline UniformDerivatives pdf_uniform_derivatives(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    if (s == 0.0 || s == 2.0 * g.radius) fail(ErrorKind::domain, "derivatives need 0 < s < 2R");
    const int n = g.dimension;
    const double R = g.radius;
    const double y = s / (2.0 * R);
    const double x = (1.0 - y) * (1.0 + y);
    const double I = reg_inc_beta(x, 0.5 * (n + 1), 0.5);
    const double K = n / (detail::uniform_beta(n) * std::pow(R, n + 1));
    const double Rn = std::pow(R, n);
    const double xa = std::pow(x, 0.5 * (n - 1));
    const double xb = std::pow(x, 0.5 * (n - 3));
    UniformDerivatives d;
    d.p = n * std::pow(s, n - 1) * I / Rn;
    d.dp = n * (n - 1.0) * std::pow(s, n - 2) * I / Rn - K * std::pow(s, n - 1) * xa;
    d.d2p = n * (n - 1.0) * (n - 2.0) * std::pow(s, n - 3) * I / Rn - 2.0 * K * (n - 1.0) * std::pow(s, n - 2) * xa
        + K * (n - 1.0) * std::pow(s, n) * xb / (4.0 * R * R);
    return d;
}

struct NamedResidual {
    std::string name;
    double value = 0.0;
};

// left-minus-right residuals of the derivative identities, ODEs and dimension ladders
inline std::vector<NamedResidual> recursion_residuals(const BallGeometry& g, double s)
{
    detail::check_separation(g, s);
    const double R = g.radius;
    if (s == 0.0 || s == 2.0 * R) fail(ErrorKind::domain, "recursion residuals need 0 < s < 2R");
    const int n = g.dimension;
    const double B = detail::uniform_beta(n);
    const double x = 1.0 - s * s / (4.0 * R * R);
    const auto d = pdf_uniform_derivatives(g, s);
    const double P = d.p, P1 = d.dp, P2 = d.d2p;
    const double nn = n;
    std::vector<NamedResidual> out;

    out.push_back({"first-derivative",
                   P1 - ((nn - 1) / s * P - nn / B * std::pow(s, n - 1) / std::pow(R, n + 1) * std::pow(x, 0.5 * (n - 1)))});
    out.push_back({"second-derivative",
                   P2 - (-nn * (nn - 1) / (s * s) * P + 2.0 * (nn - 1) / s * P1
                         + nn * (nn - 1) / (4.0 * B) * std::pow(s, n) / std::pow(R, n + 3) * std::pow(x, 0.5 * (n - 3)))});
    out.push_back({"ode-1",
                   x * P2 - (nn - 1) / s * (2.0 - 0.75 * s * s / (R * R)) * P1
                       + (nn - 1) / (s * s) * (nn - (2.0 * nn - 1) / 4.0 * s * s / (R * R)) * P});
    out.push_back({"ode-2",
                   x * (P2 - 2.0 * (nn - 1) / s * P1 + nn * (nn - 1) / (s * s) * P)
                       - (nn - 1) * (s * s / (4.0 * R * R)) * ((nn - 1) / (s * s) * P - P1 / s)});

    const double Pup = pdf_uniform(make_geometry(n + 2, R), s);
    const double fac = n % 2 == 0 ? 1.0 / detail::pi : 0.5;
    const double xup = std::pow(x, 0.5 * (n + 1));
    const double lad = (nn + 2) / nn * s * s / (R * R) * P;
    const double sup = std::pow(s, n + 2) / std::pow(R, n + 3) * xup;
    out.push_back({"ladder-parity", Pup - (lad - fac * double_factorial_ratio(n + 2, n + 1) * sup)});
    const double Bup = beta(0.5 * (n + 3), 0.5);
    out.push_back({"ladder-beta", Pup - (lad - sup / Bup)});

    if (n >= 3) {
        const double Pdown = pdf_uniform(make_geometry(n - 2, R), s);
        const double base = nn / (nn + 2) * R * R / (s * s) * Pup + nn / (nn - 2) * s * s / (R * R) * Pdown;
        const double tail = std::pow(s, n) / std::pow(R, n + 1) * (1.0 + nn * s * s / (4.0 * R * R)) * std::pow(x, 0.5 * (n - 1));
        out.push_back({"three-term-parity", 2.0 * P - (base - fac * double_factorial_ratio(n, n + 1) * tail)});
        out.push_back({"three-term-beta", 2.0 * P - (base - tail / ((nn + 2) * Bup))});
    }
    return out;
}

// exact coefficients of P_n(s) at R = 1 in powers s^0..s^{2n-1}, odd n
template <class T>
std::vector<T> odd_series_coefficients(int n)
{
    if (n < 1 || n % 2 == 0) fail(ErrorKind::invalid_representation, "odd series needs odd n");
    const int k = (n - 1) / 2;
    T ratio(1);
    for (int j = n; j > 1; j -= 2) ratio *= T(j);
    for (int j = n - 1; j > 1; j -= 2) ratio /= T(j);
    std::vector<T> c(static_cast<std::size_t>(2 * n), T(0));
    T binom(1), pow2(2);
    for (int i = 0; i <= k; ++i) {
        T term = binom / T(2 * i + 1);
        if (i % 2 == 1) term = -term;
        c[n - 1] += T(n) * ratio * term;
        c[n - 1 + 2 * i + 1] -= T(n) * ratio * term / pow2;
        binom = binom * T(k - i) / T(i + 1);
        pow2 *= T(4);
    }
    return c;
}

} // namespace ballpdf
